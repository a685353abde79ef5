//! Evidence for a known signal shape with unknown Gaussian amplitude,
//! against noise alone.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::evidence::data::SignalDataset;
use crate::model::GaussianPrior;
use crate::numerics::{log_gaussian_density, LogValue};

/// Sufficient statistics of the amplitude integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalStatistics {
    /// `tau^2 g'g / sigma^2`: how much the data can say about the amplitude.
    pub lambda: f64,
    /// `(g'y)^2 / (sigma^2 g'g)`: squared alignment of data with the pattern.
    pub z_squared: f64,
    /// `g'g / sigma^2 + 1 / tau^2`; `+inf` when `tau = 0`.
    pub c: f64,
    /// `g'y / sigma^2`.
    pub d: f64,
}

struct Projections {
    gg: f64,
    gy: f64,
}

fn check_inputs(data: &SignalDataset, pattern: &[f64], noise_sd: f64) -> Result<Projections> {
    if pattern.len() != data.len() {
        return Err(Error::usage(format!(
            "pattern has {} epochs but the data have {}",
            pattern.len(),
            data.len()
        )));
    }
    if !(noise_sd.is_finite() && noise_sd > 0.0) {
        return Err(Error::domain(format!("noise sd must be positive, got {noise_sd}")));
    }
    let y = data.residuals();
    let gg: f64 = pattern.iter().map(|g| g * g).sum();
    if gg.is_nan() || gg <= 0.0 || !gg.is_finite() {
        return Err(Error::usage("signal pattern is all zero"));
    }
    Ok(Projections {
        gg,
        gy: pattern.iter().zip(y).map(|(g, y)| g * y).sum(),
    })
}

fn check_prior_sd(prior_sd: f64) -> Result<()> {
    if prior_sd.is_finite() && prior_sd >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("prior sd must be finite and nonnegative, got {prior_sd}")))
    }
}

/// Log marginal likelihood of pure noise: `N(y | 0, sigma^2 I)`.
pub fn log_evidence_null(data: &SignalDataset, noise_sd: f64) -> Result<LogValue> {
    if !(noise_sd.is_finite() && noise_sd > 0.0) {
        return Err(Error::domain(format!("noise sd must be positive, got {noise_sd}")));
    }
    let var = noise_sd * noise_sd;
    let n = data.len() as f64;
    let yy: f64 = data.residuals().iter().map(|y| y * y).sum();
    LogValue::new(-0.5 * n * (2.0 * PI * var).ln() - yy / (2.0 * var))
}

pub fn signal_statistics(
    data: &SignalDataset,
    pattern: &[f64],
    noise_sd: f64,
    prior_sd: f64,
) -> Result<SignalStatistics> {
    let p = check_inputs(data, pattern, noise_sd)?;
    check_prior_sd(prior_sd)?;
    let var = noise_sd * noise_sd;
    let tau2 = prior_sd * prior_sd;
    let (lambda, c) = if prior_sd == 0.0 {
        (0.0, f64::INFINITY)
    } else {
        (tau2 * p.gg / var, p.gg / var + 1.0 / tau2)
    };
    Ok(SignalStatistics {
        lambda,
        z_squared: p.gy * p.gy / (var * p.gg),
        c,
        d: p.gy / var,
    })
}

/// `ln B10 = -1/2 ln(1 + lambda) + 1/2 lambda/(1 + lambda) z^2`.
pub fn log_bayes_factor_signal(
    data: &SignalDataset,
    pattern: &[f64],
    noise_sd: f64,
    prior_sd: f64,
) -> Result<LogValue> {
    let s = signal_statistics(data, pattern, noise_sd, prior_sd)?;
    let compact = compact_log_bayes_factor(&s);
    debug_assert!({
        let general = general_log_bayes_factor(&s, prior_sd);
        (compact - general).abs() <= 1e-12 * compact.abs().max(1.0)
    });
    LogValue::new(compact)
}

/// Same quantity from the unreduced `(tau^2 c)^(-1/2) exp(d^2 / 2c)` form.
pub fn log_bayes_factor_signal_general(
    data: &SignalDataset,
    pattern: &[f64],
    noise_sd: f64,
    prior_sd: f64,
) -> Result<LogValue> {
    let s = signal_statistics(data, pattern, noise_sd, prior_sd)?;
    LogValue::new(general_log_bayes_factor(&s, prior_sd))
}

pub(crate) fn compact_log_bayes_factor(s: &SignalStatistics) -> f64 {
    let l = s.lambda;
    -0.5 * l.ln_1p() + 0.5 * (l / (1.0 + l)) * s.z_squared
}

pub(crate) fn general_log_bayes_factor(s: &SignalStatistics, prior_sd: f64) -> f64 {
    if prior_sd == 0.0 {
        return 0.0;
    }
    let tau2c = prior_sd * prior_sd * s.c;
    -0.5 * tau2c.ln() + s.d * s.d / (2.0 * s.c)
}

/// Log evidence of the zero-mean-amplitude signal model.
pub fn log_evidence_signal(
    data: &SignalDataset,
    pattern: &[f64],
    noise_sd: f64,
    prior_sd: f64,
) -> Result<LogValue> {
    check_prior_sd(prior_sd)?;
    log_evidence_signal_with_prior(data, pattern, noise_sd, &GaussianPrior::new(0.0, prior_sd)?)
}

/// Log evidence of the signal model for an arbitrary Gaussian amplitude prior.
///
/// Evaluated by completing the square around the posterior amplitude, so
/// the large `y'y` and `d^2/c` terms never cancel against each other.
pub fn log_evidence_signal_with_prior(
    data: &SignalDataset,
    pattern: &[f64],
    noise_sd: f64,
    prior: &GaussianPrior,
) -> Result<LogValue> {
    let p = check_inputs(data, pattern, noise_sd)?;
    let var = noise_sd * noise_sd;
    let y = data.residuals();
    let n = y.len() as f64;
    if prior.is_point_mass() {
        let mut total = 0.0;
        for (g, y) in pattern.iter().zip(y) {
            total += log_gaussian_density(*y, prior.mean() * g, var)?.ln();
        }
        return LogValue::new(total);
    }
    let prior_precision = 1.0 / prior.variance();
    let c = p.gg / var + prior_precision;
    let amp = (p.gy / var + prior.mean() * prior_precision) / c;
    let misfit: f64 = pattern
        .iter()
        .zip(y)
        .map(|(g, y)| {
            let r = y - amp * g;
            r * r
        })
        .sum::<f64>()
        / var;
    let shrink = (amp - prior.mean()).powi(2) * prior_precision;
    let lambda = prior.variance() * p.gg / var;
    LogValue::new(-0.5 * n * (2.0 * PI * var).ln() - 0.5 * (misfit + shrink) - 0.5 * lambda.ln_1p())
}

/// Conjugate posterior of the amplitude after observing `data`.
pub fn amplitude_posterior(
    data: &SignalDataset,
    pattern: &[f64],
    noise_sd: f64,
    prior: &GaussianPrior,
) -> Result<GaussianPrior> {
    let p = check_inputs(data, pattern, noise_sd)?;
    if prior.is_point_mass() {
        return Ok(*prior);
    }
    let var = noise_sd * noise_sd;
    let prior_precision = 1.0 / prior.variance();
    let precision = prior_precision + p.gg / var;
    let mean = (prior.mean() * prior_precision + p.gy / var) / precision;
    GaussianPrior::new(mean, precision.recip().sqrt())
}

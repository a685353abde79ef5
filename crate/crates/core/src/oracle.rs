//! Brute-force marginal likelihoods by numerical integration over the free
//! parameter. These never touch the closed-form evidence code and are used
//! to cross-check it.

use crate::error::{Error, Result};
use crate::evidence::SignalDataset;
use crate::model::{AuxiliaryConstraint, GaussianPrior};
use crate::numerics::{integrate_log_1d, locate_log_peak, log_gaussian_density, LogValue};

fn log_normal(x: f64, mean: f64, sd: f64) -> f64 {
    log_gaussian_density(x, mean, sd * sd).map(LogValue::ln).unwrap_or(f64::NAN)
}

fn integrate_around<F: Fn(f64) -> f64>(f: F, guess: &GaussianPrior, rel_tol: f64) -> Result<LogValue> {
    let (center, scale) = locate_log_peak(&f, guess.mean(), guess.sd())?;
    integrate_log_1d(f, center, scale, rel_tol)
}

/// `ln ∫ prod_i N(y_i | A g_i, sigma^2) N(A | prior) dA`.
pub fn signal_log_evidence(
    data: &SignalDataset,
    pattern: &[f64],
    noise_sd: f64,
    prior: &GaussianPrior,
    rel_tol: f64,
) -> Result<LogValue> {
    if pattern.len() != data.len() {
        return Err(Error::usage("pattern and data lengths differ"));
    }
    let y = data.residuals();
    let lik = |a: f64| -> f64 {
        y.iter()
            .zip(pattern)
            .map(|(y, g)| log_normal(*y, a * g, noise_sd))
            .sum()
    };
    if prior.is_point_mass() {
        return LogValue::new(lik(prior.mean()));
    }
    integrate_around(|a| lik(a) + log_normal(a, prior.mean(), prior.sd()), prior, rel_tol)
}

/// `ln ∫ prod_i [N(y_i | A g_i, sigma^2) / N(y_i | 0, sigma^2)] N(A | prior) dA`,
/// the signal-versus-noise Bayes factor integrated directly so that two
/// large evidences never have to be subtracted.
pub fn signal_log_bayes_factor(
    data: &SignalDataset,
    pattern: &[f64],
    noise_sd: f64,
    prior: &GaussianPrior,
    rel_tol: f64,
) -> Result<LogValue> {
    if pattern.len() != data.len() {
        return Err(Error::usage("pattern and data lengths differ"));
    }
    let y = data.residuals();
    let var = noise_sd * noise_sd;
    // per epoch: ln N(y | A g) - ln N(y | 0) = A g (2 y - A g) / (2 sigma^2)
    let ratio = |a: f64| -> f64 {
        y.iter()
            .zip(pattern)
            .map(|(y, g)| a * g * (2.0 * y - a * g) / (2.0 * var))
            .sum()
    };
    if prior.is_point_mass() {
        return LogValue::new(ratio(prior.mean()));
    }
    integrate_around(|a| ratio(a) + log_normal(a, prior.mean(), prior.sd()), prior, rel_tol)
}

/// `ln p(ys | ws)` for `y_k, w_j ~ N(theta, .)`, `theta ~ prior`: the
/// joint integral over observations and constraints divided by the
/// integral over the constraints alone.
pub fn location_log_evidence(
    ys: &[f64],
    noise_sd: f64,
    prior: &GaussianPrior,
    constraints: &[AuxiliaryConstraint],
    rel_tol: f64,
) -> Result<LogValue> {
    let lik = |t: f64| -> f64 { ys.iter().map(|y| log_normal(*y, t, noise_sd)).sum() };
    let aux = |t: f64| -> f64 {
        constraints
            .iter()
            .map(|c| log_normal(c.observed(), t, c.noise_sd()))
            .sum()
    };
    if prior.is_point_mass() {
        if !constraints.is_empty() {
            return Err(Error::Unsupported("constraints on a point-mass prior".into()));
        }
        return LogValue::new(lik(prior.mean()));
    }
    let log_prior = |t: f64| log_normal(t, prior.mean(), prior.sd());
    let joint = integrate_around(|t| lik(t) + aux(t) + log_prior(t), prior, rel_tol)?;
    if constraints.is_empty() {
        return Ok(joint);
    }
    let marginal_w = integrate_around(|t| aux(t) + log_prior(t), prior, rel_tol)?;
    Ok(joint / marginal_w)
}

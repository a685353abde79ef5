//! Seeded oracle-equivalence runs: closed-form evidences against brute-force
//! quadrature on random instances.

use serde::Serialize;

use crate::cases::GaussianStream;
use crate::error::{Error, Result};
use crate::evidence::{log_evidence, Observation, SignalDataset};
use crate::model::{AuxiliaryConstraint, CompositeModel, GaussianPrior};
use crate::numerics::LogValue;
use crate::oracle;

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_INSTANCES: usize = 100;
pub const VERIFY_FORMAT: &str = "evidence-verify/1";

/// Smallest quadrature tolerance requested; tighter targets fall back to
/// the best estimate the integrator reaches.
const QUADRATURE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCheck {
    pub index: usize,
    /// `signal` or `location`.
    pub kind: &'static str,
    pub n: usize,
    pub noise_sd: f64,
    pub prior_sd: f64,
    pub constraints: usize,
    pub analytic: f64,
    pub quadrature: f64,
    /// `|analytic - quadrature|` in nats, i.e. relative error of the
    /// linear-domain evidence to first order.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySummary {
    pub seed: u64,
    pub rel_tol: f64,
    pub checks: Vec<OracleCheck>,
}

impl VerifySummary {
    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }

    pub fn failures(&self) -> impl Iterator<Item = &OracleCheck> {
        self.checks.iter().filter(move |c| c.deviation.is_nan() || c.deviation > self.rel_tol)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    /// Pretty JSON: summary counts plus every failing instance.
    pub fn to_json(&self) -> String {
        let doc = VerifyDoc {
            format: VERIFY_FORMAT,
            seed: self.seed,
            rel_tol: self.rel_tol,
            checks: self.checks.len(),
            max_deviation: self.max_deviation(),
            passed: self.passed(),
            failures: self.failures().collect(),
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("summary serialization is infallible");
        out.push('\n');
        out
    }
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    format: &'static str,
    seed: u64,
    rel_tol: f64,
    checks: usize,
    max_deviation: f64,
    passed: bool,
    failures: Vec<&'a OracleCheck>,
}

/// Log-uniform draw on `[lo, hi]`.
fn log_uniform(rng: &mut GaussianStream, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.uniform() * (hi / lo).ln()).exp()
}

fn integrate_or_best(result: Result<LogValue>) -> Result<f64> {
    match result {
        Ok(v) => Ok(v.ln()),
        Err(Error::Convergence { estimate, .. }) => Ok(estimate.ln()),
        Err(e) => Err(e),
    }
}

/// Random signal instance with `n <= 16`, `sigma, tau` log-uniform on
/// `[1e-2, 1e2]`, and residuals drawn from the model's own predictive.
pub fn random_signal_instance(rng: &mut GaussianStream) -> (Vec<f64>, SignalDataset, f64, f64) {
    let n = 1 + (rng.uniform() * 16.0).ceil() as usize % 16;
    let sigma = log_uniform(rng, 1e-2, 1e2);
    let tau = log_uniform(rng, 1e-2, 1e2);
    let mut g: Vec<f64> = (0..n).map(|_| rng.next_standard()).collect();
    if g.iter().all(|&x| x == 0.0) {
        g[0] = 1.0;
    }
    let amplitude = tau * rng.next_standard();
    let y = g.iter().map(|gi| amplitude * gi + sigma * rng.next_standard()).collect();
    (g, SignalDataset::new(y).expect("finite draws"), sigma, tau)
}

fn signal_check(index: usize, rng: &mut GaussianStream, quad_tol: f64) -> Result<OracleCheck> {
    let (g, data, sigma, tau) = random_signal_instance(rng);
    let model = CompositeModel::signal("H1", 1.0, g.clone(), sigma, GaussianPrior::new(0.0, tau)?)?;
    let analytic = log_evidence(&model, &Observation::Vector(data.clone()))?.log_value.ln();
    let quadrature = integrate_or_best(oracle::signal_log_evidence(&data, &g, sigma, &GaussianPrior::new(0.0, tau)?, quad_tol))?;
    Ok(OracleCheck {
        index,
        kind: "signal",
        n: g.len(),
        noise_sd: sigma,
        prior_sd: tau,
        constraints: 0,
        analytic,
        quadrature,
        deviation: (analytic - quadrature).abs(),
    })
}

fn location_check(index: usize, rng: &mut GaussianStream, quad_tol: f64) -> Result<OracleCheck> {
    let sigma = log_uniform(rng, 1e-2, 1e2);
    let tau = log_uniform(rng, 1e-2, 1e2);
    let mean = 50.0 * (2.0 * rng.uniform() - 1.0);
    let theta = mean + tau * rng.next_standard();
    let k = (rng.uniform() * 3.0).floor() as usize % 3;
    let constraints = (0..k)
        .map(|_| {
            let s2 = log_uniform(rng, 1e-2, 1e2);
            AuxiliaryConstraint::new(theta + s2 * rng.next_standard(), s2)
        })
        .collect::<Result<Vec<_>>>()?;
    let y = theta + sigma * rng.next_standard();
    let prior = GaussianPrior::new(mean, tau)?;
    let model = CompositeModel::location("H", 1.0, sigma, prior, constraints.clone())?;
    let analytic = log_evidence(&model, &Observation::scalar(y)?)?.log_value.ln();
    let quadrature = integrate_or_best(oracle::location_log_evidence(&[y], sigma, &prior, &constraints, quad_tol))?;
    Ok(OracleCheck {
        index,
        kind: "location",
        n: 1,
        noise_sd: sigma,
        prior_sd: tau,
        constraints: k,
        analytic,
        quadrature,
        deviation: (analytic - quadrature).abs(),
    })
}

/// Runs `instances` signal checks and as many location checks.
pub fn run_oracle_suite(seed: u64, instances: usize, rel_tol: f64) -> Result<VerifySummary> {
    if !(rel_tol > 0.0 && rel_tol <= 0.1) {
        return Err(Error::domain(format!("rel_tol must lie in (0, 0.1], got {rel_tol}")));
    }
    let quad_tol = (0.1 * rel_tol).clamp(QUADRATURE_FLOOR, 1e-9);
    let mut rng = GaussianStream::new(seed);
    let mut checks = Vec::with_capacity(2 * instances);
    for i in 0..instances {
        checks.push(signal_check(i, &mut rng, quad_tol)?);
    }
    for i in 0..instances {
        checks.push(location_check(i, &mut rng, quad_tol)?);
    }
    Ok(VerifySummary { seed, rel_tol, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let s = run_oracle_suite(1, 10, 1e-8).unwrap();
        assert_eq!(s.checks.len(), 20);
        assert!(s.passed(), "max deviation {}", s.max_deviation());
    }

    #[test]
    fn unreachable_tolerance_fails() {
        let s = run_oracle_suite(1, 5, 1e-20).unwrap();
        assert!(!s.passed());
    }

    #[test]
    fn bad_tolerance_is_rejected() {
        assert!(run_oracle_suite(1, 1, 0.0).is_err());
        assert!(run_oracle_suite(1, 1, 0.5).is_err());
    }
}

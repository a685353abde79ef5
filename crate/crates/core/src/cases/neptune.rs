//! Uranus residuals: noise alone against an unseen planet imprinting a
//! known pattern with unknown amplitude.

use crate::error::Result;
use crate::evidence::{
    log_bayes_factor, log_bayes_factor_signal, log_bayes_factor_signal_general, log_evidence, model_posterior,
    signal_statistics, Observation, SignalDataset,
};
use crate::model::{CompositeModel, GaussianPrior};
use crate::oracle;
use crate::report::{BayesFactorRow, CaseReport, Quantity};

pub const H0: &str = "H0";
pub const H1: &str = "H1";

/// Relative tolerance of the quadrature cross-check inside the report.
pub const ORACLE_REL_TOL: f64 = 1e-9;

/// Worked example: four epochs, unit pattern, residuals of 2.
pub fn demo_pattern() -> Vec<f64> {
    vec![1.0; 4]
}

/// Sixteen-epoch stand-in for a perturbation signature: one slow
/// oscillation whose amplitude grows as the perturber approaches.
pub fn default_pattern() -> Vec<f64> {
    (0..16)
        .map(|i| {
            let t = i as f64 / 16.0;
            (0.5 + t) * (2.0 * std::f64::consts::PI * t).sin()
        })
        .collect()
}

pub fn neptune_models(pattern: &[f64], noise_sd: f64, prior_sd: f64) -> Result<[CompositeModel; 2]> {
    Ok([
        CompositeModel::null(H0, 1.0, noise_sd)?,
        CompositeModel::signal(H1, 1.0, pattern.to_vec(), noise_sd, GaussianPrior::new(0.0, prior_sd)?)?,
    ])
}

pub fn run_neptune_case(pattern: &[f64], data: &SignalDataset, noise_sd: f64, prior_sd: f64) -> Result<CaseReport> {
    let stats = signal_statistics(data, pattern, noise_sd, prior_sd)?;
    let compact = log_bayes_factor_signal(data, pattern, noise_sd, prior_sd)?;
    let general = log_bayes_factor_signal_general(data, pattern, noise_sd, prior_sd)?;

    let models = neptune_models(pattern, noise_sd, prior_sd)?;
    let obs = Observation::Vector(data.clone());
    let e0 = log_evidence(&models[0], &obs)?;
    let e1 = log_evidence(&models[1], &obs)?;
    let b10 = log_bayes_factor(&e1, &e0)?;
    let posterior = model_posterior(&models, &[e0.clone(), e1.clone()])?;

    let mut quantities = vec![
        Quantity::scalar("n", "epochs", data.len() as f64, "count", "input"),
        Quantity::scalar("sigma", "noise sd", noise_sd, "residual units", "input"),
        Quantity::scalar("tau", "amplitude prior sd", prior_sd, "amplitude units", "input"),
        Quantity::scalar("lambda", "lambda", stats.lambda, "dimensionless", "tau^2 g'g / sigma^2"),
        Quantity::scalar("z_squared", "z^2", stats.z_squared, "dimensionless", "(g'y)^2 / (sigma^2 g'g)"),
        Quantity::scalar("c", "c", stats.c, "1/amplitude^2", "g'g / sigma^2 + 1 / tau^2"),
        Quantity::scalar("d", "d", stats.d, "1/amplitude", "g'y / sigma^2"),
        Quantity::log("log_b10_compact", "ln B10 (compact form)", compact, "-ln(1+lambda)/2 + lambda z^2 / (2 (1+lambda))"),
        Quantity::log("log_b10_general", "ln B10 (general form)", general, "-ln(tau^2 c)/2 + d^2 / 2c"),
    ];
    if prior_sd > 0.0 {
        let quad =
            oracle::signal_log_bayes_factor(data, pattern, noise_sd, &GaussianPrior::new(0.0, prior_sd)?, ORACLE_REL_TOL)?;
        quantities.push(Quantity::log(
            "log_b10_quadrature",
            "ln B10 (quadrature)",
            quad,
            "numerical integral over the amplitude",
        ));
    }
    quantities.push(Quantity::scalar(
        "posterior_h1",
        "p(H1 | y) at even prior odds",
        posterior.probability_of(H1).expect("H1 in model space"),
        "probability",
        "",
    ));

    Ok(CaseReport {
        title: "neptune".into(),
        quantities,
        evidence: vec![e0.clone(), e1.clone()],
        bayes_factors: vec![BayesFactorRow {
            numerator: e1.model_id.clone(),
            denominator: e0.model_id.clone(),
            weight: b10,
        }],
        posterior,
        elimination: None,
    })
}

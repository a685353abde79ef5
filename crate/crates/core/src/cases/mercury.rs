//! Mercury's anomalous perihelion advance: a Newtonian model rescued by an
//! unseen inner planet (with and without the null transit searches) against
//! general relativity's parameter-free prediction.

use crate::cases::orbit::{gr_precession_arcsec_per_century, OrbitSpec};
use crate::error::{Error, Result};
use crate::evidence::{log_bayes_factor, log_evidence, model_posterior, LogEvidence, Observation, WeightOfEvidence};
use crate::model::{effective_prior, AuxiliaryConstraint, CompositeModel, GaussianPrior};
use crate::numerics::LogValue;
use crate::report::{BayesFactorRow, CaseReport, Quantity};

pub const ARCSEC_PER_CENTURY: &str = "arcsec/century";

/// The prediction the relativistic model is usually quoted at.
pub const IDEALIZED_GR_PREDICTION: f64 = 43.0;

pub const H2_PRIOR: &str = "H2-prior";
pub const H2: &str = "H2";
pub const H3: &str = "H3";
pub const H3_IDEAL: &str = "H3-ideal";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MercuryParams {
    /// Observed anomalous advance.
    pub y: f64,
    /// Measurement sd of `y`.
    pub sigma: f64,
    /// Prior sd of the extra planet's contribution.
    pub tau: f64,
    /// Summary of the null searches for the planet.
    pub w: f64,
    /// Sd of `w`.
    pub sigma2: f64,
}

impl Default for MercuryParams {
    fn default() -> Self {
        Self {
            y: 43.0,
            sigma: 0.5,
            tau: 20.0,
            w: 0.0,
            sigma2: 5.0,
        }
    }
}

impl MercuryParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("sigma", self.sigma), ("tau", self.tau), ("sigma2", self.sigma2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("y", self.y), ("w", self.w)] {
            if !v.is_finite() {
                return Err(Error::domain(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(())
    }

    pub fn vulcan_unconstrained(&self) -> Result<CompositeModel> {
        CompositeModel::location(H2_PRIOR, 1.0, self.sigma, GaussianPrior::new(0.0, self.tau)?, vec![])
    }

    pub fn vulcan(&self) -> Result<CompositeModel> {
        CompositeModel::location(
            H2,
            1.0,
            self.sigma,
            GaussianPrior::new(0.0, self.tau)?,
            vec![AuxiliaryConstraint::new(self.w, self.sigma2)?],
        )
    }

    pub fn relativity(&self) -> Result<CompositeModel> {
        let mu = gr_precession_arcsec_per_century(&OrbitSpec::mercury());
        CompositeModel::point(H3, 1.0, mu, self.sigma)
    }

    pub fn relativity_idealized(&self) -> Result<CompositeModel> {
        CompositeModel::point(H3_IDEAL, 1.0, IDEALIZED_GR_PREDICTION, self.sigma)
    }
}

pub fn run_mercury_case(params: &MercuryParams) -> Result<CaseReport> {
    params.validate()?;
    let y = Observation::scalar(params.y)?;

    let h2_prior = params.vulcan_unconstrained()?;
    let h2 = params.vulcan()?;
    let h3 = params.relativity()?;
    let h3_ideal = params.relativity_idealized()?;

    let e_h2_prior = log_evidence(&h2_prior, &y)?;
    let e_h2 = log_evidence(&h2, &y)?;
    let e_h3 = log_evidence(&h3, &y)?;
    let e_h3_ideal = log_evidence(&h3_ideal, &y)?;

    let tau_post = effective_prior(&h2)?.sd();
    let var = params.sigma * params.sigma;
    let mu_gr = gr_precession_arcsec_per_century(&OrbitSpec::mercury());

    let b32 = log_bayes_factor(&e_h3, &e_h2)?;
    let b32_ideal = log_bayes_factor(&e_h3_ideal, &e_h2)?;
    let b32_prior = log_bayes_factor(&e_h3, &e_h2_prior)?;

    let au = ARCSEC_PER_CENTURY;
    let quantities = vec![
        Quantity::scalar("y", "observed anomalous advance", params.y, au, "input"),
        Quantity::scalar("sigma", "measurement sd", params.sigma, au, "input"),
        Quantity::scalar("tau", "prior sd of the extra-planet effect", params.tau, au, "input"),
        Quantity::scalar("w", "null-search summary", params.w, au, "input"),
        Quantity::scalar("sigma2", "null-search sd", params.sigma2, au, "input"),
        Quantity::scalar(
            "predictive_sd_prior",
            "predictive sd before the null searches",
            (var + params.tau * params.tau).sqrt(),
            au,
            "sqrt(sigma^2 + tau^2)",
        ),
        Quantity::log("p_y_h2_prior", "p(y | H2) before the null searches", e_h2_prior.log_value, "N(y | 0, sigma^2 + tau^2)"),
        Quantity::scalar("tau_post", "prior sd after the null searches", tau_post, au, "1/tau_post^2 = 1/tau^2 + 1/sigma2^2"),
        Quantity::scalar(
            "predictive_sd_constrained",
            "predictive sd after the null searches",
            (var + tau_post * tau_post).sqrt(),
            au,
            "sqrt(sigma^2 + tau_post^2)",
        ),
        Quantity::log("p_y_h2_w", "p(y | H2, w)", e_h2.log_value, "N(y | 0, sigma^2 + tau_post^2), evaluated directly"),
        Quantity::scalar("mu_gr", "relativistic advance for Mercury", mu_gr, au, "6 pi G M / (a (1 - e^2) c^2) per orbit"),
        Quantity::log("p_y_h3", "p(y | H3) at the computed prediction", e_h3.log_value, "N(y | mu_gr, sigma^2)"),
        Quantity::log("p_y_h3_ideal", "p(y | H3) at prediction 43", e_h3_ideal.log_value, "N(y | 43, sigma^2)"),
        Quantity::log("log_b32", "ln B32 (H3 over H2 given w)", b32_as_log(b32.nats())?, "computed prediction"),
        Quantity::log("log_b32_ideal", "ln B32 at prediction 43", b32_as_log(b32_ideal.nats())?, "idealized prediction"),
        Quantity::log("log_b32_prior", "ln B32 before the null searches", b32_as_log(b32_prior.nats())?, "H3 over H2-prior"),
    ];

    let space = [h2.clone(), h3.clone()];
    let posterior = model_posterior(&space, &[e_h2.clone(), e_h3.clone()])?;

    Ok(CaseReport {
        title: "mercury".into(),
        quantities,
        evidence: vec![e_h2_prior, e_h2.clone(), e_h3.clone(), e_h3_ideal],
        bayes_factors: vec![
            row(&e_h3, &e_h2, b32),
            row_named(H3_IDEAL, H2, b32_ideal),
            row_named(H3, H2_PRIOR, b32_prior),
        ],
        posterior,
        elimination: None,
    })
}

fn b32_as_log(nats: f64) -> Result<LogValue> {
    LogValue::new(nats)
}

fn row(num: &LogEvidence, den: &LogEvidence, weight: WeightOfEvidence) -> BayesFactorRow {
    row_named(&num.model_id, &den.model_id, weight)
}

fn row_named(num: &str, den: &str, weight: WeightOfEvidence) -> BayesFactorRow {
    BayesFactorRow {
        numerator: num.into(),
        denominator: den.into(),
        weight,
    }
}

//! Marginal likelihoods, Bayes factors and posteriors over model spaces.

mod data;
mod elimination;
mod posterior;
mod signal;

pub use data::{DataFingerprint, Observation, SignalDataset};
pub use elimination::{elimination_report, EliminationReport, ModelElimination, DEFAULT_EPSILON};
pub use posterior::{model_posterior, sequential_log_evidence, sequential_posterior, ModelPosterior};
pub use signal::{
    amplitude_posterior, log_bayes_factor_signal, log_bayes_factor_signal_general, log_evidence_null,
    log_evidence_signal, log_evidence_signal_with_prior, signal_statistics, SignalStatistics,
};

use std::f64::consts::LN_10;

use crate::error::{Error, Result};
use crate::model::{effective_prior, CompositeModel, GaussianPrior, Likelihood};
use crate::numerics::{log_gaussian_density, render_linear, LogValue};

/// Log marginal likelihood of a dataset under one model.
#[derive(Debug, Clone, PartialEq)]
pub struct LogEvidence {
    pub model_id: String,
    pub log_value: LogValue,
    pub fingerprint: DataFingerprint,
}

/// Predictive density of a scalar under `y ~ N(theta, sigma^2)`,
/// `theta ~ prior`: `N(y | prior.mean, sigma^2 + prior.sd^2)`.
pub fn log_evidence_location(y: f64, prior: &GaussianPrior, noise_sd: f64) -> Result<LogValue> {
    if !(noise_sd.is_finite() && noise_sd > 0.0) {
        return Err(Error::domain(format!("noise sd must be positive, got {noise_sd}")));
    }
    log_gaussian_density(y, prior.mean(), noise_sd * noise_sd + prior.variance())
}

/// Scores `data` under `model`, folding auxiliary constraints into the
/// parameter prior first.
pub fn log_evidence(model: &CompositeModel, data: &Observation) -> Result<LogEvidence> {
    let log_value = match (model.likelihood(), data) {
        (Likelihood::Null { noise_sd }, Observation::Vector(d)) => log_evidence_null(d, *noise_sd)?,
        (Likelihood::LinearSignal(lik), Observation::Vector(d)) => {
            let prior = effective_prior(model)?;
            log_evidence_signal_with_prior(d, lik.pattern(), lik.noise_sd(), &prior)?
        }
        (Likelihood::Location(lik), Observation::Scalar(y)) => {
            let prior = effective_prior(model)?;
            log_evidence_location(*y, &prior, lik.noise_sd())?
        }
        (Likelihood::PointPrediction(lik), Observation::Scalar(y)) => {
            log_gaussian_density(*y, lik.predicted_mean(), lik.noise_sd().powi(2))?
        }
        (lik, _) => {
            return Err(Error::usage(format!(
                "model `{}` ({} likelihood) expects {} data",
                model.id(),
                lik.kind(),
                if lik.takes_vector_data() { "vector" } else { "scalar" }
            )))
        }
    };
    Ok(LogEvidence {
        model_id: model.id().to_string(),
        log_value,
        fingerprint: DataFingerprint::of(data),
    })
}

/// Log Bayes factor of one model over another.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightOfEvidence {
    nats: f64,
}

impl WeightOfEvidence {
    pub fn nats(&self) -> f64 {
        self.nats
    }

    /// Base-10 log of the Bayes factor, in bans.
    pub fn bans(&self) -> f64 {
        self.nats / LN_10
    }

    pub fn in_base(&self, base: LogBase) -> f64 {
        match base {
            LogBase::E => self.nats(),
            LogBase::Ten => self.bans(),
        }
    }

    pub fn linear(&self) -> String {
        render_linear(self.nats)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    E,
    Ten,
}

/// `ln p(D|a) - ln p(D|b)`, refusing evidences computed on different data.
pub fn log_bayes_factor(a: &LogEvidence, b: &LogEvidence) -> Result<WeightOfEvidence> {
    if a.fingerprint != b.fingerprint {
        return Err(Error::FingerprintMismatch {
            left: a.fingerprint.value(),
            right: b.fingerprint.value(),
        });
    }
    if a.log_value.is_zero() && b.log_value.is_zero() {
        return Err(Error::domain(format!(
            "both `{}` and `{}` assign zero probability to the data",
            a.model_id, b.model_id
        )));
    }
    Ok(WeightOfEvidence {
        nats: a.log_value.ln() - b.log_value.ln(),
    })
}

//! Composite models: a likelihood form, an optional Gaussian prior on its
//! single free parameter, and auxiliary constraints on that parameter.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPrior {
    mean: f64,
    sd: f64,
}

impl GaussianPrior {
    /// `sd = 0` is a point mass at `mean`.
    pub fn new(mean: f64, sd: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::domain(format!("prior mean must be finite, got {mean}")));
        }
        if !sd.is_finite() || sd < 0.0 {
            return Err(Error::domain(format!(
                "prior sd must be finite and nonnegative, got {sd}"
            )));
        }
        Ok(Self { mean, sd })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sd(&self) -> f64 {
        self.sd
    }

    pub fn variance(&self) -> f64 {
        self.sd * self.sd
    }

    pub fn is_point_mass(&self) -> bool {
        self.sd == 0.0
    }

    /// Conjugate update from a direct noisy observation of the parameter.
    ///
    /// Precisions add; the mean is the precision-weighted average.
    pub fn observe(&self, observed: f64, noise_sd: f64) -> Result<GaussianPrior> {
        if self.is_point_mass() {
            return Err(Error::Unsupported(
                "a point-mass prior cannot be updated by a constraint".into(),
            ));
        }
        let prior_precision = 1.0 / self.variance();
        let obs_precision = 1.0 / (noise_sd * noise_sd);
        let precision = prior_precision + obs_precision;
        let mean = (self.mean * prior_precision + observed * obs_precision) / precision;
        GaussianPrior::new(mean, precision.recip().sqrt())
    }
}

fn check_noise(noise_sd: f64, what: &str) -> Result<()> {
    if noise_sd.is_finite() && noise_sd > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} noise sd must be positive and finite, got {noise_sd}")))
    }
}

/// `y_i = A g_i + eps_i`, `eps_i ~ N(0, noise_sd^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSignalLikelihood {
    signal_pattern: Vec<f64>,
    noise_sd: f64,
}

impl LinearSignalLikelihood {
    pub fn new(signal_pattern: Vec<f64>, noise_sd: f64) -> Result<Self> {
        check_noise(noise_sd, "signal")?;
        if signal_pattern.is_empty() {
            return Err(Error::domain("signal pattern is empty"));
        }
        if signal_pattern.iter().any(|g| !g.is_finite()) {
            return Err(Error::domain("signal pattern has non-finite entries"));
        }
        if signal_pattern.iter().all(|&g| g == 0.0) {
            return Err(Error::domain("signal pattern is identically zero"));
        }
        Ok(Self {
            signal_pattern,
            noise_sd,
        })
    }

    pub fn pattern(&self) -> &[f64] {
        &self.signal_pattern
    }

    pub fn noise_sd(&self) -> f64 {
        self.noise_sd
    }
}

/// `y ~ N(theta, noise_sd^2)` with theta integrated out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocationLikelihood {
    noise_sd: f64,
}

impl LocationLikelihood {
    pub fn new(noise_sd: f64) -> Result<Self> {
        check_noise(noise_sd, "location")?;
        Ok(Self { noise_sd })
    }

    pub fn noise_sd(&self) -> f64 {
        self.noise_sd
    }
}

/// `y ~ N(predicted_mean, noise_sd^2)`, no free parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointPredictionLikelihood {
    predicted_mean: f64,
    noise_sd: f64,
}

impl PointPredictionLikelihood {
    pub fn new(predicted_mean: f64, noise_sd: f64) -> Result<Self> {
        check_noise(noise_sd, "point-prediction")?;
        if !predicted_mean.is_finite() {
            return Err(Error::domain("predicted mean must be finite"));
        }
        Ok(Self {
            predicted_mean,
            noise_sd,
        })
    }

    pub fn predicted_mean(&self) -> f64 {
        self.predicted_mean
    }

    pub fn noise_sd(&self) -> f64 {
        self.noise_sd
    }
}

/// Independent evidence `w ~ N(theta, noise_sd^2)` about the free parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxiliaryConstraint {
    observed: f64,
    noise_sd: f64,
}

impl AuxiliaryConstraint {
    pub fn new(observed: f64, noise_sd: f64) -> Result<Self> {
        check_noise(noise_sd, "constraint")?;
        if !observed.is_finite() {
            return Err(Error::domain("constraint observation must be finite"));
        }
        Ok(Self { observed, noise_sd })
    }

    pub fn observed(&self) -> f64 {
        self.observed
    }

    pub fn noise_sd(&self) -> f64 {
        self.noise_sd
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Likelihood {
    /// Zero-mean noise only.
    Null { noise_sd: f64 },
    LinearSignal(LinearSignalLikelihood),
    Location(LocationLikelihood),
    PointPrediction(PointPredictionLikelihood),
}

impl Likelihood {
    pub fn null(noise_sd: f64) -> Result<Self> {
        check_noise(noise_sd, "null")?;
        Ok(Likelihood::Null { noise_sd })
    }

    pub fn noise_sd(&self) -> f64 {
        match self {
            Likelihood::Null { noise_sd } => *noise_sd,
            Likelihood::LinearSignal(l) => l.noise_sd(),
            Likelihood::Location(l) => l.noise_sd(),
            Likelihood::PointPrediction(l) => l.noise_sd(),
        }
    }

    pub fn has_free_parameter(&self) -> bool {
        matches!(self, Likelihood::LinearSignal(_) | Likelihood::Location(_))
    }

    /// Whether the model explains a vector of residuals (as opposed to a
    /// single scalar observation).
    pub fn takes_vector_data(&self) -> bool {
        matches!(self, Likelihood::Null { .. } | Likelihood::LinearSignal(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Likelihood::Null { .. } => "null",
            Likelihood::LinearSignal(_) => "signal",
            Likelihood::Location(_) => "location",
            Likelihood::PointPrediction(_) => "point",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositeModel {
    id: String,
    prior_weight: f64,
    likelihood: Likelihood,
    parameter_prior: Option<GaussianPrior>,
    constraints: Vec<AuxiliaryConstraint>,
}

impl CompositeModel {
    pub fn new(
        id: impl Into<String>,
        prior_weight: f64,
        likelihood: Likelihood,
        parameter_prior: Option<GaussianPrior>,
        constraints: Vec<AuxiliaryConstraint>,
    ) -> Result<Self> {
        let id = id.into();
        let fail = |reason: &str| Error::Structure {
            id: id.clone(),
            reason: reason.to_string(),
        };
        if id.is_empty() {
            return Err(fail("model id is empty"));
        }
        if !(prior_weight.is_finite() && prior_weight > 0.0) {
            return Err(fail(&format!("prior weight must be positive and finite, got {prior_weight}")));
        }
        match (likelihood.has_free_parameter(), parameter_prior.is_some()) {
            (true, false) => {
                return Err(fail(&format!(
                    "{} likelihood requires a parameter prior",
                    likelihood.kind()
                )))
            }
            (false, true) => {
                return Err(fail(&format!(
                    "{} likelihood has no free parameter to put a prior on",
                    likelihood.kind()
                )))
            }
            _ => {}
        }
        if parameter_prior.is_none() && !constraints.is_empty() {
            return Err(fail("constraints need a parameter prior to act on"));
        }
        Ok(Self {
            id,
            prior_weight,
            likelihood,
            parameter_prior,
            constraints,
        })
    }

    pub fn null(id: impl Into<String>, prior_weight: f64, noise_sd: f64) -> Result<Self> {
        Self::new(id, prior_weight, Likelihood::null(noise_sd)?, None, Vec::new())
    }

    pub fn signal(
        id: impl Into<String>,
        prior_weight: f64,
        pattern: Vec<f64>,
        noise_sd: f64,
        prior: GaussianPrior,
    ) -> Result<Self> {
        let lik = LinearSignalLikelihood::new(pattern, noise_sd)?;
        Self::new(id, prior_weight, Likelihood::LinearSignal(lik), Some(prior), Vec::new())
    }

    pub fn location(
        id: impl Into<String>,
        prior_weight: f64,
        noise_sd: f64,
        prior: GaussianPrior,
        constraints: Vec<AuxiliaryConstraint>,
    ) -> Result<Self> {
        let lik = LocationLikelihood::new(noise_sd)?;
        Self::new(id, prior_weight, Likelihood::Location(lik), Some(prior), constraints)
    }

    pub fn point(id: impl Into<String>, prior_weight: f64, predicted_mean: f64, noise_sd: f64) -> Result<Self> {
        let lik = PointPredictionLikelihood::new(predicted_mean, noise_sd)?;
        Self::new(id, prior_weight, Likelihood::PointPrediction(lik), None, Vec::new())
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn prior_weight(&self) -> f64 {
        self.prior_weight
    }

    pub fn likelihood(&self) -> &Likelihood {
        &self.likelihood
    }

    pub fn parameter_prior(&self) -> Option<&GaussianPrior> {
        self.parameter_prior.as_ref()
    }

    pub fn constraints(&self) -> &[AuxiliaryConstraint] {
        &self.constraints
    }

    /// Same model with a different prior weight.
    pub fn with_prior_weight(&self, prior_weight: f64) -> Result<Self> {
        Self::new(
            self.id.clone(),
            prior_weight,
            self.likelihood.clone(),
            self.parameter_prior,
            self.constraints.clone(),
        )
    }
}

/// Conjugate Gaussian posterior of the parameter after seeing `constraint`.
pub fn apply_constraint(prior: &GaussianPrior, constraint: &AuxiliaryConstraint) -> Result<GaussianPrior> {
    prior.observe(constraint.observed, constraint.noise_sd)
}

/// The parameter prior with every constraint folded in, in declaration order.
pub fn effective_prior(model: &CompositeModel) -> Result<GaussianPrior> {
    let prior = model.parameter_prior.ok_or_else(|| {
        Error::usage(format!("model `{}` has no parameter prior", model.id))
    })?;
    model
        .constraints
        .iter()
        .try_fold(prior, |acc, c| apply_constraint(&acc, c))
}

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::evidence::data::{DataFingerprint, Observation, SignalDataset};
use crate::evidence::signal::{amplitude_posterior, log_evidence_null, log_evidence_signal_with_prior};
use crate::evidence::{log_evidence_location, LogEvidence};
use crate::model::{effective_prior, CompositeModel, GaussianPrior, Likelihood};
use crate::numerics::{log_gaussian_density, log_sum_exp_raw, LogValue};

/// Normalized posterior probabilities over a model space.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPosterior {
    ids: Vec<String>,
    probabilities: Vec<f64>,
    log_probabilities: Vec<LogValue>,
}

impl ModelPosterior {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn log_probabilities(&self) -> &[LogValue] {
        &self.log_probabilities
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, f64, LogValue)> + '_ {
        self.ids
            .iter()
            .zip(&self.probabilities)
            .zip(&self.log_probabilities)
            .map(|((id, p), lp)| (id.as_str(), *p, *lp))
    }

    pub fn probability_of(&self, id: &str) -> Option<f64> {
        self.ids.iter().position(|m| m == id).map(|i| self.probabilities[i])
    }

    pub fn log_probability_of(&self, id: &str) -> Option<LogValue> {
        self.ids.iter().position(|m| m == id).map(|i| self.log_probabilities[i])
    }

    /// Index of the most probable model; ties go to the earliest declared.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, lp) in self.log_probabilities.iter().enumerate().skip(1) {
            if lp.ln() > self.log_probabilities[best].ln() {
                best = i;
            }
        }
        best
    }
}

/// `p(M_i | D) ∝ w_i p(D | M_i)`, normalized in log space.
pub fn model_posterior(models: &[CompositeModel], evidences: &[LogEvidence]) -> Result<ModelPosterior> {
    if models.is_empty() {
        return Err(Error::usage("model space is empty"));
    }
    if models.len() != evidences.len() {
        return Err(Error::usage(format!(
            "{} models but {} evidences",
            models.len(),
            evidences.len()
        )));
    }
    let mut seen = HashSet::new();
    for (m, e) in models.iter().zip(evidences) {
        if m.id() != e.model_id {
            return Err(Error::usage(format!(
                "evidence for `{}` is aligned with model `{}`",
                e.model_id,
                m.id()
            )));
        }
        if !seen.insert(m.id()) {
            return Err(Error::usage(format!("duplicate model id `{}`", m.id())));
        }
    }
    let fingerprint = evidences[0].fingerprint;
    if let Some(other) = evidences.iter().find(|e| e.fingerprint != fingerprint) {
        return Err(Error::FingerprintMismatch {
            left: fingerprint.value(),
            right: other.fingerprint.value(),
        });
    }

    let joint: Vec<f64> = models
        .iter()
        .zip(evidences)
        .map(|(m, e)| m.prior_weight().ln() + e.log_value.ln())
        .collect();
    let norm = log_sum_exp_raw(joint.iter().copied());
    if norm.is_zero() {
        return Err(Error::domain("every model assigns zero probability to the data"));
    }
    let log_probabilities = joint
        .iter()
        .map(|j| LogValue::new(j - norm.ln()))
        .collect::<Result<Vec<_>>>()?;
    // shifted ratios keep exact ties exact
    let max = joint.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let shifted: Vec<f64> = joint.iter().map(|j| (j - max).exp()).collect();
    let total: f64 = shifted.iter().sum();
    Ok(ModelPosterior {
        ids: models.iter().map(|m| m.id().to_string()).collect(),
        probabilities: shifted.iter().map(|s| s / total).collect(),
        log_probabilities,
    })
}

/// Running conjugate state of one model while batches arrive.
struct ChainState<'a> {
    model: &'a CompositeModel,
    prior: Option<GaussianPrior>,
    offset: usize,
    log_evidence: f64,
}

impl<'a> ChainState<'a> {
    fn new(model: &'a CompositeModel) -> Result<Self> {
        let prior = match model.parameter_prior() {
            Some(_) => Some(effective_prior(model)?),
            None => None,
        };
        Ok(Self {
            model,
            prior,
            offset: 0,
            log_evidence: 0.0,
        })
    }

    /// Adds `ln p(batch | earlier batches, M)` and updates the parameter prior.
    fn absorb(&mut self, batch: &Observation) -> Result<()> {
        let shape_error = || {
            Error::usage(format!(
                "batch shape does not fit model `{}` ({} likelihood)",
                self.model.id(),
                self.model.likelihood().kind()
            ))
        };
        let conditional = match (self.model.likelihood(), batch) {
            (Likelihood::Null { noise_sd }, Observation::Vector(d)) => log_evidence_null(d, *noise_sd)?,
            (Likelihood::LinearSignal(lik), Observation::Vector(d)) => {
                let end = self.offset + d.len();
                if end > lik.pattern().len() {
                    return Err(Error::usage(format!(
                        "batches run past the {}-epoch pattern of model `{}`",
                        lik.pattern().len(),
                        self.model.id()
                    )));
                }
                let pattern = &lik.pattern()[self.offset..end];
                let prior = self.prior.expect("signal models carry a prior");
                let e = conditional_signal_evidence(d, pattern, lik.noise_sd(), &prior)?;
                if pattern.iter().any(|&g| g != 0.0) {
                    self.prior = Some(amplitude_posterior(d, pattern, lik.noise_sd(), &prior)?);
                }
                self.offset = end;
                e
            }
            (Likelihood::Location(lik), Observation::Scalar(y)) => {
                let prior = self.prior.expect("location models carry a prior");
                let e = log_evidence_location(*y, &prior, lik.noise_sd())?;
                if !prior.is_point_mass() {
                    self.prior = Some(prior.observe(*y, lik.noise_sd())?);
                }
                e
            }
            (Likelihood::PointPrediction(lik), Observation::Scalar(y)) => {
                log_gaussian_density(*y, lik.predicted_mean(), lik.noise_sd().powi(2))?
            }
            _ => return Err(shape_error()),
        };
        self.log_evidence += conditional.ln();
        Ok(())
    }
}

fn conditional_signal_evidence(
    data: &SignalDataset,
    pattern: &[f64],
    noise_sd: f64,
    prior: &GaussianPrior,
) -> Result<LogValue> {
    // an all-zero slice of a nonzero pattern carries no amplitude information
    if pattern.iter().all(|&g| g == 0.0) {
        return log_evidence_null(data, noise_sd);
    }
    log_evidence_signal_with_prior(data, pattern, noise_sd, prior)
}

/// Cumulative `ln p(D_1..D_t | M)` for each prefix, built from conditional
/// evidences with the conjugate prior carried forward.
pub fn sequential_log_evidence(model: &CompositeModel, batches: &[Observation]) -> Result<Vec<LogEvidence>> {
    if batches.is_empty() {
        return Err(Error::usage("no batches to update on"));
    }
    let mut state = ChainState::new(model)?;
    let mut out = Vec::with_capacity(batches.len());
    for t in 0..batches.len() {
        state.absorb(&batches[t])?;
        out.push(LogEvidence {
            model_id: model.id().to_string(),
            log_value: LogValue::new(state.log_evidence)?,
            fingerprint: DataFingerprint::of_batches(&batches[..=t]),
        });
    }
    Ok(out)
}

/// Posterior after each prefix of `batches`, via the chain rule
/// `p(D1, D2 | M) = p(D1 | M) p(D2 | D1, M)` with conjugate prior updates.
pub fn sequential_posterior(models: &[CompositeModel], batches: &[Observation]) -> Result<Vec<ModelPosterior>> {
    if batches.is_empty() {
        return Err(Error::usage("no batches to update on"));
    }
    let mut states = models.iter().map(ChainState::new).collect::<Result<Vec<_>>>()?;
    let mut trajectory = Vec::with_capacity(batches.len());
    for t in 0..batches.len() {
        for state in &mut states {
            state.absorb(&batches[t])?;
        }
        let fingerprint = DataFingerprint::of_batches(&batches[..=t]);
        let evidences = states
            .iter()
            .map(|s| {
                Ok(LogEvidence {
                    model_id: s.model.id().to_string(),
                    log_value: LogValue::new(s.log_evidence)?,
                    fingerprint,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        trajectory.push(model_posterior(models, &evidences)?);
    }
    Ok(trajectory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evidence::log_evidence;

    fn evidence(id: &str, log: f64) -> LogEvidence {
        LogEvidence {
            model_id: id.into(),
            log_value: LogValue::new(log).unwrap(),
            fingerprint: DataFingerprint::of(&Observation::scalar(0.0).unwrap()),
        }
    }

    fn nulls(weights: &[f64]) -> Vec<CompositeModel> {
        weights
            .iter()
            .enumerate()
            .map(|(i, w)| CompositeModel::null(format!("M{i}"), *w, 1.0).unwrap())
            .collect()
    }

    #[test]
    fn symmetric_posterior() {
        let p = model_posterior(&nulls(&[1.0, 1.0]), &[evidence("M0", -3.0), evidence("M1", -3.0)]).unwrap();
        assert_eq!(p.probabilities(), &[0.5, 0.5]);
    }

    #[test]
    fn weighted_posterior() {
        let models = nulls(&[2.0, 1.0, 1.0]);
        let evs = [evidence("M0", -1.0), evidence("M1", -1.0), evidence("M2", -1.0)];
        let p = model_posterior(&models, &evs).unwrap();
        // brute force: w_i e^{-1} / sum_j w_j e^{-1}
        let raw: Vec<f64> = [2.0f64, 1.0, 1.0].iter().map(|w| w * (-1f64).exp()).collect();
        let total: f64 = raw.iter().sum();
        for (got, r) in p.probabilities().iter().zip(&raw) {
            assert!((got - r / total).abs() < 1e-15);
        }
        assert_eq!(p.probabilities(), &[0.5, 0.25, 0.25]);
    }

    #[test]
    fn overwhelming_gap() {
        let gap = 6e17f64.ln();
        let p = model_posterior(&nulls(&[1.0, 1.0]), &[evidence("M0", 0.0), evidence("M1", -gap)]).unwrap();
        assert!((p.probabilities()[1] / 1.666_666_666_666_667e-18 - 1.0).abs() < 1e-9);
        assert!((p.probabilities()[0] - 1.0).abs() < 1e-15);
        assert_eq!(p.argmax(), 0);
    }

    #[test]
    fn alignment_errors() {
        let models = nulls(&[1.0, 1.0]);
        assert!(model_posterior(&models, &[evidence("M0", 0.0)]).is_err());
        assert!(model_posterior(&models, &[evidence("M1", 0.0), evidence("M0", 0.0)]).is_err());
        assert!(model_posterior(&[], &[]).is_err());
        let dup = vec![models[0].clone(), models[0].clone()];
        assert!(model_posterior(&dup, &[evidence("M0", 0.0), evidence("M0", 0.0)]).is_err());
        let mut other = evidence("M1", 0.0);
        other.fingerprint = DataFingerprint::of(&Observation::scalar(1.0).unwrap());
        assert!(matches!(
            model_posterior(&models, &[evidence("M0", 0.0), other]),
            Err(Error::FingerprintMismatch { .. })
        ));
        assert!(model_posterior(&models, &[evidence("M0", f64::NEG_INFINITY), evidence("M1", f64::NEG_INFINITY)]).is_err());
    }

    #[test]
    fn zero_evidence_model_gets_zero_posterior() {
        let p = model_posterior(&nulls(&[1.0, 1.0]), &[evidence("M0", -2.0), evidence("M1", f64::NEG_INFINITY)]).unwrap();
        assert_eq!(p.probabilities(), &[1.0, 0.0]);
    }

    fn neptune_pair(pattern: Vec<f64>) -> Vec<CompositeModel> {
        vec![
            CompositeModel::null("H0", 1.0, 1.0).unwrap(),
            CompositeModel::signal("H1", 1.0, pattern, 1.0, GaussianPrior::new(0.0, 1.0).unwrap()).unwrap(),
        ]
    }

    #[test]
    fn single_batch_matches_direct_posterior() {
        let models = neptune_pair(vec![1.0; 4]);
        let data = Observation::vector(vec![2.0; 4]).unwrap();
        let seq = sequential_posterior(&models, std::slice::from_ref(&data)).unwrap();
        let evs: Vec<_> = models.iter().map(|m| log_evidence(m, &data).unwrap()).collect();
        let direct = model_posterior(&models, &evs).unwrap();
        assert_eq!(seq.len(), 1);
        for (a, b) in seq[0].log_probabilities().iter().zip(direct.log_probabilities()) {
            assert!((a.ln() - b.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn split_batches_match_joint() {
        let models = neptune_pair(vec![1.0; 4]);
        let batches = [
            Observation::vector(vec![2.0, 2.0]).unwrap(),
            Observation::vector(vec![2.0, 2.0]).unwrap(),
        ];
        let seq = sequential_posterior(&models, &batches).unwrap();
        let joint = Observation::vector(vec![2.0; 4]).unwrap();
        let evs: Vec<_> = models.iter().map(|m| log_evidence(m, &joint).unwrap()).collect();
        let direct = model_posterior(&models, &evs).unwrap();
        for (a, b) in seq[1].log_probabilities().iter().zip(direct.log_probabilities()) {
            assert!((a.ln() - b.ln()).abs() < 1e-10);
        }
    }

    #[test]
    fn orthogonal_batches_erode_signal_model() {
        let models = neptune_pair(vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0]);
        let batches: Vec<_> = (0..3)
            .map(|_| Observation::vector(vec![0.7, -0.7]).unwrap())
            .collect();
        let seq = sequential_posterior(&models, &batches).unwrap();
        let h1: Vec<f64> = seq.iter().map(|p| p.probability_of("H1").unwrap()).collect();
        assert!(h1[0] < 0.5);
        assert!(h1.windows(2).all(|w| w[1] < w[0]), "{h1:?}");
    }

    #[test]
    fn sequential_errors() {
        let models = neptune_pair(vec![1.0, 1.0]);
        assert!(sequential_posterior(&models, &[]).is_err());
        let too_long = [Observation::vector(vec![1.0, 1.0, 1.0]).unwrap()];
        assert!(sequential_posterior(&models, &too_long).is_err());
        let scalar = [Observation::scalar(1.0).unwrap()];
        assert!(sequential_posterior(&models, &scalar).is_err());
    }
}

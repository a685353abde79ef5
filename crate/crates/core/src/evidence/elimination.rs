//! Labels models whose posterior has collapsed, and steps where the leading
//! model changes. Nothing here removes a model or renormalizes anything.

use crate::error::{Error, Result};
use crate::evidence::posterior::ModelPosterior;

pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ModelElimination {
    pub model_id: String,
    /// Start of the final run of steps with posterior below epsilon, if the
    /// trajectory ends inside such a run.
    pub eliminated_at: Option<usize>,
    pub final_probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EliminationReport {
    pub epsilon: f64,
    pub models: Vec<ModelElimination>,
    /// Steps at which the most probable model differs from the previous step.
    pub crisis_steps: Vec<usize>,
    /// Most probable model id at each step.
    pub leaders: Vec<String>,
}

impl EliminationReport {
    pub fn eliminated(&self) -> impl Iterator<Item = &ModelElimination> {
        self.models.iter().filter(|m| m.eliminated_at.is_some())
    }
}

pub fn elimination_report(trajectory: &[ModelPosterior], epsilon: f64) -> Result<EliminationReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let first = trajectory
        .first()
        .ok_or_else(|| Error::usage("empty posterior trajectory"))?;
    if trajectory.iter().any(|p| p.ids() != first.ids()) {
        return Err(Error::usage("trajectory steps cover different model spaces"));
    }

    let last = trajectory.last().expect("nonempty");
    let models = first
        .ids()
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let below = |t: usize| trajectory[t].probabilities()[i] < epsilon;
            let mut start = None;
            for t in (0..trajectory.len()).rev() {
                if below(t) {
                    start = Some(t);
                } else {
                    break;
                }
            }
            ModelElimination {
                model_id: id.clone(),
                eliminated_at: start,
                final_probability: last.probabilities()[i],
            }
        })
        .collect();

    let argmaxes: Vec<usize> = trajectory.iter().map(ModelPosterior::argmax).collect();
    let crisis_steps = argmaxes
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] != w[1])
        .map(|(t, _)| t + 1)
        .collect();

    Ok(EliminationReport {
        epsilon,
        models,
        crisis_steps,
        leaders: argmaxes.iter().map(|&i| first.ids()[i].clone()).collect(),
    })
}

use crate::error::Result;
use crate::evidence::{elimination_report, log_bayes_factor, log_evidence, model_posterior};
use crate::model::effective_prior;
use crate::report::{BayesFactorRow, CaseReport, Quantity};
use crate::scenario::ScenarioSpec;

/// Scores every model on the scenario data. Bayes-factor rows cover each
/// pair once, later-declared model over earlier.
pub fn evaluate_scenario(spec: &ScenarioSpec, epsilon: f64) -> Result<CaseReport> {
    let models = spec.models();
    let evidence = models
        .iter()
        .map(|m| log_evidence(m, spec.data()))
        .collect::<Result<Vec<_>>>()?;

    let mut bayes_factors = Vec::new();
    for i in 0..evidence.len() {
        for j in i + 1..evidence.len() {
            bayes_factors.push(BayesFactorRow {
                numerator: evidence[j].model_id.clone(),
                denominator: evidence[i].model_id.clone(),
                weight: log_bayes_factor(&evidence[j], &evidence[i])?,
            });
        }
    }

    let posterior = model_posterior(&models, &evidence)?;
    let elimination = elimination_report(std::slice::from_ref(&posterior), epsilon)?;

    let mut quantities = vec![Quantity::scalar("n", "observations", spec.data().len() as f64, "count", "input")];
    for m in &models {
        if m.constraints().is_empty() {
            continue;
        }
        let p = effective_prior(m)?;
        quantities.push(Quantity::scalar(
            &format!("{}.prior_mean", m.id()),
            &format!("{} parameter mean after constraints", m.id()),
            p.mean(),
            "parameter units",
            "precision-weighted",
        ));
        quantities.push(Quantity::scalar(
            &format!("{}.prior_sd", m.id()),
            &format!("{} parameter sd after constraints", m.id()),
            p.sd(),
            "parameter units",
            "precisions add",
        ));
    }

    Ok(CaseReport {
        title: spec.name().to_string(),
        quantities,
        evidence,
        bayes_factors,
        posterior,
        elimination: Some(elimination),
    })
}

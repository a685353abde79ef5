//! Case reports and their JSON rendering.
//!
//! The JSON layout is documented in `docs/report-schema.json`. Keys are
//! emitted in a fixed order, log-domain values are carried in nats, and
//! every log value also gets a decimal-string linear rendering so that
//! nothing overflows a double on the way out.

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::evidence::{EliminationReport, LogEvidence, ModelPosterior, WeightOfEvidence};
use crate::numerics::{render_linear, LogValue};

pub const REPORT_FORMAT: &str = "evidence-report/1";

/// A named scalar result.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    pub key: String,
    pub label: String,
    pub value: f64,
    pub units: String,
    /// `value` is a natural log; `linear` renders its exponential.
    pub log_domain: bool,
    pub note: String,
}

impl Quantity {
    pub fn scalar(key: &str, label: &str, value: f64, units: &str, note: &str) -> Self {
        Self {
            key: key.into(),
            label: label.into(),
            value,
            units: units.into(),
            log_domain: false,
            note: note.into(),
        }
    }

    pub fn log(key: &str, label: &str, value: LogValue, note: &str) -> Self {
        Self {
            key: key.into(),
            label: label.into(),
            value: value.ln(),
            units: "nats".into(),
            log_domain: true,
            note: note.into(),
        }
    }

    pub fn linear(&self) -> Option<String> {
        self.log_domain.then(|| render_linear(self.value))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BayesFactorRow {
    pub numerator: String,
    pub denominator: String,
    pub weight: WeightOfEvidence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseReport {
    pub title: String,
    pub quantities: Vec<Quantity>,
    pub evidence: Vec<LogEvidence>,
    pub bayes_factors: Vec<BayesFactorRow>,
    pub posterior: ModelPosterior,
    pub elimination: Option<EliminationReport>,
}

impl CaseReport {
    pub fn quantity(&self, key: &str) -> Option<&Quantity> {
        self.quantities.iter().find(|q| q.key == key)
    }

    /// Value of a named quantity. Panics if absent; for tests and callers
    /// that built the report themselves.
    pub fn value(&self, key: &str) -> f64 {
        self.quantity(key)
            .unwrap_or_else(|| panic!("report `{}` has no quantity `{key}`", self.title))
            .value
    }

    pub fn evidence_of(&self, id: &str) -> Option<&LogEvidence> {
        self.evidence.iter().find(|e| e.model_id == id)
    }

    pub fn bayes_factor(&self, numerator: &str, denominator: &str) -> Option<WeightOfEvidence> {
        self.bayes_factors
            .iter()
            .find(|b| b.numerator == numerator && b.denominator == denominator)
            .map(|b| b.weight)
    }

    pub fn to_json(&self) -> String {
        serialize_report(self)
    }
}

/// Deterministic pretty-printed JSON for a report.
pub fn serialize_report(report: &CaseReport) -> String {
    let doc = ReportDoc::from(report);
    let mut out = serde_json::to_string_pretty(&doc).expect("report serialization is infallible");
    out.push('\n');
    out
}

/// A double that may be infinite; infinities become the strings "inf"/"-inf".
struct Real(f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else if self.0 > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

#[derive(Serialize)]
struct ReportDoc<'a> {
    format: &'static str,
    title: &'a str,
    quantities: Quantities<'a>,
    evidence: Vec<EvidenceDoc<'a>>,
    bayes_factors: Vec<BayesFactorDoc<'a>>,
    posterior: Vec<PosteriorDoc<'a>>,
    elimination: Option<EliminationDoc<'a>>,
}

struct Quantities<'a>(&'a [Quantity]);

impl Serialize for Quantities<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for q in self.0 {
            map.serialize_entry(
                &q.key,
                &QuantityDoc {
                    label: &q.label,
                    value: Real(q.value),
                    units: &q.units,
                    log_domain: q.log_domain,
                    linear: q.linear(),
                    note: &q.note,
                },
            )?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct QuantityDoc<'a> {
    label: &'a str,
    value: Real,
    units: &'a str,
    log_domain: bool,
    linear: Option<String>,
    note: &'a str,
}

#[derive(Serialize)]
struct EvidenceDoc<'a> {
    model_id: &'a str,
    log_evidence_nats: Real,
    log_evidence_bans: Real,
    linear: String,
    data_fingerprint: String,
}

#[derive(Serialize)]
struct BayesFactorDoc<'a> {
    numerator: &'a str,
    denominator: &'a str,
    nats: Real,
    bans: Real,
    linear: String,
}

#[derive(Serialize)]
struct PosteriorDoc<'a> {
    model_id: &'a str,
    probability: f64,
    log_probability: Real,
    linear: String,
}

#[derive(Serialize)]
struct EliminationDoc<'a> {
    epsilon: f64,
    crisis_steps: &'a [usize],
    leaders: &'a [String],
    models: Vec<EliminatedDoc<'a>>,
}

#[derive(Serialize)]
struct EliminatedDoc<'a> {
    model_id: &'a str,
    eliminated: bool,
    eliminated_at: Option<usize>,
    final_probability: f64,
}

impl<'a> From<&'a CaseReport> for ReportDoc<'a> {
    fn from(r: &'a CaseReport) -> Self {
        ReportDoc {
            format: REPORT_FORMAT,
            title: &r.title,
            quantities: Quantities(&r.quantities),
            evidence: r
                .evidence
                .iter()
                .map(|e| EvidenceDoc {
                    model_id: &e.model_id,
                    log_evidence_nats: Real(e.log_value.ln()),
                    log_evidence_bans: Real(e.log_value.log10()),
                    linear: e.log_value.render_linear(),
                    data_fingerprint: format!("{:016x}", e.fingerprint.value()),
                })
                .collect(),
            bayes_factors: r
                .bayes_factors
                .iter()
                .map(|b| BayesFactorDoc {
                    numerator: &b.numerator,
                    denominator: &b.denominator,
                    nats: Real(b.weight.nats()),
                    bans: Real(b.weight.bans()),
                    linear: b.weight.linear(),
                })
                .collect(),
            posterior: r
                .posterior
                .entries()
                .map(|(id, p, lp)| PosteriorDoc {
                    model_id: id,
                    probability: p,
                    log_probability: Real(lp.ln()),
                    linear: lp.render_linear(),
                })
                .collect(),
            elimination: r.elimination.as_ref().map(|e| EliminationDoc {
                epsilon: e.epsilon,
                crisis_steps: &e.crisis_steps,
                leaders: &e.leaders,
                models: e
                    .models
                    .iter()
                    .map(|m| EliminatedDoc {
                        model_id: &m.model_id,
                        eliminated: m.eliminated_at.is_some(),
                        eliminated_at: m.eliminated_at,
                        final_probability: m.final_probability,
                    })
                    .collect(),
            }),
        }
    }
}

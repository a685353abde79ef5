//! Declarative scenario files.
//!
//! ```text
//! # comments run to end of line
//! format 1                                   (optional)
//! scenario "<name>"
//! pattern <id> <v1> ... <vn>
//! model <id> weight <float>
//!   likelihood null noise_sd <float>
//!   likelihood signal pattern <pattern-id> noise_sd <float> prior normal mean <float> sd <float>
//!   likelihood location noise_sd <float> prior normal mean <float> sd <float>
//!              [constraint observed <float> noise_sd <float>]...
//!   likelihood point mean <float> noise_sd <float>
//! data vector <v1> ... <vn>
//! data scalar <float>
//! ```
//!
//! A `likelihood` line belongs to the `model` line above it. Directives are
//! case-sensitive; numbers are plain decimals with an optional exponent.

mod evaluate;
mod parse;

pub use evaluate::evaluate_scenario;
pub use parse::{parse_scenario, ScenarioError, ScenarioErrorKind};

use std::fmt::Write as _;

use crate::evidence::Observation;
use crate::model::{CompositeModel, Likelihood};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct NamedPattern {
    pub id: String,
    pub values: Vec<f64>,
}

/// A model plus the name of the pattern it was declared with, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioModel {
    pub model: CompositeModel,
    pub pattern_ref: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    name: String,
    patterns: Vec<NamedPattern>,
    models: Vec<ScenarioModel>,
    data: Observation,
}

impl ScenarioSpec {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn patterns(&self) -> &[NamedPattern] {
        &self.patterns
    }

    pub fn entries(&self) -> &[ScenarioModel] {
        &self.models
    }

    pub fn models(&self) -> Vec<CompositeModel> {
        self.models.iter().map(|m| m.model.clone()).collect()
    }

    pub fn data(&self) -> &Observation {
        &self.data
    }

    /// Renders the scenario back into the file format. Parsing the output
    /// yields an equal spec, and rendering that spec again gives the same
    /// bytes.
    pub fn to_text(&self) -> String {
        serialize_scenario(self)
    }
}

/// Shortest decimal that parses back to the same double.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn quote(name: &str) -> String {
    let mut out = String::with_capacity(name.len() + 2);
    out.push('"');
    for ch in name.chars() {
        if ch == '"' || ch == '\\' {
            out.push('\\');
        }
        out.push(ch);
    }
    out.push('"');
    out
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format_number(*v)).collect::<Vec<_>>().join(" ")
}

pub fn serialize_scenario(spec: &ScenarioSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "format {FORMAT_VERSION}");
    let _ = writeln!(out, "scenario {}", quote(&spec.name));
    for p in &spec.patterns {
        let _ = writeln!(out, "pattern {} {}", p.id, join(&p.values));
    }
    for entry in &spec.models {
        let m = &entry.model;
        let _ = writeln!(out, "model {} weight {}", m.id(), format_number(m.prior_weight()));
        let prior = m
            .parameter_prior()
            .map(|p| format!(" prior normal mean {} sd {}", format_number(p.mean()), format_number(p.sd())))
            .unwrap_or_default();
        let line = match m.likelihood() {
            Likelihood::Null { noise_sd } => format!("null noise_sd {}", format_number(*noise_sd)),
            Likelihood::LinearSignal(l) => format!(
                "signal pattern {} noise_sd {}{prior}",
                entry.pattern_ref.as_deref().unwrap_or("?"),
                format_number(l.noise_sd())
            ),
            Likelihood::Location(l) => {
                let mut s = format!("location noise_sd {}{prior}", format_number(l.noise_sd()));
                for c in m.constraints() {
                    let _ = write!(
                        s,
                        " constraint observed {} noise_sd {}",
                        format_number(c.observed()),
                        format_number(c.noise_sd())
                    );
                }
                s
            }
            Likelihood::PointPrediction(l) => format!(
                "point mean {} noise_sd {}",
                format_number(l.predicted_mean()),
                format_number(l.noise_sd())
            ),
        };
        let _ = writeln!(out, "  likelihood {line}");
    }
    match &spec.data {
        Observation::Vector(d) => {
            let _ = writeln!(out, "data vector {}", join(d.residuals()));
        }
        Observation::Scalar(y) => {
            let _ = writeln!(out, "data scalar {}", format_number(*y));
        }
    }
    out
}

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::error::Error;
use crate::evidence::Observation;
use crate::model::{AuxiliaryConstraint, CompositeModel, GaussianPrior, Likelihood, LinearSignalLikelihood, LocationLikelihood, PointPredictionLikelihood};
use crate::scenario::{NamedPattern, ScenarioModel, ScenarioSpec, FORMAT_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioErrorKind {
    /// Malformed token: bad number, identifier or string literal.
    Lexical,
    /// Known directive with malformed arguments.
    Syntax,
    UnknownDirective,
    DuplicateId,
    UnresolvedPattern,
    /// Well-formed text describing an inconsistent model space.
    Structural,
    NoScenario,
    UnsupportedFormat,
}

impl fmt::Display for ScenarioErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ScenarioErrorKind::Lexical => "lexical error",
            ScenarioErrorKind::Syntax => "syntax error",
            ScenarioErrorKind::UnknownDirective => "unknown directive",
            ScenarioErrorKind::DuplicateId => "duplicate id",
            ScenarioErrorKind::UnresolvedPattern => "unresolved pattern",
            ScenarioErrorKind::Structural => "inconsistent scenario",
            ScenarioErrorKind::NoScenario => "no scenario",
            ScenarioErrorKind::UnsupportedFormat => "unsupported format",
        };
        f.write_str(s)
    }
}

/// Parse or validation failure. `line` is 1-based; 0 means the problem is
/// not tied to a line (empty input, or a spec built in code).
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}: {message}")]
pub struct ScenarioError {
    pub line: usize,
    pub kind: ScenarioErrorKind,
    pub message: String,
}

impl ScenarioError {
    fn new(line: usize, kind: ScenarioErrorKind, message: impl Into<String>) -> Self {
        Self {
            line,
            kind,
            message: message.into(),
        }
    }
}

type PResult<T> = std::result::Result<T, ScenarioError>;

use ScenarioErrorKind as K;

#[derive(Debug, Clone)]
struct Token {
    text: String,
    quoted: bool,
}

fn tokenize(line: &str, lineno: usize) -> PResult<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&ch) = chars.peek() {
        if ch == '#' {
            break;
        }
        if ch.is_whitespace() {
            chars.next();
            continue;
        }
        if ch == '"' {
            chars.next();
            let mut text = String::new();
            let mut closed = false;
            while let Some(c) = chars.next() {
                match c {
                    '"' => {
                        closed = true;
                        break;
                    }
                    '\\' => match chars.next() {
                        Some(e @ ('"' | '\\')) => text.push(e),
                        Some(e) => {
                            return Err(ScenarioError::new(lineno, K::Lexical, format!("unknown escape `\\{e}`")))
                        }
                        None => break,
                    },
                    c => text.push(c),
                }
            }
            if !closed {
                return Err(ScenarioError::new(lineno, K::Lexical, "unterminated string"));
            }
            tokens.push(Token { text, quoted: true });
            continue;
        }
        let mut text = String::new();
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() || c == '#' {
                break;
            }
            if c == '"' {
                return Err(ScenarioError::new(lineno, K::Lexical, "quote inside a bare token"));
            }
            text.push(c);
            chars.next();
        }
        tokens.push(Token { text, quoted: false });
    }
    Ok(tokens)
}

fn is_decimal(s: &str) -> bool {
    let b = s.as_bytes();
    let mut i = 0;
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        i += 1;
    }
    let int_start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    let mut digits = i - int_start;
    if i < b.len() && b[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        digits += i - frac_start;
    }
    if digits == 0 {
        return false;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            i += 1;
        }
        let exp_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == exp_start {
            return false;
        }
    }
    i == b.len()
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | '+'))
}

/// Cursor over one line's tokens.
struct Line<'a> {
    no: usize,
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Line<'a> {
    fn next(&mut self, what: &str) -> PResult<&'a Token> {
        let t = self
            .tokens
            .get(self.pos)
            .ok_or_else(|| ScenarioError::new(self.no, K::Syntax, format!("expected {what} at end of line")))?;
        self.pos += 1;
        Ok(t)
    }

    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        let t = self.next(&format!("`{kw}`"))?;
        if t.quoted || t.text != kw {
            return Err(ScenarioError::new(self.no, K::Syntax, format!("expected `{kw}`, found `{}`", t.text)));
        }
        Ok(())
    }

    fn number(&mut self, what: &str) -> PResult<f64> {
        let t = self.next(what)?;
        parse_number(&t.text, t.quoted, self.no)
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        let t = self.next(what)?;
        if t.quoted || !is_identifier(&t.text) {
            return Err(ScenarioError::new(self.no, K::Lexical, format!("`{}` is not a valid {what}", t.text)));
        }
        Ok(t.text.clone())
    }

    fn numbers_to_end(&mut self) -> PResult<Vec<f64>> {
        let mut out = Vec::new();
        while let Some(t) = self.peek() {
            out.push(parse_number(&t.text, t.quoted, self.no)?);
            self.pos += 1;
        }
        Ok(out)
    }

    fn finish(&self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(ScenarioError::new(self.no, K::Syntax, format!("unexpected `{}`", t.text))),
        }
    }
}

fn parse_number(text: &str, quoted: bool, line: usize) -> PResult<f64> {
    if quoted || !is_decimal(text) {
        return Err(ScenarioError::new(line, K::Lexical, format!("`{text}` is not a decimal number")));
    }
    let v: f64 = text
        .parse()
        .map_err(|_| ScenarioError::new(line, K::Lexical, format!("`{text}` is not a decimal number")))?;
    if !v.is_finite() {
        return Err(ScenarioError::new(line, K::Lexical, format!("`{text}` is out of range")));
    }
    Ok(v)
}

#[derive(Debug, Default)]
struct LikelihoodDraft {
    kind: String,
    line: usize,
    pattern: Option<String>,
    noise_sd: Option<f64>,
    mean: Option<f64>,
    prior: Option<(f64, f64)>,
    constraints: Vec<(f64, f64)>,
}

#[derive(Debug)]
struct ModelDraft {
    id: String,
    weight: f64,
    line: usize,
    likelihood: Option<LikelihoodDraft>,
}

fn parse_likelihood(line: &mut Line<'_>) -> PResult<LikelihoodDraft> {
    let kind = line.next("likelihood kind")?;
    if kind.quoted || !matches!(kind.text.as_str(), "null" | "signal" | "location" | "point") {
        return Err(ScenarioError::new(
            line.no,
            K::Syntax,
            format!("unknown likelihood `{}` (expected null, signal, location or point)", kind.text),
        ));
    }
    let mut d = LikelihoodDraft {
        kind: kind.text.clone(),
        line: line.no,
        ..Default::default()
    };
    let no = line.no;
    let twice = |what: &str| ScenarioError::new(no, K::Syntax, format!("`{what}` given twice"));
    while let Some(t) = line.peek() {
        line.pos += 1;
        match (t.quoted, t.text.as_str()) {
            (false, "pattern") => {
                if d.pattern.is_some() {
                    return Err(twice("pattern"));
                }
                d.pattern = Some(line.ident("pattern id")?);
            }
            (false, "noise_sd") => {
                if d.noise_sd.is_some() {
                    return Err(twice("noise_sd"));
                }
                d.noise_sd = Some(line.number("noise sd")?);
            }
            (false, "mean") => {
                if d.mean.is_some() {
                    return Err(twice("mean"));
                }
                d.mean = Some(line.number("predicted mean")?);
            }
            (false, "prior") => {
                if d.prior.is_some() {
                    return Err(twice("prior"));
                }
                line.keyword("normal")?;
                line.keyword("mean")?;
                let mean = line.number("prior mean")?;
                line.keyword("sd")?;
                let sd = line.number("prior sd")?;
                d.prior = Some((mean, sd));
            }
            (false, "constraint") => {
                line.keyword("observed")?;
                let w = line.number("constraint observation")?;
                line.keyword("noise_sd")?;
                let s = line.number("constraint noise sd")?;
                d.constraints.push((w, s));
            }
            _ => {
                return Err(ScenarioError::new(line.no, K::Syntax, format!("unexpected `{}` in likelihood", t.text)));
            }
        }
    }
    Ok(d)
}

/// Parses and fully validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioSpec, ScenarioError> {
    let mut name: Option<(String, usize)> = None;
    let mut format_seen = false;
    let mut patterns: Vec<(NamedPattern, usize)> = Vec::new();
    let mut models: Vec<ModelDraft> = Vec::new();
    let mut data: Option<(Observation, usize)> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let no = idx + 1;
        last_line = no;
        let tokens = tokenize(raw, no)?;
        let Some(head) = tokens.first() else { continue };
        let mut line = Line {
            no,
            tokens: &tokens,
            pos: 1,
        };
        if head.quoted {
            return Err(ScenarioError::new(no, K::UnknownDirective, format!("\"{}\" is not a directive", head.text)));
        }
        match head.text.as_str() {
            "format" => {
                if format_seen || name.is_some() {
                    return Err(ScenarioError::new(no, K::Syntax, "`format` must come first and only once"));
                }
                let v = line.next("format version")?;
                if v.quoted || v.text != FORMAT_VERSION.to_string() {
                    return Err(ScenarioError::new(
                        no,
                        K::UnsupportedFormat,
                        format!("format `{}` is not supported (expected {FORMAT_VERSION})", v.text),
                    ));
                }
                line.finish()?;
                format_seen = true;
            }
            "scenario" => {
                if name.is_some() {
                    return Err(ScenarioError::new(no, K::Syntax, "scenario declared twice"));
                }
                let t = line.next("quoted scenario name")?;
                if !t.quoted {
                    return Err(ScenarioError::new(no, K::Lexical, "scenario name must be a quoted string"));
                }
                line.finish()?;
                name = Some((t.text.clone(), no));
            }
            "pattern" => {
                let id = line.ident("pattern id")?;
                let values = line.numbers_to_end()?;
                if values.is_empty() {
                    return Err(ScenarioError::new(no, K::Syntax, format!("pattern `{id}` has no values")));
                }
                if patterns.iter().any(|(p, _)| p.id == id) {
                    return Err(ScenarioError::new(no, K::DuplicateId, format!("pattern `{id}` defined twice")));
                }
                patterns.push((NamedPattern { id, values }, no));
            }
            "model" => {
                let id = line.ident("model id")?;
                line.keyword("weight")?;
                let weight = line.number("prior weight")?;
                line.finish()?;
                if models.iter().any(|m| m.id == id) {
                    return Err(ScenarioError::new(no, K::DuplicateId, format!("model `{id}` defined twice")));
                }
                models.push(ModelDraft {
                    id,
                    weight,
                    line: no,
                    likelihood: None,
                });
            }
            "likelihood" => {
                let draft = parse_likelihood(&mut line)?;
                let model = models.last_mut().ok_or_else(|| {
                    ScenarioError::new(no, K::Structural, "`likelihood` before any `model`")
                })?;
                if model.likelihood.is_some() {
                    return Err(ScenarioError::new(
                        no,
                        K::Structural,
                        format!("model `{}` already has a likelihood", model.id),
                    ));
                }
                model.likelihood = Some(draft);
            }
            "data" => {
                if data.is_some() {
                    return Err(ScenarioError::new(no, K::Syntax, "data declared twice"));
                }
                let kind = line.next("`vector` or `scalar`")?;
                let obs = match (kind.quoted, kind.text.as_str()) {
                    (false, "vector") => {
                        let values = line.numbers_to_end()?;
                        if values.is_empty() {
                            return Err(ScenarioError::new(no, K::Syntax, "data vector is empty"));
                        }
                        Observation::vector(values).map_err(|e| ScenarioError::new(no, K::Lexical, e.to_string()))?
                    }
                    (false, "scalar") => {
                        let y = line.number("scalar observation")?;
                        line.finish()?;
                        Observation::scalar(y).map_err(|e| ScenarioError::new(no, K::Lexical, e.to_string()))?
                    }
                    _ => {
                        return Err(ScenarioError::new(
                            no,
                            K::Syntax,
                            format!("expected `vector` or `scalar`, found `{}`", kind.text),
                        ))
                    }
                };
                data = Some((obs, no));
            }
            other => {
                return Err(ScenarioError::new(no, K::UnknownDirective, format!("unknown directive `{other}`")));
            }
        }
    }

    let Some((name, _)) = name else {
        return Err(ScenarioError::new(last_line, K::NoScenario, "no scenario declared"));
    };
    let Some((data, data_line)) = data else {
        return Err(ScenarioError::new(last_line, K::Structural, "no data declared"));
    };
    if models.is_empty() {
        return Err(ScenarioError::new(last_line, K::Structural, "no models declared"));
    }

    let mut built = Vec::with_capacity(models.len());
    for draft in models {
        built.push(build_model(draft, &patterns)?);
    }
    let patterns: Vec<NamedPattern> = patterns.into_iter().map(|(p, _)| p).collect();
    check_data_shape(&built, &data, data_line)?;
    Ok(ScenarioSpec {
        name,
        patterns,
        models: built.into_iter().map(|(m, _)| m).collect(),
        data,
    })
}

fn build_model(draft: ModelDraft, patterns: &[(NamedPattern, usize)]) -> PResult<(ScenarioModel, usize)> {
    let lik = draft.likelihood.ok_or_else(|| {
        ScenarioError::new(draft.line, K::Structural, format!("model `{}` has no likelihood", draft.id))
    })?;
    let no = lik.line;
    let structural = |msg: String| ScenarioError::new(no, K::Structural, msg);
    let from_err = |e: Error| match e {
        Error::Structure { reason, id } => structural(format!("model `{id}`: {reason}")),
        other => structural(format!("model `{}`: {other}", draft.id)),
    };
    let noise_sd = lik
        .noise_sd
        .ok_or_else(|| ScenarioError::new(no, K::Syntax, format!("{} likelihood needs `noise_sd`", lik.kind)))?;
    if lik.mean.is_some() && lik.kind != "point" {
        return Err(ScenarioError::new(no, K::Syntax, "`mean` is only valid on point likelihoods"));
    }
    if lik.pattern.is_some() && lik.kind != "signal" {
        return Err(structural(format!("{} likelihood does not take a pattern", lik.kind)));
    }
    if !lik.constraints.is_empty() && lik.kind != "location" {
        return Err(structural(format!("constraints are only allowed on location likelihoods, not {}", lik.kind)));
    }

    let mut pattern_ref = None;
    let likelihood = match lik.kind.as_str() {
        "null" => Likelihood::null(noise_sd).map_err(from_err)?,
        "signal" => {
            let pid = lik
                .pattern
                .clone()
                .ok_or_else(|| ScenarioError::new(no, K::Syntax, "signal likelihood needs `pattern <id>`"))?;
            let values = patterns
                .iter()
                .find(|(p, _)| p.id == pid)
                .map(|(p, _)| p.values.clone())
                .ok_or_else(|| ScenarioError::new(no, K::UnresolvedPattern, format!("pattern `{pid}` is never defined")))?;
            pattern_ref = Some(pid);
            Likelihood::LinearSignal(LinearSignalLikelihood::new(values, noise_sd).map_err(from_err)?)
        }
        "location" => Likelihood::Location(LocationLikelihood::new(noise_sd).map_err(from_err)?),
        "point" => {
            let mean = lik
                .mean
                .ok_or_else(|| ScenarioError::new(no, K::Syntax, "point likelihood needs `mean <float>`"))?;
            Likelihood::PointPrediction(PointPredictionLikelihood::new(mean, noise_sd).map_err(from_err)?)
        }
        _ => unreachable!("likelihood kind checked while parsing"),
    };
    let prior = lik
        .prior
        .map(|(m, s)| GaussianPrior::new(m, s))
        .transpose()
        .map_err(from_err)?;
    let constraints = lik
        .constraints
        .iter()
        .map(|(w, s)| AuxiliaryConstraint::new(*w, *s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(from_err)?;
    let model = CompositeModel::new(draft.id.clone(), draft.weight, likelihood, prior, constraints).map_err(from_err)?;
    // a constrained point-mass prior is well-formed text but cannot be evaluated
    if prior.is_some_and(|p| p.is_point_mass()) && !model.constraints().is_empty() {
        return Err(structural(format!("model `{}`: constraints cannot update a point-mass prior", draft.id)));
    }
    Ok((ScenarioModel { model, pattern_ref }, no))
}

fn check_data_shape(models: &[(ScenarioModel, usize)], data: &Observation, data_line: usize) -> PResult<()> {
    for (entry, line) in models {
        let lik = entry.model.likelihood();
        let fits = match (lik, data) {
            (Likelihood::LinearSignal(l), Observation::Vector(d)) => {
                if l.pattern().len() != d.len() {
                    return Err(ScenarioError::new(
                        *line,
                        K::Structural,
                        format!(
                            "model `{}` uses a {}-epoch pattern but the data on line {data_line} have {} entries",
                            entry.model.id(),
                            l.pattern().len(),
                            d.len()
                        ),
                    ));
                }
                true
            }
            (l, Observation::Vector(_)) => l.takes_vector_data(),
            (l, Observation::Scalar(_)) => !l.takes_vector_data(),
        };
        if !fits {
            return Err(ScenarioError::new(
                *line,
                K::Structural,
                format!(
                    "model `{}` ({} likelihood) cannot score the {} data on line {data_line}",
                    entry.model.id(),
                    lik.kind(),
                    match data {
                        Observation::Vector(_) => "vector",
                        Observation::Scalar(_) => "scalar",
                    }
                ),
            ));
        }
    }
    Ok(())
}

impl ScenarioSpec {
    /// Assembles a scenario in code, applying the same checks as the parser.
    pub fn new(
        name: impl Into<String>,
        patterns: Vec<NamedPattern>,
        models: Vec<ScenarioModel>,
        data: Observation,
    ) -> Result<Self, ScenarioError> {
        let name = name.into();
        let err = |kind, msg: String| ScenarioError::new(0, kind, msg);
        if name.contains(['\n', '\r']) {
            return Err(err(K::Lexical, "scenario name spans lines".into()));
        }
        if models.is_empty() {
            return Err(err(K::Structural, "no models declared".into()));
        }
        let mut ids = HashSet::new();
        for p in &patterns {
            if !is_identifier(&p.id) {
                return Err(err(K::Lexical, format!("`{}` is not a valid pattern id", p.id)));
            }
            if p.values.is_empty() || p.values.iter().any(|v| !v.is_finite()) {
                return Err(err(K::Syntax, format!("pattern `{}` must hold finite values", p.id)));
            }
            if !ids.insert(p.id.as_str()) {
                return Err(err(K::DuplicateId, format!("pattern `{}` defined twice", p.id)));
            }
        }
        let mut model_ids = HashSet::new();
        for entry in &models {
            let id = entry.model.id();
            if !is_identifier(id) {
                return Err(err(K::Lexical, format!("`{id}` is not a valid model id")));
            }
            if !model_ids.insert(id) {
                return Err(err(K::DuplicateId, format!("model `{id}` defined twice")));
            }
            match (entry.model.likelihood(), &entry.pattern_ref) {
                (Likelihood::LinearSignal(l), Some(pid)) => {
                    let p = patterns
                        .iter()
                        .find(|p| &p.id == pid)
                        .ok_or_else(|| err(K::UnresolvedPattern, format!("pattern `{pid}` is never defined")))?;
                    if p.values != l.pattern() {
                        return Err(err(K::Structural, format!("model `{id}` does not carry pattern `{pid}`")));
                    }
                }
                (Likelihood::LinearSignal(_), None) => {
                    return Err(err(K::UnresolvedPattern, format!("signal model `{id}` names no pattern")))
                }
                (_, Some(_)) => {
                    return Err(err(K::Structural, format!("model `{id}` does not take a pattern")));
                }
                _ => {}
            }
            if !entry.model.constraints().is_empty() && !matches!(entry.model.likelihood(), Likelihood::Location(_)) {
                return Err(err(K::Structural, format!("model `{id}`: constraints are only allowed on location likelihoods")));
            }
        }
        let indexed: Vec<(ScenarioModel, usize)> = models.into_iter().map(|m| (m, 0)).collect();
        check_data_shape(&indexed, &data, 0)?;
        Ok(ScenarioSpec {
            name,
            patterns,
            models: indexed.into_iter().map(|(m, _)| m).collect(),
            data,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MERCURY: &str = r#"
# Vulcan versus relativity
scenario "Mercury perihelion"
model H2 weight 1
  likelihood location noise_sd 0.5 prior normal mean 0 sd 20 constraint observed 0 noise_sd 5
model H3 weight 1
  likelihood point mean 43 noise_sd 0.5
data scalar 43
"#;

    fn kind_of(text: &str) -> (ScenarioErrorKind, usize) {
        let e = parse_scenario(text).unwrap_err();
        (e.kind, e.line)
    }

    #[test]
    fn parses_mercury() {
        let s = parse_scenario(MERCURY).unwrap();
        assert_eq!(s.name(), "Mercury perihelion");
        assert_eq!(s.entries().len(), 2);
        assert_eq!(s.models()[0].constraints().len(), 1);
        assert_eq!(s.data(), &Observation::Scalar(43.0));
    }

    #[test]
    fn empty_input() {
        let e = parse_scenario("").unwrap_err();
        assert_eq!(e.kind, K::NoScenario);
        assert!(e.to_string().contains("no scenario declared"));
        assert_eq!(kind_of("# only a comment\n\n").0, K::NoScenario);
    }

    #[test]
    fn unresolved_pattern_names_the_line() {
        let text = "scenario \"x\"\nmodel H1 weight 1\n  likelihood signal pattern gpat noise_sd 1 prior normal mean 0 sd 1\ndata vector 1 2\n";
        let e = parse_scenario(text).unwrap_err();
        assert_eq!((e.kind, e.line), (K::UnresolvedPattern, 3));
        assert!(e.message.contains("gpat"));
    }

    #[test]
    fn distinct_error_kinds() {
        let base = "scenario \"x\"\n";
        assert_eq!(kind_of(&format!("{base}frobnicate 1\n")), (K::UnknownDirective, 2));
        assert_eq!(kind_of(&format!("{base}model A weight 1x\n")), (K::Lexical, 2));
        assert_eq!(kind_of(&format!("{base}model A weight nan\n")), (K::Lexical, 2));
        assert_eq!(kind_of(&format!("{base}model A weight 1e999\n")), (K::Lexical, 2));
        assert_eq!(kind_of("scenario \"x\ndata scalar 1\n"), (K::Lexical, 1));
        assert_eq!(
            kind_of(&format!(
                "{base}model A weight 1\n likelihood point mean 1 noise_sd 1\nmodel A weight 1\n likelihood point mean 1 noise_sd 1\ndata scalar 1\n"
            )),
            (K::DuplicateId, 4)
        );
        assert_eq!(
            kind_of(&format!("{base}pattern g 1\npattern g 2\n")),
            (K::DuplicateId, 3)
        );
        assert_eq!(
            kind_of(&format!(
                "{base}model A weight 1\n likelihood point mean 43 noise_sd 0.5 prior normal mean 0 sd 1\ndata scalar 1\n"
            )),
            (K::Structural, 3)
        );
        assert_eq!(
            kind_of(&format!("{base}model A weight 1\n likelihood location noise_sd 1\ndata scalar 1\n")),
            (K::Structural, 3)
        );
        assert_eq!(
            kind_of(&format!("{base}model A weight 1\n likelihood null noise_sd 1\ndata scalar 1\n")),
            (K::Structural, 3)
        );
        assert_eq!(kind_of(&format!("{base}model A weight 1\ndata scalar 1\n")), (K::Structural, 2));
        assert_eq!(kind_of(&format!("{base}model A weight 1\n likelihood point mean 1 noise_sd 1\n")), (K::Structural, 3));
        assert_eq!(kind_of(&format!("{base}model A weight 0\n likelihood point mean 1 noise_sd 1\ndata scalar 1\n")), (K::Structural, 3));
        assert_eq!(kind_of("format 2\nscenario \"x\"\n"), (K::UnsupportedFormat, 1));
        assert_eq!(kind_of(&format!("{base}model A weight 1\n likelihood point mean 1\ndata scalar 1\n")), (K::Syntax, 3));
        assert_eq!(kind_of(&format!("{base}model A weight 1\n likelihood spline\n")), (K::Syntax, 3));
        assert_eq!(kind_of(&format!("{base}likelihood null noise_sd 1\n")), (K::Structural, 2));
        assert_eq!(kind_of("Scenario \"x\"\n"), (K::UnknownDirective, 1));
    }

    #[test]
    fn pattern_length_must_match_data() {
        let text = "scenario \"x\"\npattern g 1 1 1\nmodel H1 weight 1\n  likelihood signal pattern g noise_sd 1 prior normal mean 0 sd 1\ndata vector 1 2\n";
        assert_eq!(kind_of(text), (K::Structural, 4));
    }

    #[test]
    fn constraint_on_signal_is_structural() {
        let text = "scenario \"x\"\npattern g 1 1\nmodel H1 weight 1\n  likelihood signal pattern g noise_sd 1 prior normal mean 0 sd 1 constraint observed 0 noise_sd 1\ndata vector 1 2\n";
        assert_eq!(kind_of(text), (K::Structural, 4));
    }

    #[test]
    fn decimal_grammar() {
        for ok in ["1", "-1", "+2.5", ".5", "5.", "1e3", "1.5E-7", "-0"] {
            assert!(is_decimal(ok), "{ok}");
        }
        for bad in ["", ".", "e3", "1e", "0x10", "inf", "NaN", "1,5", "--1", "1e+"] {
            assert!(!is_decimal(bad), "{bad}");
        }
    }

    #[test]
    fn comments_and_quotes() {
        let text = "scenario \"a # not a comment\" # a comment\nmodel A weight 1\n likelihood point mean 1 noise_sd 1\ndata scalar 1 # trailing\n";
        let s = parse_scenario(text).unwrap();
        assert_eq!(s.name(), "a # not a comment");
    }
}

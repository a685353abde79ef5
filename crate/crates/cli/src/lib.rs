//! Command-line front end: case studies, scenario comparison and the
//! quadrature verification suite.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use evidence_core::cases::{
    default_pattern, demo_pattern, generate_uranus_residuals, run_mercury_case, run_neptune_case, MercuryParams,
};
use evidence_core::evidence::{LogBase, SignalDataset, DEFAULT_EPSILON};
use evidence_core::numerics::{format_sig, render_linear};
use evidence_core::report::{serialize_report, CaseReport};
use evidence_core::scenario::{evaluate_scenario, parse_scenario};
use evidence_core::verify::{run_oracle_suite, VerifySummary, DEFAULT_INSTANCES, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const SIG_DIGITS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Base {
    #[value(name = "e")]
    E,
    #[value(name = "10")]
    Ten,
}

impl From<Base> for LogBase {
    fn from(b: Base) -> Self {
        match b {
            Base::E => LogBase::E,
            Base::Ten => LogBase::Ten,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "evidence", version, about = "Marginal likelihoods, Bayes factors and model elimination")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "table")]
    pub format: OutputFormat,

    /// Base of displayed log weights.
    #[arg(long = "log-base", global = true, value_enum, default_value = "e")]
    pub log_base: Base,

    /// Posterior below which a model is labelled eliminated.
    #[arg(long, global = true, default_value_t = DEFAULT_EPSILON, allow_negative_numbers = true)]
    pub epsilon: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mercury's perihelion: extra planet against relativity.
    Mercury(MercuryArgs),
    /// Uranus residuals: noise against a perturbing planet.
    Neptune(NeptuneArgs),
    /// Evaluate a scenario file.
    Compare(CompareArgs),
    /// Check closed-form evidences against quadrature on random instances.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct MercuryArgs {
    /// Observed anomalous advance (arcsec/century).
    #[arg(long, default_value_t = 43.0, allow_negative_numbers = true)]
    pub y: f64,
    /// Measurement sd.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub sigma: f64,
    /// Prior sd of the extra planet's effect.
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    pub tau: f64,
    /// Null-search summary.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub w: f64,
    /// Sd of the null-search summary.
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub sigma2: f64,
}

#[derive(Debug, Args)]
pub struct NeptuneArgs {
    /// Worked example: four unit epochs, noiseless residuals of 2.
    #[arg(long, conflicts_with = "pattern")]
    pub demo: bool,
    /// File of pattern values (whitespace or comma separated, `#` comments).
    #[arg(long)]
    pub pattern: Option<PathBuf>,
    /// True amplitude used to synthesize residuals.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub amplitude: f64,
    /// Noise sd.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub sigma: f64,
    /// Amplitude prior sd (0 collapses the signal model onto the null).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub tau: f64,
    /// Seed for the synthetic noise.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Scenario file.
    pub file: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Largest acceptable deviation in nats.
    #[arg(long = "rel-tol", default_value_t = 1e-8, allow_negative_numbers = true)]
    pub rel_tol: f64,
    /// Seed for the random instances.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Instances per evidence form.
    #[arg(long, default_value_t = DEFAULT_INSTANCES)]
    pub instances: usize,
}

/// Failure carrying its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn evaluation(err: evidence_core::Error) -> Failure {
    Failure {
        code: EXIT_FAILURE,
        message: err.to_string(),
    }
}

fn positive(flag: &str, v: f64) -> Result<(), Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(usage(format!("--{flag} must be positive and finite, got {v}")))
    }
}

fn nonnegative(flag: &str, v: f64) -> Result<(), Failure> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(usage(format!("--{flag} must be nonnegative and finite, got {v}")))
    }
}

fn finite(flag: &str, v: f64) -> Result<(), Failure> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("--{flag} must be finite, got {v}")))
    }
}

/// Parses argv, runs the command and writes to `out`/`err`. Returns the
/// process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let _ = write!(out, "{text}");
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Runs a parsed command, returning its output and exit status.
pub fn execute(cli: &Cli) -> Result<(String, i32), Failure> {
    if !(cli.epsilon > 0.0 && cli.epsilon < 1.0) {
        return Err(usage(format!("--epsilon must lie in (0, 1), got {}", cli.epsilon)));
    }
    let base = LogBase::from(cli.log_base);
    match &cli.command {
        Command::Mercury(a) => {
            let report = cmd_mercury(a)?;
            Ok((render(&report, cli.format, base), EXIT_OK))
        }
        Command::Neptune(a) => {
            let report = cmd_neptune(a)?;
            Ok((render(&report, cli.format, base), EXIT_OK))
        }
        Command::Compare(a) => {
            let report = cmd_compare(&a.file, cli.epsilon)?;
            Ok((render(&report, cli.format, base), EXIT_OK))
        }
        Command::Verify(a) => {
            let summary = cmd_verify(a)?;
            let text = match cli.format {
                OutputFormat::Json => summary.to_json(),
                OutputFormat::Table => verify_table(&summary),
            };
            Ok((text, if summary.passed() { EXIT_OK } else { EXIT_FAILURE }))
        }
    }
}

pub fn cmd_mercury(a: &MercuryArgs) -> Result<CaseReport, Failure> {
    finite("y", a.y)?;
    positive("sigma", a.sigma)?;
    positive("tau", a.tau)?;
    finite("w", a.w)?;
    positive("sigma2", a.sigma2)?;
    let params = MercuryParams {
        y: a.y,
        sigma: a.sigma,
        tau: a.tau,
        w: a.w,
        sigma2: a.sigma2,
    };
    run_mercury_case(&params).map_err(evaluation)
}

/// Reads pattern values: decimals separated by whitespace or commas,
/// `#` to end of line is ignored.
pub fn read_pattern(path: &Path) -> Result<Vec<f64>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        for tok in body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let v: f64 = tok
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| usage(format!("{}:{}: `{tok}` is not a finite number", path.display(), i + 1)))?;
            values.push(v);
        }
    }
    if values.is_empty() {
        return Err(usage(format!("{}: no pattern values", path.display())));
    }
    if values.iter().all(|&v| v == 0.0) {
        return Err(usage(format!("{}: pattern is all zeros", path.display())));
    }
    Ok(values)
}

pub fn cmd_neptune(a: &NeptuneArgs) -> Result<CaseReport, Failure> {
    finite("amplitude", a.amplitude)?;
    positive("sigma", a.sigma)?;
    nonnegative("tau", a.tau)?;
    let (pattern, data) = if a.demo {
        let g = demo_pattern();
        let y = g.iter().map(|gi| a.amplitude * gi).collect();
        (g, SignalDataset::new(y).map_err(evaluation)?)
    } else {
        let g = match &a.pattern {
            Some(path) => read_pattern(path)?,
            None => default_pattern(),
        };
        let data = generate_uranus_residuals(&g, a.amplitude, a.sigma, a.seed).map_err(evaluation)?;
        (g, data)
    };
    run_neptune_case(&pattern, &data, a.sigma, a.tau).map_err(evaluation)
}

pub fn cmd_compare(file: &Path, epsilon: f64) -> Result<CaseReport, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| usage(format!("cannot read {}: {e}", file.display())))?;
    let spec = parse_scenario(&text).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    evaluate_scenario(&spec, epsilon).map_err(evaluation)
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<VerifySummary, Failure> {
    if !(a.rel_tol > 0.0 && a.rel_tol <= 0.1) {
        return Err(usage(format!("--rel-tol must lie in (0, 0.1], got {}", a.rel_tol)));
    }
    if a.instances == 0 {
        return Err(usage("--instances must be at least 1"));
    }
    run_oracle_suite(a.seed, a.instances, a.rel_tol).map_err(evaluation)
}

pub fn render(report: &CaseReport, format: OutputFormat, base: LogBase) -> String {
    match format {
        OutputFormat::Json => serialize_report(report),
        OutputFormat::Table => report_table(report, base),
    }
}

fn sig(x: f64) -> String {
    if x.is_finite() {
        format_sig(x, SIG_DIGITS)
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn base_label(base: LogBase) -> &'static str {
    match base {
        LogBase::E => "ln",
        LogBase::Ten => "log10",
    }
}

fn in_base(nats: f64, base: LogBase) -> f64 {
    match base {
        LogBase::E => nats,
        LogBase::Ten => nats / std::f64::consts::LN_10,
    }
}

/// Left-aligned columns separated by two spaces.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::from(" ");
        for (c, cell) in row.iter().enumerate() {
            line.push(' ');
            line.push_str(cell);
            if c + 1 < row.len() {
                line.push_str(&" ".repeat(widths[c] - cell.chars().count() + 1));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn row(cells: &[&str]) -> Vec<String> {
    cells.iter().map(|s| s.to_string()).collect()
}

pub fn report_table(report: &CaseReport, base: LogBase) -> String {
    let lb = base_label(base);
    let mut out = format!("{}\n", report.title);

    if !report.quantities.is_empty() {
        out.push_str("\nquantities\n");
        let mut rows = vec![row(&["key", "value", "units", "linear", "note"])];
        for q in &report.quantities {
            let (value, units) = if q.log_domain {
                (sig(in_base(q.value, base)), lb.to_string())
            } else {
                (sig(q.value), q.units.clone())
            };
            rows.push(vec![q.key.clone(), value, units, q.linear().unwrap_or_default(), q.note.clone()]);
        }
        out.push_str(&table(&rows));
    }

    out.push_str("\nevidence\n");
    let mut rows = vec![row(&["model", &format!("{lb} p(D|M)"), "p(D|M)"])];
    for e in &report.evidence {
        rows.push(vec![e.model_id.clone(), sig(in_base(e.log_value.ln(), base)), e.log_value.render_linear()]);
    }
    out.push_str(&table(&rows));

    if !report.bayes_factors.is_empty() {
        out.push_str("\nbayes factors\n");
        let mut rows = vec![row(&["numerator", "denominator", &format!("{lb} B"), "B"])];
        for b in &report.bayes_factors {
            rows.push(vec![
                b.numerator.clone(),
                b.denominator.clone(),
                sig(b.weight.in_base(base)),
                b.weight.linear(),
            ]);
        }
        out.push_str(&table(&rows));
    }

    out.push_str("\nposterior\n");
    let mut rows = vec![row(&["model", "probability", &format!("{lb} probability")])];
    for (id, p, lp) in report.posterior.entries() {
        let shown = if p == 0.0 || p >= 1e-4 { sig(p) } else { render_linear(lp.ln()) };
        rows.push(vec![id.to_string(), shown, sig(in_base(lp.ln(), base))]);
    }
    out.push_str(&table(&rows));

    if let Some(el) = &report.elimination {
        out.push_str(&format!("\nelimination (epsilon {})\n", sig(el.epsilon)));
        let mut rows = vec![row(&["model", "status", "final probability"])];
        for m in &el.models {
            let status = match m.eliminated_at {
                Some(t) => format!("eliminated at step {t}"),
                None => "retained".into(),
            };
            rows.push(vec![m.model_id.clone(), status, sig(m.final_probability)]);
        }
        out.push_str(&table(&rows));
        if el.crisis_steps.is_empty() {
            out.push_str("  no crisis steps\n");
        } else {
            let steps: Vec<String> = el.crisis_steps.iter().map(|s| s.to_string()).collect();
            out.push_str(&format!("  crisis steps: {}\n", steps.join(", ")));
        }
    }
    out
}

pub fn verify_table(s: &VerifySummary) -> String {
    let mut out = format!(
        "oracle verification (seed {}, {} checks)\n  max deviation  {} nats\n  tolerance      {}\n",
        s.seed,
        s.checks.len(),
        sig(s.max_deviation()),
        sig(s.rel_tol)
    );
    let failures: Vec<_> = s.failures().collect();
    if failures.is_empty() {
        out.push_str("  all checks within tolerance\n");
        return out;
    }
    out.push_str(&format!("  {} checks exceed tolerance\n\n", failures.len()));
    let mut rows = vec![row(&["#", "form", "n", "sigma", "tau", "constraints", "analytic", "quadrature", "deviation"])];
    for c in failures {
        rows.push(vec![
            c.index.to_string(),
            c.kind.to_string(),
            c.n.to_string(),
            sig(c.noise_sd),
            sig(c.prior_sd),
            c.constraints.to_string(),
            format!("{:.15e}", c.analytic),
            format!("{:.15e}", c.quadrature),
            sig(c.deviation),
        ]);
    }
    out.push_str(&table(&rows));
    out
}

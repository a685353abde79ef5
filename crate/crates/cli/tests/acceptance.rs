//! Acceptance suite. Runs every criterion at its stated tolerance and
//! prints one PASS/FAIL line each; exits nonzero if any fails.
//!
//! `cargo test -p evidence-cli --test acceptance`

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use evidence_core::cases::{
    demo_pattern, gr_precession_arcsec_per_century, run_mercury_case, run_neptune_case, GaussianStream, MercuryParams,
    OrbitSpec,
};
use evidence_core::evidence::{
    log_bayes_factor, log_bayes_factor_signal, log_bayes_factor_signal_general, log_evidence,
    model_posterior, sequential_log_evidence, DataFingerprint, LogEvidence, Observation, SignalDataset,
};
use evidence_core::oracle;
use evidence_core::scenario::{parse_scenario, serialize_scenario, NamedPattern, ScenarioModel, ScenarioSpec};
use evidence_core::verify::random_signal_instance;
use evidence_core::{AuxiliaryConstraint, CompositeModel, GaussianPrior, LogValue};
use serde_json::Value;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn repo(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn cli(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_evidence"))
        .args(args)
        .output()
        .map_err(|e| format!("spawn: {e}"))?;
    Ok((o.status.code().unwrap_or(-1), o.stdout))
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let (code, out) = cli(&all)?;
    ensure(code == 0, format!("{args:?} exited {code}"))?;
    serde_json::from_slice(&out).map_err(|e| format!("{args:?}: bad JSON: {e}"))
}

fn mercury_reproduction() -> Check {
    let r = run_mercury_case(&MercuryParams::default()).map_err(|e| e.to_string())?;
    let sd = r.value("predictive_sd_prior");
    ensure((sd - 20.00625).abs() <= 1e-4, format!("predictive sd {sd}"))?;
    let p2 = r.value("p_y_h2_prior").exp();
    ensure((p2 / 1.98e-3 - 1.0).abs() <= 0.10, format!("p(y|H2) {p2:e}"))?;
    let tp = r.value("tau_post");
    ensure((tp - 4.8507).abs() <= 1e-3, format!("tau_post {tp}"))?;
    let sdc = r.value("predictive_sd_constrained");
    ensure((sdc - 4.876).abs() <= 1e-2, format!("constrained sd {sdc}"))?;
    let p2w = r.value("p_y_h2_w").exp();
    ensure((0.5..=2.0).contains(&(p2w / 1.3e-18)), format!("p(y|H2,w) {p2w:e}"))?;
    let p3 = r.value("p_y_h3_ideal").exp();
    ensure((p3 - 0.7979).abs() <= 1e-3, format!("p(y|H3) {p3}"))?;
    let b32_bans = r.value("log_b32") / std::f64::consts::LN_10;
    ensure((17.0..=18.5).contains(&b32_bans), format!("log10 B32 {b32_bans}"))?;
    Ok(format!(
        "sd {sd:.5}, p(y|H2) {p2:.3e}, tau_post {tp:.4}, sd' {sdc:.4}, p(y|H2,w) {p2w:.3e}, p(y|H3) {p3:.4}, B32 {}",
        r.quantity("log_b32").and_then(|q| q.linear()).unwrap_or_default()
    ))
}

fn gr_precession() -> Check {
    let mu = gr_precession_arcsec_per_century(&OrbitSpec::mercury());
    ensure((mu - 42.98).abs() <= 0.1, format!("mu_GR {mu}"))?;
    Ok(format!("mu_GR = {mu:.4} arcsec/century"))
}

fn neptune_identity() -> Check {
    let mut rng = GaussianStream::new(3);
    let mut worst_forms = 0.0f64;
    for _ in 0..10_000 {
        let n = 1 + (rng.uniform() * 16.0) as usize % 16;
        let sigma = 10f64.powf(-2.0 + 4.0 * rng.uniform());
        let tau = 10f64.powf(-2.0 + 4.0 * rng.uniform());
        let g: Vec<f64> = (0..n).map(|_| rng.next_standard()).collect();
        let y: Vec<f64> = (0..n).map(|_| 5.0 * rng.next_standard()).collect();
        let data = SignalDataset::new(y).map_err(|e| e.to_string())?;
        let a = log_bayes_factor_signal(&data, &g, sigma, tau).map_err(|e| e.to_string())?.ln();
        let b = log_bayes_factor_signal_general(&data, &g, sigma, tau).map_err(|e| e.to_string())?.ln();
        worst_forms = worst_forms.max((a - b).abs() / a.abs().max(1.0));
    }
    ensure(worst_forms <= 1e-11, format!("compact vs general worst relative gap {worst_forms:e}"))?;

    let mut worst_quad = 0.0f64;
    let mut worst_abs = 0.0f64;
    let mut rng = GaussianStream::new(4);
    for _ in 0..100 {
        let (g, data, sigma, tau) = random_signal_instance(&mut rng);
        let prior = GaussianPrior::new(0.0, tau).map_err(|e| e.to_string())?;
        let quad = oracle::signal_log_bayes_factor(&data, &g, sigma, &prior, 1e-10).map_err(|e| e.to_string())?.ln();
        let a = log_bayes_factor_signal(&data, &g, sigma, tau).map_err(|e| e.to_string())?.ln();
        let b = log_bayes_factor_signal_general(&data, &g, sigma, tau).map_err(|e| e.to_string())?.ln();
        let gap = (a - quad).abs().max((b - quad).abs());
        worst_abs = worst_abs.max(gap);
        // same log-domain relative convention as the compact/general check
        worst_quad = worst_quad.max(gap / quad.abs().max(1.0));
    }
    ensure(worst_quad <= 1e-8, format!("forms vs quadrature worst relative gap {worst_quad:e}"))?;
    Ok(format!(
        "compact/general worst {worst_forms:.2e} (10^4 draws), vs quadrature worst {worst_quad:.2e} relative, \
         {worst_abs:.2e} nats absolute (10^2 draws)"
    ))
}

fn worked_neptune() -> Check {
    let data = SignalDataset::new(vec![2.0; 4]).map_err(|e| e.to_string())?;
    let r = run_neptune_case(&demo_pattern(), &data, 1.0, 1.0).map_err(|e| e.to_string())?;
    let (lambda, z2, b) = (r.value("lambda"), r.value("z_squared"), r.value("log_b10_compact"));
    ensure(lambda == 4.0, format!("lambda {lambda}"))?;
    ensure(z2 == 16.0, format!("z^2 {z2}"))?;
    ensure((b - 5.59528).abs() <= 1e-4, format!("ln B10 {b}"))?;
    Ok(format!("lambda {lambda}, z^2 {z2}, ln B10 {b:.6}"))
}

fn chain_rule() -> Check {
    let mut rng = GaussianStream::new(5);
    let mut worst = 0.0f64;
    for trial in 0..1000 {
        let (g, data, sigma, tau) = random_signal_instance(&mut rng);
        if data.len() < 2 {
            // a split needs two nonempty halves; draw a longer one
            continue;
        }
        let mid = 1 + ((rng.uniform() * (data.len() - 1) as f64) as usize).min(data.len() - 2);
        let (d1, d2) = data.split_at(mid).map_err(|e| e.to_string())?;
        let prior = GaussianPrior::new(0.0, tau).map_err(|e| e.to_string())?;
        let model = CompositeModel::signal("H1", 1.0, g, sigma, prior).map_err(|e| e.to_string())?;
        let joint = log_evidence(&model, &Observation::Vector(data)).map_err(|e| e.to_string())?;
        let chain = sequential_log_evidence(&model, &[d1.into(), d2.into()]).map_err(|e| e.to_string())?;
        let last = chain.last().expect("two steps");
        ensure(last.fingerprint == joint.fingerprint, format!("trial {trial}: fingerprints differ"))?;
        worst = worst.max((joint.log_value.ln() - last.log_value.ln()).abs());
    }
    ensure(worst <= 1e-10, format!("worst chain-rule gap {worst:e}"))?;
    Ok(format!("worst |joint - chained| = {worst:.2e} nats over 10^3 trials"))
}

fn posterior_properties() -> Check {
    let fp = DataFingerprint::of(&Observation::scalar(0.0).map_err(|e| e.to_string())?);
    let ev = |id: &str, l: f64| LogEvidence {
        model_id: id.into(),
        log_value: LogValue::new(l).expect("finite"),
        fingerprint: fp,
    };
    let mut rng = GaussianStream::new(6);
    let (mut norm, mut fact, mut resc) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..2000 {
        let k = 2 + (rng.uniform() * 4.0) as usize % 4;
        let weights: Vec<f64> = (0..k).map(|_| 10f64.powf(-3.0 + 6.0 * rng.uniform())).collect();
        let gap = 1e3 * rng.uniform();
        let logs: Vec<f64> = (0..k).map(|i| if i == 0 { 0.0 } else { -gap * rng.uniform() }).collect();
        let models: Vec<CompositeModel> = weights
            .iter()
            .enumerate()
            .map(|(i, w)| CompositeModel::point(format!("M{i}"), *w, 0.0, 1.0).expect("valid"))
            .collect();
        let evs: Vec<LogEvidence> = logs.iter().enumerate().map(|(i, l)| ev(&format!("M{i}"), *l)).collect();
        let post = model_posterior(&models, &evs).map_err(|e| e.to_string())?;
        norm = norm.max((post.probabilities().iter().sum::<f64>() - 1.0).abs());

        let lp = post.log_probabilities();
        for j in 1..k {
            let odds = lp[0].ln() - lp[j].ln();
            let bf = log_bayes_factor(&evs[0], &evs[j]).map_err(|e| e.to_string())?.nats();
            let expected = (weights[0] / weights[j]).ln() + bf;
            fact = fact.max((odds - expected).abs() / expected.abs().max(1.0));
        }

        let c = 10f64.powf(-6.0 + 12.0 * rng.uniform());
        let scaled: Vec<CompositeModel> = models.iter().map(|m| m.with_prior_weight(m.prior_weight() * c).expect("valid")).collect();
        let post2 = model_posterior(&scaled, &evs).map_err(|e| e.to_string())?;
        ensure(post.argmax() == post2.argmax(), "argmax moved under rescaling")?;
        for (a, b) in post.probabilities().iter().zip(post2.probabilities()) {
            resc = resc.max((a - b).abs());
        }
    }
    ensure(norm <= 1e-12, format!("normalization error {norm:e}"))?;
    ensure(fact <= 1e-12, format!("factorization error {fact:e}"))?;
    ensure(resc <= 1e-12, format!("rescaling changed probabilities by {resc:e}"))?;
    Ok(format!("normalization {norm:.1e}, factorization {fact:.1e}, rescaling {resc:.1e} (gaps to 1000 nats)"))
}

fn occam_penalty() -> Check {
    let g = [1.0, -1.0, 1.0, -1.0];
    let data = SignalDataset::new(vec![0.8; 4]).map_err(|e| e.to_string())?;
    let at_zero = log_bayes_factor_signal(&data, &g, 1.0, 0.0).map_err(|e| e.to_string())?.ln();
    ensure(at_zero == 0.0, format!("ln B10 at tau = 0 is {at_zero}"))?;
    let mut last = at_zero;
    let steps = 121;
    for i in 0..steps {
        let tau = 10f64.powf(-3.0 + 6.0 * i as f64 / (steps - 1) as f64);
        let b = log_bayes_factor_signal(&data, &g, 1.0, tau).map_err(|e| e.to_string())?.ln();
        ensure(b < last, format!("not decreasing at tau {tau:e}: {b} >= {last}"))?;
        last = b;
    }
    Ok(format!("strictly decreasing over {steps} taus in [1e-3, 1e3], ln B10 = 0 at tau = 0, {last:.4} at tau = 1e3"))
}

fn random_scenario(rng: &mut GaussianStream, index: usize) -> ScenarioSpec {
    let pos = |rng: &mut GaussianStream| {
        let x = 10f64.powf(-4.0 + 8.0 * rng.uniform());
        if rng.uniform() < 0.3 {
            (x * 1000.0).round().max(1.0) / 1000.0
        } else {
            x
        }
    };
    let real = |rng: &mut GaussianStream| {
        let u = rng.uniform();
        if u < 0.2 {
            0.0
        } else if u < 0.4 {
            (rng.next_standard() * 100.0).round()
        } else {
            rng.next_standard() * 10f64.powf(-6.0 + 24.0 * rng.uniform())
        }
    };
    let name: String = (0..(rng.uniform() * 20.0) as usize)
        .map(|_| char::from(b' ' + (rng.uniform() * 94.999) as u8))
        .collect();
    let models_n = 1 + (rng.uniform() * 4.0) as usize % 4;
    if rng.uniform() < 0.5 {
        let n = 1 + (rng.uniform() * 8.0) as usize % 8;
        let patterns: Vec<NamedPattern> = (0..1 + (rng.uniform() * 3.0) as usize % 3)
            .map(|i| {
                let mut values: Vec<f64> = (0..n).map(|_| real(rng)).collect();
                values[0] = 1.0 + values[0].abs();
                NamedPattern { id: format!("g{i}"), values }
            })
            .collect();
        let models = (0..models_n)
            .map(|i| {
                if rng.uniform() < 0.3 {
                    ScenarioModel { model: CompositeModel::null(format!("H0_{i}"), pos(rng), pos(rng)).expect("valid"), pattern_ref: None }
                } else {
                    let p = &patterns[(rng.uniform() * patterns.len() as f64) as usize % patterns.len()];
                    let prior = GaussianPrior::new(real(rng), pos(rng)).expect("valid");
                    let model = CompositeModel::signal(format!("H1.{i}"), pos(rng), p.values.clone(), pos(rng), prior).expect("valid");
                    ScenarioModel { model, pattern_ref: Some(p.id.clone()) }
                }
            })
            .collect();
        let data = Observation::vector((0..n).map(|_| real(rng)).collect()).expect("finite");
        ScenarioSpec::new(name, patterns, models, data).unwrap_or_else(|e| panic!("scenario {index}: {e}"))
    } else {
        let models = (0..models_n)
            .map(|i| {
                let model = if rng.uniform() < 0.5 {
                    let cs = (0..(rng.uniform() * 3.0) as usize % 3)
                        .map(|_| AuxiliaryConstraint::new(real(rng), pos(rng)).expect("valid"))
                        .collect();
                    CompositeModel::location(format!("loc-{i}"), pos(rng), pos(rng), GaussianPrior::new(real(rng), pos(rng)).expect("valid"), cs)
                } else {
                    CompositeModel::point(format!("pt+{i}"), pos(rng), real(rng), pos(rng))
                };
                ScenarioModel { model: model.expect("valid"), pattern_ref: None }
            })
            .collect();
        let data = Observation::scalar(real(rng)).expect("finite");
        ScenarioSpec::new(name, vec![], models, data).unwrap_or_else(|e| panic!("scenario {index}: {e}"))
    }
}

fn format_round_trip() -> Check {
    let mut rng = GaussianStream::new(8);
    for i in 0..100 {
        let spec = random_scenario(&mut rng, i);
        let first = serialize_scenario(&spec);
        let parsed = parse_scenario(&first).map_err(|e| format!("scenario {i}: {e}\n{first}"))?;
        ensure(parsed == spec, format!("scenario {i}: parsed spec differs\n{first}"))?;
        let second = serialize_scenario(&parsed);
        ensure(first == second, format!("scenario {i}: second pass differs"))?;
    }

    let scn = repo("scenarios/mercury.scn");
    let compare = cli_json(&["compare", scn.to_str().expect("utf-8 path")])?;
    let mercury = cli_json(&["mercury"])?;
    let find = |doc: &Value, section: &str, key: &str, id: &str| -> Result<f64, String> {
        doc[section]
            .as_array()
            .and_then(|rows| rows.iter().find(|r| r["model_id"] == id))
            .and_then(|r| r[key].as_f64())
            .ok_or_else(|| format!("{section}/{id}/{key} missing"))
    };
    let bf = |doc: &Value| -> Result<f64, String> {
        doc["bayes_factors"]
            .as_array()
            .and_then(|rows| rows.iter().find(|r| r["numerator"] == "H3" && r["denominator"] == "H2"))
            .and_then(|r| r["nats"].as_f64())
            .ok_or_else(|| "H3/H2 row missing".to_string())
    };
    let mut worst = 0.0f64;
    let mut pairs = vec![(bf(&compare)?, bf(&mercury)?)];
    for id in ["H2", "H3"] {
        pairs.push((find(&compare, "evidence", "log_evidence_nats", id)?, find(&mercury, "evidence", "log_evidence_nats", id)?));
        pairs.push((find(&compare, "posterior", "log_probability", id)?, find(&mercury, "posterior", "log_probability", id)?));
    }
    for (a, b) in pairs {
        worst = worst.max((a - b).abs() / b.abs().max(1.0));
    }
    ensure(worst <= 1e-12, format!("compare vs mercury worst gap {worst:e}"))?;
    Ok(format!("100 random scenarios are fixed points; compare vs mercury worst log gap {worst:.1e}"))
}

fn determinism_and_schema() -> Check {
    for fmt in ["table", "json"] {
        let a = cli(&["neptune", "--seed", "7", "--format", fmt])?;
        let b = cli(&["neptune", "--seed", "7", "--format", fmt])?;
        ensure(a.0 == 0 && a == b, format!("neptune --seed 7 --format {fmt} differs between runs"))?;
    }
    let schema_text = std::fs::read_to_string(repo("docs/report-schema.json")).map_err(|e| e.to_string())?;
    let schema: Value = serde_json::from_str(&schema_text).map_err(|e| e.to_string())?;
    let validator = jsonschema::validator_for(&schema).map_err(|e| e.to_string())?;
    let scn = |name: &str| repo(&format!("scenarios/{name}")).to_string_lossy().into_owned();
    let runs: Vec<Vec<String>> = vec![
        vec!["mercury".into()],
        vec!["mercury".into(), "--tau".into(), "1e-6".into()],
        vec!["neptune".into(), "--demo".into()],
        vec!["neptune".into(), "--demo".into(), "--tau".into(), "0".into()],
        vec!["neptune".into(), "--seed".into(), "7".into()],
        vec!["compare".into(), scn("mercury.scn")],
        vec!["compare".into(), scn("signal-strength.scn")],
        vec!["compare".into(), scn("single-model.scn")],
        vec!["verify".into()],
    ];
    for args in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let doc = cli_json(&args)?;
        let first = validator.iter_errors(&doc).next().map(|e| e.to_string());
        if let Some(err) = first {
            return Err(format!("{args:?}: schema violation: {err}"));
        }
    }
    Ok(format!("neptune --seed 7 byte-identical twice; {} JSON outputs validate", runs.len()))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 9] = [
        ("Mercury reproduction", mercury_reproduction),
        ("GR precession", gr_precession),
        ("Neptune formula identity", neptune_identity),
        ("worked Neptune value", worked_neptune),
        ("chain rule of evidence", chain_rule),
        ("posterior properties", posterior_properties),
        ("Occam penalty", occam_penalty),
        ("format round-trip", format_round_trip),
        ("determinism and schema", determinism_and_schema),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({detail}) [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command as Process;
use std::time::{Duration, Instant};

use clap::Parser;
use eulerseries::exactnum::Monoid;
use eulerseries::trajcalc::zeta;
use eulerseries::RatFn;
use eulerseries_cli::document::{build_model, parse_document};
use eulerseries_cli::suites::{self, run_suite, SuiteReport, DEFAULT_SEED};
use eulerseries_cli::{run_with_threads, Cli, Outcome};
use serde_json::{json, Value};

fn doc(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../documents").join(name);
    path.to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> Cli {
    Cli::parse_from(std::iter::once("eulerseries").chain(args.iter().copied()))
}

fn run_machine(args: &[&str], threads: Option<usize>) -> Outcome {
    let mut full = vec!["--machine"];
    full.extend_from_slice(args);
    run_with_threads(&cli(&full), threads)
}

struct Verdict {
    ok: bool,
    detail: String,
}

impl Verdict {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Verdict { ok, detail: detail.into() }
    }
}

fn suite(name: &str) -> (SuiteReport, Verdict) {
    let r = run_suite(name, DEFAULT_SEED).expect("known suite");
    let mut detail = format!("{}: {} cases, {} failed", r.name, r.cases, r.failed);
    if let Some(first) = r.failures.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    let ok = r.pass();
    (r, Verdict::new(ok, detail))
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Verdict) -> (Verdict, Duration) {
    let start = Instant::now();
    let mut v = f();
    let took = start.elapsed();
    if let Some(limit) = limit {
        if took > limit {
            v.ok = false;
            v.detail.push_str(&format!("; took {took:.2?}, limit {limit:?}"));
        }
    }
    (v, took)
}

fn all_ones(v: &Value) -> bool {
    v == &json!([["1", "1"], ["1", "1"]])
}

fn criterion_1() -> Verdict {
    let (_, v) = suite("p1-example");
    if !v.ok {
        return v;
    }
    let out = run_machine(&["traj", &doc("p1_vector_field.toml")], Some(1));
    if out.code != 0 {
        return Verdict::new(false, format!("traj exited {}: {}", out.code, out.stderr.trim()));
    }
    let j: Value = serde_json::from_str(&out.stdout).expect("json output");
    let d = &j["differentials"][0];
    let ok = all_ones(&d["d"]) && d["d_squared"] == json!([["2", "2"], ["2", "2"]]) && d["relation"]["holds"] == json!(true);
    Verdict::new(ok, format!("d1 = {}, d1^2 = {}, relation holds = {}", d["d"], d["d_squared"], d["relation"]["holds"]))
}

fn criterion_3() -> Verdict {
    let (_, v) = suite("euler-numbers");
    if !v.ok {
        return v;
    }
    let out = run_machine(&["euler", &doc("p1_vector_field.toml"), "--section", "zero"], Some(1));
    let j: Value = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    let reduced = &j["results"][0]["reduced"];
    let ok = out.code == 0 && reduced == &json!("2");
    Verdict::new(ok, format!("{}; document P^1 reduced = {reduced}", v.detail))
}

fn criterion_7() -> Verdict {
    let (_, v) = suite("splitting");
    if !v.ok {
        return v;
    }
    let out = run_machine(&["traj", &doc("splitting_synthetic.toml")], Some(1));
    let j: Value = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    let passes = j["splitting"].as_array().map(|a| a.iter().all(|r| r["pass"] == json!(true)) && !a.is_empty());
    let ok = out.code == 0 && passes == Some(true);
    Verdict::new(ok, format!("{}; synthetic document passes = {passes:?}", v.detail))
}

fn criterion_8() -> Verdict {
    let (_, v) = suite("zeta");
    if !v.ok {
        return v;
    }
    let text = std::fs::read_to_string(doc("zeta.toml")).expect("zeta document");
    let model = parse_document(&text).and_then(|d| build_model(&d, &text)).expect("zeta document builds");
    let ds = &model.trajectory.expect("trajectory section").dataset;
    let monoid: &Monoid = &ds.monoid;
    let got: BTreeMap<_, RatFn> = zeta(monoid, &ds.n, 6).expect("zeta").terms().map(|(b, c)| (b.clone(), c.clone())).collect();
    let oracle = suites::zeta_oracle(monoid, &ds.n, 6);
    Verdict::new(got == oracle, format!("{}; document terms {} vs oracle {}", v.detail, got.len(), oracle.len()))
}

/// Every example document and the full suite list, in machine mode.
fn determinism_runs() -> Vec<Vec<String>> {
    let mut runs: Vec<Vec<String>> = vec![vec!["--check".into(), "all".into()]];
    let per_doc: &[(&str, &[&str])] = &[
        ("p1_vector_field.toml", &["euler", "traj"]),
        ("borel_serre.toml", &["euler"]),
        ("rationality.toml", &["euler"]),
        ("hilbert.toml", &["hilbert"]),
        ("zeta.toml", &["zeta"]),
        ("splitting_synthetic.toml", &["traj"]),
    ];
    for (name, cmds) in per_doc {
        for cmd in cmds.iter().chain(&["fmt"]) {
            runs.push(vec![cmd.to_string(), doc(name)]);
        }
    }
    runs.push(vec!["euler".into(), doc("rationality.toml"), "--clear".into(), "--critical".into()]);
    runs.push(vec!["traj".into(), doc("p1_vector_field.toml"), "--critical".into(), "--at".into(), "1".into()]);
    runs.push(vec!["hilbert".into(), doc("hilbert.toml"), "--clear".into(), "--truncate".into(), "40".into()]);
    runs
}

fn criterion_9() -> Verdict {
    let threads = [Some(1), Some(4), Some(1)];
    let mut mismatches = Vec::new();
    let runs = determinism_runs();
    for args in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let outs: Vec<Outcome> = threads.iter().map(|t| run_machine(&args, *t)).collect();
        if outs.iter().any(|o| o != &outs[0]) {
            mismatches.push(args.join(" "));
        }
        if outs[0].code != 0 {
            mismatches.push(format!("{} exited {}", args.join(" "), outs[0].code));
        }
    }
    // the real binary, one and several workers
    let bin = env!("CARGO_BIN_EXE_eulerseries");
    let mut bin_outputs = Vec::new();
    for t in ["1", "3", "1"] {
        let out = Process::new(bin)
            .args(["--machine", "--threads", t, "traj", &doc("splitting_synthetic.toml")])
            .output()
            .expect("binary runs");
        bin_outputs.push((out.status.code(), out.stdout));
    }
    if bin_outputs.iter().any(|o| o != &bin_outputs[0]) {
        mismatches.push("binary output differs across thread counts".into());
    }
    Verdict::new(
        mismatches.is_empty(),
        format!("{} invocations x {} runs; mismatches: {mismatches:?}", runs.len(), threads.len()),
    )
}

fn main() {
    let total = Instant::now();
    let secs = Duration::from_secs;
    type Check = Box<dyn FnOnce() -> Verdict>;
    let criteria: Vec<(u32, &str, Option<Duration>, Check)> = vec![
        (1, "P^1 worked example", Some(secs(1)), Box::new(criterion_1)),
        (2, "Borel-Serre suite", Some(secs(30)), Box::new(|| suite("borel-serre").1)),
        (3, "Euler numbers", Some(secs(5)), Box::new(criterion_3)),
        (4, "symmetric-power rationality", None, Box::new(|| suite("sym-rationality").1)),
        (5, "critical-value laws", None, Box::new(|| suite("critical-value").1)),
        (6, "Hilbert series oracle", None, Box::new(|| suite("hilbert-koszul").1)),
        (7, "splitting checker", None, Box::new(criterion_7)),
        (8, "zeta function", None, Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (n, name, limit, check) in criteria {
        let (v, took) = timed(limit, check);
        failed += usize::from(!v.ok);
        println!("criterion {n} ({name}): {} in {took:.2?}; {}", if v.ok { "PASS" } else { "FAIL" }, v.detail);
    }
    let (mut v, took) = timed(None, criterion_9);
    let elapsed = total.elapsed();
    if elapsed > secs(120) {
        v.ok = false;
        v.detail.push_str("; total over two minutes");
    }
    failed += usize::from(!v.ok);
    println!(
        "criterion 9 (determinism): {} in {took:.2?}; {}; total runtime {elapsed:.2?}",
        if v.ok { "PASS" } else { "FAIL" },
        v.detail
    );
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

//! Command dispatch. Every command produces a JSON record and a text rendering.

use eulerseries::eulereng::{eu_non_reduced, eu_series, SectionData};
use eulerseries::exactnum::{pole_clear, Valuation};
use eulerseries::gradedmod::hilbert_from_betti;
use eulerseries::trajcalc::{d_square_relation, specialize, splitting_check_all, zeta_of, SpecializeMode};
use eulerseries::{Poly, RatFn, Rational};
use serde_json::{json, Value};

use crate::document::{build_model, parse_document, Model};
use crate::error::CliError;
use crate::expr;
use crate::output::{self, class_text, matrix_text};
use crate::suites::{self, SuiteReport};

/// Result of one command: structured record, text form, and whether an
/// invariant check failed.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub text: String,
    pub check_failed: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub at: Option<String>,
    pub critical: bool,
    pub clear: bool,
    pub truncate: Option<u64>,
}

fn load(text: &str) -> Result<Model, CliError> {
    let doc = parse_document(text)?;
    build_model(&doc, text)
}

fn point(flag: &Option<String>, model_at: Option<&Rational>) -> Result<Rational, CliError> {
    match flag {
        Some(s) => parse_rational(s),
        None => Ok(model_at.cloned().unwrap_or_else(|| -Rational::one())),
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let e = expr::parse(s).map_err(|e| CliError::input(e.code, None, format!("--at: {}", e.message)))?;
    expr::eval_rational(&e).map_err(|e| CliError::input(e.code, None, format!("--at: {}", e.message)))
}

fn clearing(f: &RatFn) -> Result<Value, CliError> {
    let c = pole_clear(f, &Poly::one_minus_t_pow(2))?;
    Ok(json!({ "n": c.n, "m": c.m, "cleared": output::poly(&c.cleared) }))
}

fn valuation(v: Valuation) -> Value {
    match v {
        Valuation::Finite(n) => json!(n),
        Valuation::Infinite => json!("inf"),
    }
}

pub fn cmd_euler(text: &str, section: Option<&str>, flags: &Flags) -> Result<Report, CliError> {
    let model = load(text)?;
    let ring = model
        .ring
        .clone()
        .ok_or_else(|| CliError::input("missing-space", None, "euler needs a [space] section"))?;
    let mut jobs: Vec<(String, String, SectionData)> = model
        .sections
        .iter()
        .map(|(name, (bundle, data))| (name.clone(), bundle.clone(), data.clone()))
        .collect();
    if jobs.is_empty() {
        jobs = model
            .bundles
            .keys()
            .map(|b| (format!("{b}.zero"), b.clone(), SectionData::ZeroSection))
            .collect();
    }
    if let Some(s) = section {
        jobs.retain(|(name, _, _)| name == s);
        if jobs.is_empty() {
            return Err(CliError::input("unknown-section", None, format!("unknown section '{s}'")));
        }
    }
    if jobs.is_empty() {
        return Err(CliError::input("nothing-to-do", None, "document declares no bundles or sections"));
    }
    let a = point(&flags.at, model.at.as_ref())?;
    let mut records = Vec::new();
    let mut text_out = String::new();
    for (name, bundle_name, data) in &jobs {
        let bundle = &model.bundles[bundle_name];
        let es = eu_series(&ring, bundle, data)?;
        let global = es.class.integrate()?;
        let minus_one = -Rational::one();
        let reduced = global.critical_value(&minus_one);
        let pole = pole_clear(&global, &Poly::one_minus_t_pow(2))?;
        let non_reduced = eu_non_reduced(&global)?;
        let terms: Vec<Value> = es
            .class
            .terms()
            .into_iter()
            .map(|(m, c)| json!({ "monomial": m, "coeff": output::ratfn(&c) }))
            .collect();
        let mut rec = json!({
            "section": name,
            "bundle": bundle_name,
            "rank": es.rank,
            "series": terms,
            "global": output::ratfn(&global),
            "reduced": output::rational(&reduced),
            "non_reduced": output::rational(&non_reduced),
            "pole_order": pole.n,
        });
        text_out.push_str(&format!("section {name} (bundle {bundle_name}, rank {})\n", es.rank));
        text_out.push_str(&format!("  series   {}\n", es.class));
        text_out.push_str(&format!("  global   {global}\n"));
        text_out.push_str(&format!("  reduced  {reduced}\n"));
        text_out.push_str(&format!("  non-reduced {non_reduced}  pole order {}\n", pole.n));
        if !es.local.is_empty() {
            rec["local"] = Value::Array(
                es.local
                    .iter()
                    .map(|(label, c)| json!({ "label": label, "contribution": output::ratfn(c) }))
                    .collect(),
            );
            for (label, c) in &es.local {
                text_out.push_str(&format!("  zero {label}: {c}\n"));
            }
        }
        if flags.at.is_some() || flags.critical {
            rec["at"] = output::rational(&a);
        }
        if flags.at.is_some() && !flags.critical {
            let v = global
                .eval(&a)
                .ok_or_else(|| CliError::engine("pole", format!("global series of {name} has a pole at {a}")))?;
            rec["value"] = output::rational(&v);
            text_out.push_str(&format!("  value at {a}: {v}\n"));
        }
        if flags.critical {
            let v = global.critical_value(&a);
            rec["critical"] = output::rational(&v);
            text_out.push_str(&format!("  critical value at {a}: {v}\n"));
        }
        if flags.clear {
            rec["clearing"] = clearing(&global)?;
            text_out.push_str(&format!("  (1 - t^2)^{} t^{} * global = {}\n", pole.n, pole.m, pole.cleared));
        }
        records.push(rec);
    }
    Ok(Report {
        json: json!({ "command": "euler", "results": records }),
        text: text_out,
        check_failed: None,
    })
}

pub fn cmd_hilbert(text: &str, flags: &Flags) -> Result<Report, CliError> {
    let model = load(text)?;
    let graded = model
        .graded
        .ok_or_else(|| CliError::input("missing-graded", None, "hilbert needs a [graded] section"))?;
    let top = flags.truncate.or(model.truncation).unwrap_or(10);
    let mut records = Vec::new();
    let mut text_out = String::new();
    for (name, betti) in &graded.modules {
        let h = hilbert_from_betti(&graded.ring, betti);
        let coeffs = h.coefficients(top as usize);
        let n = h.clearing_exponent(&graded.ring)?;
        let mut rec = json!({
            "name": name,
            "betti": betti.rows(),
            "series": output::ratfn(&h.series),
            "coefficients": coeffs.iter().map(output::rational).collect::<Vec<_>>(),
            "clearing_exponent": n,
        });
        text_out.push_str(&format!("module {name}\n  betti {betti}\n  H(t) = {}\n", h.series));
        let shown: Vec<String> = coeffs.iter().map(Rational::to_string).collect();
        text_out.push_str(&format!("  dims 0..={top}: {}\n", shown.join(" ")));
        if flags.clear {
            let c = pole_clear(&h.series, &graded.ring.denominator())?;
            rec["clearing"] = json!({ "n": c.n, "m": c.m, "cleared": output::poly(&c.cleared) });
            text_out.push_str(&format!("  clearing exponent {} -> {}\n", c.n, c.cleared));
        } else {
            text_out.push_str(&format!("  clearing exponent {n}\n"));
        }
        records.push(rec);
    }
    Ok(Report {
        json: json!({ "command": "hilbert", "results": records }),
        text: text_out,
        check_failed: None,
    })
}

pub fn cmd_traj(text: &str, flags: &Flags) -> Result<Report, CliError> {
    let model = load(text)?;
    let traj = model
        .trajectory
        .ok_or_else(|| CliError::input("missing-trajectory", None, "traj needs a [trajectory] section"))?;
    let ds = &traj.dataset;
    let a = point(&flags.at, model.at.as_ref())?;
    let mode = if flags.critical { SpecializeMode::Critical } else { SpecializeMode::Plain };
    let mut failures = Vec::new();
    let mut text_out = String::new();
    let mut diffs = Vec::new();
    for (class, d) in &ds.d {
        let spec = specialize(d, &a, mode)?;
        let rep = d_square_relation(&spec, traj.relation.as_ref())?;
        let mut rec = json!({
            "class": output::exponent(class),
            "d_tilde": output::matrix(d, output::ratfn),
            "d": output::matrix(&spec, output::rational),
            "d_squared": output::matrix(&rep.square, output::rational),
        });
        text_out.push_str(&format!("class {}\n  d~ =\n{}\n", class_text(class), matrix_text(d, "    ")));
        text_out.push_str(&format!("  d (t = {a}) =\n{}\n", matrix_text(&spec, "    ")));
        text_out.push_str(&format!("  d^2 =\n{}\n", matrix_text(&rep.square, "    ")));
        if let (Some(rel), Some(holds)) = (&traj.relation, rep.holds) {
            let rel_text = rel.to_string().replace('t', "d");
            rec["relation"] = json!({ "relation": output::poly(rel), "holds": holds });
            text_out.push_str(&format!("  {rel_text} = 0: {}\n", if holds { "PASS" } else { "FAIL" }));
            if !holds {
                failures.push(format!("relation fails at class {}", class_text(class)));
            }
        }
        diffs.push(rec);
    }
    let mut splitting = Vec::new();
    if traj.splitting || !ds.d_inf.is_empty() {
        let classes: Vec<_> = ds.d_inf.keys().cloned().collect();
        for r in splitting_check_all(ds, &classes)? {
            text_out.push_str(&format!(
                "splitting {}: {} ({} decompositions)\n",
                class_text(&r.class),
                if r.pass { "PASS" } else { "FAIL" },
                r.decompositions.len()
            ));
            let diff: Vec<Value> = r
                .diff_entries()
                .iter()
                .map(|(i, j, v)| json!({ "row": ds.zeros.labels()[*i], "col": ds.zeros.labels()[*j], "diff": output::ratfn(v) }))
                .collect();
            for (i, j, v) in r.diff_entries() {
                text_out.push_str(&format!("  diff [{}, {}] = {v}\n", ds.zeros.labels()[i], ds.zeros.labels()[j]));
            }
            for w in &r.warnings {
                text_out.push_str(&format!("  warning: {w}\n"));
            }
            if !r.pass {
                failures.push(format!("splitting fails at class {}", class_text(&r.class)));
            }
            splitting.push(json!({
                "class": output::exponent(&r.class),
                "pass": r.pass,
                "lhs": output::matrix(&r.lhs, output::ratfn),
                "rhs": output::matrix(&r.rhs, output::ratfn),
                "diff": diff,
                "decompositions": r.decompositions,
                "warnings": r.warnings,
            }));
        }
    }
    Ok(Report {
        json: json!({
            "command": "traj",
            "zeros": ds.zeros.labels(),
            "at": output::rational(&a),
            "mode": if flags.critical { "critical" } else { "plain" },
            "differentials": diffs,
            "splitting": splitting,
        }),
        text: text_out,
        check_failed: (!failures.is_empty()).then(|| failures.join("; ")),
    })
}

pub fn cmd_zeta(text: &str, flags: &Flags) -> Result<Report, CliError> {
    let model = load(text)?;
    let traj = model
        .trajectory
        .ok_or_else(|| CliError::input("missing-trajectory", None, "zeta needs a [trajectory] section"))?;
    let bound = flags.truncate.or(model.truncation).unwrap_or(6);
    let z = zeta_of(&traj.dataset, bound)?;
    let mut text_out = format!("Z (|beta| <= {bound}) =\n");
    for (b, c) in z.terms() {
        text_out.push_str(&format!("  {}: {c}\n", class_text(b)));
    }
    Ok(Report {
        json: json!({ "command": "zeta", "truncation": bound, "series": output::series(&z) }),
        text: text_out,
        check_failed: None,
    })
}

pub fn cmd_critval(input: &str, flags: &Flags) -> Result<Report, CliError> {
    let e = expr::parse(input).map_err(|e| CliError::input(e.code, Some((1, e.offset + 1)), e.message))?;
    let f = expr::eval_ratfn(&e, "t").map_err(|e| CliError::input(e.code, Some((1, e.offset + 1)), e.message))?;
    let a = point(&flags.at, None)?;
    let crit = f.critical_value(&a);
    let mut rec = json!({
        "command": "critval",
        "input": output::ratfn(&f),
        "at": output::rational(&a),
        "valuation": valuation(f.valuation(&a)),
        "critical": output::rational(&crit),
    });
    let mut text_out = format!("P = {f}\nP*({a}) = {crit}\n");
    if flags.clear {
        rec["clearing"] = clearing(&f)?;
        let c = pole_clear(&f, &Poly::one_minus_t_pow(2))?;
        text_out.push_str(&format!("(1 - t^2)^{} t^{} P = {}\n", c.n, c.m, c.cleared));
    }
    Ok(Report {
        json: rec,
        text: text_out,
        check_failed: None,
    })
}

pub fn cmd_check(names: &[String], seed: u64) -> Result<Report, CliError> {
    let mut reports: Vec<SuiteReport> = Vec::new();
    for name in names {
        if name == "all" {
            for s in suites::SUITES {
                reports.push(suites::run_suite(s, seed).expect("known suite"));
            }
            continue;
        }
        let r = suites::run_suite(name, seed).ok_or_else(|| {
            CliError::input("unknown-suite", None, format!("unknown suite '{name}', expected one of {} or all", suites::SUITES.join(", ")))
        })?;
        reports.push(r);
    }
    let mut text_out = String::new();
    for r in &reports {
        text_out.push_str(&format!("{}: {} ({} cases, {} failed)\n", r.name, if r.pass() { "PASS" } else { "FAIL" }, r.cases, r.failed));
        for f in &r.failures {
            text_out.push_str(&format!("  {f}\n"));
        }
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass()).map(|r| r.name.as_str()).collect();
    Ok(Report {
        json: json!({ "command": "check", "seed": seed, "suites": reports }),
        text: text_out,
        check_failed: (!failed.is_empty()).then(|| format!("failing suites: {}", failed.join(", "))),
    })
}

/// The document normalized through a parse/serialize round trip.
pub fn cmd_fmt(text: &str) -> Result<Report, CliError> {
    let doc = parse_document(text)?;
    build_model(&doc, text)?;
    let out = crate::document::to_text(&doc);
    Ok(Report {
        json: json!({ "command": "fmt", "document": out }),
        text: out,
        check_failed: None,
    })
}

//! JSON and text renderings of engine values.

use eulerseries::exactnum::{Exponent, Matrix, MonoidSeries};
use eulerseries::{Field, Poly, RatFn, Rational};
use serde_json::{json, Value};

pub fn rational(r: &Rational) -> Value {
    json!(r.to_string())
}

pub fn poly(p: &Poly) -> Value {
    serde_json::to_value(p).expect("polynomials serialize")
}

pub fn ratfn(f: &RatFn) -> Value {
    serde_json::to_value(f).expect("rational functions serialize")
}

pub fn matrix<F: Field>(m: &Matrix<F>, entry: impl Fn(&F) -> Value) -> Value {
    Value::Array(m.row_vecs().iter().map(|r| Value::Array(r.iter().map(&entry).collect())).collect())
}

pub fn exponent(b: &Exponent) -> Value {
    json!(b)
}

pub fn series(s: &MonoidSeries<RatFn>) -> Value {
    Value::Array(
        s.terms()
            .map(|(b, c)| json!({ "class": exponent(b), "coeff": ratfn(c) }))
            .collect(),
    )
}

pub fn matrix_text<F: Field + std::fmt::Display>(m: &Matrix<F>, indent: &str) -> String {
    let cells: Vec<Vec<String>> = m.row_vecs().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    let width = cells.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
    cells
        .iter()
        .map(|r| {
            let row: Vec<String> = r.iter().map(|s| format!("{s:>width$}")).collect();
            format!("{indent}[ {} ]", row.join("  "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn class_text(b: &Exponent) -> String {
    let parts: Vec<String> = b.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

//! Input documents: a TOML tree, validated into engine objects.

use std::collections::BTreeMap;
use std::ops::Range;
use std::sync::Arc;

use eulerseries::cohring::{CohClass, CohRing, SplitBundle};
use eulerseries::eulereng::{LocalZero, SectionData};
use eulerseries::exactnum::{Exponent, Matrix, Monoid, Tensor3};
use eulerseries::gradedmod::{koszul_resolution, BettiTable, GradedPolyRing, Monomial};
use eulerseries::trajcalc::{assemble_d, product_field_zeros, LocalizedZeroRecord, TrajDataset, ZeroSet};
use eulerseries::{Poly, RatFn, Rational};
use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::CliError;
use crate::expr::{self, ExprError};

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<Spanned<SpaceSpec>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bundles: BTreeMap<String, Spanned<BundleSpec>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sections: BTreeMap<String, Spanned<SectionSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graded: Option<Spanned<GradedSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<Spanned<TrajSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<OptionsSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    /// `projective` (with `n`) or `product` (with `factors`).
    pub kind: Spanned<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub roots: Vec<Spanned<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub negative: Vec<Spanned<String>>,
    /// `tangent` for the built-in tangent model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<Spanned<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionSpec {
    pub bundle: Spanned<String>,
    /// `zero` or `simple`.
    pub kind: Spanned<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub zeros: Vec<Spanned<ZeroSpec>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZeroSpec {
    pub label: String,
    #[serde(default = "one")]
    pub multiplicity: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<Spanned<String>>,
}

fn one() -> i64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedSpec {
    pub weights: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub betti: Vec<BettiSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub koszul: Vec<KoszulSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BettiSpec {
    pub name: String,
    pub rows: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KoszulSpec {
    pub name: String,
    pub sequence: Vec<Spanned<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajSpec {
    pub zeros: Vec<String>,
    pub weights: Vec<u32>,
    /// Classes at which `ν ⊕ ν` contributes one unit record per pair of zeros.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub product_field_classes: Vec<Exponent>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<Spanned<RecordSpec>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub d: Vec<Spanned<MatrixSpec>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub e: Vec<Spanned<VectorSpec>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub f: Vec<Spanned<TensorSpec>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub d_inf: Vec<Spanned<MatrixSpec>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n: Vec<Spanned<ScalarSpec>>,
    /// Polynomial relation in `d` asserted for every specialized differential.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<Spanned<String>>,
    /// Run the splitting check on every class with a `d_inf` table.
    #[serde(default, skip_serializing_if = "is_false")]
    pub splitting: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordSpec {
    pub source: String,
    pub target: String,
    pub class: Exponent,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<Spanned<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub class: Exponent,
    pub matrix: Vec<Vec<Spanned<String>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorSpec {
    pub class: Exponent,
    pub vector: Vec<Spanned<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorSpec {
    pub class: Exponent,
    pub tensor: Vec<Vec<Vec<Spanned<String>>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarSpec {
    pub class: Exponent,
    pub value: Spanned<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<Spanned<String>>,
}

/// Line and column (1-based) of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, col)
}

pub fn parse_document(text: &str) -> Result<Document, CliError> {
    toml::from_str(text).map_err(|e| {
        let loc = e.span().map(|s| line_col(text, s.start));
        CliError::input("syntax", loc, e.message().trim().to_string())
    })
}

pub fn to_text(doc: &Document) -> String {
    toml::to_string(doc).expect("documents serialize")
}

/// Engine objects built from a document.
#[derive(Debug, Clone)]
pub struct Model {
    pub ring: Option<Arc<CohRing>>,
    pub bundles: BTreeMap<String, SplitBundle>,
    pub sections: BTreeMap<String, (String, SectionData)>,
    pub graded: Option<GradedModel>,
    pub trajectory: Option<TrajModel>,
    pub truncation: Option<u64>,
    pub at: Option<Rational>,
}

#[derive(Debug, Clone)]
pub struct GradedModel {
    pub ring: GradedPolyRing,
    pub modules: Vec<(String, BettiTable)>,
}

#[derive(Debug, Clone)]
pub struct TrajModel {
    pub dataset: TrajDataset<RatFn>,
    pub relation: Option<Poly>,
    pub splitting: bool,
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn at(&self, span: Range<usize>) -> Option<(usize, usize)> {
        Some(line_col(self.text, span.start))
    }

    fn at_offset(&self, offset: usize) -> Option<(usize, usize)> {
        Some(line_col(self.text, offset))
    }

    fn fail<T>(&self, code: &'static str, span: Range<usize>, msg: impl Into<String>) -> Result<T, CliError> {
        Err(CliError::input(code, self.at(span), msg.into()))
    }

    /// Locate an expression error inside a quoted string value.
    fn expr_err(&self, s: &Spanned<String>, e: ExprError) -> CliError {
        CliError::input(e.code, self.at_offset(s.span().start + 1 + e.offset), e.message)
    }

    fn parse(&self, s: &Spanned<String>) -> Result<expr::Expr, CliError> {
        expr::parse(s.get_ref()).map_err(|e| self.expr_err(s, e))
    }

    fn ratfn(&self, s: &Spanned<String>) -> Result<RatFn, CliError> {
        let e = self.parse(s)?;
        expr::eval_ratfn(&e, "t").map_err(|err| self.expr_err(s, err))
    }

    fn rational(&self, s: &Spanned<String>) -> Result<Rational, CliError> {
        let e = self.parse(s)?;
        expr::eval_rational(&e).map_err(|err| self.expr_err(s, err))
    }
}

pub fn build_model(doc: &Document, text: &str) -> Result<Model, CliError> {
    let cx = Ctx { text };
    let ring = match &doc.space {
        None => None,
        Some(sp) => Some(Arc::new(build_space(&cx, sp)?)),
    };
    let mut bundles = BTreeMap::new();
    for (name, b) in &doc.bundles {
        let Some(ring) = &ring else {
            return cx.fail("missing-space", b.span(), format!("bundle '{name}' needs a [space] section"));
        };
        bundles.insert(name.clone(), build_bundle(&cx, ring, b)?);
    }
    let mut sections = BTreeMap::new();
    for (name, s) in &doc.sections {
        let spec = s.get_ref();
        let bundle = spec.bundle.get_ref();
        if !bundles.contains_key(bundle) {
            return cx.fail("unknown-bundle", spec.bundle.span(), format!("unknown bundle '{bundle}'"));
        }
        let data = match spec.kind.get_ref().as_str() {
            "zero" => {
                if let Some(z) = spec.zeros.first() {
                    return cx.fail("unexpected-zeros", z.span(), "zero sections take no zero list");
                }
                SectionData::ZeroSection
            }
            "simple" => {
                let mut zeros = Vec::new();
                for z in &spec.zeros {
                    let zs = z.get_ref();
                    let factor = match &zs.factor {
                        Some(f) => cx.ratfn(f)?,
                        None => RatFn::one(),
                    };
                    zeros.push(LocalZero {
                        label: zs.label.clone(),
                        multiplicity: zs.multiplicity,
                        factor,
                    });
                }
                SectionData::simple_zeros(zeros).map_err(|e| CliError::input("bad-section", cx.at(s.span()), e.to_string()))?
            }
            other => {
                return cx.fail("bad-kind", spec.kind.span(), format!("unknown section kind '{other}', expected 'zero' or 'simple'"));
            }
        };
        sections.insert(name.clone(), (bundle.clone(), data));
    }
    let graded = doc.graded.as_ref().map(|g| build_graded(&cx, g)).transpose()?;
    let trajectory = doc.trajectory.as_ref().map(|t| build_traj(&cx, t)).transpose()?;
    let opts = doc.options.clone().unwrap_or_default();
    let at = opts.at.as_ref().map(|a| cx.rational(a)).transpose()?;
    Ok(Model {
        ring,
        bundles,
        sections,
        graded,
        trajectory,
        truncation: opts.truncation,
        at,
    })
}

fn build_space(cx: &Ctx, sp: &Spanned<SpaceSpec>) -> Result<CohRing, CliError> {
    let spec = sp.get_ref();
    let dims = match spec.kind.get_ref().as_str() {
        "projective" => match (spec.n, &spec.factors) {
            (Some(n), None) if n >= 1 => vec![n],
            (Some(_), None) => return cx.fail("bad-space", sp.span(), "projective space needs n >= 1"),
            _ => return cx.fail("bad-space", sp.span(), "projective space takes 'n' only"),
        },
        "product" => match (spec.n, &spec.factors) {
            (None, Some(f)) if !f.is_empty() && f.iter().all(|&n| n >= 1) => f.clone(),
            _ => return cx.fail("bad-space", sp.span(), "product space takes a nonempty 'factors' list of dimensions >= 1"),
        },
        other => {
            return cx.fail("bad-kind", spec.kind.span(), format!("unknown space kind '{other}', expected 'projective' or 'product'"));
        }
    };
    CohRing::projective_product(&dims).map_err(|e| CliError::input("bad-space", cx.at(sp.span()), e.to_string()))
}

fn build_bundle(cx: &Ctx, ring: &Arc<CohRing>, b: &Spanned<BundleSpec>) -> Result<SplitBundle, CliError> {
    let spec = b.get_ref();
    if let Some(model) = &spec.model {
        if model.get_ref() != "tangent" {
            return cx.fail("bad-model", model.span(), format!("unknown bundle model '{}'", model.get_ref()));
        }
        if !spec.roots.is_empty() || !spec.negative.is_empty() {
            return cx.fail("bad-bundle", b.span(), "a bundle model excludes explicit roots");
        }
        return SplitBundle::tangent(ring).map_err(|e| CliError::input("bad-bundle", cx.at(b.span()), e.to_string()));
    }
    let names: Vec<String> = ring.generators().iter().map(|g| g.name.clone()).collect();
    let root = |s: &Spanned<String>| -> Result<CohClass<Rational>, CliError> {
        let e = cx.parse(s)?;
        let coeffs = expr::eval_linear(&e, &names).map_err(|err| cx.expr_err(s, err))?;
        let terms: Vec<(&str, Rational)> = names.iter().map(String::as_str).zip(coeffs).collect();
        CohClass::linear(ring, &terms).map_err(|err| CliError::input("bad-root", cx.at(s.span()), err.to_string()))
    };
    let positive = spec.roots.iter().map(root).collect::<Result<Vec<_>, _>>()?;
    let negative = spec.negative.iter().map(root).collect::<Result<Vec<_>, _>>()?;
    SplitBundle::new(ring, positive, negative).map_err(|e| CliError::input("bad-bundle", cx.at(b.span()), e.to_string()))
}

fn build_graded(cx: &Ctx, g: &Spanned<GradedSpec>) -> Result<GradedModel, CliError> {
    let spec = g.get_ref();
    let names: Vec<String> = match &spec.names {
        Some(n) => n.clone(),
        None => (0..spec.weights.len()).map(|i| format!("x{}", i + 1)).collect(),
    };
    if names.len() != spec.weights.len() {
        return cx.fail("bad-graded", g.span(), format!("{} names for {} weights", names.len(), spec.weights.len()));
    }
    let ring = GradedPolyRing::new(names.iter().cloned().zip(spec.weights.iter().copied()).collect())
        .map_err(|e| CliError::input("bad-graded", cx.at(g.span()), e.to_string()))?;
    let mut modules = Vec::new();
    for b in &spec.betti {
        modules.push((b.name.clone(), BettiTable::new(b.rows.clone())));
    }
    for k in &spec.koszul {
        let mut seq = Vec::new();
        for s in &k.sequence {
            let e = cx.parse(s)?;
            seq.push(Monomial::new(expr::eval_monomial(&e, &names).map_err(|err| cx.expr_err(s, err))?));
        }
        let span = k.sequence.first().map_or(g.span(), |s| s.span());
        let betti = koszul_resolution(&ring, &seq).map_err(|e| CliError::input("not-regular", cx.at(span), e.to_string()))?;
        modules.push((k.name.clone(), betti));
    }
    let mut seen = std::collections::BTreeSet::new();
    for (name, _) in &modules {
        if !seen.insert(name.clone()) {
            return cx.fail("duplicate-name", g.span(), format!("module name '{name}' used twice"));
        }
    }
    Ok(GradedModel { ring, modules })
}

fn build_traj(cx: &Ctx, t: &Spanned<TrajSpec>) -> Result<TrajModel, CliError> {
    let spec = t.get_ref();
    let zeros = ZeroSet::new(spec.zeros.clone()).map_err(|e| CliError::input("bad-zeros", cx.at(t.span()), e.to_string()))?;
    let monoid = Monoid::new(spec.weights.clone()).map_err(|e| CliError::input("bad-monoid", cx.at(t.span()), e.to_string()))?;
    let n = zeros.len();
    let check_class = |c: &Exponent, span: Range<usize>| -> Result<(), CliError> {
        monoid.check(c).map_err(|e| CliError::input("bad-class", cx.at(span), e.to_string()))
    };
    let mut ds: TrajDataset<RatFn> = TrajDataset::new(zeros.clone(), monoid.clone());

    let mut records: Vec<LocalizedZeroRecord> = Vec::new();
    for c in &spec.product_field_classes {
        check_class(c, t.span())?;
        records.extend(product_field_zeros(&zeros, c));
    }
    for r in &spec.records {
        let rs = r.get_ref();
        check_class(&rs.class, r.span())?;
        for label in [&rs.source, &rs.target] {
            if zeros.index_of(label).is_err() {
                return cx.fail("unknown-label", r.span(), format!("unknown zero label '{label}'"));
            }
        }
        let multiplicity = match &rs.multiplicity {
            Some(m) => cx.ratfn(m)?,
            None => RatFn::one(),
        };
        records.push(LocalizedZeroRecord {
            source: rs.source.clone(),
            target: rs.target.clone(),
            class: rs.class.clone(),
            multiplicity,
        });
    }

    let matrix = |m: &Spanned<MatrixSpec>| -> Result<Matrix<RatFn>, CliError> {
        let ms = m.get_ref();
        check_class(&ms.class, m.span())?;
        if ms.matrix.len() != n || ms.matrix.iter().any(|r| r.len() != n) {
            return cx.fail("bad-shape", m.span(), format!("matrix for class {:?} must be {n}x{n}", ms.class));
        }
        let rows = ms
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| cx.ratfn(x)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::from_rows(rows).expect("shape checked"))
    };
    for m in &spec.d {
        let class = &m.get_ref().class;
        if ds.d.contains_key(class) {
            return cx.fail("duplicate-class", m.span(), format!("two d tables for class {class:?}"));
        }
        if records.iter().any(|r| &r.class == class) {
            return cx.fail(
                "ambiguous-class",
                m.span(),
                format!("class {class:?} has both a d table and localized records"),
            );
        }
        ds.d.insert(class.clone(), matrix(m)?);
    }
    let mut record_classes: Vec<Exponent> = records.iter().map(|r| r.class.clone()).collect();
    record_classes.sort();
    record_classes.dedup();
    for c in record_classes {
        let d = assemble_d(&zeros, &records, &c).map_err(|e| CliError::input("bad-record", cx.at(t.span()), e.to_string()))?;
        ds.d.insert(c, d);
    }
    for m in &spec.d_inf {
        let class = &m.get_ref().class;
        if ds.d_inf.insert(class.clone(), matrix(m)?).is_some() {
            return cx.fail("duplicate-class", m.span(), format!("two d_inf tables for class {class:?}"));
        }
    }
    for v in &spec.e {
        let vs = v.get_ref();
        check_class(&vs.class, v.span())?;
        if vs.vector.len() != n {
            return cx.fail("bad-shape", v.span(), format!("vector for class {:?} must have length {n}", vs.class));
        }
        let entries = vs.vector.iter().map(|x| cx.ratfn(x)).collect::<Result<Vec<_>, _>>()?;
        if ds.e.insert(vs.class.clone(), entries).is_some() {
            return cx.fail("duplicate-class", v.span(), format!("two e tables for class {:?}", vs.class));
        }
    }
    for f in &spec.f {
        let fs = f.get_ref();
        check_class(&fs.class, f.span())?;
        let shape_ok = fs.tensor.len() == n && fs.tensor.iter().all(|a| a.len() == n && a.iter().all(|b| b.len() == n));
        if !shape_ok {
            return cx.fail("bad-shape", f.span(), format!("tensor for class {:?} must be {n}x{n}x{n}", fs.class));
        }
        let nested = fs
            .tensor
            .iter()
            .map(|a| {
                a.iter()
                    .map(|b| b.iter().map(|x| cx.ratfn(x)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let tensor = Tensor3::from_nested(nested).expect("shape checked");
        if ds.f.insert(fs.class.clone(), tensor).is_some() {
            return cx.fail("duplicate-class", f.span(), format!("two f tables for class {:?}", fs.class));
        }
    }
    for s in &spec.n {
        let ss = s.get_ref();
        check_class(&ss.class, s.span())?;
        if ds.n.insert(ss.class.clone(), cx.ratfn(&ss.value)?).is_some() {
            return cx.fail("duplicate-class", s.span(), format!("two N values for class {:?}", ss.class));
        }
    }
    let relation = match &spec.relation {
        Some(r) => {
            let e = cx.parse(r)?;
            Some(expr::eval_poly(&e, "d").map_err(|err| cx.expr_err(r, err))?)
        }
        None => None,
    };
    Ok(TrajModel {
        dataset: ds,
        relation,
        splitting: spec.splitting,
    })
}

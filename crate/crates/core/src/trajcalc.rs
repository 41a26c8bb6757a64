//! Trajectory invariants of a vector field with isolated simple zeros:
//! Morse-type differentials `d_β` from localized zero records, the splitting
//! formula checker, β-graded convolution, and the dynamical zeta function.
//!
//! Conventions used throughout:
//! * the span of the zero set has the labels as an orthonormal basis;
//! * a matrix acts by `e_i ↦ Σ_j M[i][j] e_j`;
//! * `contract_f(f, x, Left)` pairs `x` with slot 1 (slot 2 in, slot 3 out),
//!   `contract_f(f, x, Right)` pairs `x` with slot 3 (slot 1 in, slot 2 out).

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::exactnum::{ArithError, Exponent, Field, Matrix, Monoid, MonoidSeries, Poly, RatFn, Rational, Tensor3};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrajError {
    #[error("duplicate zero label {0}")]
    DuplicateLabel(String),
    #[error("unknown zero label {0}")]
    UnknownLabel(String),
    #[error("inconsistent index sets: {0}")]
    Inconsistent(String),
    #[error("pole at t = {point} in entries {entries:?}")]
    Pole { point: String, entries: Vec<(usize, usize)> },
    #[error("zeta requires positive-degree classes")]
    ZetaDegreeZero,
    #[error("mismatched zero sets")]
    MismatchedZeroSets,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Ordered set of distinct zero labels of the vector field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroSet {
    labels: Vec<String>,
}

impl ZeroSet {
    pub fn new(labels: Vec<String>) -> Result<Self, TrajError> {
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(TrajError::DuplicateLabel(l.clone()));
            }
        }
        Ok(ZeroSet { labels })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Result<usize, TrajError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| TrajError::UnknownLabel(label.to_string()))
    }
}

/// A zero of the induced field on two-pointed maps: a trajectory from
/// `source` to `target` in class `class`, weighted by `multiplicity`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizedZeroRecord {
    pub source: String,
    pub target: String,
    pub class: Exponent,
    pub multiplicity: RatFn,
}

/// The product field `ν ⊕ ν` on pairs of zeros: one unit record per ordered pair.
pub fn product_field_zeros(zeros: &ZeroSet, class: &Exponent) -> Vec<LocalizedZeroRecord> {
    let mut out = Vec::with_capacity(zeros.len() * zeros.len());
    for i in zeros.labels() {
        for j in zeros.labels() {
            out.push(LocalizedZeroRecord {
                source: i.clone(),
                target: j.clone(),
                class: class.clone(),
                multiplicity: RatFn::one(),
            });
        }
    }
    out
}

/// `M[i][j] = Σ` multiplicities of records `(i, j, β)`; other classes are ignored.
pub fn assemble_d(zeros: &ZeroSet, records: &[LocalizedZeroRecord], class: &Exponent) -> Result<Matrix<RatFn>, TrajError> {
    let n = zeros.len();
    let mut m = Matrix::zero(n, n);
    for r in records {
        let i = zeros.index_of(&r.source)?;
        let j = zeros.index_of(&r.target)?;
        if &r.class != class {
            continue;
        }
        let v = m.get(i, j) + &r.multiplicity;
        m.set(i, j, v);
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecializeMode {
    /// Plain evaluation; every entry must be finite at the point.
    Plain,
    /// Critical value entrywise.
    Critical,
}

/// Evaluate a matrix of rational functions at `t = a`.
pub fn specialize(m: &Matrix<RatFn>, a: &Rational, mode: SpecializeMode) -> Result<Matrix<Rational>, TrajError> {
    match mode {
        SpecializeMode::Critical => Ok(m.map(|x| x.critical_value(a))),
        SpecializeMode::Plain => {
            let poles: Vec<(usize, usize)> = m
                .support()
                .into_iter()
                .filter(|(_, _, x)| x.eval(a).is_none())
                .map(|(i, j, _)| (i, j))
                .collect();
            if !poles.is_empty() {
                return Err(TrajError::Pole {
                    point: a.to_string(),
                    entries: poles,
                });
            }
            Ok(m.map(|x| x.eval(a).expect("no poles")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Pair a 3-tensor with a vector to get an endomorphism.
pub fn contract_f<F: Field>(f: &Tensor3<F>, x: &[F], side: Side) -> Result<Matrix<F>, TrajError> {
    let n = f.dim();
    if x.len() != n {
        return Err(TrajError::Inconsistent(format!("vector of length {} against tensor of dimension {n}", x.len())));
    }
    let mut m = Matrix::zero(n, n);
    for a in 0..n {
        for b in 0..n {
            let mut acc = F::zero();
            for (k, xk) in x.iter().enumerate() {
                if xk.is_zero() {
                    continue;
                }
                let entry = match side {
                    Side::Left => f.get(k, a, b),
                    Side::Right => f.get(a, b, k),
                };
                acc = acc.add(&xk.mul(entry));
            }
            m.set(a, b, acc);
        }
    }
    Ok(m)
}

/// Per-class tables of a trajectory dataset, all indexed by the zero set.
#[derive(Debug, Clone)]
pub struct TrajDataset<F: Field = RatFn> {
    pub zeros: ZeroSet,
    pub monoid: Monoid,
    pub d: BTreeMap<Exponent, Matrix<F>>,
    pub e: BTreeMap<Exponent, Vec<F>>,
    pub f: BTreeMap<Exponent, Tensor3<F>>,
    pub d_inf: BTreeMap<Exponent, Matrix<F>>,
    pub n: BTreeMap<Exponent, F>,
}

impl<F: Field> TrajDataset<F> {
    pub fn new(zeros: ZeroSet, monoid: Monoid) -> Self {
        TrajDataset {
            zeros,
            monoid,
            d: BTreeMap::new(),
            e: BTreeMap::new(),
            f: BTreeMap::new(),
            d_inf: BTreeMap::new(),
            n: BTreeMap::new(),
        }
    }

    /// Check every table against the zero set and the monoid rank.
    pub fn validate(&self) -> Result<(), TrajError> {
        let n = self.zeros.len();
        let classes = self
            .d
            .keys()
            .chain(self.e.keys())
            .chain(self.f.keys())
            .chain(self.d_inf.keys())
            .chain(self.n.keys());
        for c in classes {
            self.monoid.check(c)?;
        }
        for (c, m) in self.d.iter().chain(&self.d_inf) {
            if m.rows() != n || m.cols() != n {
                return Err(TrajError::Inconsistent(format!(
                    "matrix for class {c:?} is {}x{}, zero set has {n} labels",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        for (c, v) in &self.e {
            if v.len() != n {
                return Err(TrajError::Inconsistent(format!("e for class {c:?} has length {}", v.len())));
            }
        }
        for (c, t) in &self.f {
            if t.dim() != n {
                return Err(TrajError::Inconsistent(format!("f for class {c:?} has dimension {}", t.dim())));
            }
        }
        Ok(())
    }

    /// Classes appearing in any of the d, e, f tables.
    pub fn listed_classes(&self) -> BTreeSet<Exponent> {
        self.d.keys().chain(self.e.keys()).chain(self.f.keys()).cloned().collect()
    }

    pub fn map<G: Field>(&self, g: impl Fn(&F) -> G + Copy) -> TrajDataset<G> {
        TrajDataset {
            zeros: self.zeros.clone(),
            monoid: self.monoid.clone(),
            d: self.d.iter().map(|(k, m)| (k.clone(), m.map(g))).collect(),
            e: self.e.iter().map(|(k, v)| (k.clone(), v.iter().map(g).collect())).collect(),
            f: self.f.iter().map(|(k, t)| (k.clone(), t.map(g))).collect(),
            d_inf: self.d_inf.iter().map(|(k, m)| (k.clone(), m.map(g))).collect(),
            n: self.n.iter().map(|(k, x)| (k.clone(), g(x))).collect(),
        }
    }
}

/// Outcome of [`splitting_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct SplittingReport<F: Field> {
    pub class: Exponent,
    pub lhs: Matrix<F>,
    pub rhs: Matrix<F>,
    pub pass: bool,
    /// `lhs − rhs`.
    pub diff: Matrix<F>,
    /// Decompositions `(β_1, β_2)` that contributed.
    pub decompositions: Vec<(Exponent, Exponent)>,
    pub warnings: Vec<String>,
}

impl<F: Field> SplittingReport<F> {
    /// Nonzero entries of the difference.
    pub fn diff_entries(&self) -> Vec<(usize, usize, F)> {
        self.diff.support()
    }
}

/// Check `Σ_{β_1+β_2=β} d_{β_1} d_{β_2} + e_{β_1}.f_{β_2} + f_{β_1}.e_{β_2} = d^∞_β`.
///
/// `β_1` ranges over the classes listed in the d/e/f tables. Missing tables
/// count as zero; a term with exactly one factor present is reported.
pub fn splitting_check<F: Field>(ds: &TrajDataset<F>, class: &Exponent) -> Result<SplittingReport<F>, TrajError> {
    ds.validate()?;
    ds.monoid.check(class)?;
    let n = ds.zeros.len();
    let mut warnings = Vec::new();
    let mut lhs = Matrix::zero(n, n);
    let mut decompositions = Vec::new();
    for b1 in ds.listed_classes() {
        let Some(b2) = ds.monoid.sub(class, &b1) else { continue };
        let mut used = false;
        match (ds.d.get(&b1), ds.d.get(&b2)) {
            (Some(x), Some(y)) => {
                lhs = lhs.add(&x.mul(y)?)?;
                used = true;
            }
            (Some(_), None) => warnings.push(format!("d{b2:?} missing, d{b1:?}.d{b2:?} taken as zero")),
            (None, Some(_)) => warnings.push(format!("d{b1:?} missing, d{b1:?}.d{b2:?} taken as zero")),
            (None, None) => {}
        }
        match (ds.e.get(&b1), ds.f.get(&b2)) {
            (Some(e), Some(f)) => {
                lhs = lhs.add(&contract_f(f, e, Side::Left)?)?;
                used = true;
            }
            (Some(_), None) => warnings.push(format!("f{b2:?} missing, e{b1:?}.f{b2:?} taken as zero")),
            (None, Some(_)) => warnings.push(format!("e{b1:?} missing, e{b1:?}.f{b2:?} taken as zero")),
            (None, None) => {}
        }
        match (ds.f.get(&b1), ds.e.get(&b2)) {
            (Some(f), Some(e)) => {
                lhs = lhs.add(&contract_f(f, e, Side::Right)?)?;
                used = true;
            }
            (Some(_), None) => warnings.push(format!("e{b2:?} missing, f{b1:?}.e{b2:?} taken as zero")),
            (None, Some(_)) => warnings.push(format!("f{b1:?} missing, f{b1:?}.e{b2:?} taken as zero")),
            (None, None) => {}
        }
        if used {
            decompositions.push((b1, b2));
        }
    }
    let rhs = match ds.d_inf.get(class) {
        Some(m) => m.clone(),
        None => {
            warnings.push(format!("d_inf{class:?} missing, taken as zero"));
            Matrix::zero(n, n)
        }
    };
    let diff = lhs.sub(&rhs)?;
    Ok(SplittingReport {
        class: class.clone(),
        pass: diff.is_zero(),
        lhs,
        rhs,
        diff,
        decompositions,
        warnings,
    })
}

/// Splitting reports for several classes, computed in parallel and returned
/// sorted by class.
pub fn splitting_check_all<F: Field>(ds: &TrajDataset<F>, classes: &[Exponent]) -> Result<Vec<SplittingReport<F>>, TrajError> {
    let mut classes = classes.to_vec();
    classes.sort();
    classes.dedup();
    classes.par_iter().map(|c| splitting_check(ds, c)).collect()
}

/// β-graded family of endomorphisms.
pub type GradedFamily<F> = BTreeMap<Exponent, Matrix<F>>;

/// `(A ∗ B)_β = Σ_{β_1+β_2=β} A_{β_1} B_{β_2}`, keeping `|β| ≤ bound`.
pub fn compose_convolution<F: Field>(
    monoid: &Monoid,
    a: &GradedFamily<F>,
    b: &GradedFamily<F>,
    bound: u64,
) -> Result<GradedFamily<F>, TrajError> {
    let dim = a.values().chain(b.values()).map(|m| (m.rows(), m.cols())).next();
    if let Some(shape) = dim {
        if a.values().chain(b.values()).any(|m| (m.rows(), m.cols()) != shape) {
            return Err(TrajError::MismatchedZeroSets);
        }
    }
    let mut out: GradedFamily<F> = BTreeMap::new();
    for (b1, x) in a {
        monoid.check(b1)?;
        for (b2, y) in b {
            monoid.check(b2)?;
            let beta = monoid.add(b1, b2);
            if monoid.degree(&beta) > bound {
                continue;
            }
            let prod = x.mul(y)?;
            let entry = match out.remove(&beta) {
                Some(prev) => prev.add(&prod)?,
                None => prod,
            };
            out.insert(beta, entry);
        }
    }
    out.retain(|_, m| !m.is_zero());
    Ok(out)
}

/// Outcome of [`d_square_relation`].
#[derive(Debug, Clone, PartialEq)]
pub struct DSquareReport {
    pub square: Matrix<Rational>,
    /// `p(d)` for the asserted relation `p`, when one was given.
    pub residual: Option<Matrix<Rational>>,
    pub holds: Option<bool>,
}

/// Square a specialized differential and test an asserted relation `p(d) = 0`.
pub fn d_square_relation(d: &Matrix<Rational>, relation: Option<&Poly>) -> Result<DSquareReport, TrajError> {
    let square = d.mul(d)?;
    let residual = relation.map(|p| eval_matrix_poly(p, d)).transpose()?;
    let holds = residual.as_ref().map(Matrix::is_zero);
    Ok(DSquareReport { square, residual, holds })
}

fn eval_matrix_poly(p: &Poly, d: &Matrix<Rational>) -> Result<Matrix<Rational>, TrajError> {
    let n = d.rows();
    let mut acc = Matrix::zero(n, n);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(d)?.add(&Matrix::identity(n).scale(c))?;
    }
    Ok(acc)
}

/// `Z = exp(−Σ_β N_β / |β| z^β)` truncated at total degree `bound`.
pub fn zeta(monoid: &Monoid, n: &BTreeMap<Exponent, RatFn>, bound: u64) -> Result<MonoidSeries<RatFn>, TrajError> {
    let mut terms = Vec::new();
    for (beta, nb) in n {
        monoid.check(beta)?;
        let deg = monoid.degree(beta);
        if deg == 0 {
            if nb.is_zero() {
                continue;
            }
            return Err(TrajError::ZetaDegreeZero);
        }
        let coeff = nb.scale(&Rational::new(-1, deg as i64).expect("positive degree"));
        terms.push((beta.clone(), coeff));
    }
    let s = MonoidSeries::from_terms(monoid.clone(), bound, terms)?;
    Ok(s.exp()?)
}

/// [`zeta`] of a dataset's genus-one totals.
pub fn zeta_of(ds: &TrajDataset<RatFn>, bound: u64) -> Result<MonoidSeries<RatFn>, TrajError> {
    zeta(&ds.monoid, &ds.n, bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn p1_zeros() -> ZeroSet {
        ZeroSet::new(vec!["0".into(), "inf".into()]).unwrap()
    }

    fn rm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn product_field_records() {
        let recs = product_field_zeros(&p1_zeros(), &vec![1]);
        let pairs: Vec<(&str, &str)> = recs.iter().map(|r| (r.source.as_str(), r.target.as_str())).collect();
        assert_eq!(pairs, [("0", "0"), ("0", "inf"), ("inf", "0"), ("inf", "inf")]);
        assert!(recs.iter().all(|r| r.multiplicity == RatFn::one()));
        let single = ZeroSet::new(vec!["p".into()]).unwrap();
        assert_eq!(product_field_zeros(&single, &vec![1]).len(), 1);
        assert!(product_field_zeros(&ZeroSet::new(vec![]).unwrap(), &vec![1]).is_empty());
        assert!(ZeroSet::new(vec!["a".into(), "a".into()]).is_err());
    }

    #[test]
    fn assemble_examples() {
        let z = p1_zeros();
        let d = assemble_d(&z, &product_field_zeros(&z, &vec![1]), &vec![1]).unwrap();
        assert_eq!(specialize(&d, &q(-1), SpecializeMode::Plain).unwrap(), rm(&[&[1, 1], &[1, 1]]));
        assert!(assemble_d(&z, &[], &vec![1]).unwrap().is_zero());
        let recs = vec![
            LocalizedZeroRecord { source: "0".into(), target: "inf".into(), class: vec![1], multiplicity: RatFn::one() },
            LocalizedZeroRecord { source: "0".into(), target: "inf".into(), class: vec![1], multiplicity: RatFn::t() },
        ];
        let d = assemble_d(&z, &recs, &vec![1]).unwrap();
        assert_eq!(d.get(0, 1), &(&RatFn::one() + &RatFn::t()));
        let bad = vec![LocalizedZeroRecord { source: "x".into(), target: "0".into(), class: vec![1], multiplicity: RatFn::one() }];
        assert_eq!(assemble_d(&z, &bad, &vec![1]).unwrap_err(), TrajError::UnknownLabel("x".into()));
    }

    #[test]
    fn specialize_modes() {
        let e = RatFn::new(Poly::from_ints(&[1, 0, -1]), Poly::from_ints(&[1, 1])).unwrap();
        let m = Matrix::from_rows(vec![vec![e]]).unwrap();
        assert_eq!(specialize(&m, &q(-1), SpecializeMode::Critical).unwrap(), rm(&[&[2]]));
        let pole = Matrix::from_rows(vec![vec![RatFn::one(), RatFn::from(Poly::from_ints(&[1, 1])).inverse().unwrap()]]).unwrap();
        match specialize(&pole, &q(-1), SpecializeMode::Plain) {
            Err(TrajError::Pole { entries, .. }) => assert_eq!(entries, vec![(0, 1)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn contract_conventions() {
        let mut f = Tensor3::<Rational>::zero(3);
        f.set(0, 1, 2, q(1));
        let left = contract_f(&f, &[q(1), q(0), q(0)], Side::Left).unwrap();
        assert_eq!(left.support(), vec![(1, 2, q(1))]);
        let orth = contract_f(&f, &[q(0), q(1), q(0)], Side::Left).unwrap();
        assert!(orth.is_zero());
        let right = contract_f(&f, &[q(0), q(0), q(1)], Side::Right).unwrap();
        assert_eq!(right.support(), vec![(0, 1, q(1))]);
        assert!(contract_f(&f, &[q(1)], Side::Left).is_err());
    }

    #[test]
    fn d_square_examples() {
        let relation = Poly::from_ints(&[0, -2, 1]); // d^2 - 2d
        let r = d_square_relation(&rm(&[&[1, 1], &[1, 1]]), Some(&relation)).unwrap();
        assert_eq!(r.square, rm(&[&[2, 2], &[2, 2]]));
        assert_eq!(r.holds, Some(true));
        let z = d_square_relation(&rm(&[&[0, 0], &[0, 0]]), None).unwrap();
        assert!(z.square.is_zero());
        assert_eq!(z.holds, None);
        let idempotent = Poly::from_ints(&[0, -1, 1]);
        assert_eq!(d_square_relation(&Matrix::identity(2), Some(&idempotent)).unwrap().holds, Some(true));
        assert_eq!(d_square_relation(&rm(&[&[1, 1], &[1, 1]]), Some(&idempotent)).unwrap().holds, Some(false));
    }

    #[test]
    fn splitting_with_only_d() {
        let m = Monoid::new(vec![1]).unwrap();
        let mut ds = TrajDataset::<Rational>::new(p1_zeros(), m);
        let d1 = rm(&[&[1, 1], &[1, 1]]);
        ds.d.insert(vec![1], d1.clone());
        ds.d_inf.insert(vec![2], d1.mul(&d1).unwrap());
        let r = splitting_check(&ds, &vec![2]).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.decompositions, vec![(vec![1], vec![1])]);
        // perturb one entry
        let mut bad = ds.clone();
        let mut m = bad.d_inf[&vec![2]].clone();
        m.set(1, 0, &m.get(1, 0).clone() + &q(1));
        bad.d_inf.insert(vec![2], m);
        let r = splitting_check(&bad, &vec![2]).unwrap();
        assert!(!r.pass);
        assert_eq!(r.diff_entries(), vec![(1, 0, q(-1))]);
    }

    #[test]
    fn splitting_missing_tables_warn() {
        let m = Monoid::new(vec![1]).unwrap();
        let mut ds = TrajDataset::<Rational>::new(p1_zeros(), m);
        ds.d.insert(vec![1], rm(&[&[1, 0], &[0, 1]]));
        ds.e.insert(vec![1], vec![q(1), q(0)]);
        let r = splitting_check(&ds, &vec![2]).unwrap();
        assert!(!r.pass);
        assert!(r.warnings.iter().any(|w| w.contains("f[1] missing")));
        assert!(r.warnings.iter().any(|w| w.contains("d_inf[2] missing")));
    }

    #[test]
    fn inconsistent_tables_rejected() {
        let m = Monoid::new(vec![1]).unwrap();
        let mut ds = TrajDataset::<Rational>::new(p1_zeros(), m);
        ds.e.insert(vec![1], vec![q(1)]);
        assert!(matches!(splitting_check(&ds, &vec![1]), Err(TrajError::Inconsistent(_))));
    }

    #[test]
    fn convolution_examples() {
        let m = Monoid::new(vec![1]).unwrap();
        let mat = rm(&[&[1, 2], &[0, 1]]);
        let a: GradedFamily<Rational> = [(vec![1], mat.clone())].into_iter().collect();
        let sq = compose_convolution(&m, &a, &a, 4).unwrap();
        assert_eq!(sq[&vec![2]], mat.mul(&mat).unwrap());
        assert!(compose_convolution(&m, &a, &GradedFamily::new(), 4).unwrap().is_empty());
        assert!(compose_convolution(&m, &a, &a, 1).unwrap().is_empty());
        let other: GradedFamily<Rational> = [(vec![1], Matrix::identity(3))].into_iter().collect();
        assert_eq!(compose_convolution(&m, &a, &other, 4).unwrap_err(), TrajError::MismatchedZeroSets);
    }

    #[test]
    fn zeta_examples() {
        let m = Monoid::new(vec![1]).unwrap();
        assert_eq!(zeta(&m, &BTreeMap::new(), 3).unwrap(), MonoidSeries::one(m.clone(), 3));
        let n: BTreeMap<Exponent, RatFn> = [(vec![1], RatFn::from(3))].into_iter().collect();
        let z = zeta(&m, &n, 2).unwrap();
        assert_eq!(z.coeff(&[1]), RatFn::from(-3));
        assert_eq!(z.coeff(&[2]), RatFn::constant(Rational::new(9, 2).unwrap()));
        let m2 = Monoid::new(vec![2]).unwrap();
        let nb = RatFn::from(Poly::one_minus_t_pow(2)).inverse().unwrap();
        let n: BTreeMap<Exponent, RatFn> = [(vec![1], nb.clone())].into_iter().collect();
        let z = zeta(&m2, &n, 2).unwrap();
        assert_eq!(z.coeff(&[1]), nb.scale(&Rational::new(-1, 2).unwrap()));
        let n0: BTreeMap<Exponent, RatFn> = [(vec![0], RatFn::one())].into_iter().collect();
        assert_eq!(zeta(&m, &n0, 2).unwrap_err(), TrajError::ZetaDegreeZero);
    }
}

//! Finite graded-commutative cohomology rings generated by even-degree
//! nilpotent classes, and the Chern-root calculus of split bundles on them.

mod bundle;

pub use bundle::{todd_series, SplitBundle};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::exactnum::{Field, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CohError {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("root {0} is not homogeneous of degree 2")]
    NotDegreeTwo(String),
    #[error("{0} requires an effective bundle")]
    NotEffective(&'static str),
    #[error("classes live in different rings")]
    RingMismatch,
    #[error("ring has no fundamental class")]
    NoFundamentalClass,
    #[error("class has a nonzero constant term; nilpotent input required")]
    NotNilpotent,
    #[error("class is not invertible: zero constant term")]
    NotInvertible,
    #[error("tangent bundle is only modelled on products of projective spaces")]
    NoTangentModel,
}

/// A generator `g` of cohomological degree `degree` with `g^nilpotency = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    pub nilpotency: u32,
}

/// Finite-dimensional commutative ring `ℚ[g_1, .., g_k] / (g_i^{k_i}, deg > top)`
/// with a chosen fundamental monomial.
#[derive(Clone, PartialEq, Eq)]
pub struct CohRing {
    generators: Vec<Generator>,
    basis: Vec<Vec<u32>>,
    degrees: Vec<u32>,
    index: BTreeMap<Vec<u32>, usize>,
    top_degree: u32,
    fundamental: Option<usize>,
    // basis product table; None when the product vanishes
    table: Vec<Vec<Option<usize>>>,
    // (generator index, n) for each P^n factor, when built from projective spaces
    projective: Vec<(usize, u32)>,
}

impl CohRing {
    /// Build a ring from generators, optionally truncated above `truncate_above`.
    ///
    /// The fundamental monomial is the unique basis monomial of maximal degree
    /// when there is exactly one, otherwise the ring has none.
    pub fn new(generators: Vec<Generator>, truncate_above: Option<u32>) -> Result<Self, CohError> {
        for (i, g) in generators.iter().enumerate() {
            if g.degree == 0 || g.degree % 2 != 0 {
                return Err(CohError::InvalidRing(format!(
                    "generator {} has degree {}; degrees must be even and positive",
                    g.name, g.degree
                )));
            }
            if g.nilpotency < 1 {
                return Err(CohError::InvalidRing(format!("generator {} has nilpotency 0", g.name)));
            }
            if !is_identifier(&g.name) {
                return Err(CohError::InvalidRing(format!("bad generator name {:?}", g.name)));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(CohError::InvalidRing(format!("duplicate generator {}", g.name)));
            }
        }
        let mut basis: Vec<Vec<u32>> = vec![vec![]];
        for g in &generators {
            basis = basis
                .into_iter()
                .flat_map(|m| {
                    (0..g.nilpotency).map(move |e| {
                        let mut m = m.clone();
                        m.push(e);
                        m
                    })
                })
                .collect();
        }
        let degree_of = |m: &[u32]| -> u32 { m.iter().zip(&generators).map(|(e, g)| e * g.degree).sum() };
        if let Some(cap) = truncate_above {
            basis.retain(|m| degree_of(m) <= cap);
        }
        // degree ascending, then lexicographically descending so h1 precedes h2
        basis.sort_by(|a, b| degree_of(a).cmp(&degree_of(b)).then_with(|| b.cmp(a)));
        let degrees: Vec<u32> = basis.iter().map(|m| degree_of(m)).collect();
        let top_degree = degrees.iter().copied().max().unwrap_or(0);
        let top: Vec<usize> = (0..basis.len()).filter(|&i| degrees[i] == top_degree).collect();
        let fundamental = (top.len() == 1).then(|| top[0]);
        let index: BTreeMap<Vec<u32>, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let table = basis
            .iter()
            .map(|a| {
                basis
                    .iter()
                    .map(|b| {
                        let prod: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        index.get(&prod).copied()
                    })
                    .collect()
            })
            .collect();
        Ok(CohRing {
            generators,
            basis,
            degrees,
            index,
            top_degree,
            fundamental,
            table,
            projective: Vec::new(),
        })
    }

    /// Cohomology of `P^n`: one generator `h` of degree 2 with `h^{n+1} = 0`.
    pub fn projective(n: u32) -> Result<Self, CohError> {
        if n < 1 {
            return Err(CohError::InvalidRing("projective space needs n >= 1".into()));
        }
        let mut ring = CohRing::new(
            vec![Generator {
                name: "h".into(),
                degree: 2,
                nilpotency: n + 1,
            }],
            None,
        )?;
        ring.projective = vec![(0, n)];
        Ok(ring)
    }

    /// Künneth product. Clashing generator names get the factor number appended.
    pub fn product(factors: &[&CohRing]) -> Result<Self, CohError> {
        let mut names: Vec<&str> = Vec::new();
        for f in factors {
            names.extend(f.generators.iter().map(|g| g.name.as_str()));
        }
        let clash = (1..names.len()).any(|i| names[..i].contains(&names[i]));
        let mut generators = Vec::new();
        let mut projective = Vec::new();
        for (k, f) in factors.iter().enumerate() {
            for &(g, n) in &f.projective {
                projective.push((g + generators.len(), n));
            }
            for g in &f.generators {
                let mut g = g.clone();
                if clash {
                    g.name = format!("{}{}", g.name, k + 1);
                }
                generators.push(g);
            }
        }
        let mut ring = CohRing::new(generators, None)?;
        ring.projective = projective;
        Ok(ring)
    }

    /// Product of projective spaces `P^{n_1} × .. × P^{n_k}`; generators are
    /// `h` for a single factor and `h1, .., hk` otherwise.
    pub fn projective_product(dims: &[u32]) -> Result<Self, CohError> {
        match dims {
            [] => Err(CohError::InvalidRing("empty product of spaces".into())),
            [n] => CohRing::projective(*n),
            _ => {
                let rings = dims.iter().map(|&n| CohRing::projective(n)).collect::<Result<Vec<_>, _>>()?;
                CohRing::product(&rings.iter().collect::<Vec<_>>())
            }
        }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn basis_degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    /// Complex dimension of the modelled space.
    pub fn complex_dim(&self) -> u32 {
        self.top_degree / 2
    }

    pub fn fundamental(&self) -> Option<usize> {
        self.fundamental
    }

    pub fn projective_factors(&self) -> &[(usize, u32)] {
        &self.projective
    }

    pub fn monomial_index(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    /// Human-readable name of a basis monomial, e.g. `h1*h2^2` or `1`.
    pub fn monomial_name(&self, i: usize) -> String {
        let parts: Vec<String> = self.basis[i]
            .iter()
            .zip(&self.generators)
            .filter(|(e, _)| **e > 0)
            .map(|(e, g)| if *e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Any `x` without constant term satisfies `x^k = 0` for this `k`.
    pub fn nilpotency_bound(&self) -> usize {
        self.top_degree as usize / 2 + 1
    }

    fn mul_index(&self, a: usize, b: usize) -> Option<usize> {
        self.table[a][b]
    }
}

impl fmt::Debug for CohRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CohRing")
            .field("generators", &self.generators)
            .field("dim", &self.basis.len())
            .field("top_degree", &self.top_degree)
            .finish()
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Element of a [`CohRing`] with coefficients in `F` (rationals, or rational
/// functions of `t` for series-valued classes).
#[derive(Clone)]
pub struct CohClass<F: Field> {
    ring: Arc<CohRing>,
    coeffs: Vec<F>,
}

impl<F: Field> PartialEq for CohClass<F> {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.coeffs == other.coeffs
    }
}

fn same_ring(a: &Arc<CohRing>, b: &Arc<CohRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<F: Field> CohClass<F> {
    pub fn zero(ring: &Arc<CohRing>) -> Self {
        CohClass {
            ring: ring.clone(),
            coeffs: vec![F::zero(); ring.dim()],
        }
    }

    pub fn scalar(ring: &Arc<CohRing>, c: F) -> Self {
        let mut z = Self::zero(ring);
        z.coeffs[0] = c;
        z
    }

    pub fn one(ring: &Arc<CohRing>) -> Self {
        Self::scalar(ring, F::one())
    }

    /// The basis monomial with index `i`.
    pub fn basis_element(ring: &Arc<CohRing>, i: usize) -> Self {
        let mut z = Self::zero(ring);
        z.coeffs[i] = F::one();
        z
    }

    pub fn from_coeffs(ring: &Arc<CohRing>, coeffs: Vec<F>) -> Result<Self, CohError> {
        if coeffs.len() != ring.dim() {
            return Err(CohError::RingMismatch);
        }
        Ok(CohClass {
            ring: ring.clone(),
            coeffs,
        })
    }

    /// Class of the fundamental monomial (the point class).
    pub fn point(ring: &Arc<CohRing>) -> Result<Self, CohError> {
        let f = ring.fundamental().ok_or(CohError::NoFundamentalClass)?;
        Ok(Self::basis_element(ring, f))
    }

    pub fn generator(ring: &Arc<CohRing>, name: &str) -> Result<Self, CohError> {
        let g = ring
            .generator_index(name)
            .ok_or_else(|| CohError::UnknownGenerator(name.to_string()))?;
        let mut exps = vec![0; ring.generators().len()];
        exps[g] = 1;
        Ok(match ring.monomial_index(&exps) {
            Some(i) => Self::basis_element(ring, i),
            None => Self::zero(ring),
        })
    }

    /// `Σ c_i g_i` over generator names.
    pub fn linear(ring: &Arc<CohRing>, terms: &[(&str, F)]) -> Result<Self, CohError> {
        let mut acc = Self::zero(ring);
        for (name, c) in terms {
            acc = acc.add(&Self::generator(ring, name)?.scale(c));
        }
        Ok(acc)
    }

    pub fn ring(&self) -> &Arc<CohRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &F {
        &self.coeffs[i]
    }

    pub fn constant_term(&self) -> &F {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(F::is_zero)
    }

    /// Nonzero `(monomial name, coefficient)` pairs in basis order.
    pub fn terms(&self) -> Vec<(String, F)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.ring.monomial_name(i), c.clone()))
            .collect()
    }

    fn check_ring(&self, other: &Self) {
        assert!(same_ring(&self.ring, &other.ring), "{}", CohError::RingMismatch);
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_ring(other);
        CohClass {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_ring(other);
        CohClass {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(F::neg)
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ring(other);
        let mut out = vec![F::zero(); self.ring.dim()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                if let Some(k) = self.ring.mul_index(i, j) {
                    out[k] = out[k].add(&a.mul(b));
                }
            }
        }
        CohClass {
            ring: self.ring.clone(),
            coeffs: out,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> CohClass<G> {
        CohClass {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Component of cohomological degree `deg`.
    pub fn component(&self, deg: u32) -> Self {
        let mut out = Self::zero(&self.ring);
        for (i, c) in self.coeffs.iter().enumerate() {
            if self.ring.basis_degree(i) == deg {
                out.coeffs[i] = c.clone();
            }
        }
        out
    }

    /// True for zero or a class living entirely in degree `deg`.
    pub fn is_homogeneous(&self, deg: u32) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || self.ring.basis_degree(i) == deg)
    }

    /// `Σ_k a_k x^k` for nilpotent `x` (zero constant term); the sum is
    /// finite because `x^k = 0` once `k` exceeds the ring's nilpotency bound.
    pub fn apply_series(&self, series: &[Rational]) -> Result<Self, CohError> {
        if !self.constant_term().is_zero() {
            return Err(CohError::NotNilpotent);
        }
        let n = series.len().min(self.ring.nilpotency_bound());
        // Horner
        let mut acc = Self::zero(&self.ring);
        for a in series[..n].iter().rev() {
            acc = acc.mul(self).add(&Self::scalar(&self.ring, F::from_rational(a)));
        }
        Ok(acc)
    }

    /// `exp(x)` for nilpotent `x`.
    pub fn exp(&self) -> Result<Self, CohError> {
        let n = self.ring.nilpotency_bound();
        let mut coeffs = Vec::with_capacity(n);
        let mut fact = Rational::one();
        for k in 0..n {
            if k > 0 {
                fact = &fact * &Rational::from(k as i64);
            }
            coeffs.push(fact.recip().expect("factorial is nonzero"));
        }
        self.apply_series(&coeffs)
    }

    /// Inverse of a class with invertible constant term.
    pub fn inverse(&self) -> Result<Self, CohError> {
        let c0_inv = self.constant_term().inv().ok_or(CohError::NotInvertible)?;
        // x = c0 (1 + n), n nilpotent; x^{-1} = c0^{-1} Σ (-n)^k
        let n = self.scale(&c0_inv).sub(&Self::one(&self.ring));
        let minus_n = n.neg();
        let mut acc = Self::one(&self.ring);
        let mut term = Self::one(&self.ring);
        for _ in 1..self.ring.nilpotency_bound() {
            term = term.mul(&minus_n);
            acc = acc.add(&term);
        }
        Ok(acc.scale(&c0_inv))
    }

    /// Coefficient of the fundamental monomial.
    pub fn integrate(&self) -> Result<F, CohError> {
        let f = self.ring.fundamental().ok_or(CohError::NoFundamentalClass)?;
        Ok(self.coeffs[f].clone())
    }
}

impl<F: Field> fmt::Debug for CohClass<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CohClass({self})")
    }
}

impl<F: Field> fmt::Display for CohClass<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms
            .iter()
            .map(|(mono, c)| {
                let cs = c.to_string();
                let simple = !cs.contains(['+', ' ', '/']) || cs.parse::<Rational>().is_ok();
                let cs = if simple { cs } else { format!("({cs})") };
                match (mono.as_str(), c.is_one()) {
                    ("1", _) => cs,
                    (m, true) => m.to_string(),
                    (m, false) => format!("{cs}*{m}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

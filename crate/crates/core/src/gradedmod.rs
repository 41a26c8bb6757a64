//! Weighted polynomial rings, Betti tables, Koszul resolutions of monomial
//! regular sequences, and Hilbert series.
//!
//! Only the classical commutative Koszul complex is modelled; modules enter
//! through explicit Betti data or monomial regular sequences.

use std::fmt;

use crate::exactnum::{pole_clear, ArithError, Poly, RatFn, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GradedError {
    #[error("variable {0} has weight 0; weights must be >= 1")]
    ZeroWeight(String),
    #[error("duplicate variable {0}")]
    DuplicateVariable(String),
    #[error("monomial has {got} exponents, ring has {expected} variables")]
    WrongArity { expected: usize, got: usize },
    #[error("constant monomial at position {0} cannot be part of a regular sequence")]
    ConstantMonomial(usize),
    #[error("not a regular sequence: monomials {first} and {second} share variable {variable}")]
    Overlap { first: usize, second: usize, variable: String },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Polynomial ring over ℚ with a positive weight on each variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPolyRing {
    vars: Vec<(String, u32)>,
}

impl GradedPolyRing {
    pub fn new(vars: Vec<(String, u32)>) -> Result<Self, GradedError> {
        for (i, (name, w)) in vars.iter().enumerate() {
            if *w == 0 {
                return Err(GradedError::ZeroWeight(name.clone()));
            }
            if vars[..i].iter().any(|(n, _)| n == name) {
                return Err(GradedError::DuplicateVariable(name.clone()));
            }
        }
        Ok(GradedPolyRing { vars })
    }

    /// `n` variables `x1..xn`, all of weight `w` (weight 2 for `Sym(H^1(E))`).
    pub fn uniform(n: usize, w: u32) -> Result<Self, GradedError> {
        GradedPolyRing::new((1..=n).map(|i| (format!("x{i}"), w)).collect())
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[(String, u32)] {
        &self.vars
    }

    pub fn weights(&self) -> impl Iterator<Item = u32> + '_ {
        self.vars.iter().map(|(_, w)| *w)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|(n, _)| n == name)
    }

    /// `Π_j (1 − t^{w_j})`.
    pub fn denominator(&self) -> Poly {
        self.weights()
            .fold(Poly::one(), |acc, w| &acc * &Poly::one_minus_t_pow(w as usize))
    }

    pub fn check(&self, m: &Monomial) -> Result<(), GradedError> {
        if m.exps.len() != self.nvars() {
            return Err(GradedError::WrongArity {
                expected: self.nvars(),
                got: m.exps.len(),
            });
        }
        Ok(())
    }
}

/// Monomial `Π x_j^{e_j}` given by its exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn weight(&self, ring: &GradedPolyRing) -> u64 {
        self.exps.iter().zip(ring.weights()).map(|(&e, w)| e as u64 * w as u64).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }
}

/// Generator weights of each free module `F_i` in a finite free resolution
/// `0 ← F_0 ← F_1 ← ..`. Homological indices are contiguous from 0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BettiTable {
    rows: Vec<Vec<u64>>,
}

impl BettiTable {
    pub fn new(rows: Vec<Vec<u64>>) -> Self {
        let mut rows = rows;
        for r in &mut rows {
            r.sort_unstable();
        }
        BettiTable { rows }
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// Prepend `k` empty rows.
    pub fn shift(&self, k: usize) -> Self {
        let mut rows = vec![Vec::new(); k];
        rows.extend(self.rows.iter().cloned());
        BettiTable { rows }
    }

    /// Row-wise union; on Hilbert series this is addition.
    pub fn concat(&self, other: &Self) -> Self {
        let n = self.rows.len().max(other.rows.len());
        BettiTable::new(
            (0..n)
                .map(|i| {
                    let mut r = self.rows.get(i).cloned().unwrap_or_default();
                    r.extend(other.rows.get(i).cloned().unwrap_or_default());
                    r
                })
                .collect(),
        )
    }

    /// `Σ_i (−1)^i Σ_g t^{w_g}`.
    pub fn numerator(&self) -> Poly {
        let mut acc = Poly::zero();
        for (i, row) in self.rows.iter().enumerate() {
            let sign = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
            for &w in row {
                acc = &acc + &Poly::monomial(sign.clone(), w as usize);
            }
        }
        acc
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| format!("{i}: {r:?}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Hilbert series of a finitely generated graded module, as a reduced
/// rational function whose denominator divides `Π_j (1 − t^{w_j})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSeries {
    pub series: RatFn,
}

impl HilbertSeries {
    /// Weight-graded dimensions for weights `0..=up_to`.
    pub fn coefficients(&self, up_to: usize) -> Vec<Rational> {
        self.series
            .taylor_at_zero(up_to + 1)
            .expect("Hilbert series denominators are units at t = 0")
    }

    /// Least `n` with `Π_j (1 − t^{w_j})^n · H(t)` a polynomial.
    pub fn clearing_exponent(&self, ring: &GradedPolyRing) -> Result<u32, GradedError> {
        let c = pole_clear(&self.series, &ring.denominator())?;
        debug_assert_eq!(c.m, 0);
        Ok(c.n)
    }
}

/// `H(t) = Σ_i (−1)^i Σ_{g ∈ F_i} t^{w_g} / Π_j (1 − t^{w_j})`.
pub fn hilbert_from_betti(ring: &GradedPolyRing, betti: &BettiTable) -> HilbertSeries {
    HilbertSeries {
        series: RatFn::new(betti.numerator(), ring.denominator()).expect("denominator is nonzero"),
    }
}

/// Koszul resolution of `R/(m_1, .., m_k)` for a monomial regular sequence.
///
/// A monomial sequence is regular iff the supports are pairwise disjoint;
/// row `p` then lists the weights of all `p`-fold products.
pub fn koszul_resolution(ring: &GradedPolyRing, seq: &[Monomial]) -> Result<BettiTable, GradedError> {
    for (i, m) in seq.iter().enumerate() {
        ring.check(m)?;
        if m.is_constant() {
            return Err(GradedError::ConstantMonomial(i));
        }
    }
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if let Some(v) = seq[i].support().find(|&v| seq[j].exps[v] > 0) {
                return Err(GradedError::Overlap {
                    first: i,
                    second: j,
                    variable: ring.vars[v].0.clone(),
                });
            }
        }
    }
    let weights: Vec<u64> = seq.iter().map(|m| m.weight(ring)).collect();
    let mut rows: Vec<Vec<u64>> = vec![Vec::new(); seq.len() + 1];
    for mask in 0u64..(1u64 << seq.len()) {
        let p = mask.count_ones() as usize;
        let w = (0..seq.len()).filter(|&i| mask >> i & 1 == 1).map(|i| weights[i]).sum();
        rows[p].push(w);
    }
    Ok(BettiTable::new(rows))
}

/// Dimensions of the weight-graded pieces of `R / (gens)` for weights
/// `0..=up_to`, by direct monomial enumeration.
pub fn hilbert_brute_force(ring: &GradedPolyRing, gens: &[Monomial], up_to: u64) -> Result<Vec<u64>, GradedError> {
    for g in gens {
        ring.check(g)?;
    }
    let weights: Vec<u64> = ring.weights().map(u64::from).collect();
    let mut dims = vec![0u64; up_to as usize + 1];
    let mut cur = vec![0u32; weights.len()];
    fn rec(i: usize, w: u64, up_to: u64, weights: &[u64], cur: &mut Vec<u32>, gens: &[Monomial], dims: &mut [u64]) {
        if i == weights.len() {
            let m = Monomial { exps: cur.clone() };
            if !gens.iter().any(|g| g.divides(&m)) {
                dims[w as usize] += 1;
            }
            return;
        }
        let mut e = 0u32;
        while w + e as u64 * weights[i] <= up_to {
            cur[i] = e;
            rec(i + 1, w + e as u64 * weights[i], up_to, weights, cur, gens, dims);
            e += 1;
        }
        cur[i] = 0;
    }
    rec(0, 0, up_to, &weights, &mut cur, gens, &mut dims);
    Ok(dims)
}

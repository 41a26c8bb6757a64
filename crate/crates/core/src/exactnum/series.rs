use std::collections::BTreeMap;
use std::fmt;

use super::{ArithError, Field, Rational};

/// Exponent vector of a monoid element `z^β`, `β = (a_1, .., a_r)`.
pub type Exponent = Vec<u32>;

/// Free commutative monoid `ℕ^r` with a positive degree weight per generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monoid {
    weights: Vec<u32>,
}

impl Monoid {
    /// Every weight must be at least 1 so that only the identity has degree 0.
    pub fn new(weights: Vec<u32>) -> Result<Self, ArithError> {
        if weights.iter().any(|&w| w == 0) {
            return Err(ArithError::DimensionMismatch(
                "monoid generator weights must be positive".into(),
            ));
        }
        Ok(Monoid { weights })
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn identity(&self) -> Exponent {
        vec![0; self.rank()]
    }

    pub fn generator(&self, i: usize) -> Exponent {
        let mut e = self.identity();
        e[i] = 1;
        e
    }

    pub fn check(&self, beta: &[u32]) -> Result<(), ArithError> {
        if beta.len() != self.rank() {
            return Err(ArithError::BadExponent(beta.to_vec()));
        }
        Ok(())
    }

    /// `|β| = Σ a_i w_i`.
    pub fn degree(&self, beta: &[u32]) -> u64 {
        beta.iter()
            .zip(&self.weights)
            .map(|(&a, &w)| a as u64 * w as u64)
            .sum()
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Exponent {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    /// `a - b` when `b <= a` componentwise.
    pub fn sub(&self, a: &[u32], b: &[u32]) -> Option<Exponent> {
        a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
    }

    /// All elements of degree at most `bound`, in lexicographic order.
    pub fn elements_up_to(&self, bound: u64) -> Vec<Exponent> {
        fn rec(m: &Monoid, i: usize, left: u64, cur: &mut Exponent, out: &mut Vec<Exponent>) {
            if i == m.rank() {
                out.push(cur.clone());
                return;
            }
            let w = m.weights[i] as u64;
            let mut a = 0u32;
            while a as u64 * w <= left {
                cur[i] = a;
                rec(m, i + 1, left - a as u64 * w, cur, out);
                a += 1;
            }
            cur[i] = 0;
        }
        let mut out = Vec::new();
        rec(self, 0, bound, &mut self.identity(), &mut out);
        out
    }
}

/// Truncated formal series `Σ_{|β| ≤ D} c_β z^β` over a field of coefficients.
///
/// Absent keys are zero; zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct MonoidSeries<F: Field> {
    monoid: Monoid,
    bound: u64,
    coeffs: BTreeMap<Exponent, F>,
}

impl<F: Field> MonoidSeries<F> {
    pub fn zero(monoid: Monoid, bound: u64) -> Self {
        MonoidSeries {
            monoid,
            bound,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(monoid: Monoid, bound: u64) -> Self {
        let id = monoid.identity();
        Self::monomial(monoid, bound, id, F::one()).expect("identity has degree 0")
    }

    /// `c z^β`, silently zero when `|β| > D`.
    pub fn monomial(monoid: Monoid, bound: u64, beta: Exponent, c: F) -> Result<Self, ArithError> {
        monoid.check(&beta)?;
        let mut s = Self::zero(monoid, bound);
        s.insert(beta, c);
        Ok(s)
    }

    pub fn from_terms(
        monoid: Monoid,
        bound: u64,
        terms: impl IntoIterator<Item = (Exponent, F)>,
    ) -> Result<Self, ArithError> {
        let mut s = Self::zero(monoid, bound);
        for (beta, c) in terms {
            s.monoid.check(&beta)?;
            let prev = s.coeffs.remove(&beta).unwrap_or_else(F::zero);
            s.insert(beta, prev.add(&c));
        }
        Ok(s)
    }

    fn insert(&mut self, beta: Exponent, c: F) {
        if !c.is_zero() && self.monoid.degree(&beta) <= self.bound {
            self.coeffs.insert(beta, c);
        }
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn coeff(&self, beta: &[u32]) -> F {
        self.coeffs.get(beta).cloned().unwrap_or_else(F::zero)
    }

    /// Nonzero terms, ordered lexicographically by exponent.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &F)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn compatible(&self, other: &Self) -> Result<(), ArithError> {
        if self.monoid != other.monoid || self.bound != other.bound {
            return Err(ArithError::MonoidMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ArithError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (beta, c) in &other.coeffs {
            let prev = out.coeffs.remove(beta).unwrap_or_else(F::zero);
            out.insert(beta.clone(), prev.add(c));
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        MonoidSeries {
            monoid: self.monoid.clone(),
            bound: self.bound,
            coeffs: self.coeffs.iter().map(|(b, c)| (b.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(self.monoid.clone(), self.bound);
        for (b, x) in &self.coeffs {
            out.insert(b.clone(), x.mul(c));
        }
        out
    }

    /// Truncated product: terms with `|β_1 + β_2| > D` are dropped.
    pub fn mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.compatible(other)?;
        let mut acc: BTreeMap<Exponent, F> = BTreeMap::new();
        for (a, x) in &self.coeffs {
            let da = self.monoid.degree(a);
            for (b, y) in &other.coeffs {
                if da + self.monoid.degree(b) > self.bound {
                    continue;
                }
                let key = self.monoid.add(a, b);
                let v = x.mul(y);
                match acc.get_mut(&key) {
                    Some(slot) => *slot = slot.add(&v),
                    None => {
                        acc.insert(key, v);
                    }
                }
            }
        }
        let mut out = Self::zero(self.monoid.clone(), self.bound);
        for (b, c) in acc {
            out.insert(b, c);
        }
        Ok(out)
    }

    /// `exp(S) = Σ_k S^k / k!` for a series without constant term.
    ///
    /// Every nonzero term of `S` has degree at least 1, so `S^k` vanishes
    /// once `k > D` and the sum is finite.
    pub fn exp(&self) -> Result<Self, ArithError> {
        let id = self.monoid.identity();
        if !self.coeff(&id).is_zero() {
            return Err(ArithError::NonzeroConstantTerm);
        }
        let mut result = Self::one(self.monoid.clone(), self.bound);
        let mut term = result.clone();
        let mut k: i64 = 1;
        loop {
            term = term.mul(self)?;
            if term.is_zero() {
                break;
            }
            let inv_k = F::from_rational(&Rational::new(1, k).expect("k >= 1"));
            term = term.scale(&inv_k);
            result = result.add(&term)?;
            k += 1;
        }
        Ok(result)
    }
}

impl<F: Field> fmt::Debug for MonoidSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonoidSeries")
            .field("weights", &self.monoid.weights)
            .field("bound", &self.bound)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl<F: Field> fmt::Display for MonoidSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 + O(|z| > {})", self.bound);
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(beta, c)| {
                if beta.iter().all(|&a| a == 0) {
                    format!("({c})")
                } else {
                    let mono: Vec<String> = beta
                        .iter()
                        .enumerate()
                        .filter(|(_, &a)| a > 0)
                        .map(|(i, &a)| {
                            let name = if self.monoid.rank() == 1 { "z".to_string() } else { format!("z{}", i + 1) };
                            if a == 1 { name } else { format!("{name}^{a}") }
                        })
                        .collect();
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{} + O(|z| > {})", parts.join(" + "), self.bound)
    }
}

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;

/// Dense univariate polynomial in `t` over the rationals.
///
/// `coeffs[k]` is the coefficient of `t^k`; trailing zeros are never stored,
/// so the zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Poly::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// `t - a`.
    pub fn linear_root(a: &Rational) -> Self {
        Poly::new(vec![-a, Rational::one()])
    }

    /// `1 - t^w`.
    pub fn one_minus_t_pow(w: usize) -> Self {
        &Poly::one() - &Poly::monomial(Rational::one(), w)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, a: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| &(&acc * a) + c)
    }

    /// Scale to leading coefficient 1; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) if !lc.is_one() => self.scale(&lc.recip().expect("nonzero leading coefficient")),
            _ => self.clone(),
        }
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, divisor: &Poly) -> Option<(Poly, Poly)> {
        let dd = divisor.degree()?;
        let lc_inv = divisor.leading()?.recip()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &(&c * d);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Some((Poly::new(quot), Poly::new(rem)))
    }

    /// Exact quotient, `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b is nonzero");
            a = b;
            b = r.monic();
        }
        a
    }

    /// Order of vanishing at `a` together with the cofactor:
    /// `self = (t - a)^order * cofactor` with `cofactor(a) != 0`.
    ///
    /// Returns `None` for the zero polynomial.
    pub fn split_root(&self, a: &Rational) -> Option<(usize, Poly)> {
        if self.is_zero() {
            return None;
        }
        let mut order = 0;
        let mut current = self.clone();
        loop {
            let (q, r) = synthetic_division(&current, a);
            if !r.is_zero() {
                return Some((order, current));
            }
            current = q;
            order += 1;
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Rational::from(k as i64))
                .collect(),
        )
    }

    /// First `n` Taylor coefficients at 0 of `self / den`.
    ///
    /// `None` when `den(0) == 0`.
    pub fn series_div(&self, den: &Poly, n: usize) -> Option<Vec<Rational>> {
        let c0_inv = den.coeff(0).recip()?;
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeff(k);
            for (i, d) in den.coeffs.iter().enumerate().skip(1).take(k) {
                acc = &acc - &(d * &out[k - i]);
            }
            out.push(&acc * &c0_inv);
        }
        Some(out)
    }
}

/// Divide by `t - a`: returns quotient and remainder (= value at `a`).
fn synthetic_division(p: &Poly, a: &Rational) -> (Poly, Rational) {
    let n = p.coeffs.len();
    if n == 0 {
        return (Poly::zero(), Rational::zero());
    }
    let mut quot = vec![Rational::zero(); n - 1];
    let mut carry = Rational::zero();
    for k in (0..n).rev() {
        let v = &p.coeffs[k] + &(&carry * a);
        if k == 0 {
            return (Poly::new(quot), v);
        }
        quot[k - 1] = v.clone();
        carry = v;
    }
    unreachable!()
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            let (neg, mag) = if c.is_negative() { (true, c.abs()) } else { (false, c.clone()) };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coeff = if mag.is_integer() { mag.to_string() } else { format!("({mag})") };
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{coeff}*t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{coeff}*t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

// Serialized as a list of `[exponent, "coefficient"]` pairs, nonzero terms only.
impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<_> = self.terms().collect();
        let mut seq = serializer.serialize_seq(Some(terms.len()))?;
        for (k, c) in terms {
            seq.serialize_element(&(k, c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let terms: Vec<(usize, Rational)> = Vec::deserialize(deserializer)?;
        Ok(terms
            .into_iter()
            .fold(Poly::zero(), |acc, (k, c)| &acc + &Poly::monomial(c, k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = Poly::from_ints(&[1, 0, -3, 2, 5]);
        let b = Poly::from_ints(&[2, 1, 1]);
        let (qt, r) = a.div_rem(&b).unwrap();
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(&(&qt * &b) + &r, a);
        assert!(a.div_rem(&Poly::zero()).is_none());
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let f = Poly::from_ints(&[1, 1]);
        let a = &f * &Poly::from_ints(&[1, -1]);
        let b = &f * &Poly::from_ints(&[2, 0, 1]);
        assert_eq!(a.gcd(&b), f);
        assert_eq!(Poly::zero().gcd(&Poly::zero()), Poly::zero());
        assert_eq!(a.scale(&q(3)).gcd(&Poly::zero()), a.monic());
    }

    #[test]
    fn split_root_orders() {
        let p = &Poly::from_ints(&[1, 1]).pow(3) * &Poly::from_ints(&[0, 1]);
        let (order, co) = p.split_root(&q(-1)).unwrap();
        assert_eq!(order, 3);
        assert_eq!(co, Poly::t());
        assert_eq!(p.split_root(&q(0)).unwrap().0, 1);
        assert_eq!(p.split_root(&q(2)).unwrap().0, 0);
        assert!(Poly::zero().split_root(&q(0)).is_none());
    }

    #[test]
    fn series_div_geometric() {
        let s = Poly::one().series_div(&Poly::one_minus_t_pow(2), 6).unwrap();
        assert_eq!(s, vec![q(1), q(0), q(1), q(0), q(1), q(0)]);
        assert!(Poly::one().series_div(&Poly::t(), 3).is_none());
    }

    #[test]
    fn display() {
        assert_eq!(Poly::from_ints(&[1, 0, -1]).to_string(), "1 - t^2");
        assert_eq!(Poly::from_ints(&[0, -2, 3]).to_string(), "-2*t + 3*t^2");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::{ArithError, Field, Poly, Rational};

/// Rational function `num / den` in the indeterminate `t`.
///
/// Canonical form: `gcd(num, den) = 1` and `den` is monic, with zero stored
/// as `0 / 1`. Structural equality is therefore mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

/// Order of a rational function at a point. Zero has infinite valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFn::zero());
        }
        if den.is_one() {
            return Ok(RatFn { num, den });
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g).expect("gcd divides numerator");
        let mut den = den.div_exact(&g).expect("gcd divides denominator");
        let lc = den.leading().expect("nonzero").clone();
        if !lc.is_one() {
            let inv = lc.recip().expect("nonzero leading coefficient");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RatFn { num, den })
    }

    /// `num / q^n` for squarefree `q`, cancelling one power of each common
    /// prime factor at a time so only gcds against `q` are needed.
    pub fn over_power(num: Poly, q: &Poly, n: u32) -> Result<Self, ArithError> {
        if q.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFn::zero());
        }
        let mut num = num;
        let mut den = Poly::one();
        let mut remaining = n;
        let mut cancelled = Poly::one();
        while remaining > 0 {
            let g = num.gcd(q);
            if g.degree().unwrap_or(0) == 0 {
                break;
            }
            num = num.div_exact(&g).expect("gcd divides numerator");
            cancelled = &cancelled * &g;
            remaining -= 1;
            den = &den * q;
        }
        // den = q^(n - remaining); divide out what was cancelled
        let den = (&den.div_exact(&cancelled).expect("cancelled factors divide")) * &q.pow(remaining);
        let lc = den.leading().expect("nonzero").clone();
        let inv = lc.recip().expect("nonzero leading coefficient");
        Ok(RatFn {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn zero() -> Self {
        RatFn {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFn::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatFn {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn t() -> Self {
        RatFn::from(Poly::t())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The numerator if this is a polynomial.
    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    /// The constant value if this is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        (self.is_polynomial() && self.num.degree().unwrap_or(0) == 0).then(|| self.num.coeff(0))
    }

    pub fn inverse(&self) -> Result<Self, ArithError> {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RatFn) -> Result<Self, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(self * &rhs.inverse()?)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return RatFn::zero();
        }
        RatFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, exp: i64) -> Result<Self, ArithError> {
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let k = exp.unsigned_abs() as u32;
        Ok(RatFn {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// Value at `a`, `None` at a pole.
    pub fn eval(&self, a: &Rational) -> Option<Rational> {
        let d = self.den.eval(a);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(a) / &d)
    }

    /// The unique `n` with `(t - a)^(-n) P` finite and nonzero at `a`.
    pub fn valuation(&self, a: &Rational) -> Valuation {
        match self.num.split_root(a) {
            None => Valuation::Infinite,
            Some((num_order, _)) => {
                let (den_order, _) = self.den.split_root(a).expect("denominator is nonzero");
                Valuation::Finite(num_order as i64 - den_order as i64)
            }
        }
    }

    /// First nonzero Taylor coefficient at `a`, i.e. `((t - a)^(-n) P)(a)`
    /// with `n` the valuation. Zero maps to zero.
    pub fn critical_value(&self, a: &Rational) -> Rational {
        let Some((_, num_co)) = self.num.split_root(a) else {
            return Rational::zero();
        };
        let (_, den_co) = self.den.split_root(a).expect("denominator is nonzero");
        &num_co.eval(a) / &den_co.eval(a)
    }

    /// First `n` Taylor coefficients at `t = 0`; `None` if there is a pole at 0.
    pub fn taylor_at_zero(&self, n: usize) -> Option<Vec<Rational>> {
        self.num.series_div(&self.den, n)
    }
}

/// Result of clearing poles: `q^n * t^m * P = cleared`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleClearing {
    pub n: u32,
    pub m: u32,
    pub cleared: Poly,
}

/// Find the minimal `n`, then the minimal `m`, with `q^n * t^m * P` a polynomial.
///
/// Fails when the denominator of `P` has a factor coprime to both `q` and `t`;
/// the error reports that factor.
pub fn pole_clear(p: &RatFn, q: &Poly) -> Result<PoleClearing, ArithError> {
    if q.is_zero() {
        return Err(ArithError::DivisionByZero);
    }
    let zero = Rational::zero();
    let (den_t_order, mut rest) = p.den.split_root(&zero).expect("denominator is nonzero");
    let (q_t_order, q_rest) = q.split_root(&zero).expect("q is nonzero");
    let mut n = 0u32;
    while rest.degree().unwrap_or(0) > 0 {
        let g = rest.gcd(&q_rest);
        if g.degree().unwrap_or(0) == 0 {
            return Err(ArithError::NotClearable {
                factor: rest.to_string(),
            });
        }
        rest = rest.div_exact(&g).expect("gcd divides");
        n += 1;
    }
    let m = (den_t_order as i64 - (n as i64) * (q_t_order as i64)).max(0) as u32;
    let cleared = (&(&q.pow(n) * &Poly::t().pow(m)) * &p.num)
        .div_exact(&p.den)
        .expect("clearing factor is a multiple of the denominator");
    Ok(PoleClearing { n, m, cleared })
}

impl From<Poly> for RatFn {
    fn from(p: Poly) -> Self {
        RatFn {
            num: p,
            den: Poly::one(),
        }
    }
}

impl From<Rational> for RatFn {
    fn from(c: Rational) -> Self {
        RatFn::constant(c)
    }
}

impl From<i64> for RatFn {
    fn from(n: i64) -> Self {
        RatFn::constant(Rational::from(n))
    }
}

impl Add<&RatFn> for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.den == rhs.den {
            return RatFn::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero den");
        }
        RatFn::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero den")
    }
}

impl Sub<&RatFn> for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Mul<&RatFn> for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RatFn::from(&self.num * &rhs.num);
        }
        RatFn::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero den")
    }
}

impl Div<&RatFn> for &RatFn {
    type Output = RatFn;
    /// Panics on a zero divisor; see [`RatFn::checked_div`].
    fn div(self, rhs: &RatFn) -> RatFn {
        self.checked_div(rhs).expect("rational function division by zero")
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<RatFn> for RatFn {
            type Output = RatFn;
            fn $method(self, rhs: RatFn) -> RatFn {
                <&RatFn as $trait<&RatFn>>::$method(&self, &rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| {
            let text = p.to_string();
            if p.terms().count() > 1 || text.contains('/') {
                format!("({text})")
            } else {
                text
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({self})")
    }
}

#[derive(Deserialize)]
struct RawRatFn {
    num: Poly,
    den: Poly,
}

impl<'de> Deserialize<'de> for RatFn {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawRatFn::deserialize(deserializer)?;
        RatFn::new(raw.num, raw.den).map_err(serde::de::Error::custom)
    }
}

impl Field for RatFn {
    fn zero() -> Self {
        RatFn::zero()
    }
    fn one() -> Self {
        RatFn::one()
    }
    fn is_zero(&self) -> bool {
        RatFn::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        self.inverse().ok()
    }
    fn from_rational(r: &Rational) -> Self {
        RatFn::constant(r.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFn {
        RatFn::new(p(n), p(d)).unwrap()
    }

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn arithmetic_examples() {
        // 1/(1-t) + 1/(1+t) = 2/(1-t^2)
        let sum = &rf(&[1], &[1, -1]) + &rf(&[1], &[1, 1]);
        assert_eq!(sum, rf(&[2], &[1, 0, -1]));
        assert_eq!(&RatFn::from(p(&[1, 1])) * &RatFn::from(p(&[1, -1])), RatFn::from(p(&[1, 0, -1])));
        // (1 - t^2)/(1 + t) reduces to 1 - t; multiplying back recovers the input
        let r = rf(&[1, 0, -1], &[1, 1]);
        assert_eq!(r, RatFn::from(p(&[1, -1])));
        assert_eq!(&r * &RatFn::from(p(&[1, 1])), RatFn::from(p(&[1, 0, -1])));
    }

    #[test]
    fn canonical_denominator_is_monic() {
        let r = rf(&[2], &[0, -4]);
        assert_eq!(r.den(), &p(&[0, 1]));
        assert_eq!(r.num(), &Poly::constant(Rational::new(-1, 2).unwrap()));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(RatFn::new(p(&[1]), Poly::zero()), Err(ArithError::DivisionByZero));
        assert_eq!(RatFn::one().checked_div(&RatFn::zero()), Err(ArithError::DivisionByZero));
        assert!(RatFn::zero().inverse().is_err());
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(RatFn::from(p(&[1, 2, 1])).valuation(&q(-1)), Valuation::Finite(2));
        assert_eq!(rf(&[1], &[1, 1]).valuation(&q(-1)), Valuation::Finite(-1));
        assert_eq!(rf(&[1, 0, -1], &[1, 1]).valuation(&q(-1)), Valuation::Finite(0));
        assert_eq!(rf(&[1, 0, -1], &[1]).valuation(&q(-1)), Valuation::Finite(1));
        assert_eq!(RatFn::zero().valuation(&q(3)), Valuation::Infinite);
    }

    #[test]
    fn critical_value_examples() {
        assert_eq!(RatFn::zero().critical_value(&q(-1)), q(0));
        assert_eq!(RatFn::from(p(&[1, 0, 1])).critical_value(&q(1)), q(2));
        assert_eq!(rf(&[1, 0, -1], &[1, 1]).critical_value(&q(-1)), q(2));
        // pole: 1/(1+t)^2 * 3 -> 3
        assert_eq!(rf(&[3], &[1, 2, 1]).critical_value(&q(-1)), q(3));
    }

    #[test]
    fn critical_value_is_not_additive() {
        let a = q(-1);
        // 1 and t: sum 1 + t has critical value 1, the parts give 1 - 1 = 0
        let pp = RatFn::one();
        let qq = RatFn::t();
        let lhs = (&pp + &qq).critical_value(&a);
        let rhs = &pp.critical_value(&a) + &qq.critical_value(&a);
        assert_eq!((lhs.clone(), rhs.clone()), (q(1), q(0)));
        assert_ne!(lhs, rhs);

        // 1 + t and -t - t^2 vanish to the same order, so here the values do add
        let pp = RatFn::from(p(&[1, 1]));
        let qq = RatFn::from(p(&[0, -1, -1]));
        assert_eq!(pp.critical_value(&a), q(1));
        assert_eq!(qq.critical_value(&a), q(1));
        assert_eq!((&pp + &qq).critical_value(&a), q(2));
    }

    #[test]
    fn pole_clear_examples() {
        let q2 = Poly::one_minus_t_pow(2);
        let c = pole_clear(&rf(&[1], &[1, 0, -1]), &q2).unwrap();
        assert_eq!((c.n, c.m, c.cleared), (1, 0, Poly::one()));
        let c = pole_clear(&rf(&[1, 1], &[0, 1]), &q2).unwrap();
        assert_eq!((c.n, c.m, c.cleared), (0, 1, p(&[1, 1])));
        let c = pole_clear(&rf(&[0, 0, 3], &[1, 0, -2, 0, 1]), &q2).unwrap();
        assert_eq!((c.n, c.m, c.cleared.clone()), (2, 0, p(&[0, 0, 3])));
        // multiply back
        let back = &RatFn::from(c.cleared) / &RatFn::from(q2.pow(2));
        assert_eq!(back, rf(&[0, 0, 3], &[1, 0, -2, 0, 1]));
    }

    #[test]
    fn over_power_matches_generic_reduction() {
        let q2 = Poly::one_minus_t_pow(2);
        for num in [p(&[1]), p(&[1, -1]), p(&[1, 0, -1]).pow(3), &p(&[1, 1]).pow(5) * &p(&[2, 0, 1]), p(&[0, 3, 0, -3])] {
            for n in 0..5 {
                let expected = RatFn::new(num.clone(), q2.pow(n)).unwrap();
                assert_eq!(RatFn::over_power(num.clone(), &q2, n).unwrap(), expected, "{num} / q^{n}");
            }
        }
        assert_eq!(RatFn::over_power(Poly::zero(), &q2, 3).unwrap(), RatFn::zero());
    }

    #[test]
    fn pole_clear_half_factor() {
        // 1/(1-t)^3 needs (1-t^2)^3
        let c = pole_clear(&rf(&[1], &[1, -1]).pow(3).unwrap(), &Poly::one_minus_t_pow(2)).unwrap();
        assert_eq!(c.n, 3);
        assert_eq!(c.cleared, p(&[1, 1]).pow(3));
    }

    #[test]
    fn pole_clear_rejects_foreign_factor() {
        let bad = rf(&[1], &[1, 0, 1]).checked_div(&RatFn::from(p(&[1, 1]))).unwrap();
        match pole_clear(&bad, &Poly::one_minus_t_pow(2)) {
            Err(ArithError::NotClearable { factor }) => assert_eq!(factor, "1 + t^2"),
            other => panic!("unexpected {other:?}"),
        }
    }
}

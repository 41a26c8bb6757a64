use std::sync::Arc;

use super::{CohClass, CohError, CohRing};
use crate::exactnum::{Poly, RatFn, Rational};

/// Split (possibly virtual) bundle `⊕ L_α − ⊕ L_β` given by its Chern roots.
///
/// Two-term complexes `E_0 → E_1` enter as the virtual bundle `E_0 − E_1`.
#[derive(Clone, PartialEq)]
pub struct SplitBundle {
    ring: Arc<CohRing>,
    positive: Vec<CohClass<Rational>>,
    negative: Vec<CohClass<Rational>>,
}

impl std::fmt::Debug for SplitBundle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |v: &[CohClass<Rational>]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        f.debug_struct("SplitBundle")
            .field("positive", &show(&self.positive))
            .field("negative", &show(&self.negative))
            .finish()
    }
}

/// Coefficients of `x / (1 - e^{-x})` up to `x^{n-1}`: `1, 1/2, 1/12, 0, -1/720, ..`.
pub fn todd_series(n: usize) -> Vec<Rational> {
    invert_series(&inverse_todd_series(n))
}

// (1 - e^{-x}) / x = Σ (-1)^k x^k / (k+1)!
fn inverse_todd_series(n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n);
    let mut fact = Rational::one();
    for k in 0..n {
        fact = &fact * &Rational::from(k as i64 + 1);
        let c = fact.recip().expect("nonzero");
        out.push(if k % 2 == 0 { c } else { -c });
    }
    out
}

fn invert_series(a: &[Rational]) -> Vec<Rational> {
    let a0_inv = a[0].recip().expect("unit constant term");
    let mut out: Vec<Rational> = Vec::with_capacity(a.len());
    for k in 0..a.len() {
        let mut acc = if k == 0 { Rational::one() } else { Rational::zero() };
        for i in 1..=k {
            acc = &acc - &(&a[i] * &out[k - i]);
        }
        out.push(&acc * &a0_inv);
    }
    out
}

impl SplitBundle {
    pub fn new(
        ring: &Arc<CohRing>,
        positive: Vec<CohClass<Rational>>,
        negative: Vec<CohClass<Rational>>,
    ) -> Result<Self, CohError> {
        for root in positive.iter().chain(&negative) {
            if !Arc::ptr_eq(root.ring(), ring) && **root.ring() != **ring {
                return Err(CohError::RingMismatch);
            }
            if !root.is_homogeneous(2) {
                return Err(CohError::NotDegreeTwo(root.to_string()));
            }
        }
        Ok(SplitBundle {
            ring: ring.clone(),
            positive,
            negative,
        })
    }

    pub fn trivial(ring: &Arc<CohRing>, rank: usize) -> Self {
        SplitBundle {
            ring: ring.clone(),
            positive: vec![CohClass::zero(ring); rank],
            negative: Vec::new(),
        }
    }

    pub fn line(root: CohClass<Rational>) -> Result<Self, CohError> {
        let ring = root.ring().clone();
        SplitBundle::new(&ring, vec![root], Vec::new())
    }

    /// Tangent bundle of a product of projective spaces.
    ///
    /// `T_{P^1}` is the honest line bundle with root `2h`; for `n >= 2` the
    /// Euler sequence gives the virtual model `(n+1)·O(h) − O`.
    pub fn tangent(ring: &Arc<CohRing>) -> Result<Self, CohError> {
        let factors = ring.projective_factors();
        if factors.is_empty() {
            return Err(CohError::NoTangentModel);
        }
        let mut positive = Vec::new();
        let mut negative = Vec::new();
        for &(g, n) in factors {
            let h = CohClass::<Rational>::generator(ring, &ring.generators()[g].name)?;
            if n == 1 {
                positive.push(h.scale(&Rational::from(2)));
            } else {
                positive.extend(std::iter::repeat_n(h, n as usize + 1));
                negative.push(CohClass::zero(ring));
            }
        }
        SplitBundle::new(ring, positive, negative)
    }

    pub fn ring(&self) -> &Arc<CohRing> {
        &self.ring
    }

    pub fn positive_roots(&self) -> &[CohClass<Rational>] {
        &self.positive
    }

    pub fn negative_roots(&self) -> &[CohClass<Rational>] {
        &self.negative
    }

    pub fn rank(&self) -> i64 {
        self.positive.len() as i64 - self.negative.len() as i64
    }

    pub fn has_negative_roots(&self) -> bool {
        !self.negative.is_empty()
    }

    pub fn dual(&self) -> Self {
        SplitBundle {
            ring: self.ring.clone(),
            positive: self.positive.iter().map(CohClass::neg).collect(),
            negative: self.negative.iter().map(CohClass::neg).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, CohError> {
        self.same_ring(other)?;
        let mut out = self.clone();
        out.positive.extend(other.positive.iter().cloned());
        out.negative.extend(other.negative.iter().cloned());
        Ok(out)
    }

    /// Tensor product on roots: `L_a ⊗ L_b` has root `a + b`.
    pub fn tensor(&self, other: &Self) -> Result<Self, CohError> {
        self.same_ring(other)?;
        let pair = |xs: &[CohClass<Rational>], ys: &[CohClass<Rational>]| -> Vec<CohClass<Rational>> {
            xs.iter().flat_map(|x| ys.iter().map(move |y| x.add(y))).collect()
        };
        let mut positive = pair(&self.positive, &other.positive);
        positive.extend(pair(&self.negative, &other.negative));
        let mut negative = pair(&self.positive, &other.negative);
        negative.extend(pair(&self.negative, &other.positive));
        Ok(SplitBundle {
            ring: self.ring.clone(),
            positive,
            negative,
        })
    }

    fn same_ring(&self, other: &Self) -> Result<(), CohError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(CohError::RingMismatch)
        }
    }

    /// Determinant line bundle: root `Σ positive − Σ negative`.
    pub fn det(&self) -> Self {
        let zero = CohClass::zero(&self.ring);
        let root = self
            .negative
            .iter()
            .fold(self.positive.iter().fold(zero, |acc, x| acc.add(x)), |acc, y| acc.sub(y));
        SplitBundle {
            ring: self.ring.clone(),
            positive: vec![root],
            negative: Vec::new(),
        }
    }

    /// Chern character `Σ e^{x_α} − Σ e^{y_β}`.
    pub fn ch(&self) -> CohClass<Rational> {
        let mut acc = CohClass::zero(&self.ring);
        for x in &self.positive {
            acc = acc.add(&x.exp().expect("roots are nilpotent"));
        }
        for y in &self.negative {
            acc = acc.sub(&y.exp().expect("roots are nilpotent"));
        }
        acc
    }

    /// Todd class `Π x/(1 − e^{−x}) · Π (y/(1 − e^{−y}))^{-1}`.
    pub fn todd(&self) -> CohClass<Rational> {
        let n = self.ring.nilpotency_bound();
        let td = todd_series(n);
        let td_inv = inverse_todd_series(n);
        let mut acc = CohClass::one(&self.ring);
        for x in &self.positive {
            acc = acc.mul(&x.apply_series(&td).expect("roots are nilpotent"));
        }
        for y in &self.negative {
            acc = acc.mul(&y.apply_series(&td_inv).expect("roots are nilpotent"));
        }
        acc
    }

    /// Total Chern class `Π (1 + x) / Π (1 + y)`.
    pub fn total_chern(&self) -> CohClass<Rational> {
        let one = CohClass::one(&self.ring);
        let mut acc = one.clone();
        for x in &self.positive {
            acc = acc.mul(&one.add(x));
        }
        for y in &self.negative {
            acc = acc.mul(&one.add(y).inverse().expect("unit constant term"));
        }
        acc
    }

    /// `c_k(E)`, the degree-`2k` part of the total Chern class.
    pub fn chern_class(&self, k: u32) -> CohClass<Rational> {
        self.total_chern().component(2 * k)
    }

    /// Top Chern class `c_rank(E)`.
    ///
    /// Virtual root systems are accepted when they describe an actual bundle
    /// at the level of characteristic classes: rank `>= 0` and `c_k = 0` for
    /// every `k > rank`. For an honest split bundle this is the product of
    /// the roots.
    pub fn ctop(&self) -> Result<CohClass<Rational>, CohError> {
        let rank = self.rank();
        if rank < 0 {
            return Err(CohError::NotEffective("top Chern class"));
        }
        let c = self.total_chern();
        let excess = c
            .coeffs()
            .iter()
            .enumerate()
            .any(|(i, x)| !x.is_zero() && self.ring.basis_degree(i) > 2 * rank as u32);
        if excess {
            return Err(CohError::NotEffective("top Chern class"));
        }
        Ok(c.component(2 * rank as u32))
    }

    /// `[ch Λ^0 E, ch Λ^1 E, .., ch Λ^rank E]`, the coefficients of
    /// `λ_t(E) = Π (1 + e^{x} t) / Π (1 + e^{y} t)`.
    ///
    /// The quotient must be a polynomial in `t` of degree `rank`; otherwise
    /// the root system is genuinely virtual and is rejected.
    pub fn lambda_coefficients(&self) -> Result<Vec<CohClass<Rational>>, CohError> {
        if self.rank() < 0 {
            return Err(CohError::NotEffective("lambda operations"));
        }
        let one = CohClass::<Rational>::one(&self.ring);
        let mut poly: Vec<CohClass<Rational>> = vec![one];
        for x in &self.positive {
            let u = x.exp().expect("nilpotent root");
            let mut next = vec![CohClass::zero(&self.ring); poly.len() + 1];
            for (k, a) in poly.iter().enumerate() {
                next[k] = next[k].add(a);
                next[k + 1] = next[k + 1].add(&a.mul(&u));
            }
            poly = next;
        }
        for y in &self.negative {
            // divide by (1 + u t), u = e^y a unit
            let u_inv = y.neg().exp().expect("nilpotent root");
            let p = poly.len() - 1;
            if p == 0 {
                return Err(CohError::NotEffective("lambda operations"));
            }
            let mut quot = vec![CohClass::zero(&self.ring); p];
            let mut upper = CohClass::zero(&self.ring);
            for k in (1..=p).rev() {
                quot[k - 1] = poly[k].sub(&upper).mul(&u_inv);
                upper = quot[k - 1].clone();
            }
            if !poly[0].sub(&quot[0]).is_zero() {
                return Err(CohError::NotEffective("lambda operations"));
            }
            poly = quot;
        }
        debug_assert_eq!(poly.len() as i64, self.rank() + 1);
        Ok(poly)
    }

    /// `λ_t(E) = Σ_i ch(Λ^i E) t^i` as a class with polynomial coefficients.
    pub fn lambda_t(&self) -> Result<CohClass<RatFn>, CohError> {
        let coeffs = self.lambda_coefficients()?;
        Ok(polynomial_in_t(&self.ring, &coeffs))
    }

    /// `ch(λ_{-1} E) = Σ_i (−1)^i ch(Λ^i E)`.
    pub fn lambda_minus_one(&self) -> Result<CohClass<Rational>, CohError> {
        let coeffs = self.lambda_coefficients()?;
        Ok(coeffs
            .iter()
            .enumerate()
            .fold(CohClass::zero(&self.ring), |acc, (i, c)| if i % 2 == 0 { acc.add(c) } else { acc.sub(c) }))
    }

    /// Symmetric-power series `Σ_i ch(Sym^i E) t^{wi} = Π 1/(1 − e^{x} t^w)`.
    ///
    /// Each factor is inverted exactly: with `c = 1 − e^{x}` nilpotent of
    /// order `k` and `s = t^w`,
    /// `1/(1 − e^{x} s) = Σ_{i<k} (−1)^i c^i s^i (1 − s)^{k−1−i} / (1 − s)^k`.
    /// Numerators are multiplied with polynomial coefficients and the common
    /// denominator is divided out once at the end.
    pub fn sym_series(&self, w: u32) -> Result<CohClass<RatFn>, CohError> {
        // effectivity gate shared with the lambda operations
        self.lambda_coefficients()?;
        let ring = &self.ring;
        let one = CohClass::<Rational>::one(ring);
        let q = Poly::one_minus_t_pow(w as usize);
        let with_poly = |c: &CohClass<Rational>, p: &Poly| c.map(|r| RatFn::from(p.scale(r)));
        let mut num = CohClass::<RatFn>::one(ring);
        let mut den_exp = 0u32;
        for x in &self.positive {
            let c = one.sub(&x.exp().expect("nilpotent root"));
            let mut powers = vec![one.clone()];
            loop {
                let next = powers.last().expect("nonempty").mul(&c);
                if next.is_zero() {
                    break;
                }
                powers.push(next);
            }
            let k = powers.len();
            let mut factor = CohClass::<RatFn>::zero(ring);
            for (i, ci) in powers.iter().enumerate() {
                let sign = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
                let p = &Poly::monomial(sign, w as usize * i) * &q.pow((k - 1 - i) as u32);
                factor = factor.add(&with_poly(ci, &p));
            }
            num = num.mul(&factor);
            den_exp += k as u32;
        }
        let tw = Poly::monomial(Rational::one(), w as usize);
        for y in &self.negative {
            // multiply by 1 − e^{y} t^w
            let e = y.exp().expect("nilpotent root");
            num = num.mul(&CohClass::one(ring).sub(&with_poly(&e, &tw)));
        }
        Ok(num.map(|c| {
            let p = c.as_poly().expect("numerator coefficients are polynomials").clone();
            RatFn::over_power(p, &q, den_exp).expect("nonzero denominator")
        }))
    }
}

/// `Σ_k coeffs[k] t^k` as a class with polynomial coefficients.
pub(crate) fn polynomial_in_t(ring: &Arc<CohRing>, coeffs: &[CohClass<Rational>]) -> CohClass<RatFn> {
    let mut acc = CohClass::<RatFn>::zero(ring);
    for (k, c) in coeffs.iter().enumerate() {
        let tk = RatFn::from(Poly::monomial(Rational::one(), k));
        acc = acc.add(&c.map(|r| RatFn::constant(r.clone())).scale(&tk));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn ring(n: u32) -> Arc<CohRing> {
        Arc::new(CohRing::projective(n).unwrap())
    }

    fn h(r: &Arc<CohRing>, k: i64) -> CohClass<Rational> {
        CohClass::generator(r, "h").unwrap().scale(&Rational::from(k))
    }

    fn class(r: &Arc<CohRing>, c: &[Rational]) -> CohClass<Rational> {
        CohClass::from_coeffs(r, c.to_vec()).unwrap()
    }

    #[test]
    fn todd_series_values() {
        let td = todd_series(6);
        assert_eq!(td, vec![q(1, 1), q(1, 2), q(1, 12), q(0, 1), q(-1, 720), q(0, 1)]);
    }

    #[test]
    fn ch_examples() {
        let p1 = ring(1);
        assert_eq!(SplitBundle::trivial(&p1, 3).ch(), class(&p1, &[q(3, 1), q(0, 1)]));
        assert_eq!(SplitBundle::line(h(&p1, 1)).unwrap().ch(), class(&p1, &[q(1, 1), q(1, 1)]));
        let p2 = ring(2);
        let e = SplitBundle::new(&p2, vec![h(&p2, 1), h(&p2, -1)], vec![]).unwrap();
        assert_eq!(e.ch(), class(&p2, &[q(2, 1), q(0, 1), q(1, 1)]));
    }

    #[test]
    fn todd_examples() {
        let p1 = ring(1);
        assert_eq!(SplitBundle::trivial(&p1, 2).todd(), CohClass::one(&p1));
        let t = SplitBundle::tangent(&p1).unwrap();
        assert_eq!(t.todd(), class(&p1, &[q(1, 1), q(1, 1)]));
        let p2 = ring(2);
        let td = SplitBundle::line(h(&p2, 1)).unwrap().todd();
        assert_eq!(td, class(&p2, &[q(1, 1), q(1, 2), q(1, 12)]));
        // (1 - e^{-h})/h * td == 1
        let inv = h(&p2, 1).apply_series(&inverse_todd_series(3)).unwrap();
        assert_eq!(inv.mul(&td), CohClass::one(&p2));
    }

    #[test]
    fn ctop_examples() {
        let p1 = ring(1);
        assert_eq!(SplitBundle::tangent(&p1).unwrap().ctop().unwrap(), h(&p1, 2));
        let p2 = ring(2);
        let t2 = SplitBundle::tangent(&p2).unwrap();
        assert_eq!(t2.rank(), 2);
        assert_eq!(t2.ctop().unwrap(), h(&p2, 1).pow(2).scale(&q(3, 1)));
        assert_eq!(SplitBundle::trivial(&p2, 0).ctop().unwrap(), CohClass::one(&p2));
        // O - O(h) is genuinely virtual
        let bad = SplitBundle::new(&p2, vec![CohClass::zero(&p2)], vec![h(&p2, 1)]).unwrap();
        assert_eq!(bad.ctop().unwrap_err(), CohError::NotEffective("top Chern class"));
    }

    #[test]
    fn lambda_examples() {
        let p1 = ring(1);
        let triv = SplitBundle::trivial(&p1, 1);
        let t = RatFn::t();
        let lam = triv.lambda_t().unwrap();
        assert_eq!(lam, CohClass::scalar(&p1, &RatFn::one() + &t));
        // O(1)^vee: 1 + (1 - h) t
        let o1_dual = SplitBundle::line(h(&p1, 1)).unwrap().dual();
        let lam = o1_dual.lambda_t().unwrap();
        let expected = CohClass::scalar(&p1, &RatFn::one() + &t)
            .sub(&CohClass::generator(&p1, "h").unwrap().scale(&t));
        assert_eq!(lam, expected);
        // λ_{-1}(T^vee) = 2h on P^1
        let tv = SplitBundle::tangent(&p1).unwrap().dual();
        assert_eq!(tv.lambda_minus_one().unwrap(), h(&p1, 2));
    }

    #[test]
    fn lambda_of_virtual_tangent_is_polynomial() {
        let p2 = ring(2);
        let coeffs = SplitBundle::tangent(&p2).unwrap().lambda_coefficients().unwrap();
        assert_eq!(coeffs.len(), 3);
        assert_eq!(coeffs[1], SplitBundle::tangent(&p2).unwrap().ch());
        let bad = SplitBundle::new(&p2, vec![], vec![h(&p2, 1)]).unwrap();
        assert!(bad.lambda_coefficients().is_err());
    }

    #[test]
    fn sym_series_examples() {
        let p1 = ring(1);
        let d = RatFn::from(Poly::one_minus_t_pow(2));
        let s = SplitBundle::trivial(&p1, 1).sym_series(2).unwrap();
        assert_eq!(s, CohClass::scalar(&p1, d.inverse().unwrap()));
        let s2 = SplitBundle::trivial(&p1, 2).sym_series(2).unwrap();
        assert_eq!(s2, CohClass::scalar(&p1, d.pow(-2).unwrap()));
        // root -h: 1/(1-t^2) - h t^2/(1-t^2)^2
        let s = SplitBundle::line(h(&p1, -1)).unwrap().sym_series(2).unwrap();
        let t2 = RatFn::from(Poly::monomial(Rational::one(), 2));
        let expected = CohClass::scalar(&p1, d.inverse().unwrap())
            .sub(&CohClass::generator(&p1, "h").unwrap().scale(&(&t2 / &(&d * &d))));
        assert_eq!(s, expected);
    }

    #[test]
    fn det_and_dual() {
        let p1 = ring(1);
        let e = SplitBundle::new(&p1, vec![h(&p1, 1), h(&p1, 1)], vec![]).unwrap();
        assert_eq!(e.det().positive_roots(), &[h(&p1, 2)]);
        assert_eq!(SplitBundle::trivial(&p1, 3).det().positive_roots(), &[CohClass::zero(&p1)]);
        assert_eq!(e.dual().dual(), e);
    }

    #[test]
    fn roots_must_have_degree_two() {
        let p2 = ring(2);
        let bad = CohClass::generator(&p2, "h").unwrap().pow(2);
        assert!(matches!(SplitBundle::line(bad), Err(CohError::NotDegreeTwo(_))));
        let one = CohClass::one(&p2);
        assert!(matches!(SplitBundle::line(one), Err(CohError::NotDegreeTwo(_))));
    }
}

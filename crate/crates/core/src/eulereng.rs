//! Euler series, global Euler series and reduced Euler numbers of sections of
//! split bundles, plus the rationality check for symmetric-power series.
//!
//! Sign convention: the refined class of the zero section already carries the
//! global `(−1)^d`, so that `eu_series(E, 0)` at `t = −1` equals
//! `c_top(E) ∩ [X]`. Every number produced here is pinned by that identity.

use std::sync::Arc;

use rayon::prelude::*;

use crate::cohring::{CohClass, CohError, CohRing, SplitBundle};
use crate::exactnum::{pole_clear, ArithError, Field, Poly, RatFn, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EulerError {
    #[error(transparent)]
    Coh(#[from] CohError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("simple-zero section: {0}")]
    BadSection(String),
    #[error("rationality bound violated: clearing exponent {n} exceeds {bound}")]
    BoundViolated { n: u32, bound: u32 },
}

/// A zero of a section with its multiplicity and local factor.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalZero {
    pub label: String,
    pub multiplicity: i64,
    pub factor: RatFn,
}

impl LocalZero {
    pub fn simple(label: impl Into<String>) -> Self {
        LocalZero {
            label: label.into(),
            multiplicity: 1,
            factor: RatFn::one(),
        }
    }

    /// Contribution of this zero: `multiplicity · factor`.
    pub fn contribution(&self) -> RatFn {
        self.factor.scale(&Rational::from(self.multiplicity))
    }
}

/// The section `s : O_X → E` whose zeros are being counted.
#[derive(Debug, Clone, PartialEq)]
pub enum SectionData {
    ZeroSection,
    /// Isolated zeros, each with a user-supplied local factor (default 1).
    SimpleZeros(Vec<LocalZero>),
}

impl SectionData {
    pub fn simple_zeros(zeros: Vec<LocalZero>) -> Result<Self, EulerError> {
        for (i, z) in zeros.iter().enumerate() {
            if z.multiplicity == 0 {
                return Err(EulerError::BadSection(format!("zero {} has multiplicity 0", z.label)));
            }
            if zeros[..i].iter().any(|o| o.label == z.label) {
                return Err(EulerError::BadSection(format!("duplicate zero label {}", z.label)));
            }
        }
        Ok(SectionData::SimpleZeros(zeros))
    }
}

/// Pre-integration Euler series `Eu_E(s; t)` as a class with coefficients in `ℚ(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerSeriesClass {
    pub ring: Arc<CohRing>,
    pub class: CohClass<RatFn>,
    pub rank: i64,
    /// Per-zero contributions for localized sections, empty otherwise.
    pub local: Vec<(String, RatFn)>,
}

/// Refined Euler class of the zero section:
/// `(−1)^d Σ_j ch(Λ^{d−j} E^∨) t^j`, a polynomial in `t`.
pub fn eu_refined_zero(bundle: &SplitBundle) -> Result<CohClass<RatFn>, EulerError> {
    let lambda = bundle.dual().lambda_coefficients()?;
    let d = bundle.rank() as usize;
    let sign = if d % 2 == 0 { Rational::one() } else { -Rational::one() };
    let ring = bundle.ring();
    let mut acc = CohClass::<RatFn>::zero(ring);
    for j in 0..=d {
        let tj = RatFn::from(Poly::monomial(sign.clone(), j));
        acc = acc.add(&lambda[d - j].map(|r| RatFn::constant(r.clone())).scale(&tj));
    }
    Ok(acc)
}

/// Smooth-case GRR transformation `τ_X(F) = ch(F) · Td(T_X) ∩ [X]`, with
/// homology identified with cohomology by Poincaré duality.
pub fn grr_tau(ch: &CohClass<Rational>) -> Result<CohClass<Rational>, EulerError> {
    let tangent = SplitBundle::tangent(ch.ring())?;
    Ok(ch.mul(&tangent.todd()))
}

/// Euler series of a section.
///
/// Zero section: `eu_refined_zero(E) · Td(E)`, the `Td(X)` of the GRR
/// transformation cancelling against `Td(X)^{-1}`. Simple zeros: the sum of
/// local contributions placed on the point class.
pub fn eu_series(ring: &Arc<CohRing>, bundle: &SplitBundle, section: &SectionData) -> Result<EulerSeriesClass, EulerError> {
    if **bundle.ring() != **ring {
        return Err(CohError::RingMismatch.into());
    }
    match section {
        SectionData::ZeroSection => {
            let refined = eu_refined_zero(bundle)?;
            let td = bundle.todd().map(|r| RatFn::constant(r.clone()));
            Ok(EulerSeriesClass {
                ring: ring.clone(),
                class: refined.mul(&td),
                rank: bundle.rank(),
                local: Vec::new(),
            })
        }
        SectionData::SimpleZeros(zeros) => {
            let point = CohClass::<RatFn>::point(ring)?;
            let local: Vec<(String, RatFn)> = zeros.iter().map(|z| (z.label.clone(), z.contribution())).collect();
            let total = local.iter().fold(RatFn::zero(), |acc, (_, c)| &acc + c);
            Ok(EulerSeriesClass {
                ring: ring.clone(),
                class: point.scale(&total),
                rank: bundle.rank(),
                local,
            })
        }
    }
}

/// Global Euler series: the pushforward to a point of [`eu_series`].
pub fn eu_global(ring: &Arc<CohRing>, bundle: &SplitBundle, section: &SectionData) -> Result<RatFn, EulerError> {
    Ok(eu_series(ring, bundle, section)?.class.integrate()?)
}

/// Reduced Euler number: critical value of the global series at `t = −1`.
pub fn eu_reduced(ring: &Arc<CohRing>, bundle: &SplitBundle, section: &SectionData) -> Result<Rational, EulerError> {
    Ok(eu_global(ring, bundle, section)?.critical_value(&-Rational::one()))
}

/// Non-reduced Euler number: value at `t = −1` of `(1 − t²)^n · Eu(s; t)` for
/// the least `n` making it a Laurent polynomial.
pub fn eu_non_reduced(global: &RatFn) -> Result<Rational, EulerError> {
    let c = pole_clear(global, &Poly::one_minus_t_pow(2))?;
    let minus_one = -Rational::one();
    let v = c.cleared.eval(&minus_one);
    Ok(if c.m % 2 == 0 { v } else { -v })
}

/// Reduced Euler numbers for many inputs, evaluated in parallel; output order
/// matches input order.
pub fn eu_reduced_batch(
    inputs: &[(Arc<CohRing>, SplitBundle, SectionData)],
) -> Vec<Result<Rational, EulerError>> {
    inputs
        .par_iter()
        .map(|(ring, bundle, section)| eu_reduced(ring, bundle, section))
        .collect()
}

/// Clearing data for a class with rational-function coefficients:
/// `q^n · t^m · class` has polynomial coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassClearing {
    pub n: u32,
    pub m: u32,
    pub cleared: CohClass<RatFn>,
}

/// Clear poles coefficientwise with the common minimal exponents.
pub fn pole_clear_class(class: &CohClass<RatFn>, q: &Poly) -> Result<ClassClearing, EulerError> {
    let mut n = 0;
    let mut m = 0;
    for c in class.coeffs() {
        let pc = pole_clear(c, q)?;
        n = n.max(pc.n);
        m = m.max(pc.m);
    }
    let factor = &q.pow(n) * &Poly::t().pow(m);
    let cleared = class.map(|c| {
        let p = (&factor * c.num()).div_exact(c.den()).expect("clearing factor is a multiple of every denominator");
        RatFn::from(p)
    });
    Ok(ClassClearing { n, m, cleared })
}

/// Result of [`sym_rationality_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct SymRationality {
    pub series: CohClass<RatFn>,
    pub n: u32,
    pub cleared: CohClass<RatFn>,
    /// `rank(E) + Σ_α (nilpotency order of c_α)`.
    pub bound: u32,
}

/// Least `n` with `(1 − t^w)^n · S_{t^w}(E)` polynomial, with the cleared class.
pub fn sym_rationality_check(bundle: &SplitBundle, w: u32) -> Result<SymRationality, EulerError> {
    let series = bundle.sym_series(w)?;
    let q = Poly::one_minus_t_pow(w as usize);
    let clearing = pole_clear_class(&series, &q)?;
    let one = CohClass::<Rational>::one(bundle.ring());
    let nil_orders: u32 = bundle
        .positive_roots()
        .iter()
        .map(|x| nilpotency_order(&one.sub(&x.exp().expect("nilpotent root"))))
        .sum();
    let bound = bundle.rank().max(0) as u32 + nil_orders;
    if clearing.n > bound {
        return Err(EulerError::BoundViolated { n: clearing.n, bound });
    }
    Ok(SymRationality {
        series,
        n: clearing.n,
        cleared: clearing.cleared,
        bound,
    })
}

/// Least `k` with `c^k = 0` (0 for the zero class).
pub fn nilpotency_order<F: Field>(c: &CohClass<F>) -> u32 {
    let mut k = 0;
    let mut p = CohClass::one(c.ring());
    while !p.is_zero() {
        p = p.mul(c);
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn ring(dims: &[u32]) -> Arc<CohRing> {
        Arc::new(CohRing::projective_product(dims).unwrap())
    }

    #[test]
    fn refined_zero_examples() {
        let pt = Arc::new(CohRing::new(vec![], None).unwrap());
        let triv = SplitBundle::trivial(&pt, 1);
        let r = eu_refined_zero(&triv).unwrap();
        assert_eq!(r, CohClass::scalar(&pt, -&(&RatFn::one() + &RatFn::t())));
        assert_eq!(r.coeff(0).eval(&-q(1)).unwrap(), q(0));
        assert_eq!(eu_refined_zero(&SplitBundle::trivial(&pt, 0)).unwrap(), CohClass::one(&pt));
    }

    #[test]
    fn refined_zero_tangent_p1() {
        // -(Λ^1 T^vee + Λ^0 T^vee t) = -(1 - 2h) - t
        let p1 = ring(&[1]);
        let r = eu_refined_zero(&SplitBundle::tangent(&p1).unwrap()).unwrap();
        assert_eq!(r.coeff(0), &RatFn::from(Poly::from_ints(&[-1, -1])));
        assert_eq!(r.coeff(1), &RatFn::from(2));
    }

    #[test]
    fn tangent_p1_zero_section() {
        let p1 = ring(&[1]);
        let t = SplitBundle::tangent(&p1).unwrap();
        let s = eu_series(&p1, &t, &SectionData::ZeroSection).unwrap();
        let at_minus_one = s.class.map(|c| RatFn::constant(c.eval(&-q(1)).unwrap()));
        assert_eq!(at_minus_one, t.ctop().unwrap().map(|r| RatFn::constant(r.clone())));
        let g = eu_global(&p1, &t, &SectionData::ZeroSection).unwrap();
        assert_eq!(g.eval(&-q(1)).unwrap(), q(2));
        assert_eq!(eu_reduced(&p1, &t, &SectionData::ZeroSection).unwrap(), q(2));
    }

    #[test]
    fn euler_numbers_of_projective_spaces() {
        for (dims, chi) in [(vec![1], 2), (vec![2], 3), (vec![3], 4), (vec![4], 5), (vec![1, 1], 4), (vec![1, 2], 6)] {
            let r = ring(&dims);
            let t = SplitBundle::tangent(&r).unwrap();
            assert_eq!(eu_reduced(&r, &t, &SectionData::ZeroSection).unwrap(), q(chi), "{dims:?}");
        }
    }

    #[test]
    fn trivial_line_has_zero_global_series() {
        let p1 = ring(&[1]);
        let triv = SplitBundle::trivial(&p1, 1);
        assert!(eu_global(&p1, &triv, &SectionData::ZeroSection).unwrap().is_zero());
        assert_eq!(eu_reduced(&p1, &triv, &SectionData::ZeroSection).unwrap(), q(0));
    }

    #[test]
    fn rank_zero_gives_fundamental_class() {
        let p2 = ring(&[2]);
        let s = eu_series(&p2, &SplitBundle::trivial(&p2, 0), &SectionData::ZeroSection).unwrap();
        assert_eq!(s.class, CohClass::one(&p2));
    }

    #[test]
    fn simple_zeros_on_p1() {
        let p1 = ring(&[1]);
        let t = SplitBundle::tangent(&p1).unwrap();
        let sec = SectionData::simple_zeros(vec![LocalZero::simple("0"), LocalZero::simple("inf")]).unwrap();
        let s = eu_series(&p1, &t, &sec).unwrap();
        assert_eq!(s.local.len(), 2);
        assert_eq!(s.class, CohClass::point(&p1).unwrap().scale(&RatFn::from(2)));
        assert_eq!(eu_global(&p1, &t, &sec).unwrap(), RatFn::from(2));
        assert!(SectionData::simple_zeros(vec![LocalZero::simple("a"), LocalZero::simple("a")]).is_err());
        let mut z = LocalZero::simple("a");
        z.multiplicity = 0;
        assert!(SectionData::simple_zeros(vec![z]).is_err());
    }

    #[test]
    fn non_reduced_matches_value_for_laurent_polynomials() {
        let g = RatFn::from(Poly::from_ints(&[1, -1]));
        assert_eq!(eu_non_reduced(&g).unwrap(), q(2));
        // 1/(1-t^2): (1-t^2)^1 * P = 1 -> 1
        let g = RatFn::from(Poly::one_minus_t_pow(2)).inverse().unwrap();
        assert_eq!(eu_non_reduced(&g).unwrap(), q(1));
        // stacky pole rejected
        let g = RatFn::from(Poly::from_ints(&[1, 1, 1])).inverse().unwrap();
        assert!(eu_non_reduced(&g).is_err());
    }

    #[test]
    fn sym_rationality_examples() {
        let p1 = ring(&[1]);
        let r = sym_rationality_check(&SplitBundle::trivial(&p1, 1), 2).unwrap();
        assert_eq!(r.n, 1);
        assert_eq!(r.cleared, CohClass::one(&p1));
        let h = CohClass::<Rational>::generator(&p1, "h").unwrap();
        let r = sym_rationality_check(&SplitBundle::line(h.clone()).unwrap(), 2).unwrap();
        assert_eq!(r.n, 2);
        let one_minus_t2 = RatFn::from(Poly::one_minus_t_pow(2));
        let t2 = RatFn::from(Poly::monomial(Rational::one(), 2));
        // root h: c = -h, so (1-t^2) + h t^2
        let expected = CohClass::scalar(&p1, one_minus_t2).add(&h.map(|r| RatFn::constant(r.clone())).scale(&t2));
        assert_eq!(r.cleared, expected);
    }

    #[test]
    fn batch_preserves_order() {
        let inputs: Vec<_> = [vec![1], vec![2], vec![3]]
            .iter()
            .map(|d| {
                let r = ring(d);
                let t = SplitBundle::tangent(&r).unwrap();
                (r, t, SectionData::ZeroSection)
            })
            .collect();
        let out: Vec<Rational> = eu_reduced_batch(&inputs).into_iter().map(Result::unwrap).collect();
        assert_eq!(out, vec![q(2), q(3), q(4)]);
    }

    #[test]
    fn kontsevich_degeneration() {
        for dims in [vec![1], vec![2], vec![1, 2]] {
            let r = ring(&dims);
            let ch_o = SplitBundle::trivial(&r, 1).ch();
            let tau = grr_tau(&ch_o).unwrap();
            let td_inv = SplitBundle::tangent(&r).unwrap().todd().inverse().unwrap();
            assert_eq!(td_inv.mul(&tau), CohClass::one(&r));
        }
    }
}

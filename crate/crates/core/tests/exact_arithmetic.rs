use std::collections::BTreeMap;

use eulerseries::exactnum::{pole_clear, Exponent, Monoid, MonoidSeries};
use eulerseries::{Poly, RatFn, Rational};
use proptest::prelude::*;

fn poly_strategy(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-4i64..=4, 0..=max_len).prop_map(|c| Poly::from_ints(&c))
}

fn nonzero_poly(max_len: usize) -> impl Strategy<Value = Poly> {
    poly_strategy(max_len).prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfn_strategy() -> impl Strategy<Value = RatFn> {
    (poly_strategy(4), nonzero_poly(4)).prop_map(|(n, d)| RatFn::new(n, d).unwrap())
}

fn nonzero_ratfn() -> impl Strategy<Value = RatFn> {
    (nonzero_poly(4), nonzero_poly(4)).prop_map(|(n, d)| RatFn::new(n, d).unwrap())
}

fn point() -> impl Strategy<Value = Rational> {
    (-1i64..=1).prop_map(Rational::from)
}

/// Coefficients of `p(a + u)` in `u`, by binomial expansion.
fn shifted(p: &Poly, a: &Rational) -> Vec<Rational> {
    let n = p.coeffs().len();
    let mut out = vec![Rational::zero(); n];
    for (k, c) in p.coeffs().iter().enumerate() {
        let mut binom = Rational::one();
        for j in 0..=k {
            // term c * C(k, j) a^(k-j) u^j
            out[j] = &out[j] + &(&(c * &binom) * &a.pow((k - j) as i32).unwrap());
            binom = &(&binom * &Rational::from((k - j) as i64)) / &Rational::from(j as i64 + 1);
        }
    }
    out
}

fn lowest(v: &[Rational]) -> Option<(usize, Rational)> {
    v.iter().enumerate().find(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone()))
}

fn oracle_critical_value(f: &RatFn, a: &Rational) -> Rational {
    match lowest(&shifted(f.num(), a)) {
        None => Rational::zero(),
        Some((_, n)) => {
            let (_, d) = lowest(&shifted(f.den(), a)).unwrap();
            &n / &d
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ratfn_field_axioms(a in ratfn_strategy(), b in ratfn_strategy(), c in nonzero_ratfn()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&(&a * &c) / &c, a.clone());
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&c * &c.inverse().unwrap(), RatFn::one());
    }

    #[test]
    fn ratfn_is_canonical(a in ratfn_strategy()) {
        prop_assert!(a.den().leading().unwrap().is_one());
        prop_assert_eq!(a.num().gcd(a.den()).degree(), Some(0));
        if a.is_zero() {
            prop_assert!(a.den().is_one());
        }
    }

    #[test]
    fn poly_division_round_trip(a in poly_strategy(6), b in nonzero_poly(4)) {
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn critical_value_matches_taylor_oracle(f in ratfn_strategy(), a in point()) {
        prop_assert_eq!(f.critical_value(&a), oracle_critical_value(&f, &a));
    }

    #[test]
    fn critical_value_is_multiplicative(f in ratfn_strategy(), g in ratfn_strategy(), a in point()) {
        let lhs = (&f * &g).critical_value(&a);
        let rhs = &f.critical_value(&a) * &g.critical_value(&a);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn critical_value_is_the_value_at_regular_points(f in ratfn_strategy(), a in point()) {
        if let Some(v) = f.eval(&a) {
            if !v.is_zero() {
                prop_assert_eq!(f.critical_value(&a), v);
            }
        }
    }

    #[test]
    fn pole_clear_is_exact_and_minimal(num in poly_strategy(3), i in 0u32..3, j in 0u32..3, k in 0u32..2) {
        let q = Poly::one_minus_t_pow(2);
        let den = &(&Poly::from_ints(&[1, 1]).pow(i) * &Poly::from_ints(&[1, -1]).pow(j)) * &Poly::t().pow(k);
        let f = RatFn::new(num, den).unwrap();
        let c = pole_clear(&f, &q).unwrap();
        let back = &(&RatFn::from(q.pow(c.n)) * &RatFn::from(Poly::t().pow(c.m))) * &f;
        prop_assert_eq!(back, RatFn::from(c.cleared.clone()));
        if c.n > 0 {
            let less = &RatFn::from(&q.pow(c.n - 1) * &Poly::t().pow(c.m + 8)) * &f;
            prop_assert!(!less.is_polynomial());
        }
        if c.m > 0 {
            let less = &RatFn::from(&q.pow(c.n) * &Poly::t().pow(c.m - 1)) * &f;
            prop_assert!(!less.is_polynomial());
        }
    }
}

const BOUND: u64 = 6;

fn monoid() -> Monoid {
    Monoid::new(vec![1, 2]).unwrap()
}

fn series_strategy(with_constant: bool) -> impl Strategy<Value = MonoidSeries<Rational>> {
    let elems: Vec<Exponent> = monoid().elements_up_to(BOUND);
    prop::collection::vec((0..elems.len(), -3i64..=3, 1i64..=3), 0..6).prop_map(move |terms| {
        let terms = terms
            .into_iter()
            .filter(|(i, _, _)| with_constant || elems[*i].iter().any(|&e| e > 0))
            .map(|(i, p, q)| (elems[i].clone(), Rational::new(p, q).unwrap()));
        MonoidSeries::from_terms(monoid(), BOUND, terms).unwrap()
    })
}

type Table = BTreeMap<Exponent, Rational>;

fn table(s: &MonoidSeries<Rational>) -> Table {
    s.terms().map(|(k, v)| (k.clone(), v.clone())).collect()
}

fn degree(b: &[u32]) -> u64 {
    b[0] as u64 + 2 * b[1] as u64
}

/// Straight double-loop convolution, truncated.
fn convolve(a: &Table, b: &Table) -> Table {
    let mut out = Table::new();
    for (x, cx) in a {
        for (y, cy) in b {
            let z: Exponent = x.iter().zip(y).map(|(p, q)| p + q).collect();
            if degree(&z) > BOUND {
                continue;
            }
            let v = out.remove(&z).unwrap_or_else(Rational::zero);
            let v = &v + &(cx * cy);
            if !v.is_zero() {
                out.insert(z, v);
            }
        }
    }
    out
}

/// `Σ_{k ≤ D} S^k / k!` term by term.
fn exp_oracle(s: &Table) -> Table {
    let mut result: Table = [(vec![0, 0], Rational::one())].into();
    let mut power = result.clone();
    let mut fact = Rational::one();
    for k in 1..=BOUND as i64 {
        power = convolve(&power, s);
        fact = &fact * &Rational::from(k);
        for (z, c) in &power {
            let v = result.remove(z).unwrap_or_else(Rational::zero);
            let v = &v + &(c / &fact);
            if !v.is_zero() {
                result.insert(z.clone(), v);
            }
        }
    }
    result
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn series_product_matches_convolution(a in series_strategy(true), b in series_strategy(true)) {
        prop_assert_eq!(table(&a.mul(&b).unwrap()), convolve(&table(&a), &table(&b)));
    }

    #[test]
    fn series_ring_laws(a in series_strategy(true), b in series_strategy(true), c in series_strategy(true)) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        let one = MonoidSeries::one(monoid(), BOUND);
        prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
        prop_assert_eq!(a.add(&b).unwrap().sub(&b).unwrap(), a);
    }

    #[test]
    fn exp_matches_oracle(s in series_strategy(false)) {
        prop_assert_eq!(table(&s.exp().unwrap()), exp_oracle(&table(&s)));
    }

    #[test]
    fn exp_is_a_homomorphism(a in series_strategy(false), b in series_strategy(false)) {
        let lhs = a.exp().unwrap().mul(&b.exp().unwrap()).unwrap();
        prop_assert_eq!(lhs, a.add(&b).unwrap().exp().unwrap());
        let inv = a.exp().unwrap().mul(&a.neg().exp().unwrap()).unwrap();
        prop_assert_eq!(inv, MonoidSeries::one(monoid(), BOUND));
    }
}

#[test]
fn exp_rejects_constant_term() {
    let s = MonoidSeries::from_terms(monoid(), BOUND, [(vec![0, 0], Rational::one())]).unwrap();
    assert!(s.exp().is_err());
}

//! Built-in invariant suites, each comparing the engine against an
//! independent route.

use std::collections::BTreeMap;
use std::sync::Arc;

use eulerseries::cohring::{CohClass, CohRing, SplitBundle};
use eulerseries::eulereng::{eu_reduced, sym_rationality_check, SectionData};
use eulerseries::exactnum::{Exponent, Matrix, Monoid, MonoidSeries, Tensor3};
use eulerseries::gradedmod::{hilbert_brute_force, hilbert_from_betti, koszul_resolution, GradedPolyRing, Monomial};
use eulerseries::trajcalc::{
    assemble_d, d_square_relation, product_field_zeros, specialize, splitting_check, zeta, SpecializeMode, TrajDataset,
    ZeroSet,
};
use eulerseries::{Poly, RatFn, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub const SUITES: &[&str] = &[
    "p1-example",
    "borel-serre",
    "euler-numbers",
    "sym-rationality",
    "critical-value",
    "hilbert-koszul",
    "splitting",
    "zeta",
];

pub const DEFAULT_SEED: u64 = 20_240_229;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failed: usize,
    /// The first few failures, in case order.
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.failed == 0 && self.cases > 0
    }

    fn from_results(name: &str, results: Vec<Result<(), String>>) -> Self {
        let failures: Vec<String> = results.iter().filter_map(|r| r.clone().err()).collect();
        SuiteReport {
            name: name.to_string(),
            cases: results.len(),
            failed: failures.len(),
            failures: failures.into_iter().take(10).collect(),
        }
    }
}

pub fn run_suite(name: &str, seed: u64) -> Option<SuiteReport> {
    let results = match name {
        "p1-example" => p1_example(),
        "borel-serre" => borel_serre(),
        "euler-numbers" => euler_numbers(),
        "sym-rationality" => sym_rationality(),
        "critical-value" => critical_values(seed, 1000),
        "hilbert-koszul" => hilbert_koszul(seed, 50),
        "splitting" => splitting(seed, 20),
        "zeta" => zeta_suite(seed, 20),
        _ => return None,
    };
    Some(SuiteReport::from_results(name, results))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Zeros `{0, ∞}` of `z∂_z` on P¹: the product field gives the all-ones
/// differential, which satisfies `d² = 2d`.
pub fn p1_example() -> Vec<Result<(), String>> {
    let run = || -> Result<(), String> {
        let zeros = ZeroSet::new(vec!["0".into(), "inf".into()]).map_err(|e| e.to_string())?;
        let class = vec![1];
        let records = product_field_zeros(&zeros, &class);
        ensure(records.len() == 4, || format!("{} records, expected 4", records.len()))?;
        let d = assemble_d(&zeros, &records, &class).map_err(|e| e.to_string())?;
        let d1 = specialize(&d, &-Rational::one(), SpecializeMode::Plain).map_err(|e| e.to_string())?;
        let ones = Matrix::from_rows(vec![vec![Rational::one(); 2]; 2]).unwrap();
        ensure(d1 == ones, || format!("d1 = {d1}"))?;
        let relation = Poly::from_ints(&[0, -2, 1]);
        let report = d_square_relation(&d1, Some(&relation)).map_err(|e| e.to_string())?;
        ensure(report.holds == Some(true), || format!("d1^2 = {}", report.square))?;
        // direct entrywise square
        for i in 0..2 {
            for j in 0..2 {
                let s = (0..2).fold(Rational::zero(), |acc, k| &acc + &(d1.get(i, k) * d1.get(k, j)));
                ensure(s == Rational::from(2) * d1.get(i, j).clone(), || format!("entry ({i},{j}) of d1^2 is {s}"))?;
            }
        }
        Ok(())
    };
    vec![run()]
}

/// Spaces of the characteristic-class suites, as projective factor dimensions.
pub const SPACES: &[&[u32]] = &[&[1], &[2], &[3], &[4], &[1, 1], &[1, 2]];

/// Every multiset of 1..=3 roots with coefficients in [-3, 3] per generator.
pub fn suite_bundles() -> Vec<(usize, Vec<Vec<i64>>)> {
    let mut out = Vec::new();
    for (s, dims) in SPACES.iter().enumerate() {
        let k = dims.len();
        let mut roots: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..k {
            roots = roots
                .into_iter()
                .flat_map(|r| {
                    (-3..=3).map(move |a| {
                        let mut r = r.clone();
                        r.push(a);
                        r
                    })
                })
                .collect();
        }
        let m = roots.len();
        for i in 0..m {
            out.push((s, vec![roots[i].clone()]));
            for j in i..m {
                out.push((s, vec![roots[i].clone(), roots[j].clone()]));
                for l in j..m {
                    out.push((s, vec![roots[i].clone(), roots[j].clone(), roots[l].clone()]));
                }
            }
        }
    }
    out
}

pub fn space_ring(dims: &[u32]) -> Arc<CohRing> {
    Arc::new(CohRing::projective_product(dims).expect("valid dimensions"))
}

fn rings() -> Vec<Arc<CohRing>> {
    SPACES.iter().map(|d| space_ring(d)).collect()
}

pub fn root_class(ring: &Arc<CohRing>, coeffs: &[i64]) -> CohClass<Rational> {
    let names: Vec<String> = ring.generators().iter().map(|g| g.name.clone()).collect();
    let terms: Vec<(&str, Rational)> = names.iter().map(String::as_str).zip(coeffs.iter().map(|&c| Rational::from(c))).collect();
    CohClass::linear(ring, &terms).expect("generator names come from the ring")
}

fn suite_bundle(ring: &Arc<CohRing>, roots: &[Vec<i64>]) -> SplitBundle {
    SplitBundle::new(ring, roots.iter().map(|r| root_class(ring, r)).collect(), Vec::new()).expect("degree-two roots")
}

/// `∫ Π_i (Σ_g a_{ig} h_g)` by expanding the product of integer linear forms.
pub fn integral_of_roots(dims: &[u32], roots: &[Vec<i64>]) -> i64 {
    let mut poly: BTreeMap<Vec<u32>, i64> = [(vec![0; dims.len()], 1)].into();
    for form in roots {
        let mut next = BTreeMap::new();
        for (m, c) in &poly {
            for (g, &a) in form.iter().enumerate() {
                if a == 0 || m[g] == dims[g] {
                    continue;
                }
                let mut m2 = m.clone();
                m2[g] += 1;
                *next.entry(m2).or_insert(0) += c * a;
            }
        }
        poly = next;
    }
    poly.get(dims).copied().unwrap_or(0)
}

/// `ch(λ_{-1}(E^∨))·Td(E) = c_top(E)`, with `c_top` also compared to the plain
/// product of roots and its degree against the integer expansion.
pub fn borel_serre() -> Vec<Result<(), String>> {
    let rings = rings();
    suite_bundles()
        .par_iter()
        .map(|(s, roots)| {
            let ring = &rings[*s];
            let e = suite_bundle(ring, roots);
            let label = || format!("{:?} roots {roots:?}", SPACES[*s]);
            let ctop = e.ctop().map_err(|err| format!("{}: {err}", label()))?;
            let lhs = e.dual().lambda_minus_one().map_err(|err| format!("{}: {err}", label()))?.mul(&e.todd());
            ensure(lhs == ctop, || format!("{}: ch(lambda_-1(E^v)) Td(E) = {lhs}, c_top = {ctop}", label()))?;
            let product = e.positive_roots().iter().fold(CohClass::one(ring), |acc, x| acc.mul(x));
            ensure(product == ctop, || format!("{}: product of roots {product} differs from c_top {ctop}", label()))?;
            let dim: u32 = SPACES[*s].iter().sum();
            let expected = if roots.len() as u32 == dim { integral_of_roots(SPACES[*s], roots) } else { 0 };
            let got = ctop.integrate().map_err(|err| err.to_string())?;
            ensure(got == Rational::from(expected), || format!("{}: integral {got}, expected {expected}", label()))
        })
        .collect()
}

/// Reduced Euler numbers of tangent bundles against classical Euler characteristics.
pub fn euler_numbers() -> Vec<Result<(), String>> {
    let cases: [(&[u32], i64); 7] = [(&[1], 2), (&[2], 3), (&[3], 4), (&[4], 5), (&[1, 1], 4), (&[1, 2], 6), (&[2, 2], 9)];
    cases
        .par_iter()
        .map(|(dims, chi)| {
            let ring = space_ring(dims);
            let t = SplitBundle::tangent(&ring).map_err(|e| e.to_string())?;
            let r = eu_reduced(&ring, &t, &SectionData::ZeroSection).map_err(|e| e.to_string())?;
            ensure(r == Rational::from(*chi), || format!("{dims:?}: reduced Euler number {r}, expected {chi}"))
        })
        .collect()
}

/// `(1 - t²)^n · S_{t²}(E)` is polynomial with `n ≤ rank·(dim X + 1)`, and
/// multiplying back reproduces the series.
pub fn sym_rationality() -> Vec<Result<(), String>> {
    let rings = rings();
    suite_bundles()
        .par_iter()
        .map(|(s, roots)| {
            let ring = &rings[*s];
            let e = suite_bundle(ring, roots);
            let label = || format!("{:?} roots {roots:?}", SPACES[*s]);
            let check = sym_rationality_check(&e, 2).map_err(|err| format!("{}: {err}", label()))?;
            let dim: u32 = SPACES[*s].iter().sum();
            let cap = roots.len() as u32 * (dim + 1);
            ensure(check.n <= cap, || format!("{}: clearing exponent {} exceeds {cap}", label(), check.n))?;
            ensure(check.cleared.coeffs().iter().all(RatFn::is_polynomial), || format!("{}: cleared class has poles", label()))?;
            // cross-multiplied: cleared * den == q^n * num, coefficientwise
            let q = Poly::one_minus_t_pow(2);
            let qn = q.pow(check.n);
            for (c, s) in check.cleared.coeffs().iter().zip(check.series.coeffs()) {
                ensure(&(c.num() * s.den()) == &(&qn * s.num()), || format!("{}: re-multiplication differs", label()))?;
            }
            if check.n > 0 {
                let less = q.pow(check.n - 1);
                let all_divide = check.series.coeffs().iter().all(|s| {
                    let (_, r) = (&less * s.num()).div_rem(s.den()).expect("nonzero denominator");
                    r.is_zero()
                });
                ensure(!all_divide, || format!("{}: exponent {} not minimal", label(), check.n))?;
            }
            Ok(())
        })
        .collect()
}

/// Random polynomial whose roots at -1, 0 and 1 are likely.
fn random_poly(rng: &mut ChaCha8Rng) -> Poly {
    let mut p = Poly::from_ints(&(0..rng.gen_range(1..=3)).map(|_| rng.gen_range(-5..=5)).collect::<Vec<i64>>());
    for root in [Poly::from_ints(&[1, 1]), Poly::from_ints(&[-1, 1]), Poly::t()] {
        p = &p * &root.pow(rng.gen_range(0..=2));
    }
    p
}

pub fn random_ratfn(rng: &mut ChaCha8Rng) -> RatFn {
    let num = if rng.gen_ratio(1, 20) { Poly::zero() } else { random_poly(rng) };
    let mut den = random_poly(rng);
    if den.is_zero() {
        den = Poly::one();
    }
    RatFn::new(num, den).expect("nonzero denominator")
}

/// Coefficients of `p(a + u)` in `u` by binomial expansion.
fn shift_poly(p: &Poly, a: &Rational) -> Vec<Rational> {
    let c = p.coeffs();
    let mut out = vec![Rational::zero(); c.len()];
    for (k, ck) in c.iter().enumerate() {
        let mut binom = Rational::one();
        for (j, slot) in out.iter_mut().enumerate().take(k + 1) {
            *slot = &*slot + &(&(ck * &binom) * &a.pow((k - j) as i32).expect("nonnegative power"));
            binom = &(&binom * &Rational::from((k - j) as i64)) / &Rational::from(j as i64 + 1);
        }
    }
    out
}

/// First nonzero Taylor coefficient via the shifted expansions of numerator and denominator.
pub fn critical_value_oracle(f: &RatFn, a: &Rational) -> Rational {
    let first = |v: Vec<Rational>| v.into_iter().find(|c| !c.is_zero());
    match first(shift_poly(f.num(), a)) {
        None => Rational::zero(),
        Some(n) => &n / &first(shift_poly(f.den(), a)).expect("nonzero denominator"),
    }
}

pub fn critical_values(seed: u64, count: usize) -> Vec<Result<(), String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(RatFn, RatFn)> = (0..count).map(|_| (random_ratfn(&mut rng), random_ratfn(&mut rng))).collect();
    pairs
        .par_iter()
        .map(|(p, q)| {
            for a in [-1i64, 0, 1].map(Rational::from) {
                let pq = p * q;
                let lhs = pq.critical_value(&a);
                let rhs = &p.critical_value(&a) * &q.critical_value(&a);
                ensure(lhs == rhs, || format!("({p})({q}) at {a}: {lhs} vs {rhs}"))?;
                for f in [p, q, &pq] {
                    let v = f.critical_value(&a);
                    let oracle = critical_value_oracle(f, &a);
                    ensure(v == oracle, || format!("{f} at {a}: {v}, Taylor oracle {oracle}"))?;
                    if let Some(x) = f.eval(&a) {
                        if !x.is_zero() {
                            ensure(v == x, || format!("{f} at {a}: critical value {v} but value {x}"))?;
                        }
                    }
                    if f.is_zero() {
                        ensure(v.is_zero(), || format!("zero has critical value {v}"))?;
                    }
                }
            }
            Ok(())
        })
        .collect()
}

/// A ring with up to four variables of weight 1, 2 or 4 and a monomial
/// sequence with pairwise disjoint supports.
pub fn random_regular_sequence(rng: &mut ChaCha8Rng) -> (GradedPolyRing, Vec<Monomial>) {
    let n = rng.gen_range(1..=4);
    let vars = (0..n).map(|i| (format!("x{i}"), [1u32, 2, 4][rng.gen_range(0..3)])).collect();
    let ring = GradedPolyRing::new(vars).expect("distinct names, positive weights");
    let owner: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=n)).collect();
    let mut seq = Vec::new();
    for slot in 0..n {
        let e: Vec<u32> = (0..n).map(|v| if owner[v] == slot { rng.gen_range(1..=3) } else { 0 }).collect();
        if e.iter().any(|&x| x > 0) {
            seq.push(Monomial::new(e));
        }
    }
    (ring, seq)
}

pub fn hilbert_koszul(seed: u64, count: usize) -> Vec<Result<(), String>> {
    const TOP: u64 = 40;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<_> = (0..count).map(|_| random_regular_sequence(&mut rng)).collect();
    cases
        .par_iter()
        .map(|(ring, seq)| {
            let betti = koszul_resolution(ring, seq).map_err(|e| e.to_string())?;
            let series = hilbert_from_betti(ring, &betti);
            let coeffs = series.coefficients(TOP as usize);
            let brute = hilbert_brute_force(ring, seq, TOP).map_err(|e| e.to_string())?;
            let brute: Vec<Rational> = brute.into_iter().map(|c| Rational::from(c as i64)).collect();
            ensure(coeffs == brute, || {
                let k = coeffs.iter().zip(&brute).position(|(a, b)| a != b).unwrap_or(0);
                format!("weights {:?} sequence {seq:?}: weight {k} gives {} vs {}", ring.vars(), coeffs[k], brute[k])
            })
        })
        .collect()
}

fn random_entry(rng: &mut ChaCha8Rng) -> RatFn {
    let coeffs: Vec<i64> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(-3..=3)).collect();
    RatFn::from(Poly::from_ints(&coeffs))
}

/// Random d, e, f tables on classes of degree at most 3.
pub fn random_traj_dataset(rng: &mut ChaCha8Rng) -> TrajDataset<RatFn> {
    let n = rng.gen_range(2..=3);
    let rank = rng.gen_range(1..=2);
    let weights: Vec<u32> = (0..rank).map(|_| rng.gen_range(1..=2)).collect();
    let monoid = Monoid::new(weights).expect("positive weights");
    let zeros = ZeroSet::new((0..n).map(|i| format!("z{i}")).collect()).expect("distinct labels");
    let mut ds = TrajDataset::new(zeros, monoid.clone());
    for beta in monoid.elements_up_to(3) {
        if rng.gen_ratio(4, 5) {
            let rows = (0..n).map(|_| (0..n).map(|_| random_entry(rng)).collect()).collect();
            ds.d.insert(beta.clone(), Matrix::from_rows(rows).expect("square"));
        }
        if rng.gen_ratio(3, 5) {
            ds.e.insert(beta.clone(), (0..n).map(|_| random_entry(rng)).collect());
        }
        if rng.gen_ratio(3, 5) {
            let nested = (0..n).map(|_| (0..n).map(|_| (0..n).map(|_| random_entry(rng)).collect()).collect()).collect();
            ds.f.insert(beta, Tensor3::from_nested(nested).expect("cubic"));
        }
    }
    ds
}

/// Straight-line evaluation of the splitting left-hand side at `beta`.
pub fn splitting_oracle(ds: &TrajDataset<RatFn>, beta: &Exponent) -> Matrix<RatFn> {
    let n = ds.zeros.len();
    let listed = ds.listed_classes();
    let mut out = vec![vec![RatFn::zero(); n]; n];
    for b1 in &listed {
        if b1.iter().zip(beta).any(|(x, y)| x > y) {
            continue;
        }
        let b2: Exponent = beta.iter().zip(b1).map(|(x, y)| x - y).collect();
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                for k in 0..n {
                    if let (Some(x), Some(y)) = (ds.d.get(b1), ds.d.get(&b2)) {
                        *cell = &*cell + &(x.get(i, k) * y.get(k, j));
                    }
                    if let (Some(e), Some(f)) = (ds.e.get(b1), ds.f.get(&b2)) {
                        *cell = &*cell + &(&e[k] * f.get(k, i, j));
                    }
                    if let (Some(f), Some(e)) = (ds.f.get(b1), ds.e.get(&b2)) {
                        *cell = &*cell + &(f.get(i, j, k) * &e[k]);
                    }
                }
            }
        }
    }
    Matrix::from_rows(out).expect("square")
}

/// Synthesize every `d_inf` up to degree 3 through the oracle.
pub fn synthesize_d_inf(ds: &mut TrajDataset<RatFn>) {
    for beta in ds.monoid.elements_up_to(3) {
        let m = splitting_oracle(ds, &beta);
        ds.d_inf.insert(beta, m);
    }
}

pub fn splitting(seed: u64, count: usize) -> Vec<Result<(), String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<_> = (0..count)
        .map(|_| {
            let mut ds = random_traj_dataset(&mut rng);
            synthesize_d_inf(&mut ds);
            let classes = ds.monoid.elements_up_to(3);
            let beta = classes[rng.gen_range(0..classes.len())].clone();
            let n = ds.zeros.len();
            (ds, beta, rng.gen_range(0..n), rng.gen_range(0..n))
        })
        .collect();
    cases
        .par_iter()
        .map(|(ds, beta, i, j)| {
            for b in ds.monoid.elements_up_to(3) {
                let r = splitting_check(ds, &b).map_err(|e| e.to_string())?;
                ensure(r.pass, || format!("class {b:?} fails on a consistent dataset: {:?}", r.diff_entries()))?;
            }
            let mut bad = ds.clone();
            let mut m = bad.d_inf[beta].clone();
            m.set(*i, *j, m.get(*i, *j) + &RatFn::one());
            bad.d_inf.insert(beta.clone(), m);
            let r = splitting_check(&bad, beta).map_err(|e| e.to_string())?;
            ensure(!r.pass, || format!("perturbation at {beta:?} ({i},{j}) not detected"))?;
            let diff = r.diff_entries();
            ensure(diff == vec![(*i, *j, RatFn::from(-1))], || format!("perturbation at {beta:?} ({i},{j}) gave diff {diff:?}"))
        })
        .collect()
}

type Table = BTreeMap<Exponent, RatFn>;

fn convolve(m: &Monoid, a: &Table, b: &Table, bound: u64) -> Table {
    let mut out = Table::new();
    for (x, cx) in a {
        for (y, cy) in b {
            let z = m.add(x, y);
            if m.degree(&z) > bound {
                continue;
            }
            let v = out.remove(&z).unwrap_or_else(RatFn::zero);
            out.insert(z, &v + &(cx * cy));
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `Σ_k S^k / k!` with `S = −Σ N_β/|β| z^β`, expanded term by term.
pub fn zeta_oracle(m: &Monoid, n: &Table, bound: u64) -> Table {
    let s: Table = n
        .iter()
        .map(|(b, v)| (b.clone(), v.scale(&Rational::new(-1, m.degree(b) as i64).expect("positive degree"))))
        .collect();
    let mut result: Table = [(m.identity(), RatFn::one())].into();
    let mut power = result.clone();
    let mut fact = Rational::one();
    for k in 1..=bound as i64 {
        power = convolve(m, &power, &s, bound);
        fact = &fact * &Rational::from(k);
        for (z, c) in &power {
            let v = result.remove(z).unwrap_or_else(RatFn::zero);
            result.insert(z.clone(), &v + &c.scale(&fact.recip().expect("nonzero factorial")));
        }
    }
    result.retain(|_, v| !v.is_zero());
    result
}

pub fn random_genus_one_totals(rng: &mut ChaCha8Rng) -> (Monoid, Table) {
    let rank = rng.gen_range(1..=2);
    let m = Monoid::new((0..rank).map(|_| rng.gen_range(1..=2)).collect()).expect("positive weights");
    let mut n = Table::new();
    for b in m.elements_up_to(6) {
        if m.degree(&b) == 0 || !rng.gen_ratio(1, 2) {
            continue;
        }
        let v = if rng.gen_ratio(1, 3) {
            RatFn::new(Poly::from_ints(&[rng.gen_range(-2..=2)]), Poly::one_minus_t_pow(2)).expect("nonzero")
        } else {
            random_entry(rng)
        };
        if !v.is_zero() {
            n.insert(b, v);
        }
    }
    (m, n)
}

pub fn zeta_suite(seed: u64, count: usize) -> Vec<Result<(), String>> {
    const D: u64 = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<_> = (0..count).map(|_| random_genus_one_totals(&mut rng)).collect();
    cases
        .par_iter()
        .map(|(m, n)| {
            let z = zeta(m, n, D).map_err(|e| e.to_string())?;
            let got: Table = z.terms().map(|(b, c)| (b.clone(), c.clone())).collect();
            let oracle = zeta_oracle(m, n, D);
            ensure(got == oracle, || format!("weights {:?}: zeta differs from the expansion oracle", m.weights()))?;
            let neg: Table = n.iter().map(|(b, v)| (b.clone(), -v)).collect();
            let inv = zeta(m, &neg, D).map_err(|e| e.to_string())?;
            let one = MonoidSeries::one(m.clone(), D);
            ensure(z.mul(&inv).map_err(|e| e.to_string())? == one, || format!("weights {:?}: exp(S) exp(-S) != 1", m.weights()))
        })
        .collect()
}

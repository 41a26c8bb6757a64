use eulerseries::gradedmod::{hilbert_brute_force, hilbert_from_betti, koszul_resolution, BettiTable, GradedPolyRing, Monomial};
use eulerseries::{RatFn, Rational};
use proptest::prelude::*;

const TOP: u64 = 40;

/// A ring with up to 4 variables of weight 1, 2 or 4 and a monomial regular
/// sequence with pairwise disjoint supports.
fn regular_case() -> impl Strategy<Value = (GradedPolyRing, Vec<Monomial>)> {
    prop::collection::vec(prop::sample::select(vec![1u32, 2, 4]), 1..=4).prop_flat_map(|weights| {
        let n = weights.len();
        (
            Just(weights),
            // owner of each variable: a sequence slot or none
            prop::collection::vec(0usize..=n, n),
            prop::collection::vec(1u32..=3, n),
        )
            .prop_map(move |(weights, owner, exps)| {
                let vars = weights.iter().enumerate().map(|(i, &w)| (format!("x{i}"), w)).collect();
                let ring = GradedPolyRing::new(vars).unwrap();
                let mut seq = Vec::new();
                for slot in 0..n {
                    let e: Vec<u32> = (0..n).map(|v| if owner[v] == slot { exps[v] } else { 0 }).collect();
                    if e.iter().any(|&x| x > 0) {
                        seq.push(Monomial::new(e));
                    }
                }
                (ring, seq)
            })
    })
}

fn as_integers(v: &[Rational]) -> Vec<u64> {
    v.iter()
        .map(|c| {
            assert!(c.is_integer() && !c.is_negative(), "non-integral coefficient {c}");
            c.numerator().try_into().unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn koszul_matches_monomial_count((ring, seq) in regular_case()) {
        let betti = koszul_resolution(&ring, &seq).unwrap();
        let h = hilbert_from_betti(&ring, &betti);
        let brute = hilbert_brute_force(&ring, &seq, TOP).unwrap();
        prop_assert_eq!(as_integers(&h.coefficients(TOP as usize)), brute);
        prop_assert!(h.clearing_exponent(&ring).unwrap() <= 1);
    }

    #[test]
    fn shifted_concatenation_subtracts(
        (ring, seq) in regular_case(),
        extra in prop::collection::vec(prop::collection::vec(0u64..6, 0..3), 1..3),
    ) {
        let a = koszul_resolution(&ring, &seq).unwrap();
        let b = BettiTable::new(extra);
        let ha = hilbert_from_betti(&ring, &a).series;
        let hb = hilbert_from_betti(&ring, &b).series;
        let joined = hilbert_from_betti(&ring, &a.concat(&b.shift(1))).series;
        prop_assert_eq!(joined, &ha - &hb);
        let joined = hilbert_from_betti(&ring, &a.concat(&b.shift(2))).series;
        prop_assert_eq!(joined, &ha + &hb);
    }
}

#[test]
fn overlapping_supports_are_rejected() {
    let ring = GradedPolyRing::uniform(2, 1).unwrap();
    let seq = [Monomial::new(vec![1, 1]), Monomial::new(vec![0, 2])];
    assert!(koszul_resolution(&ring, &seq).is_err());
}

#[test]
fn polynomial_ring_series() {
    let ring = GradedPolyRing::new(vec![("x".into(), 1), ("y".into(), 2)]).unwrap();
    let h = hilbert_from_betti(&ring, &BettiTable::new(vec![vec![0]]));
    let expected = RatFn::one().checked_div(&RatFn::from(ring.denominator())).unwrap();
    assert_eq!(h.series, expected);
    assert_eq!(as_integers(&h.coefficients(5)), vec![1, 1, 2, 2, 3, 3]);
}

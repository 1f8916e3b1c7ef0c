mod oracle;

use num_traits::Zero;
use proptest::prelude::*;

use trifix_core::constraints::{
    default_truncation, dim12_chain, integral_of_one, low_label_rules, min_weight_balance,
    multisets_ab, prop42_checks, sign_sum, signature_exact, signature_exact_3pt, signature_series,
    vandermonde_vanishing, weight_parity, Verdict,
};
use trifix_core::fpdata::{data_from_pattern, hp2_family, FixedPoint, FixedPointData, Sign, TriplePattern};

fn points_of(d: &FixedPointData) -> Vec<oracle::Point> {
    d.points().iter().map(|p| (p.sign.value(), p.weights().to_vec())).collect()
}

fn arb_pattern(max_n: usize, max_w: u64) -> impl Strategy<Value = TriplePattern> {
    (1..=max_n).prop_flat_map(move |n| {
        let arr = prop::collection::vec(1..=max_w, n);
        (arr.clone(), arr.clone(), arr)
            .prop_map(|(a, b, c)| TriplePattern::new(a, b, c).unwrap())
    })
}

/// Patterns meeting the low-label rules, so that later stages are reached.
fn arb_low_label_pattern() -> impl Strategy<Value = TriplePattern> {
    (2..=3usize, prop::collection::vec(1..=6u64, 3), prop::collection::vec(1..=6u64, 3), any::<bool>(), 0..4u64)
        .prop_filter_map("sorted tails", |(n, mut b, mut c, first, extra)| {
            b.truncate(n);
            c.truncate(n);
            b.sort_unstable();
            c.sort_unstable();
            let a2 = if first { b[0] + c[1] } else { b[1] + c[0] };
            let mut a = vec![b[0] + c[0], a2];
            if n == 3 {
                a.push(a2 + extra);
            }
            TriplePattern::new(a, b, c).ok().filter(low_label_rules)
        })
}

fn arb_data() -> impl Strategy<Value = FixedPointData> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec((any::<bool>(), prop::collection::vec(1u64..=5, n)), 2..=4).prop_map(
            move |pts| {
                FixedPointData::new(
                    n,
                    pts.into_iter()
                        .map(|(s, w)| FixedPoint::new(if s { Sign::Plus } else { Sign::Minus }, w))
                        .collect(),
                )
            },
        )
    })
}

/// Every boolean outcome the constraint module produces for a pattern.
fn outcomes(p: &TriplePattern) -> Vec<String> {
    let d = data_from_pattern(p);
    let mut v = vec![
        format!("exact {}", signature_exact_3pt(p)),
        format!("prop42 {}", prop42_checks(p)),
        format!("parity {}", weight_parity(&d)),
        format!("balance {}", min_weight_balance(&d)),
        format!("series {}", signature_series(&d, default_truncation(&d)).is_constant()),
        format!("integral {}", integral_of_one(&d).is_zero()),
    ];
    for m in 1..=d.half_dim() {
        v.push(format!("p{m} {}", vandermonde_vanishing(&d, m).unwrap().all_zero));
    }
    if p.n() == 3 {
        let cert = dim12_chain(p).unwrap();
        v.push(format!("chain {:?}", cert.verdict.refuted_stage()));
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn three_signature_tests_agree(p in arb_pattern(3, 7)) {
        let d = data_from_pattern(&p);
        let (am, bm) = multisets_ab(&p);
        let exact = signature_exact_3pt(&p);
        prop_assert_eq!(exact, am == bm);
        prop_assert_eq!(exact, signature_series(&d, default_truncation(&d)).is_constant());
        prop_assert_eq!(exact, oracle::multisets_equal(p.a(), p.b(), p.c()));
        prop_assert_eq!(exact, oracle::identity_holds(&points_of(&d)));
    }

    #[test]
    fn general_exact_check_matches_oracle(d in arb_data()) {
        let pts = points_of(&d);
        prop_assert_eq!(signature_exact(&d), oracle::identity_holds(&pts));
        let order = default_truncation(&d);
        prop_assert_eq!(
            signature_series(&d, order).is_constant(),
            oracle::series_constant(&pts, order)
        );
    }

    #[test]
    fn outcomes_invariant_under_scaling(p in arb_pattern(3, 5), lambda in 2u64..=5) {
        prop_assert_eq!(outcomes(&p), outcomes(&p.scaled(lambda)));
    }

    #[test]
    fn low_label_outcomes_invariant(p in arb_low_label_pattern(), lambda in 2u64..=5) {
        prop_assert_eq!(outcomes(&p), outcomes(&p.scaled(lambda)));
        prop_assert_eq!(outcomes(&p), outcomes(&p.swapped_bc()));
    }

    #[test]
    fn flip_negates_and_preserves(d in arb_data()) {
        let f = d.flipped();
        let total = |x: &FixedPointData| x.points().iter().map(|p| p.sign.value()).sum::<i64>();
        prop_assert_eq!(total(&f), -total(&d));
        prop_assert_eq!(sign_sum(&f).is_ok(), sign_sum(&d).is_ok());
        prop_assert_eq!(integral_of_one(&f), -integral_of_one(&d));
        prop_assert_eq!(weight_parity(&f), weight_parity(&d));
        prop_assert_eq!(min_weight_balance(&f), min_weight_balance(&d));
        let n = default_truncation(&d);
        prop_assert_eq!(signature_series(&f, n).is_constant(), signature_series(&d, n).is_constant());
        prop_assert_eq!(signature_exact(&f), signature_exact(&d));
    }

    #[test]
    fn admissible_chain_carries_witness(p in arb_low_label_pattern()) {
        prop_assume!(p.n() == 3);
        let cert = dim12_chain(&p).unwrap();
        match &cert.verdict {
            Verdict::Admissible { witness } => prop_assert!(witness.is_some()),
            Verdict::RefutedAt { stage } => {
                let failed: Vec<_> = cert.stages.iter().filter(|s| !s.passed).collect();
                prop_assert_eq!(failed.len(), 1);
                prop_assert_eq!(failed[0].stage, *stage);
                prop_assert_eq!(cert.stages.last().unwrap().stage, *stage);
            }
        }
    }
}

#[test]
fn hp2_family_constraints() {
    for a in 1..=6 {
        for b in 1..=6 {
            for c in 1..=6 {
                let d = hp2_family(a, b, c).unwrap();
                assert_eq!(sign_sum(&d), Ok(1));
                assert!(weight_parity(&d) && min_weight_balance(&d));
                assert!(integral_of_one(&d).is_zero());
                assert!(signature_exact(&d));
                assert!(oracle::identity_holds(&points_of(&d)));
            }
        }
    }
}

#[test]
fn oracle_sanity() {
    // (+,{1}) and (-,{1}): the 2-sphere.
    assert!(oracle::identity_holds(&[(1, vec![1]), (-1, vec![1])]));
    assert!(!oracle::identity_holds(&[(1, vec![1]), (1, vec![1])]));
    assert!(oracle::multisets_equal(&[2, 2], &[1, 3], &[1, 1]));
    assert!(!oracle::multisets_equal(&[3], &[1], &[1]));
    assert_eq!(
        oracle::projective_points(2, 4, 6),
        vec![(1, vec![1, 2, 3, 4]), (-1, vec![1, 1, 3, 5]), (1, vec![1, 2, 4, 5])]
    );
}

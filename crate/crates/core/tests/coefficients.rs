use proptest::prelude::*;
use trigseries::coefficients::{ConvexSequence, GrowthClass, TailRule};

#[test]
fn canonical_families_are_convex_to_1e5() {
    for s in [ConvexSequence::log_reciprocal(), ConvexSequence::log_squared_reciprocal()] {
        let r = s.verify_convex(100_000);
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn tails_are_nonincreasing() {
    for s in [ConvexSequence::log_reciprocal(), ConvexSequence::log_squared_reciprocal()] {
        let v = s.values(20_000);
        assert!(v.windows(2).all(|w| w[1] <= w[0]));
        assert!(v.iter().all(|&x| x > 0.0));
    }
}

#[test]
fn fejer_mass_partial_sums_are_bounded() {
    // Σ_{j≤J}(j+1)Δ²a_j = a_0 - a_{J+1} - (J+1)(a_{J+1} - a_{J+2}) by telescoping
    let cases = [
        (ConvexSequence::log_reciprocal(), (|n: f64| 1.0 / n.ln()) as fn(f64) -> f64),
        (ConvexSequence::log_squared_reciprocal(), |n: f64| 1.0 / n.ln().powi(2)),
    ];
    for (s, a) in cases {
        let big_j = 1_000_000usize;
        let mut acc = 0.0;
        let mut prev = f64::NEG_INFINITY;
        for j in 0..=big_j {
            acc += (j + 1) as f64 * s.second_difference(j);
            if j % 1000 == 0 {
                assert!(acc >= prev - 1e-12);
                prev = acc;
            }
        }
        let j1 = (big_j + 1) as f64;
        let oracle = s.value(0) - a(j1) - j1 * (a(j1) - a(j1 + 1.0));
        assert!((acc - oracle).abs() < 1e-6, "{acc} vs {oracle}");
        assert!(acc < s.value(0));
    }
}

#[test]
fn growth_examples() {
    let g = |s: ConvexSequence| s.growth_classification(10_000).unwrap().class;
    assert_eq!(g(ConvexSequence::log_reciprocal()), GrowthClass::BigONotLittleO);
    assert_eq!(g(ConvexSequence::log_squared_reciprocal()), GrowthClass::LittleO);
    assert_eq!(g(ConvexSequence::custom(vec![1.0, 1.0], TailRule::Constant).unwrap()), GrowthClass::Unbounded);
    let r = ConvexSequence::log_reciprocal().growth_classification(10_000).unwrap();
    assert!((r.sup_product - 1.0).abs() < 1e-12);
}

fn convex_head() -> impl Strategy<Value = Vec<f64>> {
    // positive, decreasing, convex: cumulative sums of increasing negative steps
    (1.0f64..5.0, prop::collection::vec(0.0f64..0.3, 1..8)).prop_map(|(start, mut steps)| {
        steps.sort_by(|a, b| b.total_cmp(a));
        let mut head = vec![start + steps.iter().sum::<f64>()];
        for s in steps {
            let last = *head.last().unwrap();
            head.push(last - s);
        }
        head
    })
}

proptest! {
    #[test]
    fn zero_tail_heads_roundtrip_through_text(head in convex_head()) {
        let mut text = String::from("# generated\n");
        for x in &head {
            text.push_str(&format!("{x:?}\n"));
        }
        text.push_str("tail = const\n");
        let s = ConvexSequence::parse(&text).unwrap();
        prop_assert_eq!(s.head(), &head[..]);
        prop_assert!(s.verify_convex(head.len() + 4).pass);
        for j in 0..head.len() + 3 {
            prop_assert!(s.second_difference(j) >= -1e-12);
        }
    }

    #[test]
    fn stable_difference_matches_definition(n in 2usize..5000) {
        for s in [ConvexSequence::log_reciprocal(), ConvexSequence::log_squared_reciprocal()] {
            let naive = s.value(n) - s.value(n + 1);
            prop_assert!((s.first_difference(n) - naive).abs() <= 1e-12 * s.value(n));
        }
    }
}

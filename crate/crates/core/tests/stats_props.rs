use nlgm::stats::{average_ranks, cohen_kappa, pearson, spearman};
use proptest::prelude::*;

fn distinct_sample(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    n.prop_flat_map(|n| {
        (
            prop::collection::vec(-50.0f64..50.0, n),
            prop::collection::vec(-50.0f64..50.0, n),
        )
    })
    .prop_filter("needs spread", |(x, y)| spread(x) > 1e-3 && spread(y) > 1e-3)
}

fn spread(v: &[f64]) -> f64 {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

fn labels() -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
    (2usize..40).prop_flat_map(|n| {
        (
            prop::collection::vec(1u8..=5, n),
            prop::collection::vec(1u8..=5, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn pearson_ignores_positive_affine_maps((x, y) in distinct_sample(3..=30), a in 0.1f64..10.0, b in -5.0f64..5.0) {
        let r = pearson(&x, &y).unwrap().coefficient;
        let mapped: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        prop_assert!((pearson(&mapped, &y).unwrap().coefficient - r).abs() < 1e-9);
    }

    #[test]
    fn spearman_ignores_increasing_transforms((x, y) in distinct_sample(3..=30)) {
        let rho = spearman(&x, &y).unwrap().coefficient;
        let cubed: Vec<f64> = x.iter().map(|v| v.powi(3) + v.exp().ln_1p()).collect();
        prop_assert!((spearman(&cubed, &y).unwrap().coefficient - rho).abs() < 1e-9);
    }

    #[test]
    fn spearman_is_pearson_of_ranks((x, y) in distinct_sample(3..=30)) {
        let rho = spearman(&x, &y).unwrap().coefficient;
        let r = pearson(&average_ranks(&x), &average_ranks(&y)).unwrap().coefficient;
        prop_assert!((rho - r).abs() < 1e-12);
    }

    #[test]
    fn correlations_are_pair_order_invariant((x, y) in distinct_sample(3..=20), k in 0usize..20) {
        let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
        let k = k % pairs.len();
        pairs.rotate_left(k);
        pairs.reverse();
        let (px, py): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        prop_assert!((pearson(&x, &y).unwrap().coefficient - pearson(&px, &py).unwrap().coefficient).abs() < 1e-9);
        prop_assert!((spearman(&x, &y).unwrap().coefficient - spearman(&px, &py).unwrap().coefficient).abs() < 1e-12);
    }

    #[test]
    fn ranks_sum_like_one_to_n(v in prop::collection::vec(prop::sample::select(vec![1.0, 2.0, 2.5, 3.0]), 1..30)) {
        let n = v.len() as f64;
        let sum: f64 = average_ranks(&v).iter().sum();
        prop_assert!((sum - n * (n + 1.0) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn kappa_symmetric_bounded_and_reflexive((a, b) in labels()) {
        let ab = cohen_kappa(&a, &b).unwrap();
        prop_assert!((ab - cohen_kappa(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!((-1.0..=1.0 + 1e-12).contains(&ab));
        prop_assert!((cohen_kappa(&a, &a).unwrap() - 1.0).abs() < 1e-12);
    }
}

use harvester_core::chaos01::{
    classify, classify_with, k_statistic, median, Chaos01Config, DynamicsClass, MIN_SERIES_LEN,
};
use proptest::prelude::*;

fn logistic(n: usize, x0: f64) -> Vec<f64> {
    let mut x = x0;
    (0..n)
        .map(|_| {
            x = 4.0 * x * (1.0 - x);
            x
        })
        .collect()
}

fn cosine(n: usize) -> Vec<f64> {
    (0..n).map(|j| (0.3 * j as f64).cos()).collect()
}

#[test]
fn logistic_map_is_chaotic() {
    let r = classify(&logistic(5000, 0.3), &Chaos01Config::new(11)).unwrap();
    assert!(r.k_median > 0.8, "K = {}", r.k_median);
    assert_eq!(r.class, DynamicsClass::Chaotic);
    assert_eq!(r.k_per_c.len(), 100);
}

#[test]
fn cosine_is_regular() {
    let r = classify(&cosine(5000), &Chaos01Config::new(11)).unwrap();
    assert!(r.k_median < 0.2, "K = {}", r.k_median);
    assert_eq!(r.class, DynamicsClass::Regular);
}

#[test]
fn quadratic_growth_statistic() {
    let m: Vec<f64> = (1..=10).map(|n| (n * n) as f64).collect();
    let lags: Vec<f64> = (1..=10).map(|n| n as f64).collect();
    let k = k_statistic(&m, &lags).unwrap();
    assert!((k - 0.9745586289152092).abs() < 1e-12, "{k}");
}

#[test]
fn short_and_bad_series_are_rejected() {
    let cfg = Chaos01Config::new(1);
    let e = classify(&cosine(MIN_SERIES_LEN - 1), &cfg).unwrap_err();
    assert_eq!(e.kind(), "series-too-short");
    let mut s = cosine(500);
    s[17] = f64::NAN;
    assert_eq!(classify(&s, &cfg).unwrap_err().kind(), "non-finite");
}

#[test]
fn restricted_support_still_separates() {
    let cfg = Chaos01Config::new(5).with_restricted_support();
    assert_eq!(classify(&logistic(3000, 0.2), &cfg).unwrap().class, DynamicsClass::Chaotic);
    assert_eq!(classify(&cosine(3000), &cfg).unwrap().class, DynamicsClass::Regular);
}

#[test]
fn same_seed_same_draws() {
    let a = Chaos01Config::new(99).draw_frequencies();
    let b = Chaos01Config::new(99).draw_frequencies();
    assert_eq!(a, b);
    assert_ne!(a, Chaos01Config::new(100).draw_frequencies());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn class_is_scale_invariant(seed in 0u64..1000, x0 in 0.05..0.95f64, regular in any::<bool>()) {
        let series = if regular { cosine(1000) } else { logistic(1000, x0) };
        let cfg = Chaos01Config::new(seed);
        let base = classify(&series, &cfg).unwrap().class;
        for a in [1e-3, 1e3] {
            let scaled: Vec<f64> = series.iter().map(|v| a * v).collect();
            prop_assert_eq!(classify(&scaled, &cfg).unwrap().class, base);
        }
    }

    #[test]
    fn order_of_frequencies_does_not_matter(seed in 0u64..1000, x0 in 0.05..0.95f64) {
        let series = logistic(600, x0);
        let cfg = Chaos01Config::new(seed);
        let freqs = cfg.draw_frequencies();
        let mut rev = freqs.clone();
        rev.reverse();
        let a = classify_with(&series, &freqs, &cfg).unwrap();
        let b = classify_with(&series, &rev, &cfg).unwrap();
        prop_assert_eq!(a.k_median, b.k_median);
        let mut ka = a.k_per_c.clone();
        ka.reverse();
        prop_assert_eq!(ka, b.k_per_c);
    }

    #[test]
    fn median_unchanged_by_duplication(values in prop::collection::vec(-10.0..10.0f64, 1..60)) {
        let doubled: Vec<f64> = values.iter().chain(values.iter()).copied().collect();
        prop_assert_eq!(median(&values), median(&doubled));
    }

    #[test]
    fn k_values_are_correlations(seed in 0u64..1000, x0 in 0.05..0.95f64) {
        let r = classify(&logistic(400, x0), &Chaos01Config::new(seed)).unwrap();
        prop_assert!(r.k_per_c.iter().all(|k| (-1.0..=1.0).contains(k)));
    }
}

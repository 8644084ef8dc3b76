use std::f64::consts::PI;

use ctxprob::calculus::{Probability, Regime, Sign};
use ctxprob::simulation::{
    estimate, sample_counts, scenario_truth, ContextLabel, CountRow, CountTable, HyperbolicUrn, Scenario,
    ScenarioError, TwoSlit,
};
use proptest::prelude::*;

fn p(v: f64) -> Probability {
    Probability::new(v).unwrap()
}

fn two_slit() -> Scenario {
    TwoSlit::new(0.3f64.sqrt(), 0.2f64.sqrt(), PI / 3.0).unwrap().into()
}

fn successes(table: &CountTable) -> Vec<(ContextLabel, u64)> {
    table.canonical_rows().iter().map(|r| (r.label, r.successes)).collect()
}

#[test]
fn sampling_is_pinned() {
    let counts = sample_counts(&two_slit(), 1000, 42);
    let again = sample_counts(&two_slit(), 1000, 42);
    assert_eq!(counts, again);
    let other = sample_counts(&two_slit(), 1000, 43);
    assert_ne!(counts, other);
    assert_eq!(
        successes(&counts),
        [
            (ContextLabel::S, 754),
            (ContextLabel::S1p, 302),
            (ContextLabel::S2p, 220)
        ]
    );
}

#[test]
fn estimate_is_deterministic() {
    let counts = sample_counts(&two_slit(), 10_000, 5);
    let a = estimate(&counts, 200, 0.95, 9).unwrap();
    let b = estimate(&counts, 200, 0.95, 9).unwrap();
    assert_eq!(a, b);
    let c = estimate(&counts, 200, 0.95, 10).unwrap();
    assert_ne!(a.lambda_interval, c.lambda_interval);
}

#[test]
fn point_estimate_converges() {
    let close = (0..100)
        .filter(|&seed| {
            let counts = sample_counts(&two_slit(), 1_000_000, seed);
            let report = estimate(&counts, 0, 0.95, seed).unwrap();
            (report.point.lambda.unwrap() - 0.5).abs() <= 0.01
        })
        .count();
    assert!(close >= 95, "{close} of 100 seeds within 0.01");
}

#[test]
fn bootstrap_interval_covers() {
    let covered = (0..100)
        .filter(|&seed| {
            let counts = sample_counts(&two_slit(), 100_000, seed);
            let report = estimate(&counts, 1000, 0.95, seed).unwrap();
            let (lo, hi) = report.lambda_interval.unwrap();
            lo <= 0.5 && 0.5 <= hi
        })
        .count();
    assert!(covered >= 90, "{covered} of 100 intervals cover the truth");
}

#[test]
fn urn_recovers_hyperbolic_truth() {
    let urn: Scenario = HyperbolicUrn::new(p(0.4), p(0.5), p(0.1), p(0.1)).unwrap().into();
    let truth = scenario_truth(&urn);
    assert_eq!(truth.p_s(), p(0.9));
    let report = estimate(&sample_counts(&urn, 100_000, 7), 500, 0.95, 7).unwrap();
    assert!(matches!(
        report.point.regime,
        Regime::Hyperbolic { sign: Sign::Plus, .. }
    ));
    let (lo, hi) = report.lambda_interval.unwrap();
    assert!(lo <= 3.5 && 3.5 <= hi, "[{lo}, {hi}]");
}

#[test]
fn exactly_additive_table() {
    let rows = [
        (ContextLabel::S, 600, 1000),
        (ContextLabel::S1p, 250, 1000),
        (ContextLabel::S2p, 35, 100),
    ];
    let table = CountTable::new(
        rows.iter()
            .map(|&(label, successes, trials)| CountRow {
                label,
                successes,
                trials,
            })
            .collect(),
    )
    .unwrap();
    let report = estimate(&table, 50, 0.95, 0).unwrap();
    assert_eq!(report.point.lambda, Some(0.0));
    assert_eq!(report.point.regime, Regime::Trigonometric { theta: PI / 2.0 });
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn urn_rejects_trigonometric_coefficients(a in 0.01..=0.5f64, b in 0.01..=0.5f64) {
        let err = HyperbolicUrn::new(p(a), p(b), p(a), p(b)).unwrap_err();
        prop_assert_eq!(err, ScenarioError::NotHyperbolic(0.0));
    }

    #[test]
    fn two_slit_truth_is_classical_plus_interference(a in 0.0..=0.25f64, b in 0.0..=0.25f64, theta in 0.0..=PI) {
        let truth = scenario_truth(&TwoSlit::from_probabilities(p(a), p(b), theta).unwrap().into());
        let expected = a + b + 2.0 * (a * b).sqrt() * theta.cos();
        prop_assert!((truth.p_s().value() - expected).abs() <= 1e-12);
        prop_assert_eq!((truth.p1_prime(), truth.p2_prime()), (p(a), p(b)));
    }

    #[test]
    fn counts_stay_within_trials(seed in any::<u64>(), trials in 1u64..200) {
        let counts = sample_counts(&two_slit(), trials, seed);
        for row in counts.rows() {
            prop_assert_eq!(row.trials, trials);
            prop_assert!(row.successes <= trials);
        }
    }
}

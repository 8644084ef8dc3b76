use ctxprob::calculus::{
    analyze, classify, correspondence_scan, delta_componentwise, delta_from_reference, lambda_coefficient,
    lambda_range, naive_identification_error, reconstruct_probability, ContextTriple, Probability, Regime, Sign,
};
use ctxprob::{trig_wave, wave_from_analysis, SplitComplexAmplitude};
use proptest::prelude::*;

fn p(v: f64) -> Probability {
    Probability::new(v).unwrap()
}

fn positive() -> impl Strategy<Value = f64> {
    1e-3..=1.0f64
}

/// `(p1', p2', lambda)` with lambda inside the admissible interval.
fn admissible() -> impl Strategy<Value = (f64, f64, f64)> {
    (positive(), positive(), 0.0..=1.0f64).prop_map(|(a, b, t)| {
        let (lo, hi) = lambda_range(p(a), p(b)).unwrap();
        (a, b, lo + (hi - lo) * t)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn lambda_round_trip((a, b, lambda) in admissible()) {
        let p_s = reconstruct_probability(p(a), p(b), lambda).unwrap();
        let back = lambda_coefficient(delta_from_reference(p_s, p(a), p(b)), p(a), p(b)).unwrap();
        prop_assert!((back - lambda).abs() <= 1e-12, "{} vs {}", back, lambda);
    }

    #[test]
    fn delta_forms_agree(p1 in 0.0..=0.5f64, p2 in 0.0..=0.5f64, a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let t = ContextTriple::from_subcontexts(p(p1), p(p2), p(a), p(b)).unwrap();
        let reference = delta_from_reference(t.p_s(), p(a), p(b));
        let componentwise = delta_componentwise(p(p1), p(p2), p(a), p(b));
        prop_assert!((reference - componentwise).abs() <= 1e-12);
    }

    #[test]
    fn classify_trigonometric_inverse(lambda in -1.0..=1.0f64) {
        match classify(lambda).unwrap() {
            Regime::Trigonometric { theta } => {
                prop_assert!((0.0..=std::f64::consts::PI).contains(&theta));
                prop_assert!((theta.cos() - lambda).abs() <= 1e-12);
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn classify_hyperbolic_inverse(magnitude in 1.0f64..1e6, negative in any::<bool>()) {
        prop_assume!(magnitude > 1.0);
        let lambda = if negative { -magnitude } else { magnitude };
        match classify(lambda).unwrap() {
            Regime::Hyperbolic { sign, theta } => {
                prop_assert_eq!(sign, Sign::of(lambda));
                prop_assert!(theta > 0.0);
                prop_assert!((sign.as_f64() * theta.cosh() - lambda).abs() <= 1e-12 * magnitude);
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn range_is_sharp(a in positive(), b in positive()) {
        let (lo, hi) = lambda_range(p(a), p(b)).unwrap();
        prop_assert!(lo <= -1.0 && lo < hi);
        prop_assert!(reconstruct_probability(p(a), p(b), lo).is_ok());
        prop_assert!(reconstruct_probability(p(a), p(b), hi).is_ok());
        prop_assert!(reconstruct_probability(p(a), p(b), lo - 1e-6).is_err());
        prop_assert!(reconstruct_probability(p(a), p(b), hi + 1e-6).is_err());
    }

    #[test]
    fn correspondence_vanishes(
        p1 in 0.05..=0.45f64,
        p2 in 0.05..=0.45f64,
        c1 in 0.01..=0.1f64,
        c2 in 0.01..=0.1f64,
        negative in any::<bool>(),
    ) {
        let (c1, c2) = if negative { (-c1 / 10.0, -c2 / 10.0) } else { (c1, c2) };
        let base = ContextTriple::from_subcontexts(p(p1), p(p2), p(p1), p(p2)).unwrap();
        let eps = [4.0, 2.0, 1.0, 0.5, 0.25, 0.0];
        let scan = correspondence_scan(&base, (c1, c2), &eps).unwrap();
        for pt in &scan {
            prop_assert!((pt.delta + pt.epsilon * (c1 + c2)).abs() <= 1e-9);
        }
        for w in scan.windows(2) {
            prop_assert!(w[1].lambda.abs() < w[0].lambda.abs());
        }
        prop_assert_eq!(scan.last().unwrap().lambda, 0.0);
    }

    #[test]
    fn naive_error_is_delta(s in 0.0..=1.0f64, a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let t = ContextTriple::new(p(s), p(a), p(b));
        prop_assert_eq!(naive_identification_error(&t), analyze(&t).delta);
    }

    #[test]
    fn wave_reproduces_probability((a, b, lambda) in admissible()) {
        let p_s = reconstruct_probability(p(a), p(b), lambda).unwrap();
        let t = ContextTriple::new(p_s, p(a), p(b));
        let analysis = analyze(&t);
        let wave = wave_from_analysis(p(a), p(b), &analysis).unwrap();
        let expected_kind = if lambda.abs() <= 1.0 { "complex" } else { "split-complex" };
        prop_assert_eq!(wave.kind(), expected_kind);
        prop_assert!((wave.modulus() - p_s.value()).abs() <= 1e-12, "{} vs {}", wave.modulus(), p_s.value());
    }

    #[test]
    fn split_complex_modulus_identity(a in positive(), b in positive(), theta in 0.0..=3.0f64) {
        let z = SplitComplexAmplitude::new(a.sqrt(), 0.0) + SplitComplexAmplitude::unit(theta).scale(b.sqrt());
        let expected = a + b + 2.0 * (a * b).sqrt() * theta.cosh();
        prop_assert!(((z.hyperbolic_modulus() - expected) / expected).abs() <= 1e-12);
    }

    #[test]
    fn complex_modulus_identity(a in positive(), b in positive(), theta in 0.0..=std::f64::consts::PI) {
        let expected = a + b + 2.0 * (a * b).sqrt() * theta.cos();
        prop_assert!((trig_wave(p(a), p(b), theta).squared_modulus() - expected).abs() <= 1e-12);
    }
}

#[test]
fn classification_boundary() {
    assert_eq!(classify(1.0).unwrap(), Regime::Trigonometric { theta: 0.0 });
    assert_eq!(
        classify(-1.0).unwrap(),
        Regime::Trigonometric {
            theta: std::f64::consts::PI
        }
    );
    assert!(matches!(
        classify(1.0 + 1e-15).unwrap(),
        Regime::Hyperbolic { sign: Sign::Plus, .. }
    ));
}

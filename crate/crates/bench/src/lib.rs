//! Benchmark fixtures shared by the criterion benches.

use ctxprob::{ContextTriple, HyperbolicUrn, Probability, Scenario, TwoSlit};

/// Two slits with `P(B|S1') = 0.3`, `P(B|S2') = 0.2` and phase pi/3.
pub fn two_slit() -> Scenario {
    TwoSlit::new(0.3f64.sqrt(), 0.2f64.sqrt(), std::f64::consts::FRAC_PI_3)
        .expect("valid two-slit scenario")
        .into()
}

/// Urn with lambda = 3.5.
pub fn urn() -> Scenario {
    let p = |v| Probability::new(v).expect("valid probability");
    HyperbolicUrn::new(p(0.4), p(0.5), p(0.1), p(0.1))
        .expect("hyperbolic urn")
        .into()
}

/// A spread of triples covering both regimes and the degenerate case.
pub fn triples() -> Vec<ContextTriple> {
    let mut out = Vec::new();
    for i in 0..=20 {
        for j in 0..=20 {
            let a = f64::from(i) * 0.025;
            let b = f64::from(j) * 0.025;
            let p_s = ((a + b) * 0.9).min(1.0);
            out.push(ContextTriple::from_values(p_s, a, b).expect("valid triple"));
        }
    }
    out
}

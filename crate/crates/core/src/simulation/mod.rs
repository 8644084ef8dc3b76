//! Synthetic transition experiments and finite-sample estimation.
//!
//! A [`Scenario`] fixes the true conditional probabilities of each context.
//! [`sample_counts`] runs every context as an independent Bernoulli
//! experiment and [`estimate`] recovers `delta`, `lambda` and `theta` from the
//! counts, with a parametric bootstrap for the uncertainty.

mod estimate;
pub mod rng;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::amplitudes::ComplexAmplitude;
use crate::calculus::{lambda_coefficient, CalculusError, ContextTriple, Probability};

pub use estimate::{
    estimate, quantile_sorted, theta_recovery_error, ContextEstimate, EstimateError, EstimationReport,
    DEFAULT_CONFIDENCE, DEFAULT_REPLICATES,
};
pub use rng::GENERATOR_NAME;

/// Slack on the two-slit phase so that decimal spellings of pi are accepted.
pub const PHASE_SLACK: f64 = 1e-6;

/// Context labels as they appear in count files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ContextLabel {
    S,
    S1,
    S2,
    S1p,
    S2p,
}

impl ContextLabel {
    /// Canonical order, also the order rows are written in.
    pub const ALL: [ContextLabel; 5] = [
        ContextLabel::S,
        ContextLabel::S1,
        ContextLabel::S2,
        ContextLabel::S1p,
        ContextLabel::S2p,
    ];

    pub const REQUIRED: [ContextLabel; 3] = [ContextLabel::S, ContextLabel::S1p, ContextLabel::S2p];

    pub fn as_str(self) -> &'static str {
        match self {
            ContextLabel::S => "S",
            ContextLabel::S1 => "S1",
            ContextLabel::S2 => "S2",
            ContextLabel::S1p => "S1p",
            ContextLabel::S2p => "S2p",
        }
    }

    /// Generator stream used for this context.
    pub fn stream_id(self) -> u64 {
        match self {
            ContextLabel::S => 0,
            ContextLabel::S1 => 1,
            ContextLabel::S2 => 2,
            ContextLabel::S1p => 3,
            ContextLabel::S2p => 4,
        }
    }
}

impl fmt::Display for ContextLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown context label `{0}`")]
pub struct UnknownLabel(pub String);

impl FromStr for ContextLabel {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ContextLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| UnknownLabel(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountRow {
    pub label: ContextLabel,
    pub successes: u64,
    pub trials: u64,
}

impl CountRow {
    pub fn p_hat(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CountTableError {
    #[error("context {0} has zero trials")]
    ZeroTrials(ContextLabel),
    #[error("context {0} has more successes than trials")]
    SuccessesExceedTrials(ContextLabel),
    #[error("context {0} appears more than once")]
    DuplicateLabel(ContextLabel),
    #[error("required context {0} is missing")]
    MissingLabel(ContextLabel),
}

/// Per-context success counts. Labels are unique and `S`, `S1p`, `S2p` are present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    rows: Vec<CountRow>,
}

impl CountTable {
    pub fn new(rows: Vec<CountRow>) -> Result<Self, CountTableError> {
        for (i, row) in rows.iter().enumerate() {
            validate_row(row)?;
            if rows[..i].iter().any(|r| r.label == row.label) {
                return Err(CountTableError::DuplicateLabel(row.label));
            }
        }
        if let Some(missing) = ContextLabel::REQUIRED
            .into_iter()
            .find(|l| !rows.iter().any(|r| r.label == *l))
        {
            return Err(CountTableError::MissingLabel(missing));
        }
        Ok(CountTable { rows })
    }

    pub fn rows(&self) -> &[CountRow] {
        &self.rows
    }

    pub fn get(&self, label: ContextLabel) -> Option<&CountRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    pub fn p_hat(&self, label: ContextLabel) -> Option<f64> {
        self.get(label).map(CountRow::p_hat)
    }

    /// Rows sorted into [`ContextLabel::ALL`] order.
    pub fn canonical_rows(&self) -> Vec<CountRow> {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|r| r.label);
        rows
    }
}

/// `k/n - k1/n1 - k2/n2` for `(successes, trials)` pairs, over a common
/// denominator so that additive counts give exactly zero. `None` when the
/// products overflow.
pub(crate) fn count_difference(minuend: (u64, u64), first: (u64, u64), second: (u64, u64)) -> Option<f64> {
    let (k, n) = (i128::from(minuend.0), i128::from(minuend.1));
    let (k1, n1) = (i128::from(first.0), i128::from(first.1));
    let (k2, n2) = (i128::from(second.0), i128::from(second.1));
    let n12 = n1.checked_mul(n2)?;
    let numerator = k
        .checked_mul(n12)?
        .checked_sub(k1.checked_mul(n)?.checked_mul(n2)?)?
        .checked_sub(k2.checked_mul(n)?.checked_mul(n1)?)?;
    if numerator == 0 {
        return Some(0.0);
    }
    Some(numerator as f64 / n.checked_mul(n12)? as f64)
}

pub(crate) fn validate_row(row: &CountRow) -> Result<(), CountTableError> {
    if row.trials == 0 {
        return Err(CountTableError::ZeroTrials(row.label));
    }
    if row.successes > row.trials {
        return Err(CountTableError::SuccessesExceedTrials(row.label));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ScenarioError {
    #[error("slit amplitude modulus must be finite and non-negative, got {0}")]
    InvalidModulus(f64),
    #[error("two-slit phase {0} is outside [0, pi]")]
    PhaseOutOfRange(f64),
    #[error("two-slit amplitudes give P(B|{label}) = {value}, outside [0, 1]")]
    ProbabilityOutOfRange { label: ContextLabel, value: f64 },
    #[error("urn has P(B|S1) + P(B|S2) = {0} > 1")]
    SubcontextSumExceedsOne(f64),
    #[error("urn has lambda = {0}, which is not hyperbolic (|lambda| must exceed 1)")]
    NotHyperbolic(f64),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

/// Probabilities given directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectScenario {
    triple: ContextTriple,
}

impl DirectScenario {
    pub fn new(triple: ContextTriple) -> Self {
        DirectScenario { triple }
    }
}

/// Two slits with amplitudes `m1` and `m2 e^{i phase}`.
///
/// `P(B|S1') = m1^2`, `P(B|S2') = m2^2`, `P(B|S) = |m1 + m2 e^{i phase}|^2`.
/// The single-slit probabilities are stored as given so that building from
/// probabilities does not round-trip them through a square root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSlit {
    p1_prime: f64,
    p2_prime: f64,
    phase: f64,
}

impl TwoSlit {
    pub fn new(a1_modulus: f64, a2_modulus: f64, phase: f64) -> Result<Self, ScenarioError> {
        for m in [a1_modulus, a2_modulus] {
            if !(m.is_finite() && m >= 0.0) {
                return Err(ScenarioError::InvalidModulus(m));
            }
        }
        Self::build(a1_modulus * a1_modulus, a2_modulus * a2_modulus, phase)
    }

    /// Slits with single-slit probabilities `P(B|S1')`, `P(B|S2')`.
    pub fn from_probabilities(p1_prime: Probability, p2_prime: Probability, phase: f64) -> Result<Self, ScenarioError> {
        Self::build(p1_prime.value(), p2_prime.value(), phase)
    }

    fn build(p1_prime: f64, p2_prime: f64, phase: f64) -> Result<Self, ScenarioError> {
        if !(phase.is_finite() && (-PHASE_SLACK..=PI + PHASE_SLACK).contains(&phase)) {
            return Err(ScenarioError::PhaseOutOfRange(phase));
        }
        let slit = TwoSlit {
            p1_prime,
            p2_prime,
            phase: phase.clamp(0.0, PI),
        };
        for (label, value) in slit.raw_probabilities() {
            Probability::new(value).map_err(|_| ScenarioError::ProbabilityOutOfRange { label, value })?;
        }
        Ok(slit)
    }

    pub fn a1_modulus(&self) -> f64 {
        self.p1_prime.sqrt()
    }

    pub fn a2_modulus(&self) -> f64 {
        self.p2_prime.sqrt()
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    fn raw_probabilities(&self) -> [(ContextLabel, f64); 3] {
        let a1 = ComplexAmplitude::new(self.a1_modulus(), 0.0);
        let a2 = ComplexAmplitude::unit(self.phase).scale(self.a2_modulus());
        [
            (ContextLabel::S, (a1 + a2).squared_modulus()),
            (ContextLabel::S1p, self.p1_prime),
            (ContextLabel::S2p, self.p2_prime),
        ]
    }
}

/// Unprimed and primed subcontexts with a hyperbolic coefficient; `P(B|S) = P(B|S1) + P(B|S2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicUrn {
    p1: Probability,
    p2: Probability,
    p1_prime: Probability,
    p2_prime: Probability,
}

impl HyperbolicUrn {
    pub fn new(
        p1: Probability,
        p2: Probability,
        p1_prime: Probability,
        p2_prime: Probability,
    ) -> Result<Self, ScenarioError> {
        let sum = p1.value() + p2.value();
        if Probability::new(sum).is_err() {
            return Err(ScenarioError::SubcontextSumExceedsOne(sum));
        }
        let delta = crate::calculus::delta_componentwise(p1, p2, p1_prime, p2_prime);
        let lambda = lambda_coefficient(delta, p1_prime, p2_prime)?;
        if lambda.abs() <= 1.0 {
            return Err(ScenarioError::NotHyperbolic(lambda));
        }
        Ok(HyperbolicUrn {
            p1,
            p2,
            p1_prime,
            p2_prime,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    Direct(DirectScenario),
    TwoSlit(TwoSlit),
    HyperbolicUrn(HyperbolicUrn),
}

impl From<DirectScenario> for Scenario {
    fn from(s: DirectScenario) -> Self {
        Scenario::Direct(s)
    }
}

impl From<TwoSlit> for Scenario {
    fn from(s: TwoSlit) -> Self {
        Scenario::TwoSlit(s)
    }
}

impl From<HyperbolicUrn> for Scenario {
    fn from(s: HyperbolicUrn) -> Self {
        Scenario::HyperbolicUrn(s)
    }
}

/// Exact probabilities implied by a scenario.
pub fn scenario_truth(scenario: &Scenario) -> ContextTriple {
    match *scenario {
        Scenario::Direct(DirectScenario { triple }) => triple,
        Scenario::TwoSlit(slit) => {
            // Validated at construction.
            let [s, s1p, s2p] = slit
                .raw_probabilities()
                .map(|(_, v)| Probability::new(v).expect("two-slit probabilities validated"));
            ContextTriple::new(s, s1p, s2p)
        }
        Scenario::HyperbolicUrn(urn) => ContextTriple::from_subcontexts(urn.p1, urn.p2, urn.p1_prime, urn.p2_prime)
            .expect("urn subcontext sum validated"),
    }
}

/// True probability of every context the scenario defines, in canonical order.
pub fn context_probabilities(triple: &ContextTriple) -> Vec<(ContextLabel, Probability)> {
    let mut out = vec![(ContextLabel::S, triple.p_s())];
    if let Some((p1, p2)) = triple.subcontexts() {
        out.push((ContextLabel::S1, p1));
        out.push((ContextLabel::S2, p2));
    }
    out.push((ContextLabel::S1p, triple.p1_prime()));
    out.push((ContextLabel::S2p, triple.p2_prime()));
    out
}

/// Runs `trials_per_context` Bernoulli trials in each context of the scenario.
///
/// Each context reads its own generator stream, so the result is a pure
/// function of `(scenario, trials_per_context, seed)`.
pub fn sample_counts(scenario: &Scenario, trials_per_context: u64, seed: u64) -> CountTable {
    let trials = trials_per_context.max(1);
    let rows = context_probabilities(&scenario_truth(scenario))
        .into_iter()
        .map(|(label, p)| {
            let mut rng = rng::substream(seed, rng::Domain::Sampling, 0, label.stream_id());
            CountRow {
                label,
                successes: rng::bernoulli_successes(&mut rng, p.value(), trials),
                trials,
            }
        })
        .collect();
    CountTable::new(rows).expect("sampled rows are valid by construction")
}

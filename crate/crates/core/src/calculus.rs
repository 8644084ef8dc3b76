//! Probability transformations induced by a change of context.
//!
//! A context `S` splits into subcontexts `S1`, `S2`; a second context `S'`
//! splits into `S1'`, `S2'`. For a fixed event `B` the classical rule gives
//! `P(B|S) = P(B|S1) + P(B|S2)`. Expressed through the primed subcontexts the
//! same probability picks up a perturbation term
//!
//! ```text
//! P(B|S) = P(B|S1') + P(B|S2') + delta
//!        = P(B|S1') + P(B|S2') + 2 sqrt(P(B|S1') P(B|S2')) lambda
//! ```
//!
//! and `lambda` is either `cos(theta)` (trigonometric interference, `|lambda| <= 1`)
//! or `±cosh(theta)` (hyperbolic interference, `|lambda| > 1`).

use std::fmt;

use thiserror::Error;

/// Slack allowed when constructing a [`Probability`] from a value produced by
/// floating-point arithmetic.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// Default slack for the additivity `P(B|S) = P(B|S1) + P(B|S2)` on exact inputs.
pub const ADDITIVITY_TOLERANCE: f64 = 1e-9;

/// Default slack for round-trip and classification identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum CalculusError {
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("value {0} is not finite")]
    NonFinite(f64),
    #[error("subcontext probabilities {sum} do not add up to P(B|S) = {p_s} (tolerance {tolerance})")]
    AdditivityViolated { p_s: f64, sum: f64, tolerance: f64 },
    #[error("transition coefficient undefined: a primed subcontext has probability zero")]
    DegenerateDenominator,
    #[error("lambda = {lambda} gives P(B|S) = {value}, outside [0, 1]")]
    InadmissibleLambda { lambda: f64, value: f64 },
    #[error("base triple carries no unprimed subcontext probabilities")]
    MissingSubcontexts,
    #[error("perturbation epsilon = {epsilon} moves a subcontext probability to {value}, outside (0, 1]")]
    InvalidPerturbedProbability { epsilon: f64, value: f64 },
}

pub type Result<T, E = CalculusError> = std::result::Result<T, E>;

/// Tolerances used by the checks in this module. One record so callers can
/// tighten or relax them together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Round-off slack when building a probability (values are clamped into [0, 1]).
    pub probability: f64,
    /// Additivity check for exact inputs.
    pub additivity: f64,
    /// Round-trip identities.
    pub identity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            probability: PROBABILITY_TOLERANCE,
            additivity: ADDITIVITY_TOLERANCE,
            identity: IDENTITY_TOLERANCE,
        }
    }
}

/// A conditional probability `P(B|context)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);

    /// Values within [`PROBABILITY_TOLERANCE`] of `[0, 1]` are clamped in.
    pub fn new(value: f64) -> Result<Self> {
        Self::with_tolerance(value, PROBABILITY_TOLERANCE)
    }

    pub fn with_tolerance(value: f64, tolerance: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(CalculusError::NonFinite(value));
        }
        if value < -tolerance || value > 1.0 + tolerance {
            return Err(CalculusError::InvalidProbability(value));
        }
        Ok(Probability(value.clamp(0.0, 1.0)))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }
}

impl TryFrom<f64> for Probability {
    type Error = CalculusError;

    fn try_from(value: f64) -> Result<Self> {
        Probability::new(value)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// The probabilities of one transition experiment `S -> S'`.
///
/// `P(B|S1)` and `P(B|S2)` are optional but travel together; when present
/// they must add up to `P(B|S)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContextTriple {
    p_s: Probability,
    p1_prime: Probability,
    p2_prime: Probability,
    subcontexts: Option<(Probability, Probability)>,
}

impl ContextTriple {
    pub fn new(p_s: Probability, p1_prime: Probability, p2_prime: Probability) -> Self {
        ContextTriple {
            p_s,
            p1_prime,
            p2_prime,
            subcontexts: None,
        }
    }

    /// Attaches `P(B|S1)`, `P(B|S2)`, checking additivity at [`ADDITIVITY_TOLERANCE`].
    pub fn with_subcontexts(self, p1: Probability, p2: Probability) -> Result<Self> {
        self.with_subcontexts_tol(p1, p2, ADDITIVITY_TOLERANCE)
    }

    pub fn with_subcontexts_tol(self, p1: Probability, p2: Probability, tolerance: f64) -> Result<Self> {
        let sum = p1.value() + p2.value();
        if (self.p_s.value() - sum).abs() > tolerance {
            return Err(CalculusError::AdditivityViolated {
                p_s: self.p_s.value(),
                sum,
                tolerance,
            });
        }
        Ok(ContextTriple {
            subcontexts: Some((p1, p2)),
            ..self
        })
    }

    /// Builds a triple from raw values, the way callers holding plain numbers want it.
    pub fn from_values(p_s: f64, p1_prime: f64, p2_prime: f64) -> Result<Self> {
        Ok(Self::new(
            Probability::new(p_s)?,
            Probability::new(p1_prime)?,
            Probability::new(p2_prime)?,
        ))
    }

    /// The triple implied by unprimed subcontexts: `P(B|S) = P(B|S1) + P(B|S2)`.
    pub fn from_subcontexts(
        p1: Probability,
        p2: Probability,
        p1_prime: Probability,
        p2_prime: Probability,
    ) -> Result<Self> {
        let p_s = Probability::new(p1.value() + p2.value())?;
        Self::new(p_s, p1_prime, p2_prime).with_subcontexts(p1, p2)
    }

    pub fn p_s(&self) -> Probability {
        self.p_s
    }

    pub fn p1_prime(&self) -> Probability {
        self.p1_prime
    }

    pub fn p2_prime(&self) -> Probability {
        self.p2_prime
    }

    pub fn p1(&self) -> Option<Probability> {
        self.subcontexts.map(|(p1, _)| p1)
    }

    pub fn p2(&self) -> Option<Probability> {
        self.subcontexts.map(|(_, p2)| p2)
    }

    pub fn subcontexts(&self) -> Option<(Probability, Probability)> {
        self.subcontexts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x.is_sign_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Why the transition coefficient could not be formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DegenerateReason {
    ZeroFirstPrimed,
    ZeroSecondPrimed,
    ZeroBothPrimed,
    /// `P(B|S1') P(B|S2')` underflows to zero.
    ScaleUnderflow,
}

impl DegenerateReason {
    fn from_primed(p1_prime: Probability, p2_prime: Probability) -> Option<Self> {
        match (p1_prime.is_zero(), p2_prime.is_zero()) {
            (false, false) => None,
            (true, false) => Some(DegenerateReason::ZeroFirstPrimed),
            (false, true) => Some(DegenerateReason::ZeroSecondPrimed),
            (true, true) => Some(DegenerateReason::ZeroBothPrimed),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DegenerateReason::ZeroFirstPrimed => "zero_p1_prime",
            DegenerateReason::ZeroSecondPrimed => "zero_p2_prime",
            DegenerateReason::ZeroBothPrimed => "zero_both_primed",
            DegenerateReason::ScaleUnderflow => "scale_underflow",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "zero_p1_prime" => Some(DegenerateReason::ZeroFirstPrimed),
            "zero_p2_prime" => Some(DegenerateReason::ZeroSecondPrimed),
            "zero_both_primed" => Some(DegenerateReason::ZeroBothPrimed),
            "scale_underflow" => Some(DegenerateReason::ScaleUnderflow),
            _ => None,
        }
    }
}

/// Interference type of a transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// `lambda = cos(theta)`, `theta` in `[0, pi]`.
    Trigonometric {
        theta: f64,
    },
    /// `lambda = sign * cosh(theta)`, `theta > 0`.
    Hyperbolic {
        sign: Sign,
        theta: f64,
    },
    Degenerate {
        reason: DegenerateReason,
    },
}

/// Regime without its parameters, for comparing classifications.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeKind {
    Trigonometric,
    Hyperbolic(Sign),
    Degenerate,
}

impl Regime {
    pub fn kind(&self) -> RegimeKind {
        match *self {
            Regime::Trigonometric { .. } => RegimeKind::Trigonometric,
            Regime::Hyperbolic { sign, .. } => RegimeKind::Hyperbolic(sign),
            Regime::Degenerate { .. } => RegimeKind::Degenerate,
        }
    }

    pub fn theta(&self) -> Option<f64> {
        match *self {
            Regime::Trigonometric { theta } | Regime::Hyperbolic { theta, .. } => Some(theta),
            Regime::Degenerate { .. } => None,
        }
    }

    /// The coefficient the regime represents, `cos(theta)` or `sign * cosh(theta)`.
    pub fn lambda(&self) -> Option<f64> {
        match *self {
            Regime::Trigonometric { theta } => Some(theta.cos()),
            Regime::Hyperbolic { sign, theta } => Some(sign.as_f64() * theta.cosh()),
            Regime::Degenerate { .. } => None,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Regime::Trigonometric { .. } => "trigonometric",
            Regime::Hyperbolic { .. } => "hyperbolic",
            Regime::Degenerate { .. } => "degenerate",
        }
    }
}

/// Perturbation term, transition coefficient and regime of one transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionAnalysis {
    pub delta: f64,
    /// `None` when a primed subcontext has probability zero.
    pub lambda: Option<f64>,
    pub regime: Regime,
}

impl TransitionAnalysis {
    /// Completes an analysis from an already computed perturbation term.
    pub fn from_delta(delta: f64, p1_prime: Probability, p2_prime: Probability) -> Self {
        if let Some(reason) = DegenerateReason::from_primed(p1_prime, p2_prime) {
            return TransitionAnalysis {
                delta,
                lambda: None,
                regime: Regime::Degenerate { reason },
            };
        }
        let lambda = delta / interference_scale(p1_prime, p2_prime);
        match classify(lambda) {
            Ok(regime) => TransitionAnalysis {
                delta,
                lambda: Some(lambda),
                regime,
            },
            Err(_) => TransitionAnalysis {
                delta,
                lambda: None,
                regime: Regime::Degenerate {
                    reason: DegenerateReason::ScaleUnderflow,
                },
            },
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self.regime, Regime::Degenerate { .. })
    }
}

#[inline]
fn interference_scale(p1_prime: Probability, p2_prime: Probability) -> f64 {
    2.0 * (p1_prime.value() * p2_prime.value()).sqrt()
}

/// Classical addition of alternatives, `P1 + P2`.
pub fn classical_sum(p1: Probability, p2: Probability) -> f64 {
    p1.value() + p2.value()
}

/// Interference addition `P1 + P2 + 2 sqrt(P1 P2) cos(theta)`.
pub fn trigonometric_sum(p1: Probability, p2: Probability, theta: f64) -> f64 {
    p1.value() + p2.value() + interference_scale(p1, p2) * theta.cos()
}

/// Hyperbolic addition `P1 + P2 ± 2 sqrt(P1 P2) cosh(theta)`.
pub fn hyperbolic_sum(p1: Probability, p2: Probability, sign: Sign, theta: f64) -> f64 {
    p1.value() + p2.value() + sign.as_f64() * interference_scale(p1, p2) * theta.cosh()
}

/// `[P(B|S1) - P(B|S1')] + [P(B|S2) - P(B|S2')]`.
pub fn delta_componentwise(p1: Probability, p2: Probability, p1_prime: Probability, p2_prime: Probability) -> f64 {
    (p1.value() - p1_prime.value()) + (p2.value() - p2_prime.value())
}

/// Perturbation term solved from `P(B|S) = P(B|S1') + P(B|S2') + delta`.
pub fn delta_from_reference(p_s: Probability, p1_prime: Probability, p2_prime: Probability) -> f64 {
    p_s.value() - (p1_prime.value() + p2_prime.value())
}

/// `delta / (2 sqrt(P(B|S1') P(B|S2')))`.
pub fn lambda_coefficient(delta: f64, p1_prime: Probability, p2_prime: Probability) -> Result<f64> {
    let scale = interference_scale(p1_prime, p2_prime);
    if scale == 0.0 {
        return Err(CalculusError::DegenerateDenominator);
    }
    Ok(delta / scale)
}

/// Splits a transition coefficient into its regime.
///
/// `|lambda| = 1` is classified trigonometric (`theta` is 0 or pi), so every
/// hyperbolic result has `theta > 0`.
pub fn classify(lambda: f64) -> Result<Regime> {
    if !lambda.is_finite() {
        return Err(CalculusError::NonFinite(lambda));
    }
    if lambda.abs() <= 1.0 {
        Ok(Regime::Trigonometric { theta: lambda.acos() })
    } else {
        Ok(Regime::Hyperbolic {
            sign: Sign::of(lambda),
            theta: lambda.abs().acosh(),
        })
    }
}

/// `P(B|S)` rebuilt from the primed subcontexts and a transition coefficient.
pub fn reconstruct_probability(p1_prime: Probability, p2_prime: Probability, lambda: f64) -> Result<Probability> {
    if !lambda.is_finite() {
        return Err(CalculusError::NonFinite(lambda));
    }
    let value = p1_prime.value() + p2_prime.value() + interference_scale(p1_prime, p2_prime) * lambda;
    Probability::new(value).map_err(|_| CalculusError::InadmissibleLambda { lambda, value })
}

/// Closed interval of coefficients for which [`reconstruct_probability`]
/// yields a probability.
pub fn lambda_range(p1_prime: Probability, p2_prime: Probability) -> Result<(f64, f64)> {
    if interference_scale(p1_prime, p2_prime) == 0.0 {
        return Err(CalculusError::DegenerateDenominator);
    }
    let (a, b) = (p1_prime.value(), p2_prime.value());
    // -(a + b) / (2 sqrt(ab)) written so that a == b gives exactly -1.
    let lower = -0.5 * ((a / b).sqrt() + (b / a).sqrt());
    let upper = (1.0 - a - b) / interference_scale(p1_prime, p2_prime);
    Ok((lower, upper))
}

/// Full analysis of a triple. Degeneracy is reported in the result.
pub fn analyze(triple: &ContextTriple) -> TransitionAnalysis {
    let delta = delta_from_reference(triple.p_s, triple.p1_prime, triple.p2_prime);
    TransitionAnalysis::from_delta(delta, triple.p1_prime, triple.p2_prime)
}

/// Signed error of treating `S1'`, `S2'` as if they were `S1`, `S2`.
///
/// Equal to the perturbation term; kept as a named diagnostic.
pub fn naive_identification_error(triple: &ContextTriple) -> f64 {
    triple.p_s.value() - (triple.p1_prime.value() + triple.p2_prime.value())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrespondencePoint {
    pub epsilon: f64,
    pub delta: f64,
    pub lambda: f64,
}

/// Moves the primed contexts towards the unprimed ones,
/// `P(B|Sj'(eps)) = P(B|Sj) + eps * cj`, and reports `(eps, delta, lambda)`.
pub fn correspondence_scan(
    base: &ContextTriple,
    perturbation: (f64, f64),
    epsilons: &[f64],
) -> Result<Vec<CorrespondencePoint>> {
    let (p1, p2) = base.subcontexts.ok_or(CalculusError::MissingSubcontexts)?;
    let (c1, c2) = perturbation;
    let perturb = |p: Probability, c: f64, epsilon: f64| -> Result<Probability> {
        let value = p.value() + epsilon * c;
        if !(value > 0.0 && value <= 1.0) {
            return Err(CalculusError::InvalidPerturbedProbability { epsilon, value });
        }
        Ok(Probability(value))
    };

    epsilons
        .iter()
        .map(|&epsilon| {
            let p1_prime = perturb(p1, c1, epsilon)?;
            let p2_prime = perturb(p2, c2, epsilon)?;
            let delta = delta_componentwise(p1, p2, p1_prime, p2_prime);
            let lambda = lambda_coefficient(delta, p1_prime, p2_prime)?;
            Ok(CorrespondencePoint { epsilon, delta, lambda })
        })
        .collect()
}

//! Two-term waves whose modulus reproduces a transformed probability.
//!
//! In the trigonometric regime the wave is complex,
//! `phi = sqrt(P(B|S1')) + sqrt(P(B|S2')) e^{i theta}` with `|phi|^2 = P(B|S)`.
//! In the hyperbolic regime the imaginary unit is replaced by the split-complex
//! unit `j` (`j^2 = +1`) and the modulus by `re^2 - hy^2`.

use std::ops::{Add, Mul, Neg};

use thiserror::Error;

use crate::calculus::{Probability, Regime, Sign, TransitionAnalysis};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum AmplitudeError {
    #[error("hyperbolic wave with theta = {theta} has modulus {value}, outside [0, 1]")]
    InadmissibleLambda { theta: f64, value: f64 },
    #[error("hyperbolic phase must be finite and non-negative, got {0}")]
    InvalidPhase(f64),
    #[error("degenerate transition has no wave representation")]
    DegenerateRegime,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexAmplitude {
    pub re: f64,
    pub im: f64,
}

impl ComplexAmplitude {
    pub const fn new(re: f64, im: f64) -> Self {
        ComplexAmplitude { re, im }
    }

    /// `e^{i theta}`.
    pub fn unit(theta: f64) -> Self {
        let (sin, cos) = theta.sin_cos();
        ComplexAmplitude { re: cos, im: sin }
    }

    pub fn scale(self, k: f64) -> Self {
        ComplexAmplitude {
            re: self.re * k,
            im: self.im * k,
        }
    }

    pub fn conj(self) -> Self {
        ComplexAmplitude {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn squared_modulus(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

impl Add for ComplexAmplitude {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        ComplexAmplitude {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Mul for ComplexAmplitude {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        ComplexAmplitude {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Neg for ComplexAmplitude {
    type Output = Self;

    fn neg(self) -> Self {
        ComplexAmplitude {
            re: -self.re,
            im: -self.im,
        }
    }
}

/// `re + hy j` with `j^2 = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SplitComplexAmplitude {
    pub re: f64,
    pub hy: f64,
}

impl SplitComplexAmplitude {
    pub const fn new(re: f64, hy: f64) -> Self {
        SplitComplexAmplitude { re, hy }
    }

    /// `e^{j theta} = cosh(theta) + j sinh(theta)`.
    pub fn unit(theta: f64) -> Self {
        SplitComplexAmplitude {
            re: theta.cosh(),
            hy: theta.sinh(),
        }
    }

    pub fn scale(self, k: f64) -> Self {
        SplitComplexAmplitude {
            re: self.re * k,
            hy: self.hy * k,
        }
    }

    pub fn conj(self) -> Self {
        SplitComplexAmplitude {
            re: self.re,
            hy: -self.hy,
        }
    }

    /// `re^2 - hy^2`, evaluated as `(re - hy)(re + hy)`; may be negative.
    pub fn hyperbolic_modulus(self) -> f64 {
        (self.re - self.hy) * (self.re + self.hy)
    }
}

impl Add for SplitComplexAmplitude {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        SplitComplexAmplitude {
            re: self.re + rhs.re,
            hy: self.hy + rhs.hy,
        }
    }
}

impl Mul for SplitComplexAmplitude {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        SplitComplexAmplitude {
            re: self.re * rhs.re + self.hy * rhs.hy,
            hy: self.re * rhs.hy + self.hy * rhs.re,
        }
    }
}

impl Neg for SplitComplexAmplitude {
    type Output = Self;

    fn neg(self) -> Self {
        SplitComplexAmplitude {
            re: -self.re,
            hy: -self.hy,
        }
    }
}

/// Wave attached to a non-degenerate transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wave {
    Complex(ComplexAmplitude),
    SplitComplex(SplitComplexAmplitude),
}

impl Wave {
    /// Squared modulus for complex waves, hyperbolic modulus for split-complex ones.
    pub fn modulus(&self) -> f64 {
        match *self {
            Wave::Complex(z) => z.squared_modulus(),
            Wave::SplitComplex(z) => z.hyperbolic_modulus(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Wave::Complex(_) => "complex",
            Wave::SplitComplex(_) => "split-complex",
        }
    }

    pub fn components(&self) -> (f64, f64) {
        match *self {
            Wave::Complex(z) => (z.re, z.im),
            Wave::SplitComplex(z) => (z.re, z.hy),
        }
    }
}

/// `sqrt(p1') + sqrt(p2') e^{i theta}`.
pub fn trig_wave(p1_prime: Probability, p2_prime: Probability, theta: f64) -> ComplexAmplitude {
    let first = ComplexAmplitude::new(p1_prime.value().sqrt(), 0.0);
    first + ComplexAmplitude::unit(theta).scale(p2_prime.value().sqrt())
}

/// `sqrt(p1') ± sqrt(p2') e^{j theta}`; the sign sits between the two terms.
pub fn hyper_wave(
    p1_prime: Probability,
    p2_prime: Probability,
    theta: f64,
    sign: Sign,
) -> Result<SplitComplexAmplitude, AmplitudeError> {
    if !(theta.is_finite() && theta >= 0.0) {
        return Err(AmplitudeError::InvalidPhase(theta));
    }
    let first = SplitComplexAmplitude::new(p1_prime.value().sqrt(), 0.0);
    let second = SplitComplexAmplitude::unit(theta).scale(sign.as_f64() * p2_prime.value().sqrt());
    let wave = first + second;
    let value = wave.hyperbolic_modulus();
    match Probability::new(value) {
        Ok(_) => Ok(wave),
        Err(_) => Err(AmplitudeError::InadmissibleLambda { theta, value }),
    }
}

pub fn wave_from_analysis(
    p1_prime: Probability,
    p2_prime: Probability,
    analysis: &TransitionAnalysis,
) -> Result<Wave, AmplitudeError> {
    match analysis.regime {
        Regime::Trigonometric { theta } => Ok(Wave::Complex(trig_wave(p1_prime, p2_prime, theta))),
        Regime::Hyperbolic { sign, theta } => hyper_wave(p1_prime, p2_prime, theta, sign).map(Wave::SplitComplex),
        Regime::Degenerate { .. } => Err(AmplitudeError::DegenerateRegime),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{analyze, reconstruct_probability, ContextTriple, DegenerateReason};
    use std::f64::consts::PI;

    fn p(v: f64) -> Probability {
        Probability::new(v).unwrap()
    }

    #[test]
    fn trig_wave_examples() {
        let w = trig_wave(p(0.5), p(0.5), PI);
        assert!(w.re.abs() <= 1e-15 && w.im.abs() <= 1e-15);
        assert!(w.squared_modulus() <= 1e-30);

        let w = trig_wave(p(0.3), p(0.2), PI / 3.0);
        assert!((w.squared_modulus() - 0.7449489742783177).abs() <= 1e-15);

        let w = trig_wave(p(0.25), p(0.25), 0.0);
        assert_eq!((w.re, w.im), (1.0, 0.0));
        assert_eq!(w.squared_modulus(), 1.0);
    }

    #[test]
    fn trig_wave_matches_reconstruction() {
        let w = trig_wave(p(0.3), p(0.2), 1.2);
        let expected = reconstruct_probability(p(0.3), p(0.2), 1.2f64.cos()).unwrap().value();
        assert!((w.squared_modulus() - expected).abs() <= 1e-12);
    }

    #[test]
    fn hyper_wave_examples() {
        let w = hyper_wave(p(0.1), p(0.1), 3.5f64.acosh(), Sign::Plus).unwrap();
        assert!((w.hyperbolic_modulus() - 0.9).abs() <= 1e-12);

        let w = hyper_wave(p(0.1), p(0.1), 0.0, Sign::Plus).unwrap();
        assert!((w.hyperbolic_modulus() - 0.4).abs() <= 1e-15);

        let w = hyper_wave(p(0.04), p(0.01), 0.0, Sign::Minus).unwrap();
        assert!((w.hyperbolic_modulus() - 0.01).abs() <= 1e-15);
    }

    #[test]
    fn hyper_wave_rejects_out_of_range() {
        assert!(matches!(
            hyper_wave(p(0.1), p(0.1), 5.0f64.acosh(), Sign::Plus),
            Err(AmplitudeError::InadmissibleLambda { .. })
        ));
        assert!(matches!(
            hyper_wave(p(0.1), p(0.1), 2.0f64.acosh(), Sign::Minus),
            Err(AmplitudeError::InadmissibleLambda { .. })
        ));
        assert_eq!(
            hyper_wave(p(0.1), p(0.1), -0.5, Sign::Plus),
            Err(AmplitudeError::InvalidPhase(-0.5))
        );
    }

    #[test]
    fn split_complex_unit_has_unit_modulus() {
        for theta in [0.0, 0.3, 1.0, 2.5] {
            let u = SplitComplexAmplitude::unit(theta);
            assert!((u.hyperbolic_modulus() - 1.0).abs() <= 1e-12);
            // e^{ja} e^{jb} = e^{j(a+b)}
            let v = u * SplitComplexAmplitude::unit(0.7);
            let w = SplitComplexAmplitude::unit(theta + 0.7);
            assert!((v.re - w.re).abs() <= 1e-12 && (v.hy - w.hy).abs() <= 1e-12);
        }
    }

    #[test]
    fn wave_from_analysis_examples() {
        let t = ContextTriple::from_values(0.7449489742783177, 0.3, 0.2).unwrap();
        let w = wave_from_analysis(t.p1_prime(), t.p2_prime(), &analyze(&t)).unwrap();
        assert_eq!(w.kind(), "complex");
        assert!((w.modulus() - 0.7449489742783177).abs() <= 1e-12);

        let a = TransitionAnalysis {
            delta: 0.7,
            lambda: Some(3.5),
            regime: Regime::Hyperbolic {
                sign: Sign::Plus,
                theta: 3.5f64.acosh(),
            },
        };
        let w = wave_from_analysis(p(0.1), p(0.1), &a).unwrap();
        assert_eq!(w.kind(), "split-complex");
        assert!((w.modulus() - 0.9).abs() <= 1e-12);

        let a = TransitionAnalysis {
            delta: 0.0,
            lambda: Some(0.0),
            regime: Regime::Trigonometric { theta: PI / 2.0 },
        };
        let w = wave_from_analysis(p(0.25), p(0.25), &a).unwrap();
        assert!((w.modulus() - 0.5).abs() <= 1e-15);

        let a = TransitionAnalysis {
            delta: 0.1,
            lambda: None,
            regime: Regime::Degenerate {
                reason: DegenerateReason::ZeroFirstPrimed,
            },
        };
        assert_eq!(
            wave_from_analysis(p(0.0), p(0.2), &a),
            Err(AmplitudeError::DegenerateRegime)
        );
    }
}

//! Contextual probability transformations.
//!
//! When the complex of conditions under which probabilities are measured
//! changes, the classical addition rule `P = P1 + P2` picks up an
//! interference term. This crate computes that term, classifies it as
//! trigonometric (`cos theta`) or hyperbolic (`±cosh theta`), builds the
//! matching complex or split-complex wave, and recovers all of it from
//! finite count data.
//!
//! - [`calculus`]: perturbation term, transition coefficient, classification.
//! - [`amplitudes`]: complex and split-complex waves.
//! - [`simulation`]: scenarios, seeded sampling, bootstrap estimation.
//! - [`data`]: count files and report documents.

pub mod amplitudes;
pub mod calculus;
pub mod data;
pub mod simulation;

pub use amplitudes::{hyper_wave, trig_wave, wave_from_analysis, ComplexAmplitude, SplitComplexAmplitude, Wave};
pub use calculus::{
    analyze, classify, correspondence_scan, delta_componentwise, delta_from_reference, lambda_coefficient,
    lambda_range, naive_identification_error, reconstruct_probability, ContextTriple, Probability, Regime, RegimeKind,
    Sign, Tolerances, TransitionAnalysis,
};
pub use data::{additivity_check, parse_counts, write_counts, write_report, ReportDocument};
pub use simulation::{
    estimate, sample_counts, scenario_truth, ContextLabel, CountTable, EstimationReport, HyperbolicUrn, Scenario,
    TwoSlit,
};

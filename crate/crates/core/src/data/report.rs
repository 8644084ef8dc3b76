//! The analysis report document.
//!
//! Keys are written in declaration order, floats with 17 significant digits,
//! and the document ends with a newline:
//!
//! ```text
//! schema_version, inputs[], delta, lambda, regime, lambda_interval,
//! regime_stability, additivity_check, wave, reproducibility
//! ```

use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::numfmt::CanonicalFormatter;
use super::{additivity_check_with, AdditivityError};
use crate::amplitudes::{wave_from_analysis, Wave};
use crate::calculus::{ContextTriple, DegenerateReason, Probability, Regime, Sign, TransitionAnalysis};
use crate::simulation::{context_probabilities, ContextLabel, CountTable, EstimationReport, GENERATOR_NAME};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextInput {
    pub context: String,
    pub p_hat: f64,
    pub successes: Option<u64>,
    pub trials: Option<u64>,
    pub interval: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "lowercase", deny_unknown_fields)]
pub enum RegimeDoc {
    Trigonometric { theta: f64 },
    Hyperbolic { sign: i8, theta: f64 },
    Degenerate { reason: String },
}

impl From<Regime> for RegimeDoc {
    fn from(regime: Regime) -> Self {
        match regime {
            Regime::Trigonometric { theta } => RegimeDoc::Trigonometric { theta },
            Regime::Hyperbolic { sign, theta } => RegimeDoc::Hyperbolic {
                sign: sign.as_i8(),
                theta,
            },
            Regime::Degenerate { reason } => RegimeDoc::Degenerate {
                reason: reason.as_str().to_owned(),
            },
        }
    }
}

impl RegimeDoc {
    /// Back to the calculus type; `None` for unknown reasons or signs.
    pub fn to_regime(&self) -> Option<Regime> {
        Some(match self {
            RegimeDoc::Trigonometric { theta } => Regime::Trigonometric { theta: *theta },
            RegimeDoc::Hyperbolic { sign, theta } => Regime::Hyperbolic {
                sign: match sign {
                    1 => Sign::Plus,
                    -1 => Sign::Minus,
                    _ => return None,
                },
                theta: *theta,
            },
            RegimeDoc::Degenerate { reason } => Regime::Degenerate {
                reason: DegenerateReason::parse(reason)?,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdditivityDoc {
    pub present: bool,
    /// `null` when S1/S2 are absent or all variances vanish.
    pub z_statistic: Option<f64>,
    pub consistent: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveDoc {
    pub kind: String,
    pub components: [f64; 2],
}

impl From<Wave> for WaveDoc {
    fn from(wave: Wave) -> Self {
        let (a, b) = wave.components();
        WaveDoc {
            kind: wave.kind().to_owned(),
            components: [a, b],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Reproducibility {
    pub seed: u64,
    pub replicates: u32,
    pub confidence: Option<f64>,
    pub generator_name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub schema_version: String,
    pub inputs: Vec<ContextInput>,
    pub delta: f64,
    pub lambda: Option<f64>,
    pub regime: RegimeDoc,
    pub lambda_interval: Option<[f64; 2]>,
    pub regime_stability: Option<f64>,
    pub additivity_check: AdditivityDoc,
    pub wave: Option<WaveDoc>,
    pub reproducibility: Reproducibility,
}

fn wave_doc(triple: &ContextTriple, analysis: &TransitionAnalysis) -> Option<WaveDoc> {
    wave_from_analysis(triple.p1_prime(), triple.p2_prime(), analysis)
        .ok()
        .map(WaveDoc::from)
}

impl ReportDocument {
    /// Report for probabilities known exactly; no intervals.
    pub fn from_exact(triple: &ContextTriple, analysis: &TransitionAnalysis) -> Self {
        let inputs = context_probabilities(triple)
            .into_iter()
            .map(|(label, p): (ContextLabel, Probability)| ContextInput {
                context: label.as_str().to_owned(),
                p_hat: p.value(),
                successes: None,
                trials: None,
                interval: None,
            })
            .collect();
        let additivity_check = match triple.subcontexts() {
            // Exact subcontexts were checked for additivity when the triple was built.
            Some(_) => AdditivityDoc {
                present: true,
                z_statistic: None,
                consistent: Some(true),
            },
            None => AdditivityDoc {
                present: false,
                z_statistic: None,
                consistent: None,
            },
        };
        ReportDocument {
            schema_version: SCHEMA_VERSION.to_owned(),
            inputs,
            delta: analysis.delta,
            lambda: analysis.lambda,
            regime: analysis.regime.into(),
            lambda_interval: None,
            regime_stability: None,
            additivity_check,
            wave: wave_doc(triple, analysis),
            reproducibility: Reproducibility {
                seed: 0,
                replicates: 0,
                confidence: None,
                generator_name: GENERATOR_NAME.to_owned(),
            },
        }
    }

    /// Report for estimated probabilities, with bootstrap intervals.
    pub fn from_estimate(counts: &CountTable, report: &EstimationReport, z_threshold: f64) -> Self {
        let inputs = report
            .contexts
            .iter()
            .map(|c| ContextInput {
                context: c.label.as_str().to_owned(),
                p_hat: c.p_hat,
                successes: Some(c.successes),
                trials: Some(c.trials),
                interval: c.interval.map(|(lo, hi)| [lo, hi]),
            })
            .collect();
        let additivity_check = match additivity_check_with(counts, z_threshold) {
            Ok(Some(r)) => AdditivityDoc {
                present: true,
                z_statistic: Some(r.z_statistic),
                consistent: Some(r.consistent),
            },
            Ok(None) => AdditivityDoc {
                present: false,
                z_statistic: None,
                consistent: None,
            },
            Err(AdditivityError::DegenerateVariance(_)) => AdditivityDoc {
                present: true,
                z_statistic: None,
                consistent: Some(false),
            },
        };
        ReportDocument {
            schema_version: SCHEMA_VERSION.to_owned(),
            inputs,
            delta: report.point.delta,
            lambda: report.point.lambda,
            regime: report.point.regime.into(),
            lambda_interval: report.lambda_interval.map(|(lo, hi)| [lo, hi]),
            regime_stability: report.regime_stability,
            additivity_check,
            wave: wave_doc(&report.point_triple, &report.point),
            reproducibility: Reproducibility {
                seed: report.seed,
                replicates: report.replicates,
                confidence: Some(report.confidence),
                generator_name: GENERATOR_NAME.to_owned(),
            },
        }
    }
}

/// Canonical serialization; newline-terminated.
pub fn write_report(doc: &ReportDocument) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, CanonicalFormatter::new());
    doc.serialize(&mut ser)
        .expect("report documents contain only finite numbers");
    out.push(b'\n');
    out
}

pub fn parse_report(bytes: &[u8]) -> serde_json::Result<ReportDocument> {
    serde_json::from_slice(bytes)
}

pub fn write_report_to_path(doc: &ReportDocument, path: &Path) -> io::Result<()> {
    write_atomic(path, &write_report(doc))
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

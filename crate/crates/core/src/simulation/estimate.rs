use rand_distr::{Binomial, Distribution};
use thiserror::Error;

use super::rng::{self, Domain};
use super::{count_difference, validate_row, ContextLabel, CountRow, CountTable, CountTableError};
use crate::calculus::{delta_from_reference, ContextTriple, Probability, Regime, RegimeKind, TransitionAnalysis};

pub const DEFAULT_REPLICATES: u32 = 1000;
pub const DEFAULT_CONFIDENCE: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EstimateError {
    #[error("context {0} has zero trials")]
    ZeroTrials(ContextLabel),
    #[error("invalid count row: {0}")]
    InvalidRow(CountTableError),
    #[error("confidence level must lie strictly between 0 and 1, got {0}")]
    InvalidConfidence(f64),
    #[error("point regime {found:?} does not match expected {expected:?}")]
    RegimeMismatch { expected: RegimeKind, found: RegimeKind },
}

/// Point estimate and bootstrap interval for one context.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContextEstimate {
    pub label: ContextLabel,
    pub successes: u64,
    pub trials: u64,
    pub p_hat: f64,
    /// `None` when no replicates were drawn.
    pub interval: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationReport {
    pub point: TransitionAnalysis,
    /// `(P(B|S), P(B|S1'), P(B|S2'))` at the point estimate.
    pub point_triple: ContextTriple,
    pub confidence: f64,
    /// Percentile interval for lambda, widened if needed to contain the point.
    pub lambda_interval: Option<(f64, f64)>,
    pub lambda_sd: Option<f64>,
    /// Spread of the phase over replicates that share the point regime.
    pub theta_sd: Option<f64>,
    pub contexts: Vec<ContextEstimate>,
    pub regime_stability: Option<f64>,
    pub seed: u64,
    pub replicates: u32,
}

impl EstimationReport {
    /// True when `p_hat` of a primed subcontext is zero and lambda is undefined.
    pub fn is_degenerate(&self) -> bool {
        self.point.is_degenerate()
    }

    pub fn context(&self, label: ContextLabel) -> Option<&ContextEstimate> {
        self.contexts.iter().find(|c| c.label == label)
    }
}

/// Linear interpolation between order statistics of a sorted sample.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> Option<f64> {
    match sorted {
        [] => None,
        [x] => Some(*x),
        _ => {
            let h = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
            let lo = h.floor() as usize;
            let hi = h.ceil() as usize;
            Some(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
        }
    }
}

fn sample_sd(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    Some((ss / (n - 1.0)).sqrt())
}

fn percentile_interval(mut values: Vec<f64>, confidence: f64) -> Option<(f64, f64)> {
    values.sort_by(f64::total_cmp);
    let alpha = 1.0 - confidence;
    Some((
        quantile_sorted(&values, alpha / 2.0)?,
        quantile_sorted(&values, 1.0 - alpha / 2.0)?,
    ))
}

/// Analysis of `successes[i] / rows[i].trials`, with the perturbation term
/// taken from the counts directly so that additive counts give `delta = 0`.
fn analyze_counts(rows: &[CountRow], successes: &[u64]) -> (ContextTriple, TransitionAnalysis) {
    let pair = |label| {
        let i = rows
            .iter()
            .position(|r| r.label == label)
            .expect("required label present");
        (successes[i], rows[i].trials)
    };
    let prob = |label| {
        let (k, n) = pair(label);
        Probability::new(k as f64 / n as f64).expect("count ratio lies in [0, 1]")
    };
    let triple = ContextTriple::new(prob(ContextLabel::S), prob(ContextLabel::S1p), prob(ContextLabel::S2p));
    let delta = count_difference(pair(ContextLabel::S), pair(ContextLabel::S1p), pair(ContextLabel::S2p))
        .unwrap_or_else(|| delta_from_reference(triple.p_s(), triple.p1_prime(), triple.p2_prime()));
    (
        triple,
        TransitionAnalysis::from_delta(delta, triple.p1_prime(), triple.p2_prime()),
    )
}

/// Point analysis of the count ratios plus a parametric bootstrap.
///
/// Replicate `r` redraws each context's successes from
/// `Binomial(trials, p_hat)` using the generator substream
/// `(seed, r, context)`, so the output depends only on the arguments.
pub fn estimate(
    counts: &CountTable,
    replicates: u32,
    confidence: f64,
    seed: u64,
) -> Result<EstimationReport, EstimateError> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(EstimateError::InvalidConfidence(confidence));
    }
    let rows = counts.canonical_rows();
    for row in &rows {
        validate_row(row).map_err(|e| match e {
            CountTableError::ZeroTrials(label) => EstimateError::ZeroTrials(label),
            other => EstimateError::InvalidRow(other),
        })?;
    }

    let p_hats: Vec<f64> = rows.iter().map(CountRow::p_hat).collect();
    let observed: Vec<u64> = rows.iter().map(|r| r.successes).collect();
    let (point_triple, point) = analyze_counts(&rows, &observed);
    let point_kind = point.regime.kind();

    let samplers: Vec<Binomial> = rows
        .iter()
        .zip(&p_hats)
        .map(|(row, &p)| Binomial::new(row.trials, p).expect("p_hat is a probability"))
        .collect();

    let mut per_context: Vec<Vec<f64>> = vec![Vec::with_capacity(replicates as usize); rows.len()];
    let mut lambdas = Vec::with_capacity(replicates as usize);
    let mut thetas = Vec::with_capacity(replicates as usize);
    let mut agreeing = 0u32;
    let mut draw = vec![0u64; rows.len()];

    for r in 0..replicates {
        for (i, (row, sampler)) in rows.iter().zip(&samplers).enumerate() {
            let mut rng = rng::substream(seed, Domain::Bootstrap, u64::from(r), row.label.stream_id());
            draw[i] = sampler.sample(&mut rng);
            per_context[i].push(draw[i] as f64 / row.trials as f64);
        }
        let (_, replicate) = analyze_counts(&rows, &draw);
        if let Some(lambda) = replicate.lambda {
            lambdas.push(lambda);
        }
        if replicate.regime.kind() == point_kind {
            agreeing += 1;
            if let Some(theta) = replicate.regime.theta() {
                thetas.push(theta);
            }
        }
    }

    let lambda_interval = match point.lambda {
        Some(lambda) => {
            percentile_interval(lambdas.clone(), confidence).map(|(lo, hi)| (lo.min(lambda), hi.max(lambda)))
        }
        None => None,
    };
    let contexts = rows
        .iter()
        .zip(&p_hats)
        .zip(per_context)
        .map(|((row, &p_hat), values)| ContextEstimate {
            label: row.label,
            successes: row.successes,
            trials: row.trials,
            p_hat,
            interval: percentile_interval(values, confidence),
        })
        .collect();

    Ok(EstimationReport {
        point,
        point_triple,
        confidence,
        lambda_interval,
        lambda_sd: point.lambda.and(sample_sd(&lambdas)),
        theta_sd: point.regime.theta().and(sample_sd(&thetas)),
        contexts,
        regime_stability: (replicates > 0).then(|| f64::from(agreeing) / f64::from(replicates)),
        seed,
        replicates,
    })
}

/// `|theta_hat - theta|` for a report whose point regime should match `expected`.
pub fn theta_recovery_error(expected: Regime, report: &EstimationReport) -> Result<f64, EstimateError> {
    let found = report.point.regime.kind();
    match (expected.theta(), report.point.regime.theta()) {
        (Some(truth), Some(estimate)) if expected.kind() == found => Ok((estimate - truth).abs()),
        _ => Err(EstimateError::RegimeMismatch {
            expected: expected.kind(),
            found,
        }),
    }
}

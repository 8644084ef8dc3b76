//! Count files in, analysis reports out.
//!
//! Count files are CSV with the exact header `context,successes,trials`.
//! Lines starting with `#` are comments, blank lines are skipped, and both
//! LF and CRLF endings are accepted.

mod numfmt;
mod report;

use std::fmt;

use thiserror::Error;

use crate::simulation::{count_difference, ContextLabel, CountRow, CountTable, CountTableError};

pub use numfmt::format_f64;
pub use report::{
    parse_report, write_atomic, write_report, write_report_to_path, AdditivityDoc, ContextInput, RegimeDoc,
    ReportDocument, Reproducibility, WaveDoc, SCHEMA_VERSION,
};

pub const COUNT_HEADER: [&str; 3] = ["context", "successes", "trials"];

/// `|z|` at or below this is read as consistent with additivity.
pub const DEFAULT_Z_THRESHOLD: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParseErrorKind {
    InvalidUtf8,
    MissingHeader,
    BadHeader,
    MalformedRow,
    BadInteger,
    UnknownLabel,
    DuplicateLabel,
    MissingLabel,
    SuccessesExceedTrials,
    ZeroTrials,
}

impl ParseErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ParseErrorKind::InvalidUtf8 => "invalid_utf8",
            ParseErrorKind::MissingHeader => "missing_header",
            ParseErrorKind::BadHeader => "bad_header",
            ParseErrorKind::MalformedRow => "malformed_row",
            ParseErrorKind::BadInteger => "bad_integer",
            ParseErrorKind::UnknownLabel => "unknown_label",
            ParseErrorKind::DuplicateLabel => "duplicate_label",
            ParseErrorKind::MissingLabel => "missing_label",
            ParseErrorKind::SuccessesExceedTrials => "successes_exceed_trials",
            ParseErrorKind::ZeroTrials => "zero_trials",
        }
    }
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}: {detail}")]
pub struct ParseError {
    pub line: u64,
    pub kind: ParseErrorKind,
    pub detail: String,
}

impl ParseError {
    fn new(line: u64, kind: ParseErrorKind, detail: impl Into<String>) -> Self {
        ParseError {
            line,
            kind,
            detail: detail.into(),
        }
    }
}

/// A parsed count file with the line each row came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountFile {
    pub source: String,
    pub table: CountTable,
    pub lines: Vec<(ContextLabel, u64)>,
}

impl CountFile {
    pub fn line_of(&self, label: ContextLabel) -> Option<u64> {
        self.lines.iter().find(|(l, _)| *l == label).map(|&(_, n)| n)
    }
}

pub fn parse_counts(text: &[u8]) -> Result<CountFile, ParseError> {
    parse_counts_named(text, "<input>")
}

pub fn parse_counts_named(text: &[u8], source: &str) -> Result<CountFile, ParseError> {
    let text = std::str::from_utf8(text).map_err(|e| {
        let line = text[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() as u64 + 1;
        ParseError::new(line, ParseErrorKind::InvalidUtf8, e.to_string())
    })?;

    let mut header_seen = false;
    let mut rows: Vec<CountRow> = Vec::new();
    let mut lines = Vec::new();
    let mut last_line = 1;

    for (index, raw) in text.lines().enumerate() {
        let line = index as u64 + 1;
        last_line = line;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();

        if !header_seen {
            if fields != COUNT_HEADER {
                return Err(ParseError::new(
                    line,
                    ParseErrorKind::BadHeader,
                    format!("expected `{}`", COUNT_HEADER.join(",")),
                ));
            }
            header_seen = true;
            continue;
        }

        let [label, successes, trials] = fields[..] else {
            return Err(ParseError::new(
                line,
                ParseErrorKind::MalformedRow,
                format!("expected 3 fields, found {}", fields.len()),
            ));
        };
        let label: ContextLabel = label.parse().map_err(|e: crate::simulation::UnknownLabel| {
            ParseError::new(line, ParseErrorKind::UnknownLabel, e.to_string())
        })?;
        let integer = |field: &str, name: &str| {
            field.parse::<u64>().map_err(|_| {
                ParseError::new(
                    line,
                    ParseErrorKind::BadInteger,
                    format!("{name} `{field}` is not a non-negative integer"),
                )
            })
        };
        let successes = integer(successes, "successes")?;
        let trials = integer(trials, "trials")?;

        if trials == 0 {
            return Err(ParseError::new(
                line,
                ParseErrorKind::ZeroTrials,
                format!("context {label}"),
            ));
        }
        if successes > trials {
            return Err(ParseError::new(
                line,
                ParseErrorKind::SuccessesExceedTrials,
                format!("context {label}: {successes} successes > {trials} trials"),
            ));
        }
        if let Some(&(_, first)) = lines.iter().find(|(l, _)| *l == label) {
            return Err(ParseError::new(
                line,
                ParseErrorKind::DuplicateLabel,
                format!("context {label} already given on line {first}"),
            ));
        }
        rows.push(CountRow {
            label,
            successes,
            trials,
        });
        lines.push((label, line));
    }

    if !header_seen {
        return Err(ParseError::new(1, ParseErrorKind::MissingHeader, "empty input"));
    }
    let table = CountTable::new(rows).map_err(|e| match e {
        CountTableError::MissingLabel(label) => ParseError::new(
            last_line,
            ParseErrorKind::MissingLabel,
            format!("context {label} is required"),
        ),
        // Row-level checks above already cover the other cases.
        other => ParseError::new(last_line, ParseErrorKind::MalformedRow, other.to_string()),
    })?;

    Ok(CountFile {
        source: source.to_owned(),
        table,
        lines,
    })
}

/// Serializes a table as a count file, rows in canonical label order.
pub fn write_counts(table: &CountTable) -> String {
    let mut out = COUNT_HEADER.join(",");
    out.push('\n');
    for row in table.canonical_rows() {
        out.push_str(&format!("{},{},{}\n", row.label, row.successes, row.trials));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum AdditivityError {
    #[error("all variances are zero but P(B|S) - P(B|S1) - P(B|S2) = {0}")]
    DegenerateVariance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdditivityResult {
    pub z_statistic: f64,
    pub consistent: bool,
}

/// Two-sided z-test of `P(B|S) = P(B|S1) + P(B|S2)` at `|z| <= 3`.
///
/// `None` unless both `S1` and `S2` are present.
pub fn additivity_check(counts: &CountTable) -> Result<Option<AdditivityResult>, AdditivityError> {
    additivity_check_with(counts, DEFAULT_Z_THRESHOLD)
}

pub fn additivity_check_with(counts: &CountTable, threshold: f64) -> Result<Option<AdditivityResult>, AdditivityError> {
    let (Some(s), Some(s1), Some(s2)) = (
        counts.get(ContextLabel::S),
        counts.get(ContextLabel::S1),
        counts.get(ContextLabel::S2),
    ) else {
        return Ok(None);
    };
    let variance = |r: &CountRow| {
        let p = r.p_hat();
        p * (1.0 - p) / r.trials as f64
    };
    let diff = count_difference(
        (s.successes, s.trials),
        (s1.successes, s1.trials),
        (s2.successes, s2.trials),
    )
    .unwrap_or_else(|| s.p_hat() - s1.p_hat() - s2.p_hat());
    let total = variance(s) + variance(s1) + variance(s2);
    let z_statistic = if total > 0.0 {
        diff / total.sqrt()
    } else if diff == 0.0 {
        0.0
    } else {
        return Err(AdditivityError::DegenerateVariance(diff));
    };
    Ok(Some(AdditivityResult {
        z_statistic,
        consistent: z_statistic.abs() <= threshold,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<CountFile, ParseError> {
        parse_counts(s.as_bytes())
    }

    #[test]
    fn parse_examples() {
        let f = parse("context,successes,trials\nS,9,10\nS1p,1,10\nS2p,1,10").unwrap();
        assert_eq!(f.table.rows().len(), 3);
        assert_eq!(f.table.p_hat(ContextLabel::S), Some(0.9));
        assert_eq!(f.table.p_hat(ContextLabel::S1p), Some(0.1));
        assert_eq!(f.table.p_hat(ContextLabel::S2p), Some(0.1));
        assert_eq!(f.line_of(ContextLabel::S1p), Some(3));

        let f = parse("context,successes,trials\nS,0,10\nS1p,0,10\nS2p,0,10").unwrap();
        assert_eq!(f.table.p_hat(ContextLabel::S), Some(0.0));

        let e = parse("context,successes,trials\nS,11,10").unwrap_err();
        assert_eq!((e.line, e.kind), (2, ParseErrorKind::SuccessesExceedTrials));
    }

    #[test]
    fn comments_crlf_and_order() {
        let text = "# generated\r\ncontext,successes,trials\r\n\r\nS2p,2,10\r\n# note\r\nS,5,10\r\nS1p,3,10\r\n";
        let f = parse(text).unwrap();
        assert_eq!(f.table.p_hat(ContextLabel::S2p), Some(0.2));
        assert_eq!(f.line_of(ContextLabel::S), Some(6));
    }

    #[test]
    fn parse_errors_carry_lines() {
        let cases = [
            ("", 1, ParseErrorKind::MissingHeader),
            ("ctx,successes,trials\n", 1, ParseErrorKind::BadHeader),
            ("context,successes,trials\nS,1\n", 2, ParseErrorKind::MalformedRow),
            ("context,successes,trials\nS,1,x\n", 2, ParseErrorKind::BadInteger),
            ("context,successes,trials\nS,-1,4\n", 2, ParseErrorKind::BadInteger),
            ("context,successes,trials\nS,1.5,4\n", 2, ParseErrorKind::BadInteger),
            ("context,successes,trials\nS3,1,4\n", 2, ParseErrorKind::UnknownLabel),
            (
                "context,successes,trials\nS,1,4\nS,1,4\n",
                3,
                ParseErrorKind::DuplicateLabel,
            ),
            (
                "context,successes,trials\nS,1,4\nS1p,1,4\n",
                3,
                ParseErrorKind::MissingLabel,
            ),
            ("context,successes,trials\nS,0,0\n", 2, ParseErrorKind::ZeroTrials),
        ];
        for (text, line, kind) in cases {
            let e = parse(text).unwrap_err();
            assert_eq!((e.line, e.kind), (line, kind), "{text:?}: {e}");
        }
        let e = parse_counts(b"context,successes,trials\nS\xff,1,4\n").unwrap_err();
        assert_eq!((e.line, e.kind), (2, ParseErrorKind::InvalidUtf8));
    }

    #[test]
    fn counts_round_trip() {
        let f = parse("context,successes,trials\nS2p,2,10\nS,5,10\nS1p,3,10\nS1,1,7\n").unwrap();
        let text = write_counts(&f.table);
        assert_eq!(text, "context,successes,trials\nS,5,10\nS1,1,7\nS1p,3,10\nS2p,2,10\n");
        let again = parse(&text).unwrap();
        assert_eq!(again.table.canonical_rows(), f.table.canonical_rows());
    }

    fn table(text: &str) -> CountTable {
        parse(text).unwrap().table
    }

    #[test]
    fn additivity_examples() {
        let exact =
            table("context,successes,trials\nS,900,1000\nS1,400,1000\nS2,500,1000\nS1p,100,1000\nS2p,100,1000\n");
        let r = additivity_check(&exact).unwrap().unwrap();
        assert_eq!(r.z_statistic, 0.0);
        assert!(r.consistent);

        // 0.3 - 0.1 - 0.2 is not zero in floating point
        let exact = table("context,successes,trials\nS,300,1000\nS1,100,1000\nS2,200,1000\nS1p,1,10\nS2p,1,10\n");
        assert_eq!(additivity_check(&exact).unwrap().unwrap().z_statistic, 0.0);
        let mixed = table("context,successes,trials\nS,3,10\nS1,10,100\nS2,200,1000\nS1p,1,10\nS2p,1,10\n");
        assert_eq!(additivity_check(&mixed).unwrap().unwrap().z_statistic, 0.0);

        // 0.7 / sqrt(3 * 0.9 * 0.1 / 1000)
        let broken =
            table("context,successes,trials\nS,900,1000\nS1,100,1000\nS2,100,1000\nS1p,100,1000\nS2p,100,1000\n");
        let r = additivity_check(&broken).unwrap().unwrap();
        assert!((r.z_statistic - 42.60064336151292).abs() < 1e-9);
        assert!(!r.consistent);

        let absent = table("context,successes,trials\nS,900,1000\nS1,400,1000\nS1p,100,1000\nS2p,100,1000\n");
        assert_eq!(additivity_check(&absent).unwrap(), None);
    }

    #[test]
    fn additivity_row_order_symmetry() {
        let a = table("context,successes,trials\nS,600,1000\nS1,250,900\nS2,330,1100\nS1p,1,10\nS2p,1,10\n");
        let b = table("context,successes,trials\nS2p,1,10\nS2,330,1100\nS1p,1,10\nS1,250,900\nS,600,1000\n");
        assert_eq!(additivity_check(&a), additivity_check(&b));
    }

    #[test]
    fn additivity_degenerate_variance() {
        let t = table("context,successes,trials\nS,10,10\nS1,0,10\nS2,0,10\nS1p,1,10\nS2p,1,10\n");
        assert_eq!(additivity_check(&t), Err(AdditivityError::DegenerateVariance(1.0)));
        let t = table("context,successes,trials\nS,0,10\nS1,0,10\nS2,0,10\nS1p,1,10\nS2p,1,10\n");
        assert_eq!(additivity_check(&t).unwrap().unwrap().z_statistic, 0.0);
    }
}

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::Path;
use std::process::ExitCode;

use ctxprob::calculus::{classify, lambda_range, reconstruct_probability, Regime, TransitionAnalysis};
use ctxprob::data::{format_f64, parse_counts_named, write_atomic, write_counts, write_report, ReportDocument};
use ctxprob::simulation::{estimate, sample_counts, scenario_truth, DirectScenario, HyperbolicUrn, Scenario, TwoSlit};
use ctxprob::{analyze as analyze_triple, ContextTriple, Probability};

use crate::decimal::Decimal;
use crate::{AnalyzeArgs, ProbArg, RangeArgs, SampleArgs, SimulateCommand, SweepArgs};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DATA: u8 = 2;
pub const EXIT_INADMISSIBLE: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    code: u8,
    kind: &'static str,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            kind: "usage",
            message: message.into(),
        }
    }

    fn data(kind: &'static str, message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_DATA,
            kind,
            message: message.into(),
        }
    }

    fn inadmissible(kind: &'static str, message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INADMISSIBLE,
            kind,
            message: message.into(),
        }
    }

    pub fn report(&self) -> ExitCode {
        let message = self.message.replace(['\n', '\r'], " ");
        eprintln!("error code={} kind={}: {}", self.code, self.kind, message);
        ExitCode::from(self.code)
    }
}

fn prob(arg: ProbArg) -> Probability {
    Probability::new(arg.value).expect("flag values are validated to [0, 1]")
}

fn read_input(path: &Path) -> Result<(Vec<u8>, String), CliError> {
    let mut bytes = Vec::new();
    if path == Path::new("-") {
        io::stdin()
            .read_to_end(&mut bytes)
            .map_err(|e| CliError::data("io", format!("<stdin>: {e}")))?;
        Ok((bytes, "<stdin>".to_owned()))
    } else {
        let name = path.display().to_string();
        bytes = std::fs::read(path).map_err(|e| CliError::data("io", format!("{name}: {e}")))?;
        Ok((bytes, name))
    }
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let result = if path == Path::new("-") {
        let mut out = io::stdout().lock();
        out.write_all(bytes).and_then(|()| out.flush())
    } else {
        write_atomic(path, bytes)
    };
    result.map_err(|e| CliError::data("io", format!("{}: {e}", path.display())))
}

pub fn analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let doc = match (&args.input, args.p_s) {
        (Some(path), _) => {
            let (bytes, name) = read_input(path)?;
            let file = parse_counts_named(&bytes, &name)
                .map_err(|e| CliError::data(e.kind.as_str(), format!("{name}: {e}")))?;
            let report = estimate(&file.table, args.replicates, args.confidence, args.seed)
                .map_err(|e| CliError::data("estimate", e.to_string()))?;
            ReportDocument::from_estimate(&file.table, &report, args.z_threshold)
        }
        (None, Some(p_s)) => {
            let (p1p, p2p) = match (args.p1p, args.p2p) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(CliError::usage("--p-s needs --p1p and --p2p")),
            };
            let mut triple = ContextTriple::new(prob(p_s), prob(p1p), prob(p2p));
            if let (Some(p1), Some(p2)) = (args.p1, args.p2) {
                triple = triple
                    .with_subcontexts(prob(p1), prob(p2))
                    .map_err(|e| CliError::inadmissible("additivity", e.to_string()))?;
            }
            let delta = match (p_s.decimal, p1p.decimal, p2p.decimal) {
                (Some(s), Some(a), Some(b)) => Decimal::difference3(s, a, b),
                _ => None,
            };
            let analysis = match delta {
                Some(delta) => TransitionAnalysis::from_delta(delta, triple.p1_prime(), triple.p2_prime()),
                None => analyze_triple(&triple),
            };
            ReportDocument::from_exact(&triple, &analysis)
        }
        (None, None) => return Err(CliError::usage("give --input or --p-s/--p1p/--p2p")),
    };
    write_output(&args.output, &write_report(&doc))
}

fn truth_line(triple: &ContextTriple) -> String {
    let analysis = analyze_triple(triple);
    let mut line = format!(
        "truth p_s={} p1p={} p2p={}",
        format_f64(triple.p_s().value()),
        format_f64(triple.p1_prime().value()),
        format_f64(triple.p2_prime().value()),
    );
    if let Some((p1, p2)) = triple.subcontexts() {
        let _ = write!(line, " p1={} p2={}", format_f64(p1.value()), format_f64(p2.value()));
    }
    let opt = |x: Option<f64>| x.map_or_else(|| "null".to_owned(), format_f64);
    let _ = write!(
        line,
        " delta={} lambda={} regime={} theta={}",
        format_f64(analysis.delta),
        opt(analysis.lambda),
        analysis.regime.tag(),
        opt(analysis.regime.theta()),
    );
    if let Regime::Hyperbolic { sign, .. } = analysis.regime {
        let _ = write!(line, " sign={:+}", sign.as_i8());
    }
    line
}

pub fn simulate(cmd: &SimulateCommand) -> Result<(), CliError> {
    let scenario_error = |e: ctxprob::simulation::ScenarioError| CliError::inadmissible("scenario", e.to_string());
    let (scenario, sample): (Scenario, &SampleArgs) = match cmd {
        SimulateCommand::TwoSlit { p1, p2, theta, sample } => (
            TwoSlit::from_probabilities(prob(*p1), prob(*p2), *theta)
                .map_err(scenario_error)?
                .into(),
            sample,
        ),
        SimulateCommand::HyperbolicUrn {
            p1,
            p2,
            p1p,
            p2p,
            sample,
        } => (
            HyperbolicUrn::new(prob(*p1), prob(*p2), prob(*p1p), prob(*p2p))
                .map_err(scenario_error)?
                .into(),
            sample,
        ),
        SimulateCommand::Direct {
            p_s,
            p1p,
            p2p,
            p1,
            p2,
            sample,
        } => {
            let mut triple = ContextTriple::new(prob(*p_s), prob(*p1p), prob(*p2p));
            if let (Some(p1), Some(p2)) = (p1, p2) {
                triple = triple
                    .with_subcontexts(prob(*p1), prob(*p2))
                    .map_err(|e| CliError::inadmissible("additivity", e.to_string()))?;
            }
            (DirectScenario::new(triple).into(), sample)
        }
    };

    let counts = sample_counts(&scenario, sample.trials, sample.seed);
    write_output(&sample.output, write_counts(&counts).as_bytes())?;
    eprintln!("{}", truth_line(&scenario_truth(&scenario)));
    Ok(())
}

pub fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    if args.steps < 2 {
        return Err(CliError::usage(format!(
            "--steps must be at least 2, got {}",
            args.steps
        )));
    }
    if args.lambda_min >= args.lambda_max {
        return Err(CliError::usage("--lambda-min must be smaller than --lambda-max"));
    }
    let (a, b) = (prob(args.p1p), prob(args.p2p));
    let (lo, hi) = lambda_range(a, b).map_err(|e| CliError::inadmissible("degenerate", e.to_string()))?;
    for endpoint in [args.lambda_min, args.lambda_max] {
        reconstruct_probability(a, b, endpoint).map_err(|_| {
            CliError::inadmissible(
                "lambda_range",
                format!(
                    "[{}, {}] exceeds the admissible interval [{}, {}]",
                    format_f64(args.lambda_min),
                    format_f64(args.lambda_max),
                    format_f64(lo),
                    format_f64(hi)
                ),
            )
        })?;
    }

    let mut out = String::from("lambda,theta,regime,p_s\n");
    let last = args.steps - 1;
    let span = args.lambda_max - args.lambda_min;
    for i in 0..args.steps {
        let lambda = if i == last {
            args.lambda_max
        } else {
            args.lambda_min + span * (i as f64 / last as f64)
        };
        let regime = classify(lambda).map_err(|e| CliError::inadmissible("lambda", e.to_string()))?;
        let p_s =
            reconstruct_probability(a, b, lambda).map_err(|e| CliError::inadmissible("lambda_range", e.to_string()))?;
        let theta = regime.theta().map(format_f64).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_f64(lambda),
            theta,
            regime.tag(),
            format_f64(p_s.value())
        );
    }
    write_output(&args.output, out.as_bytes())
}

fn endpoint_tag(lambda: f64) -> &'static str {
    match classify(lambda) {
        Ok(Regime::Trigonometric { .. }) => "trigonometric",
        Ok(Regime::Hyperbolic { .. }) if lambda > 0.0 => "hyperbolic+",
        Ok(Regime::Hyperbolic { .. }) => "hyperbolic-",
        _ => "degenerate",
    }
}

pub fn range(args: &RangeArgs) -> Result<(), CliError> {
    let (lo, hi) = lambda_range(prob(args.p1p), prob(args.p2p))
        .map_err(|e| CliError::inadmissible("degenerate", e.to_string()))?;
    let out = format!(
        "lambda_min={} regime={}\nlambda_max={} regime={}\n",
        format_f64(lo),
        endpoint_tag(lo),
        format_f64(hi),
        endpoint_tag(hi)
    );
    write_output(Path::new("-"), out.as_bytes())
}

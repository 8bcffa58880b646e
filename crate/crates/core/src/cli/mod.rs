//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure, 3 numerical
//! failure. Errors are reported on stderr as one JSON line
//! `{"error": kind, "message": text}`.

pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::algebra::{c64, hermitian_eigensystem, AlgebraError, ComplexMatrix, ComplexVector};
use crate::direction::{Direction, DirectionError};
use crate::general_j::{
    component_operators_j, direction_operator_j, general_amplitudes_j, generalized_operator_j,
    GeneralJError, SpinSystem,
};
use crate::lande::{expectation, operator_from_amplitudes, EigenvalueWeights, LandeError};
use crate::measure::{
    chain_distribution, goodness_of_fit, simulate, MeasureError, MeasurementChain,
};
use crate::spin1;
use crate::verify::{verify, VerifyOptions};
use output::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

const SEED_ENV: &str = "LANDE_SPIN_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "lande-spin",
    version,
    about = "Spin-J amplitudes, generalized spin operators and sequential measurement simulation",
    after_help = "Angles are given as THETA,PHI in radians (or degrees with --degrees); \
                  `pi` is accepted, e.g. pi/2,pi. Projections are listed from +J down to -J.\n\
                  CSV tables are row-major with header `i,f,re,im` (probabilities carry im = 0).\n\
                  Exit codes: 0 ok, 1 usage, 2 verification failure, 3 numerical failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Spin quantum number: 1/2, 1, 3/2, ..., 10
    #[arg(long, default_value = "1")]
    j: String,
    /// Read angles in degrees
    #[arg(long)]
    degrees: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    SigmaZ,
    SigmaX,
    SigmaY,
    SigmaPlus,
    SigmaMinus,
    SigmaSquared,
    Direction,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::SigmaZ => "sigma-z",
            Kind::SigmaX => "sigma-x",
            Kind::SigmaY => "sigma-y",
            Kind::SigmaPlus => "sigma-plus",
            Kind::SigmaMinus => "sigma-minus",
            Kind::SigmaSquared => "sigma-squared",
            Kind::Direction => "direction",
        }
    }
}

#[derive(Debug, Args)]
struct OperatorArgs {
    #[command(flatten)]
    common: Common,
    /// Which component; sigma-z is the component along --axis
    #[arg(long, value_enum, default_value_t = Kind::SigmaZ)]
    kind: Kind,
    /// Direction whose projections label the matrix
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    basis: String,
    /// Measured direction
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    axis: String,
    /// Eigenvalues along --axis, comma-separated (sigma-z only)
    #[arg(long, allow_hyphen_values = true)]
    weights: Option<String>,
    /// Use the numerical engine even where closed forms exist (J = 1)
    #[arg(long)]
    numeric: bool,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[command(flatten)]
    common: Common,
    /// Initial direction
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    from: String,
    /// Final direction
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    to: String,
    #[arg(long)]
    numeric: bool,
}

#[derive(Debug, Args)]
struct ExpectArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = Kind::SigmaZ)]
    kind: Kind,
    /// Direction along which the state is prepared
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    from: String,
    /// Prepared projection, e.g. 1, 0, -1/2 (default +J)
    #[arg(long, allow_hyphen_values = true)]
    projection: Option<String>,
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    basis: String,
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    axis: String,
    #[arg(long, allow_hyphen_values = true)]
    weights: Option<String>,
    #[arg(long)]
    numeric: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// Replace every per-check tolerance
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    /// Preparation direction
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    from: String,
    /// Prepared projection (default +J)
    #[arg(long, allow_hyphen_values = true)]
    projection: Option<String>,
    /// Analyzer direction; repeat for a chain
    #[arg(long = "analyzer", required = true, allow_hyphen_values = true)]
    analyzers: Vec<String>,
    #[arg(long, default_value_t = 100_000)]
    shots: u64,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Matrix of a spin component in a chosen basis
    Operator(OperatorArgs),
    /// Probability amplitudes between the projections along two directions
    Amplitudes(TableArgs),
    /// Transition probabilities between two directions
    Probabilities(TableArgs),
    /// Eigenvectors of a spin component in a chosen basis
    Eigvecs(OperatorArgs),
    /// Expectation value of a component in a prepared state
    Expect(ExpectArgs),
    /// Run the randomised invariant suites
    Verify(VerifyArgs),
    /// Monte Carlo of sequential projection measurements
    Simulate(SimulateArgs),
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Direction(#[from] DirectionError),
    #[error(transparent)]
    GeneralJ(#[from] GeneralJError),
    #[error(transparent)]
    Lande(#[from] LandeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> (i32, &'static str) {
        let numeric = (EXIT_NUMERIC, "numeric");
        let usage = (EXIT_USAGE, "usage");
        match self {
            CliError::Usage(_) | CliError::Direction(_) => usage,
            CliError::GeneralJ(e) if e.is_numerical() => numeric,
            CliError::GeneralJ(_) => usage,
            CliError::Measure(MeasureError::GeneralJ(e)) if e.is_numerical() => numeric,
            CliError::Measure(MeasureError::InsufficientShots) => numeric,
            CliError::Measure(_) => usage,
            CliError::Lande(_) | CliError::Algebra(_) => numeric,
            CliError::Io(_) => (EXIT_NUMERIC, "io"),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Entry point used by the binary.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return EXIT_OK;
            }
            report(stderr, "usage", e.render().to_string().trim_end());
            return EXIT_USAGE;
        }
    };
    let (format, result) = dispatch(cli.command);
    match result {
        Ok((record, code)) => match record.write(format, stdout) {
            Ok(()) => code,
            // reader went away, e.g. `| head`
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => code,
            Err(e) => {
                report(stderr, "io", &e.to_string());
                EXIT_NUMERIC
            }
        },
        Err(e) => {
            let (code, kind) = e.code();
            report(stderr, kind, &e.to_string());
            code
        }
    }
}

fn report(stderr: &mut dyn Write, kind: &str, message: &str) {
    let rec = ErrorRecord {
        error: kind.to_string(),
        message: message.to_string(),
    };
    let line = to_json_line(&rec).unwrap_or_else(|_| format!("{{\"error\":\"{kind}\"}}"));
    let _ = writeln!(stderr, "{line}");
}

fn dispatch(command: Command) -> (OutputFormat, Result<(Record, i32), CliError>) {
    let ok = |r: Result<Record, CliError>| r.map(|rec| (rec, EXIT_OK));
    match command {
        Command::Operator(a) => (a.common.output, ok(run_operator(&a))),
        Command::Amplitudes(a) => (a.common.output, ok(run_amplitudes(&a))),
        Command::Probabilities(a) => (a.common.output, ok(run_probabilities(&a))),
        Command::Eigvecs(a) => (a.common.output, ok(run_eigvecs(&a))),
        Command::Expect(a) => (a.common.output, ok(run_expect(&a))),
        Command::Verify(a) => (a.common.output, run_verify(&a)),
        Command::Simulate(a) => (a.common.output, ok(run_simulate(&a))),
    }
}

fn parse_spin(common: &Common) -> Result<SpinSystem, CliError> {
    let s: SpinSystem = common
        .j
        .parse()
        .map_err(|e: GeneralJError| usage(e.to_string()))?;
    if s.two_j() == 0 {
        return Err(usage("J must be at least 1/2"));
    }
    Ok(s)
}

/// A number, optionally written with `pi`: `1.5`, `pi`, `-pi/4`, `3pi/2`,
/// `0.5*pi`.
fn parse_angle(text: &str) -> Result<f64, CliError> {
    let bad = || usage(format!("cannot read angle {text:?}"));
    let t = text.trim().to_ascii_lowercase();
    let Some(pos) = t.find("pi") else {
        return t.parse::<f64>().map_err(|_| bad()).and_then(|x| {
            if x.is_finite() {
                Ok(x)
            } else {
                Err(bad())
            }
        });
    };
    let coeff = t[..pos].trim().trim_end_matches('*').trim();
    let coeff = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let rest = t[pos + 2..].trim();
    let divisor = if rest.is_empty() {
        1.0
    } else {
        rest.strip_prefix('/')
            .ok_or_else(bad)?
            .trim()
            .parse::<f64>()
            .map_err(|_| bad())?
    };
    let value = coeff * std::f64::consts::PI / divisor;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

fn parse_direction(text: &str, degrees: bool) -> Result<Direction, CliError> {
    let (t, p) = text
        .split_once(',')
        .ok_or_else(|| usage(format!("expected THETA,PHI, got {text:?}")))?;
    let (theta, phi) = (parse_angle(t)?, parse_angle(p)?);
    Ok(if degrees {
        Direction::from_degrees(theta, phi)?
    } else {
        Direction::new(theta, phi)?
    })
}

fn parse_weights(text: &str, dim: usize) -> Result<EigenvalueWeights, CliError> {
    let values = text
        .split(',')
        .map(|w| {
            w.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("cannot read weight {w:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != dim {
        return Err(usage(format!(
            "expected {dim} weights, got {}",
            values.len()
        )));
    }
    EigenvalueWeights::new(values).map_err(|e| usage(e.to_string()))
}

/// Projection value (`1`, `-1/2`, `0.5`) to its index; `None` means `+J`.
fn parse_projection(text: Option<&str>, s: &SpinSystem) -> Result<usize, CliError> {
    let Some(text) = text else { return Ok(0) };
    let bad = || {
        usage(format!(
            "projection {text:?} is not one of J, J-1, ..., -J for J = {s}"
        ))
    };
    let t = text.trim();
    let value = match t.split_once('/') {
        Some((n, "2")) => n.trim().parse::<f64>().map_err(|_| bad())? / 2.0,
        Some(_) => return Err(bad()),
        None => t.parse::<f64>().map_err(|_| bad())?,
    };
    s.projections()
        .iter()
        .position(|&m| (m - value).abs() < 1e-9)
        .ok_or_else(bad)
}

fn use_closed_form(s: &SpinSystem, numeric: bool) -> bool {
    *s == SpinSystem::spin_one() && !numeric
}

fn engine_name(closed: bool) -> String {
    if closed { "closed-form" } else { "numeric" }.to_string()
}

fn build_operator(
    s: &SpinSystem,
    kind: Kind,
    b: &Direction,
    c: &Direction,
    weights: Option<&str>,
    closed: bool,
) -> Result<ComplexMatrix, CliError> {
    if weights.is_some() && kind != Kind::SigmaZ {
        return Err(usage("--weights only applies to --kind sigma-z"));
    }
    if kind == Kind::Direction && !b.same_axis(&Direction::z(), 0.0) {
        return Err(usage(
            "the direction operator is written in the z basis; drop --basis",
        ));
    }
    let weights = weights.map(|w| parse_weights(w, s.dim())).transpose()?;
    if closed {
        return Ok(match kind {
            Kind::SigmaZ => match &weights {
                Some(r) => {
                    operator_from_amplitudes(&spin1::general_amplitudes(b, c).to_generic(), r)?
                }
                None => spin1::generalized_sigma_c(b, c).matrix,
            },
            Kind::SigmaX => spin1::generalized_sigma_x(b, c).op.matrix,
            Kind::SigmaY => spin1::generalized_sigma_y(b, c).op.matrix,
            Kind::SigmaPlus => spin1::generalized_ladder(b, c).0.matrix,
            Kind::SigmaMinus => spin1::generalized_ladder(b, c).1.matrix,
            Kind::SigmaSquared => spin1::sigma_squared(b, c).matrix,
            Kind::Direction => spin1::direction_operator(c).matrix,
        });
    }
    let i = c64(0.0, 1.0);
    Ok(match kind {
        Kind::SigmaZ => {
            let r = weights.unwrap_or_else(|| s.projection_weights());
            generalized_operator_j(s, b, c, &r)?
        }
        Kind::SigmaX => component_operators_j(s, b, c)?.x,
        Kind::SigmaY => component_operators_j(s, b, c)?.y,
        Kind::SigmaPlus => {
            let xy = component_operators_j(s, b, c)?;
            &xy.x + &xy.y.scale(i)
        }
        Kind::SigmaMinus => {
            let xy = component_operators_j(s, b, c)?;
            &xy.x - &xy.y.scale(i)
        }
        Kind::SigmaSquared => {
            generalized_operator_j(s, b, c, &EigenvalueWeights::constant(s.casimir(), s.dim()))?
        }
        Kind::Direction => direction_operator_j(s, c),
    })
}

fn run_operator(a: &OperatorArgs) -> Result<Record, CliError> {
    let s = parse_spin(&a.common)?;
    let b = parse_direction(&a.basis, a.common.degrees)?;
    let c = parse_direction(&a.axis, a.common.degrees)?;
    let closed = use_closed_form(&s, a.numeric);
    let m = build_operator(&s, a.kind, &b, &c, a.weights.as_deref(), closed)?;
    Ok(Record::Operator(OperatorRecord {
        command: "operator".into(),
        j: s.to_string(),
        kind: a.kind.name().into(),
        engine: engine_name(closed),
        basis: b.into(),
        axis: c.into(),
        projections: s.projections(),
        matrix: matrix_rows(&m),
    }))
}

fn amplitude_table(
    s: &SpinSystem,
    a: &Direction,
    c: &Direction,
    closed: bool,
) -> Result<ComplexMatrix, CliError> {
    Ok(if closed {
        spin1::general_amplitudes(a, c).entries
    } else {
        general_amplitudes_j(s, a, c)?.entries
    })
}

fn run_amplitudes(a: &TableArgs) -> Result<Record, CliError> {
    let s = parse_spin(&a.common)?;
    let from = parse_direction(&a.from, a.common.degrees)?;
    let to = parse_direction(&a.to, a.common.degrees)?;
    let closed = use_closed_form(&s, a.numeric);
    let t = amplitude_table(&s, &from, &to, closed)?;
    Ok(Record::Amplitudes(AmplitudeRecord {
        command: "amplitudes".into(),
        j: s.to_string(),
        engine: engine_name(closed),
        from: from.into(),
        to: to.into(),
        projections: s.projections(),
        entries: matrix_rows(&t),
    }))
}

fn run_probabilities(a: &TableArgs) -> Result<Record, CliError> {
    let s = parse_spin(&a.common)?;
    let from = parse_direction(&a.from, a.common.degrees)?;
    let to = parse_direction(&a.to, a.common.degrees)?;
    let closed = use_closed_form(&s, a.numeric);
    let entries: Vec<Vec<f64>> = if closed {
        spin1::probability_table(&from, &to)
            .entries
            .iter()
            .map(|r| r.to_vec())
            .collect()
    } else {
        general_amplitudes_j(&s, &from, &to)?.probabilities()
    };
    let row_sums = entries.iter().map(|r| r.iter().sum()).collect();
    Ok(Record::Probabilities(ProbabilityRecord {
        command: "probabilities".into(),
        j: s.to_string(),
        engine: engine_name(closed),
        from: from.into(),
        to: to.into(),
        projections: s.projections(),
        entries,
        row_sums,
    }))
}

fn run_eigvecs(a: &OperatorArgs) -> Result<Record, CliError> {
    let s = parse_spin(&a.common)?;
    let b = parse_direction(&a.basis, a.common.degrees)?;
    let c = parse_direction(&a.axis, a.common.degrees)?;
    if a.weights.is_some() {
        return Err(usage("--weights does not apply to eigvecs"));
    }
    if !matches!(
        a.kind,
        Kind::SigmaZ | Kind::SigmaX | Kind::SigmaY | Kind::Direction
    ) {
        return Err(usage(format!(
            "eigvecs supports sigma-z, sigma-x, sigma-y and direction, not {}",
            a.kind.name()
        )));
    }
    let closed = use_closed_form(&s, a.numeric);
    let vectors: Vec<ComplexVector> = if closed {
        match a.kind {
            Kind::SigmaZ => spin1::generalized_sigma_c_eigvecs(&b, &c)
                .map(|v| v.entries)
                .to_vec(),
            Kind::SigmaX => spin1::generalized_sigma_x(&b, &c)
                .eigvecs
                .map(|v| v.entries)
                .to_vec(),
            Kind::SigmaY => spin1::generalized_sigma_y(&b, &c)
                .eigvecs
                .map(|v| v.entries)
                .to_vec(),
            _ => {
                build_operator(&s, a.kind, &b, &c, None, true)?;
                let t = spin1::special_amplitudes(&c).entries;
                (0..3).map(|k| t.row(k)).collect()
            }
        }
    } else {
        let m = build_operator(&s, a.kind, &b, &c, None, false)?;
        hermitian_eigensystem(&m)?.eigenvectors
    };
    let vectors = vectors
        .iter()
        .zip(s.projections())
        .map(|(v, m)| EigenvectorEntry {
            projection: m,
            components: v.iter().map(|&z| z.into()).collect(),
        })
        .collect();
    Ok(Record::Eigvecs(EigvecRecord {
        command: "eigvecs".into(),
        j: s.to_string(),
        kind: a.kind.name().into(),
        engine: engine_name(closed),
        basis: b.into(),
        axis: c.into(),
        vectors,
    }))
}

fn run_expect(a: &ExpectArgs) -> Result<Record, CliError> {
    let s = parse_spin(&a.common)?;
    let from = parse_direction(&a.from, a.common.degrees)?;
    let b = parse_direction(&a.basis, a.common.degrees)?;
    let c = parse_direction(&a.axis, a.common.degrees)?;
    if !matches!(
        a.kind,
        Kind::SigmaZ | Kind::SigmaX | Kind::SigmaY | Kind::SigmaSquared | Kind::Direction
    ) {
        return Err(usage(format!("{} is not an observable", a.kind.name())));
    }
    let index = parse_projection(a.projection.as_deref(), &s)?;
    let closed = use_closed_form(&s, a.numeric);
    let op = build_operator(&s, a.kind, &b, &c, a.weights.as_deref(), closed)?;
    // the prepared state written in the basis of the operator
    let state = amplitude_table(&s, &from, &b, closed)?.row(index);
    let value = expectation(&state, &op)?;
    Ok(Record::Expect(ExpectRecord {
        command: "expect".into(),
        j: s.to_string(),
        kind: a.kind.name().into(),
        engine: engine_name(closed),
        from: from.into(),
        projection: s.projections()[index],
        basis: b.into(),
        axis: c.into(),
        value,
    }))
}

fn run_verify(a: &VerifyArgs) -> Result<(Record, i32), CliError> {
    let s = parse_spin(&a.common)?;
    if a.trials == 0 {
        return Err(usage("--trials must be positive"));
    }
    if let Some(t) = a.tolerance {
        if !(t.is_finite() && t >= 0.0) {
            return Err(usage("--tolerance must be a non-negative number"));
        }
    }
    let opts = VerifyOptions {
        trials: a.trials,
        seed: a.seed,
        tolerance: a.tolerance,
    };
    let reports = verify(&s, &opts)?;
    let closed_suite = reports.len() == 2;
    let suites: Vec<SuiteRecord> = reports
        .iter()
        .enumerate()
        .map(|(k, r)| SuiteRecord {
            suite: if closed_suite && k == 0 {
                "closed-form"
            } else {
                "numeric"
            }
            .into(),
            checks: r
                .checks
                .iter()
                .map(|c| CheckRecord {
                    name: c.name.into(),
                    passed: c.passed,
                    total: c.total,
                    max_residual: c.max_residual,
                    tolerance: c.tolerance,
                })
                .collect(),
        })
        .collect();
    let checks: Vec<&CheckRecord> = suites.iter().flat_map(|s| &s.checks).collect();
    let checks_passed = checks.iter().filter(|c| c.passed == c.total).count();
    let passed = checks_passed == checks.len();
    let record = VerifyRecord {
        command: "verify".into(),
        j: s.to_string(),
        trials: a.trials,
        seed: a.seed,
        passed,
        checks_passed,
        checks_total: checks.len(),
        suites,
    };
    Ok((
        Record::Verify(record),
        if passed { EXIT_OK } else { EXIT_VERIFY_FAILED },
    ))
}

fn run_simulate(a: &SimulateArgs) -> Result<Record, CliError> {
    let s = parse_spin(&a.common)?;
    let prepared = parse_direction(&a.from, a.common.degrees)?;
    let analyzers = a
        .analyzers
        .iter()
        .map(|t| parse_direction(t, a.common.degrees))
        .collect::<Result<Vec<_>, _>>()?;
    let index = parse_projection(a.projection.as_deref(), &s)?;
    let chain = MeasurementChain::new(s, prepared, index, analyzers.clone())?;
    let dist = chain_distribution(&chain)?;
    let hist = simulate(&chain, a.shots, a.seed)?;
    let fit = goodness_of_fit(&hist, &dist)?;
    let m = s.projections();
    let outcomes = dist
        .iter()
        .map(|(seq, &p)| OutcomeRow {
            outcome: seq.iter().map(|&k| m[k]).collect(),
            count: hist.counts.get(seq).copied().unwrap_or(0),
            frequency: hist.frequency(seq),
            probability: p,
        })
        .collect();
    Ok(Record::Simulate(SimulateRecord {
        command: "simulate".into(),
        j: s.to_string(),
        prepared: prepared.into(),
        projection: m[index],
        analyzers: analyzers.into_iter().map(Into::into).collect(),
        shots: a.shots,
        seed: a.seed,
        outcomes,
        fit: FitRecord {
            chi2: fit.chi2.is_finite().then_some(fit.chi2),
            dof: fit.dof,
            p_value: fit.p_value,
            pass: fit.pass,
            pooled: fit.pooled,
        },
    }))
}

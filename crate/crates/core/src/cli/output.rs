//! Output records and their JSON, CSV and plain-text renderings.
//!
//! JSON is written on one line. Every float is printed in exponent form with
//! 17 significant digits, so parsing an emitted record and writing it again
//! reproduces the same bytes.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::ComplexMatrix;
use crate::direction::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

/// `serde_json` formatter that writes `f64` as `{:.16e}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactFloats;

impl serde_json::ser::Formatter for ExactFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serialize `value` as one JSON line, without the trailing newline.
pub fn to_json_line<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cplx {
    fn from(z: Complex64) -> Self {
        // adding 0.0 turns -0.0 into 0.0
        Self {
            re: z.re + 0.0,
            im: z.im + 0.0,
        }
    }
}

pub fn matrix_rows(m: &ComplexMatrix) -> Vec<Vec<Cplx>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(Cplx::from).collect())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnglesRecord {
    pub theta: f64,
    pub phi: f64,
}

impl From<Direction> for AnglesRecord {
    fn from(d: Direction) -> Self {
        Self {
            theta: d.theta(),
            phi: d.phi(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorRecord {
    pub command: String,
    pub j: String,
    pub kind: String,
    pub engine: String,
    pub basis: AnglesRecord,
    pub axis: AnglesRecord,
    pub projections: Vec<f64>,
    pub matrix: Vec<Vec<Cplx>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeRecord {
    pub command: String,
    pub j: String,
    pub engine: String,
    pub from: AnglesRecord,
    pub to: AnglesRecord,
    pub projections: Vec<f64>,
    pub entries: Vec<Vec<Cplx>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityRecord {
    pub command: String,
    pub j: String,
    pub engine: String,
    pub from: AnglesRecord,
    pub to: AnglesRecord,
    pub projections: Vec<f64>,
    pub entries: Vec<Vec<f64>>,
    pub row_sums: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvectorEntry {
    pub projection: f64,
    pub components: Vec<Cplx>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigvecRecord {
    pub command: String,
    pub j: String,
    pub kind: String,
    pub engine: String,
    pub basis: AnglesRecord,
    pub axis: AnglesRecord,
    pub vectors: Vec<EigenvectorEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectRecord {
    pub command: String,
    pub j: String,
    pub kind: String,
    pub engine: String,
    pub from: AnglesRecord,
    pub projection: f64,
    pub basis: AnglesRecord,
    pub axis: AnglesRecord,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    pub max_residual: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRecord {
    pub suite: String,
    pub checks: Vec<CheckRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub command: String,
    pub j: String,
    pub trials: usize,
    pub seed: u64,
    pub passed: bool,
    pub checks_passed: usize,
    pub checks_total: usize,
    pub suites: Vec<SuiteRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeRow {
    /// Projection observed at each analyzer.
    pub outcome: Vec<f64>,
    pub count: u64,
    pub frequency: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    /// `null` when a count lands on an outcome of zero probability.
    pub chi2: Option<f64>,
    pub dof: usize,
    pub p_value: f64,
    pub pass: bool,
    pub pooled: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateRecord {
    pub command: String,
    pub j: String,
    pub prepared: AnglesRecord,
    pub projection: f64,
    pub analyzers: Vec<AnglesRecord>,
    pub shots: u64,
    pub seed: u64,
    pub outcomes: Vec<OutcomeRow>,
    pub fit: FitRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub error: String,
    pub message: String,
}

/// Anything the CLI can print.
pub enum Record {
    Operator(OperatorRecord),
    Amplitudes(AmplitudeRecord),
    Probabilities(ProbabilityRecord),
    Eigvecs(EigvecRecord),
    Expect(ExpectRecord),
    Verify(VerifyRecord),
    Simulate(SimulateRecord),
}

impl Record {
    pub fn write(&self, format: OutputFormat, out: &mut dyn Write) -> io::Result<()> {
        match format {
            OutputFormat::Json => {
                let line = match self {
                    Record::Operator(r) => to_json_line(r),
                    Record::Amplitudes(r) => to_json_line(r),
                    Record::Probabilities(r) => to_json_line(r),
                    Record::Eigvecs(r) => to_json_line(r),
                    Record::Expect(r) => to_json_line(r),
                    Record::Verify(r) => to_json_line(r),
                    Record::Simulate(r) => to_json_line(r),
                }
                .map_err(io::Error::other)?;
                writeln!(out, "{line}")
            }
            OutputFormat::Csv => self.write_csv(out),
            OutputFormat::Pretty => self.write_pretty(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let complex_table = |out: &mut dyn Write, rows: &[Vec<Cplx>]| -> io::Result<()> {
            writeln!(out, "i,f,re,im")?;
            for (i, row) in rows.iter().enumerate() {
                for (f, z) in row.iter().enumerate() {
                    writeln!(out, "{i},{f},{:.16e},{:.16e}", z.re, z.im)?;
                }
            }
            Ok(())
        };
        match self {
            Record::Operator(r) => complex_table(out, &r.matrix),
            Record::Amplitudes(r) => complex_table(out, &r.entries),
            Record::Probabilities(r) => {
                writeln!(out, "i,f,re,im")?;
                for (i, row) in r.entries.iter().enumerate() {
                    for (f, p) in row.iter().enumerate() {
                        writeln!(out, "{i},{f},{p:.16e},{:.16e}", 0.0)?;
                    }
                }
                Ok(())
            }
            Record::Eigvecs(r) => {
                let rows: Vec<Vec<Cplx>> = r.vectors.iter().map(|v| v.components.clone()).collect();
                complex_table(out, &rows)
            }
            Record::Expect(r) => {
                writeln!(out, "value")?;
                writeln!(out, "{:.16e}", r.value)
            }
            Record::Verify(r) => {
                writeln!(out, "suite,name,passed,total,max_residual,tolerance")?;
                for s in &r.suites {
                    for c in &s.checks {
                        writeln!(
                            out,
                            "{},{},{},{},{:.16e},{:.16e}",
                            s.suite, c.name, c.passed, c.total, c.max_residual, c.tolerance
                        )?;
                    }
                }
                Ok(())
            }
            Record::Simulate(r) => {
                writeln!(out, "outcome,count,frequency,probability")?;
                for row in &r.outcomes {
                    let label: Vec<String> =
                        row.outcome.iter().map(|m| format_projection(*m)).collect();
                    writeln!(
                        out,
                        "{},{},{:.16e},{:.16e}",
                        label.join(" "),
                        row.count,
                        row.frequency,
                        row.probability
                    )?;
                }
                Ok(())
            }
        }
    }

    fn write_pretty(&self, out: &mut dyn Write) -> io::Result<()> {
        match self {
            Record::Operator(r) => {
                writeln!(out, "{} (J = {}, {})", r.kind, r.j, r.engine)?;
                writeln!(out, "basis {}  axis {}", angles(&r.basis), angles(&r.axis))?;
                complex_grid(out, &r.matrix)
            }
            Record::Amplitudes(r) => {
                writeln!(out, "amplitudes (J = {}, {})", r.j, r.engine)?;
                writeln!(out, "from {}  to {}", angles(&r.from), angles(&r.to))?;
                complex_grid(out, &r.entries)
            }
            Record::Probabilities(r) => {
                writeln!(out, "probabilities (J = {}, {})", r.j, r.engine)?;
                writeln!(out, "from {}  to {}", angles(&r.from), angles(&r.to))?;
                for (row, sum) in r.entries.iter().zip(&r.row_sums) {
                    let cells: Vec<String> = row.iter().map(|p| format!("{p:>10.6}")).collect();
                    writeln!(out, "{}   | sum {sum:.12}", cells.join(" "))?;
                }
                Ok(())
            }
            Record::Eigvecs(r) => {
                writeln!(
                    out,
                    "eigenvectors of {} (J = {}, {})",
                    r.kind, r.j, r.engine
                )?;
                writeln!(out, "basis {}  axis {}", angles(&r.basis), angles(&r.axis))?;
                for v in &r.vectors {
                    let cells: Vec<String> = v.components.iter().map(complex_cell).collect();
                    writeln!(
                        out,
                        "{:>5}: {}",
                        format_projection(v.projection),
                        cells.join(" ")
                    )?;
                }
                Ok(())
            }
            Record::Expect(r) => {
                writeln!(
                    out,
                    "<{}> = {:.12} for projection {} along {}",
                    r.kind,
                    r.value,
                    format_projection(r.projection),
                    angles(&r.from)
                )
            }
            Record::Verify(r) => {
                for s in &r.suites {
                    writeln!(out, "[{}]", s.suite)?;
                    for c in &s.checks {
                        let mark = if c.passed == c.total { "PASS" } else { "FAIL" };
                        writeln!(
                            out,
                            "  {mark} {:<30} {:>6}/{:<6} max {:.3e} (tol {:.1e})",
                            c.name, c.passed, c.total, c.max_residual, c.tolerance
                        )?;
                    }
                }
                let verdict = if r.passed {
                    "all checks passed"
                } else {
                    "FAILURES"
                };
                writeln!(
                    out,
                    "{}/{} checks: {verdict}",
                    r.checks_passed, r.checks_total
                )
            }
            Record::Simulate(r) => {
                writeln!(out, "{} shots, seed {}, J = {}", r.shots, r.seed, r.j)?;
                for row in &r.outcomes {
                    let label: Vec<String> =
                        row.outcome.iter().map(|m| format_projection(*m)).collect();
                    writeln!(
                        out,
                        "  {:<16} {:>10} {:>10.6} {:>10.6}",
                        label.join(" "),
                        row.count,
                        row.frequency,
                        row.probability
                    )?;
                }
                let f = &r.fit;
                let verdict = if f.pass { "pass" } else { "fail" };
                writeln!(
                    out,
                    "chi2 {:.4} on {} dof, p = {:.4} ({verdict})",
                    f.chi2.unwrap_or(f64::INFINITY),
                    f.dof,
                    f.p_value
                )
            }
        }
    }
}

fn angles(a: &AnglesRecord) -> String {
    format!("({:.6}, {:.6})", a.theta, a.phi)
}

fn complex_cell(z: &Cplx) -> String {
    format!("{:>+10.6}{:+.6}i", z.re, z.im)
}

fn complex_grid(out: &mut dyn Write, rows: &[Vec<Cplx>]) -> io::Result<()> {
    for row in rows {
        let cells: Vec<String> = row.iter().map(complex_cell).collect();
        writeln!(out, "{}", cells.join("  "))?;
    }
    Ok(())
}

/// `1`, `-1/2`, `0`
pub fn format_projection(m: f64) -> String {
    if m.fract() == 0.0 {
        format!("{m:+}").replace("+0", "0")
    } else {
        format!("{:+}/2", (2.0 * m).round() as i64)
    }
}

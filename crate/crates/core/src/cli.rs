//! The `qsde` command: `check`, `synthesize` and `oracle`.
//!
//! Exit codes: 0 when every condition passes, 1 when a condition fails,
//! 2 when the input could not be checked.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{BilinearSLH, CascadeSLH, LinearSLH, Qsde, Slh};
use crate::oprep::{
    oracle_drift_match, verify_lemma2, verify_preservation_integrands, DEFAULT_FOCK_DIM,
    MIN_FOCK_DIM,
};
use crate::realizability::{
    check_ccr_bilinear, check_ccr_linear, check_ccr_mixed, check_pr_bilinear, check_pr_cascade,
    check_pr_linear, CShape, RealizabilityReport, DEFAULT_TOL,
};
use crate::schema::{Kind, ReportFile, System, SystemFile};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Tolerance for the internal re-check of synthesized output.
pub const SYNTHESIS_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "qsde",
    version,
    about = "Synthesis and realizability checks for oscillator, two-level and cascade QSDEs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check commutation preservation and physical realizability.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        kind: Option<Kind>,
        #[arg(long, default_value = "series-product")]
        c_shape: CShape,
    },
    /// Build the QSDE of an SLH description.
    Synthesize {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare the matrix model against a truncated operator model.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_FOCK_DIM)]
        fock_dim: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

/// What a command produced: an exit code plus its two streams.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(path: &Path, e: &Error) -> Self {
        Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("qsde: {}: {e}\n", path.display()),
        }
    }
}

fn read_system(path: &Path) -> Result<(SystemFile, String)> {
    let bytes = std::fs::read(path).map_err(|e| Error::Input(format!("cannot read file: {e}")))?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| Error::Input("file is not UTF-8".into()))?;
    Ok((SystemFile::parse(&text)?, digest))
}

fn verdict_code(pass: bool) -> i32 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn merge(first: RealizabilityReport, second: RealizabilityReport) -> RealizabilityReport {
    let mut out = RealizabilityReport::new(first.tolerance);
    out.conditions = first.conditions;
    out.conditions.extend(second.conditions);
    out.recovered = second.recovered.or(first.recovered);
    out.c_shape = second.c_shape.or(first.c_shape);
    out
}

/// Every applicable check for a QSDE, commutation conditions first.
pub fn check_qsde(q: &Qsde, tol: f64, shape: CShape) -> Result<RealizabilityReport> {
    Ok(match q {
        Qsde::Linear(l) => merge(check_ccr_linear(l, tol)?, check_pr_linear(l, tol)?),
        Qsde::Bilinear(b) => merge(check_ccr_bilinear(b, tol)?, check_pr_bilinear(b, tol)?),
        Qsde::Cascade(c) => merge(check_ccr_mixed(c, tol)?, check_pr_cascade(c, tol, shape)?),
    })
}

fn check_one(
    path: &Path,
    tol: f64,
    kind: Option<Kind>,
    shape: CShape,
) -> Result<(ReportFile, bool)> {
    let (file, digest) = read_system(path)?;
    let system = file.system(kind)?;
    let q = match &system {
        System::Qsde(q) => q.clone(),
        System::Slh(s) => s.synthesize()?,
    };
    let report = check_qsde(&q, tol, shape)?;
    let pass = report.pass();
    Ok((
        ReportFile::new(
            "check",
            &path.display().to_string(),
            &digest,
            system.kind(),
            &report,
        ),
        pass,
    ))
}

fn render<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize infallibly");
    s.push('\n');
    s
}

/// Checks each file on its own thread; reports keep argument order.
pub fn cmd_check(files: &[PathBuf], tol: f64, kind: Option<Kind>, shape: CShape) -> Outcome {
    if tol.is_nan() || tol < 0.0 {
        return Outcome {
            code: EXIT_INPUT,
            stderr: format!("qsde: tolerance must be non-negative, got {tol}\n"),
            ..Outcome::default()
        };
    }
    let results: Vec<Result<(ReportFile, bool)>> = std::thread::scope(|s| {
        let handles: Vec<_> = files
            .iter()
            .map(|p| s.spawn(move || check_one(p, tol, kind, shape)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check thread panicked"))
            .collect()
    });

    let mut out = Outcome::default();
    let mut reports = Vec::new();
    for (path, res) in files.iter().zip(results) {
        match res {
            Ok((report, pass)) => {
                out.code = out.code.max(verdict_code(pass));
                reports.push(report);
            }
            Err(e) => {
                let err = Outcome::input_error(path, &e);
                out.code = EXIT_INPUT;
                out.stderr.push_str(&err.stderr);
            }
        }
    }
    out.stdout = match reports.len() {
        0 => String::new(),
        1 if files.len() == 1 => render(&reports[0]),
        _ => render(&reports),
    };
    out
}

/// Synthesizes the QSDE of an SLH file, re-checks it, and emits it with the
/// SLH description attached as `source`.
pub fn cmd_synthesize(path: &Path, output: Option<&Path>) -> Outcome {
    let run = || -> Result<(SystemFile, bool)> {
        let (file, _) = read_system(path)?;
        let system = file.system(None)?;
        let slh = match system {
            System::Slh(s) => s,
            System::Qsde(_) => {
                return Err(Error::Input(format!(
                    "expected an SLH kind, got {}",
                    system.kind()
                )))
            }
        };
        let q = slh.synthesize()?;
        let pass = check_qsde(&q, SYNTHESIS_TOL, CShape::SeriesProduct)?.pass();
        let mut out = SystemFile::from_system(&System::Qsde(q));
        out.name = file.name.clone();
        out.description = file.description.clone();
        let mut source = SystemFile::from_system(&System::Slh(slh));
        source.name = file.name;
        out.source = Some(Box::new(source));
        Ok((out, pass))
    };
    let (file, pass) = match run() {
        Ok(v) => v,
        Err(e) => return Outcome::input_error(path, &e),
    };
    let mut text = file.to_json();
    text.push('\n');
    let mut out = Outcome {
        code: verdict_code(pass),
        ..Outcome::default()
    };
    if !pass {
        out.stderr = format!(
            "qsde: {}: synthesized system failed its re-check at {SYNTHESIS_TOL:e}\n",
            path.display()
        );
    }
    match output {
        Some(dest) => {
            if let Err(e) = std::fs::write(dest, text) {
                return Outcome::input_error(
                    dest,
                    &Error::Input(format!("cannot write output: {e}")),
                );
            }
        }
        None => out.stdout = text,
    }
    out
}

fn as_cascade(slh: &Slh) -> Result<CascadeSLH> {
    Ok(match slh {
        Slh::Cascade(c) => c.clone(),
        Slh::Linear(l) => CascadeSLH {
            linear: l.clone(),
            bilinear: BilinearSLH::zero(),
        },
        Slh::Bilinear(b) => CascadeSLH {
            linear: LinearSLH::zero(1)?,
            bilinear: b.clone(),
        },
    })
}

/// Runs all operator-level checks that apply to the file's system.
pub fn oracle_report(
    q: &Qsde,
    slh: &Slh,
    fock_dim: usize,
    tol: f64,
) -> Result<RealizabilityReport> {
    let mut report = RealizabilityReport::new(tol);
    let lemma = verify_lemma2(&as_cascade(slh)?, fock_dim, tol)?;
    report.conditions.extend(lemma.conditions);
    if let Qsde::Cascade(c) = q {
        report
            .conditions
            .extend(verify_preservation_integrands(c, tol)?.conditions);
    }
    report
        .conditions
        .extend(oracle_drift_match(q, slh, fock_dim, tol)?.conditions);
    Ok(report)
}

pub fn cmd_oracle(path: &Path, fock_dim: usize, tol: f64) -> Outcome {
    if fock_dim < MIN_FOCK_DIM {
        return Outcome::input_error(path, &Error::FockTooSmall(fock_dim));
    }
    let run = || -> Result<(ReportFile, bool)> {
        let (file, digest) = read_system(path)?;
        let system = file.system(None)?;
        let (q, slh) = match &system {
            System::Slh(s) => (s.synthesize()?, s.clone()),
            System::Qsde(q) => {
                let src = file.source.as_ref().ok_or_else(|| {
                    Error::Input("a QSDE file needs a `source` SLH for the oracle".into())
                })?;
                match src.system(None)? {
                    System::Slh(s) => (q.clone(), s),
                    other => {
                        return Err(Error::Input(format!(
                            "source must be an SLH kind, got {}",
                            other.kind()
                        )))
                    }
                }
            }
        };
        let report = oracle_report(&q, &slh, fock_dim, tol)?;
        let pass = report.pass();
        let mut rf = ReportFile::new(
            "oracle",
            &path.display().to_string(),
            &digest,
            system.kind(),
            &report,
        );
        rf.fock_dim = Some(fock_dim);
        Ok((rf, pass))
    };
    match run() {
        Ok((rf, pass)) => Outcome {
            code: verdict_code(pass),
            stdout: render(&rf),
            stderr: String::new(),
        },
        Err(e) => Outcome::input_error(path, &e),
    }
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check {
            files,
            tol,
            kind,
            c_shape,
        } => cmd_check(&files, tol, kind, c_shape),
        Command::Synthesize { file, output } => cmd_synthesize(&file, output.as_deref()),
        Command::Oracle {
            file,
            fock_dim,
            tol,
        } => cmd_oracle(&file, fock_dim, tol),
    }
}

/// Parses process arguments, runs, writes both streams, returns the code.
pub fn main_from_args() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_PASS
            };
        }
    };
    let out = run(cli);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    out.code
}

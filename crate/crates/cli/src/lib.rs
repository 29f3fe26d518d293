//! Batch entry points behind the `cyest` binary.

pub mod config;
pub mod summary;

use std::io::Write;
use std::path::{Path, PathBuf};

use frame::Registry;
use lab::report::{self, RunError};
use lab::{snapshot, Grid, RunSpec, Thresholds};

pub use config::{ConfigError, RunConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Symbolic = 2,
    Flagged = 3,
    Config = 64,
    NoInput = 66,
    Io = 74,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("invalid run: {0}")]
    Run(#[from] RunError),
    #[error("invalid run: {0}")]
    Invalid(String),
    #[error("no readable reports in {0}")]
    NoInput(PathBuf),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Config(_) | CliError::Run(_) | CliError::Invalid(_) => Exit::Config,
            CliError::NoInput(_) => Exit::NoInput,
            CliError::Io { .. } => Exit::Io,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Verify,
    Solve,
    Sweep,
    Check,
    Report(PathBuf),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(io_err(&path))
}

fn run_spec(cfg: &RunConfig, amplitude: f64) -> RunSpec {
    RunSpec {
        complex_dim: cfg.dim,
        n: cfg.n,
        family: cfg.family,
        amplitude,
        seed: cfg.seed,
        solver: cfg.solver.clone(),
    }
}

fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    Grid::new(cfg.dim, cfg.n).map_err(|e| CliError::Invalid(e.to_string()))?;
    cfg.solver.validate().map_err(|e| CliError::Invalid(e.to_string()))?;
    if cfg.amplitudes.is_empty() {
        return Err(CliError::Invalid("amplitude list is empty".into()));
    }
    Ok(())
}

pub fn run(cmd: &Command, cfg: &RunConfig, out: &mut dyn Write) -> Result<Exit, CliError> {
    let stdout = |e| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    };
    match cmd {
        Command::Verify => {
            let summary = Registry::standard().verify_all(&cfg.mutations);
            write_file(&cfg.out, "verify.json", summary.to_json().as_bytes())?;
            for c in &summary.cases {
                writeln!(out, "{} {}", if c.pass { "pass" } else { "FAIL" }, c.id).map_err(stdout)?;
            }
            writeln!(out, "{} passed, {} failed", summary.passed, summary.failed).map_err(stdout)?;
            Ok(if summary.all_pass() { Exit::Ok } else { Exit::Symbolic })
        }
        Command::Solve => {
            validate(cfg)?;
            if cfg.amplitudes.len() != 1 {
                return Err(CliError::Invalid("solve takes exactly one amplitude".into()));
            }
            let output = report::run_case(&run_spec(cfg, cfg.amplitudes[0]), &Thresholds::default())?;
            if let Some(phi) = &output.phi {
                let mut buf = Vec::new();
                snapshot::write_real(&mut buf, phi).expect("in-memory snapshot write");
                write_file(&cfg.out, "phi.snap", &buf)?;
            }
            let reports = [output.report];
            write_file(&cfg.out, "solve.json", report::to_json(&reports).as_bytes())?;
            let csv = report::to_csv(&reports);
            write_file(&cfg.out, "solve.csv", csv.as_bytes())?;
            out.write_all(csv.as_bytes()).map_err(stdout)?;
            if let Some(e) = &reports[0].error {
                writeln!(out, "solver: {e}").map_err(stdout)?;
            }
            Ok(if reports[0].row.flagged { Exit::Flagged } else { Exit::Ok })
        }
        Command::Sweep => {
            validate(cfg)?;
            let base = run_spec(cfg, 0.0);
            let reports = lab::sweep(&base, &cfg.amplitudes, &Thresholds::default())?;
            let csv = report::to_csv(&reports);
            write_file(&cfg.out, "sweep.csv", csv.as_bytes())?;
            write_file(&cfg.out, "sweep.json", report::to_json(&reports).as_bytes())?;
            out.write_all(csv.as_bytes()).map_err(stdout)?;
            Ok(if reports.iter().any(|r| r.row.flagged) { Exit::Flagged } else { Exit::Ok })
        }
        Command::Check => {
            validate(cfg)?;
            out.write_all(cfg.to_text().as_bytes()).map_err(stdout)?;
            Ok(Exit::Ok)
        }
        Command::Report(dir) => {
            let text = summary::render(dir)?;
            out.write_all(text.as_bytes()).map_err(stdout)?;
            Ok(Exit::Ok)
        }
    }
}

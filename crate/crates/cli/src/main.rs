use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cli::{run, Command, ConfigError, Exit, RunConfig};

#[derive(Parser)]
#[command(name = "cyest", about = "Symbolic identity checks and torus runs for the trace estimate")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify the registered symbolic identities.
    Verify(Overrides),
    /// Solve one case and write the potential, JSON and CSV.
    Solve(Overrides),
    /// Solve one case per amplitude.
    Sweep(Overrides),
    /// Print the resolved configuration after validating it.
    Check(Overrides),
    /// Summarize the verify and run outputs found in a directory.
    Report {
        /// Directory to read; defaults to the configured output directory.
        dir: Option<PathBuf>,
        #[command(flatten)]
        over: Overrides,
    },
}

#[derive(Args, Default)]
struct Overrides {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    dim: Option<String>,
    #[arg(long)]
    family: Option<String>,
    /// Comma-separated list.
    #[arg(long)]
    amplitude: Option<String>,
    #[arg(long)]
    mutate: Option<String>,
}

impl Overrides {
    fn resolve(&self) -> Result<RunConfig, ConfigError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        let flags = [
            ("out", &self.out),
            ("seed", &self.seed),
            ("n", &self.n),
            ("dim", &self.dim),
            ("family", &self.family),
            ("amplitude", &self.amplitude),
            ("mutate", &self.mutate),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Config as u8 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let over = match &cli.command {
        Cmd::Verify(o) | Cmd::Solve(o) | Cmd::Sweep(o) | Cmd::Check(o) => o,
        Cmd::Report { over, .. } => over,
    };
    let cfg = match over.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("cyest: {e}");
            return ExitCode::from(Exit::Config as u8);
        }
    };
    let cmd = match cli.command {
        Cmd::Verify(_) => Command::Verify,
        Cmd::Solve(_) => Command::Solve,
        Cmd::Sweep(_) => Command::Sweep,
        Cmd::Check(_) => Command::Check,
        Cmd::Report { dir, .. } => Command::Report(dir.unwrap_or_else(|| cfg.out.clone())),
    };
    let mut stdout = std::io::stdout().lock();
    match run(&cmd, &cfg, &mut stdout) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("cyest: {e}");
            ExitCode::from(e.exit() as u8)
        }
    }
}

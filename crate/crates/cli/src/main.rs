//! `achsolve`: batch driver for the solver, GJMS, verification and indicial
//! runs. Writes one JSON artifact with a provenance header.
//!
//! Exit status: 0 on success, 1 on invalid input or configuration, 2 when a
//! numerical verification fails.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{scalar_json, Command, ModeChoice, RunConfig};

#[derive(Parser)]
#[command(name = "achsolve", version, about = "Self-dual Einstein ACH metrics and CR GJMS operators")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the Einstein and self-duality equations order by order.
    Solve(RunArgs),
    /// Apply a CR GJMS operator using a solved metric.
    Gjms(RunArgs),
    /// Check stored solve results; several inputs also run a λ sweep.
    Verify(RunArgs),
    /// Check the indicial determinant and optionally fit coefficient growth.
    Indicial(RunArgs),
    /// Run a JSON configuration file.
    Run { config: PathBuf },
}

#[derive(Args)]
struct RunArgs {
    /// Built-in name, inline JSON, or a path to a JSON spec.
    #[arg(long)]
    background: Option<String>,
    /// Truncation order N.
    #[arg(long)]
    order: Option<usize>,
    /// λ values, repeated or comma-separated; rationals as `p/q`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    lambda: Vec<String>,
    /// GJMS order k.
    #[arg(long)]
    k: Option<usize>,
    /// Test function as a JSON chart component.
    #[arg(long)]
    f: Option<String>,
    /// Solve result file(s).
    #[arg(long)]
    input: Vec<PathBuf>,
    /// Largest k for the determinant check.
    #[arg(long, allow_negative_numbers = true)]
    kmax: Option<i64>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeChoice::Auto)]
    mode: ModeChoice,
    #[arg(long)]
    tol: Option<f64>,
    /// Also check the Cotton-tensor relations at every step.
    #[arg(long)]
    bianchi: bool,
    /// Record residuals instead of stopping at the first failed check.
    #[arg(long)]
    no_strict: bool,
    /// Residual table path.
    #[arg(long)]
    csv: Option<PathBuf>,
}

impl RunArgs {
    fn into_config(self, command: Command) -> RunConfig {
        RunConfig {
            background: self.background,
            order: self.order,
            lambda: self.lambda,
            k: self.k,
            f: self.f.as_deref().map(scalar_json),
            input: self.input,
            kmax: self.kmax,
            output: self.output,
            mode: self.mode,
            tol: self.tol,
            bianchi: self.bianchi,
            strict: !self.no_strict,
            csv: self.csv,
            ..RunConfig::new(command)
        }
    }
}

/// Verification failures map to 2, everything else to 1.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<achsolve::Error>()) {
        Some(achsolve::Error::Verification { .. } | achsolve::Error::Singular(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    // Usage errors are validation errors; clap's own code 2 would read as a
    // failed verification.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let config = match cli.command {
        Cmd::Solve(a) => Ok(a.into_config(Command::Solve)),
        Cmd::Gjms(a) => Ok(a.into_config(Command::Gjms)),
        Cmd::Verify(a) => Ok(a.into_config(Command::Verify)),
        Cmd::Indicial(a) => Ok(a.into_config(Command::Indicial)),
        Cmd::Run { config } => RunConfig::load(&config),
    };
    let result = config.and_then(|cfg| {
        let outcome = commands::run(&cfg)?;
        let path = cfg.output_path();
        commands::write_text(&path, &serde_json::to_string_pretty(&outcome.doc)?)?;
        println!("{}", path.display());
        Ok(outcome.failure)
    });
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(reason)) => {
            eprintln!("verification failed: {reason}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

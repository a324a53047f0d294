mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gdba_core::detector::DetectorKind;

use crate::config::{CommonArgs, FileConfig, RunConfig};

/// Graph-degree anomaly detection on fully connected RBF kernel graphs.
#[derive(Debug, Parser)]
#[command(name = "gdba", version)]
struct Cli {
    /// TOML file with defaults for any flag; flags win over it.
    #[arg(long, global = true, env = "GDBA_CONFIG")]
    config: Option<PathBuf>,
    /// Worker threads [default: available parallelism]
    #[arg(long, global = true, env = "GDBA_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score every sample of a dataset and write `row_index,score,label` CSV.
    Score(CommonArgs),
    /// Evaluate gdba AUC over a grid of sigma values.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Sigma grid as start:step:stop [default: 0.005:0.005:1]
        #[arg(long, env = "GDBA_GRID")]
        grid: Option<String>,
    },
    /// AUC table of several detectors on several datasets.
    Compare(CommonArgs),
    /// Check the spectral and MMD identities of the degree on random data.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Perturb one kernel entry asymmetrically (negative control).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Write the built-in two-cluster toy dataset as CSV.
    Toy {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<bool, String> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    if let Some(n) = cli.threads.or(file.threads) {
        if n == 0 {
            return Err("--threads must be >= 1".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let resolve = |common: &CommonArgs, grid: Option<&str>, detectors: &[DetectorKind]| {
        RunConfig::resolve(common, grid, &file, detectors).map_err(|e| e.to_string())
    };
    let gdba = [DetectorKind::Gdba];
    let result = match &cli.command {
        Command::Score(common) => commands::cmd_score(&resolve(common, None, &gdba)?),
        Command::Sweep { common, grid } => {
            commands::cmd_sweep(&resolve(common, grid.as_deref(), &gdba)?)
        }
        Command::Compare(common) => {
            commands::cmd_compare(&resolve(common, None, &DetectorKind::ALL)?)
        }
        Command::Verify { seed, inject_fault } => commands::cmd_verify(*seed, *inject_fault),
        Command::Toy { seed, out } => commands::cmd_toy(*seed, out.as_deref()),
    };
    match result {
        // A closed downstream pipe (e.g. `| head`) is not a failure.
        Err(gdba_core::Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(true),
        other => other.map_err(|e| e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

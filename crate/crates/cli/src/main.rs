use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mgt_core::commands::{self, Outcome, EXIT_CONFIG};
use mgt_core::config::{parse_config_str, parse_config_with, RunConfig};
use mgt_core::Result;

/// Used when no `--config` is given.
const DEFAULT_CONFIG: &str = "[params]\nalpha = 1.0\nbeta = 1.0\ngamma = 1.0\ndelta = 1.0\n";

const AFTER_HELP: &str = "\
Outputs (numbers are shortest round-trip decimals, \"\\n\" line endings):
  stability   text: lambda0, gamma/(alpha+delta*lambda0), beta, chi, verdict
  spectrum    CSV: mode,lambda,re1,im1,re2,im2,re3,im3
  semigroup   CSV: t,y_norm
  simulate    CSV: t,y_norm,y_minus1_norm,y_alpha_norm[,u_k..,v_k..,w_k..]
  fracpow     CSV: a,max_abs_disagreement
  verify      JSON report

Exit codes: 0 success, 1 a check failed, 2 configuration or input error.
MGT_THREADS caps the number of worker threads.";

#[derive(Parser)]
#[command(name = "mgt", version, about = "Spectral MGT-equation simulator and property checks", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration (unit parameters when omitted).
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,

    /// Override one key, e.g. `--set solver.dt=0.005`. Repeatable.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE", global = true)]
    overrides: Vec<String>,

    /// Write the output here instead of stdout (overrides `output.path`).
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Check the stability condition for the configured parameters.
    Stability,
    /// Eigenvalues of the block generator per mode.
    Spectrum,
    /// Linear decay curve of a generic datum.
    Semigroup,
    /// Nonlinear trajectory from the seeded datum up to `solver.horizon`.
    Simulate,
    /// Cross-check the two routes to fractional block powers.
    Fracpow,
    /// Run the full property suite.
    Verify,
}

fn load(cli: &Cli) -> Result<(RunConfig, Option<PathBuf>)> {
    match &cli.config {
        Some(p) => {
            let cfg = parse_config_with(p, &cli.overrides)?;
            Ok((cfg, p.parent().map(Path::to_path_buf)))
        }
        None => Ok((parse_config_str(DEFAULT_CONFIG, &cli.overrides)?, None)),
    }
}

fn run(cli: &Cli) -> Result<(Outcome, Option<PathBuf>)> {
    let (cfg, base) = load(cli)?;
    let base = base.as_deref();
    let out = match cli.command {
        Command::Stability => commands::cmd_stability(&cfg, base)?,
        Command::Spectrum => commands::cmd_spectrum(&cfg, base)?,
        Command::Semigroup => commands::cmd_semigroup(&cfg, base)?,
        Command::Simulate => commands::cmd_simulate(&cfg, base)?,
        Command::Fracpow => commands::cmd_fracpow(&cfg, base)?,
        Command::Verify => commands::cmd_verify(&cfg, base)?,
    };
    Ok((out, cli.output.clone().or(cfg.output.path.clone())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("MGT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let (out, path) = match run(&cli) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    for note in &out.notes {
        eprintln!("{note}");
    }
    match path {
        Some(p) => {
            if let Err(e) = std::fs::write(&p, &out.text) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(EXIT_CONFIG as u8);
            }
        }
        None => print!("{}", out.text),
    }
    ExitCode::from(out.code as u8)
}

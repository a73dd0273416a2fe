//! Command-line front end: `kernel`, `simulate`, `reconstruct`, `validate`.

pub mod commands;
pub mod config;
pub mod data;
pub mod error;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{MethodArg, Truth};
pub use config::RunConfig;
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qdeconv",
    version,
    about = "Metric-aware deconvolution of Gaussian field data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-mode kernel spectrum of the field model.
    Kernel {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Smeared and noisy measurement of a truth signal.
    Simulate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Data file or `builtin:bumps`.
        #[arg(long, default_value = "builtin:bumps")]
        truth: Truth,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        noise: Option<f64>,
    },
    /// Apply a reconstruction method to measured data.
    Reconstruct {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        input: PathBuf,
        /// Defaults to the adjoint of the configured metric.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Run the invariant suites; exit 1 if any check fails.
    Validate {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Where to write the failing model, if any.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Kernel { config, output } => {
            let cfg = commands::load_config(config.as_deref())?;
            commands::emit(output.as_deref(), &commands::cmd_kernel(&cfg)?)?;
        }
        Command::Simulate {
            config,
            output,
            truth,
            seed,
            noise,
        } => {
            let mut cfg = commands::load_config(config.as_deref())?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(n) = noise {
                cfg.noise_std = n;
                cfg.finish()?;
            }
            commands::emit(output.as_deref(), &commands::cmd_simulate(&cfg, &truth)?)?;
        }
        Command::Reconstruct {
            config,
            output,
            input,
            method,
            lambda,
        } => {
            let cfg = config
                .as_deref()
                .map(|p| commands::load_config(Some(p)))
                .transpose()?;
            let text = commands::cmd_reconstruct(cfg, &input, method, lambda)?;
            commands::emit(output.as_deref(), &text)?;
        }
        Command::Validate {
            config,
            output,
            trials,
        } => {
            let cfg = commands::load_config(config.as_deref())?;
            let report = commands::cmd_validate(&cfg, trials)?;
            print!("{report}");
            if report.all_passed() {
                println!("all checks passed");
                return Ok(0);
            }
            if let Some(text) = commands::failing_model_text(&report) {
                match output.as_deref() {
                    Some(p) => commands::emit(Some(p), &text)?,
                    None => eprint!("{text}"),
                }
            }
            return Ok(1);
        }
    }
    Ok(0)
}

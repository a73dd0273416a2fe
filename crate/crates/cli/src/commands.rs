use std::fs;
use std::path::{Path, PathBuf};

use qdeconv_core::field::{
    apply_kernel_fft, bumps, kernel_spectrum_for, reconstruction_multipliers, simulate_measurement,
};
use qdeconv_core::validation::{run_suite, ValidationReport};
use qdeconv_core::{FieldData, MetricKind, ReconstructionMethod};

use crate::config::RunConfig;
use crate::data::{read_field_data, write_field_data, write_matrices, write_spectrum, Header};
use crate::error::CliError;

/// Threshold on `X_*X` singular values, relative to the largest, for the
/// pseudo-inverse methods.
pub const PSEUDO_RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    AdjointSqrt,
    AdjointBures,
    AdjointClassical,
    TikhonovSqrt,
    TikhonovBures,
    PseudoSqrt,
    PseudoBures,
    Naive,
    Wiener,
}

impl MethodArg {
    pub fn resolve(self, lambda: f64) -> ReconstructionMethod {
        use ReconstructionMethod as M;
        let pseudo = |metric| M::PseudoInverse {
            metric,
            rank_tol: PSEUDO_RANK_TOL,
        };
        match self {
            MethodArg::AdjointSqrt => M::AdjointOnly(MetricKind::SquareRoot),
            MethodArg::AdjointBures => M::AdjointOnly(MetricKind::Bures),
            MethodArg::AdjointClassical => M::AdjointOnly(MetricKind::ClassicalFisher),
            MethodArg::TikhonovSqrt => M::Tikhonov {
                metric: MetricKind::SquareRoot,
                lambda,
            },
            MethodArg::TikhonovBures => M::Tikhonov {
                metric: MetricKind::Bures,
                lambda,
            },
            MethodArg::PseudoSqrt => pseudo(MetricKind::SquareRoot),
            MethodArg::PseudoBures => pseudo(MetricKind::Bures),
            MethodArg::Naive => M::NaiveInverse,
            MethodArg::Wiener => M::Wiener,
        }
    }

    pub fn for_metric(metric: MetricKind) -> Self {
        match metric {
            MetricKind::SquareRoot => MethodArg::AdjointSqrt,
            MetricKind::Bures => MethodArg::AdjointBures,
            MetricKind::ClassicalFisher => MethodArg::AdjointClassical,
        }
    }
}

/// Wiener is the Bures kernel, which is also the classical one.
fn metrics_compatible(method: ReconstructionMethod, configured: MetricKind) -> bool {
    match method {
        ReconstructionMethod::NaiveInverse => true,
        ReconstructionMethod::Wiener => configured != MetricKind::SquareRoot,
        other => other.metric() == Some(configured),
    }
}

pub fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => RunConfig::parse(&read_text(p)?).map_err(|e| match e {
            CliError::Config { line, msg } => CliError::Config {
                line,
                msg: format!("{}: {msg}", p.display()),
            },
            other => other,
        }),
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn cmd_kernel(cfg: &RunConfig) -> Result<String, CliError> {
    let sqrt = kernel_spectrum_for(&cfg.model, MetricKind::SquareRoot)?;
    let bures = kernel_spectrum_for(&cfg.model, MetricKind::Bures)?;
    let excluded = sqrt.rows.len() - sqrt.ok_rows().count();
    let header = Header::new("kernel", cfg).with("excluded_modes", excluded);
    Ok(write_spectrum(&header, &sqrt, &bures))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Truth {
    Bumps,
    File(PathBuf),
}

impl std::str::FromStr for Truth {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.strip_prefix("builtin:") {
            Some("bumps") => Ok(Truth::Bumps),
            Some(other) => Err(format!("unknown builtin truth {other:?} (only `bumps`)")),
            None => Ok(Truth::File(PathBuf::from(s))),
        }
    }
}

impl std::fmt::Display for Truth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Truth::Bumps => f.write_str("builtin:bumps"),
            Truth::File(p) => write!(f, "{}", p.display()),
        }
    }
}

fn check_sites(path: &Path, data: &FieldData, cfg: &RunConfig) -> Result<(), CliError> {
    if data.len() != cfg.model.n_sites {
        return Err(CliError::Data {
            path: path.to_path_buf(),
            msg: format!(
                "{} sites in file, config has n_sites = {}",
                data.len(),
                cfg.model.n_sites
            ),
        });
    }
    Ok(())
}

pub fn cmd_simulate(cfg: &RunConfig, truth: &Truth) -> Result<String, CliError> {
    let signal = match truth {
        Truth::Bumps => bumps(&cfg.model),
        Truth::File(p) => {
            let (_, data) = read_field_data(p, &read_text(p)?)?;
            check_sites(p, &data, cfg)?;
            data
        }
    };
    let measured = simulate_measurement(&cfg.model, &signal, cfg.noise_std, cfg.seed)?;
    let header = Header::new("simulate", cfg).with("truth", truth);
    Ok(write_field_data(&header, &measured))
}

/// Config precedence: `--config`, else the input file's header, else defaults.
pub fn cmd_reconstruct(
    cfg: Option<RunConfig>,
    input: &Path,
    method: Option<MethodArg>,
    lambda: Option<f64>,
) -> Result<String, CliError> {
    let (header, data) = read_field_data(input, &read_text(input)?)?;
    let mut cfg = cfg.or(header.map(|h| h.config)).unwrap_or_default();
    if let Some(l) = lambda {
        cfg.model.lambda = l;
        cfg.finish()?;
    }
    check_sites(input, &data, &cfg)?;
    let arg = method.unwrap_or_else(|| MethodArg::for_metric(cfg.model.metric));
    let method = arg.resolve(cfg.model.lambda);
    if let Some(m) = cfg.metric {
        if !metrics_compatible(method, m) {
            return Err(CliError::Usage(format!(
                "method {method} does not use the configured metric {m}"
            )));
        }
    }
    let mult = reconstruction_multipliers(&cfg.model, method)?;
    let out = apply_kernel_fft(&cfg.model, &mult, &data)?;
    let header = Header::new("reconstruct", &cfg)
        .with("method", method)
        .with("input", input.display())
        .with("excluded_modes", mult.excluded.len());
    Ok(write_field_data(&header, &out))
}

/// Seed for the random trials when the config does not set one.
pub const VALIDATE_SEED: u64 = 0x5eed;

pub fn cmd_validate(cfg: &RunConfig, trials: usize) -> Result<ValidationReport, CliError> {
    let seed = if cfg.seed == 0 {
        VALIDATE_SEED
    } else {
        cfg.seed
    };
    Ok(run_suite(&cfg.model, trials, seed)?)
}

pub fn failing_model_text(report: &ValidationReport) -> Option<String> {
    report.failing_model.as_ref().map(|f| {
        write_matrices(
            &format!("failing model: {} ({})", f.origin, f.check),
            &[("prior", &f.prior), ("x", &f.x), ("y", &f.y)],
        )
    })
}

//! Flat `key = value` run configuration.

use std::fmt::Write as _;
use std::str::FromStr;

use qdeconv_core::{FieldModel, MetricKind};

use crate::error::CliError;

pub const KEYS: [&str; 11] = [
    "n_sites",
    "lattice_spacing",
    "beta",
    "mass",
    "sigma",
    "y",
    "metric",
    "lambda",
    "epsilon_purity",
    "noise_std",
    "seed",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: FieldModel,
    /// Set only when the config names a metric; checked against `--method`.
    pub metric: Option<MetricKind>,
    pub noise_std: f64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: FieldModel::default(),
            metric: None,
            noise_std: 1e-3,
            seed: 0,
        }
    }
}

fn value<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<T, CliError> {
    raw.parse().map_err(|_| CliError::Config {
        line,
        msg: format!("cannot parse {raw:?} as a value for {key}"),
    })
}

impl RunConfig {
    /// Parses and validates a config. Blank lines and `#` comments are
    /// skipped; unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<&str> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, val)) = body.split_once('=') else {
                return Err(CliError::Config {
                    line,
                    msg: format!("expected `key = value`, got {body:?}"),
                });
            };
            let (key, val) = (key.trim(), val.trim());
            let Some(&known) = KEYS.iter().find(|k| **k == key) else {
                return Err(CliError::Config {
                    line,
                    msg: format!("unknown key {key:?}"),
                });
            };
            if seen.contains(&known) {
                return Err(CliError::Config {
                    line,
                    msg: format!("{key} given twice"),
                });
            }
            seen.push(known);
            cfg.set(line, known, val)?;
        }
        cfg.finish()?;
        Ok(cfg)
    }

    fn set(&mut self, line: usize, key: &str, val: &str) -> Result<(), CliError> {
        let m = &mut self.model;
        match key {
            "n_sites" => m.n_sites = value(line, key, val)?,
            "lattice_spacing" => m.lattice_spacing = value(line, key, val)?,
            "beta" => m.beta = value(line, key, val)?,
            "mass" => m.mass = value(line, key, val)?,
            "sigma" => m.sigma = value(line, key, val)?,
            "y" => m.y = value(line, key, val)?,
            "metric" => {
                let metric = MetricKind::from_str(val).map_err(|e| CliError::Config {
                    line,
                    msg: e.to_string(),
                })?;
                self.metric = Some(metric);
            }
            "lambda" => m.lambda = value(line, key, val)?,
            "epsilon_purity" => m.epsilon_purity = value(line, key, val)?,
            "noise_std" => self.noise_std = value(line, key, val)?,
            "seed" => self.seed = value(line, key, val)?,
            _ => unreachable!("key list and setter disagree on {key}"),
        }
        Ok(())
    }

    /// Syncs the model metric and validates the whole config.
    pub fn finish(&mut self) -> Result<(), CliError> {
        self.model.metric = self.metric.unwrap_or(MetricKind::SquareRoot);
        self.model.validate().map_err(|e| CliError::Config {
            line: 0,
            msg: e.to_string(),
        })?;
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return Err(CliError::Config {
                line: 0,
                msg: format!("noise_std must be finite and >= 0, got {}", self.noise_std),
            });
        }
        Ok(())
    }

    /// Canonical text form; `parse(to_text())` returns an equal config.
    pub fn to_text(&self) -> String {
        let m = &self.model;
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("n_sites", m.n_sites.to_string());
        put("lattice_spacing", m.lattice_spacing.to_string());
        put("beta", m.beta.to_string());
        put("mass", m.mass.to_string());
        put("sigma", m.sigma.to_string());
        put("y", m.y.to_string());
        if let Some(metric) = self.metric {
            put("metric", metric.to_string());
        }
        put("lambda", m.lambda.to_string());
        put("epsilon_purity", m.epsilon_purity.to_string());
        put("noise_std", self.noise_std.to_string());
        put("seed", self.seed.to_string());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_is_default() {
        assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
    }

    #[test]
    fn reads_keys_and_comments() {
        let cfg =
            RunConfig::parse("# fig 1\nbeta = 0.5   # hot\n\nsigma=1\nmetric = bures\nseed = 7\n")
                .unwrap();
        assert_eq!(cfg.model.beta, 0.5);
        assert_eq!(cfg.model.sigma, 1.0);
        assert_eq!(cfg.metric, Some(MetricKind::Bures));
        assert_eq!(cfg.model.metric, MetricKind::Bures);
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn unknown_key_reports_line() {
        match RunConfig::parse("beta = 1\nsgima = 2\n") {
            Err(CliError::Config { line, msg }) => {
                assert_eq!(line, 2);
                assert!(msg.contains("sgima"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_lines() {
        for (text, line) in [
            ("beta\n", 1),
            ("y = 1\nbeta = hot\n", 2),
            ("seed = 1\nseed = 2\n", 2),
        ] {
            match RunConfig::parse(text) {
                Err(CliError::Config { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn invalid_physics_rejected() {
        assert!(RunConfig::parse("y = 0.5\n").is_err());
        assert!(RunConfig::parse("n_sites = 100\n").is_err());
        assert!(RunConfig::parse("noise_std = -1\n").is_err());
    }

    #[test]
    fn canonical_text_round_trips() {
        let cfg =
            RunConfig::parse("beta = 0.1\nmass = 0.3\nmetric = classical\nnoise_std = 1e-4\n")
                .unwrap();
        assert_eq!(RunConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }
}

//! Experiment configuration files.

use std::collections::HashSet;
use std::path::Path;

use proxcert::certify::CheckName;
use proxcert::instance::ProblemSpec;
use proxcert::linalg;
use proxcert::rng::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub experiments: Vec<Experiment>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    pub id: String,
    pub problem: ProblemSpec,
    pub x0: StartSpec,
    pub t: StepSpec,
    pub max_iters: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub checks: Option<Vec<CheckName>>,
}

fn default_tol() -> f64 {
    1e-10
}

fn default_norm() -> f64 {
    10.0
}

/// Either an explicit start point or a seeded Gaussian direction scaled to `norm`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartSpec {
    Explicit(Vec<f64>),
    Random {
        seed: u64,
        #[serde(default = "default_norm")]
        norm: f64,
    },
}

impl StartSpec {
    pub fn resolve(&self, dim: usize, seed_override: Option<u64>) -> Result<Vec<f64>, CliError> {
        match self {
            StartSpec::Explicit(x) => {
                if x.len() != dim {
                    return Err(CliError::Invalid(format!(
                        "x0 has {} entries, problem dimension is {dim}",
                        x.len()
                    )));
                }
                Ok(x.clone())
            }
            StartSpec::Random { seed, norm } => {
                if !(*norm >= 0.0) || !norm.is_finite() {
                    return Err(CliError::Invalid(format!(
                        "x0 norm must be finite and >= 0, got {norm}"
                    )));
                }
                let mut rng = SplitMix64::new(seed_override.unwrap_or(*seed));
                let v = rng.normal_vec(dim);
                let n = linalg::norm(&v);
                if n == 0.0 {
                    return Ok(v);
                }
                Ok(linalg::scale(&v, norm / n))
            }
        }
    }
}

/// A step size: a number, or one of the symbolic forms understood by [`parse_step`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StepSpec {
    Value(f64),
    Symbolic(String),
}

impl StepSpec {
    pub fn resolve(&self, mu: f64, lip: f64) -> Result<f64, CliError> {
        let t = match self {
            StepSpec::Value(t) => *t,
            StepSpec::Symbolic(s) => parse_step(s, mu, lip)?,
        };
        if !(t > 0.0) || !t.is_finite() {
            return Err(CliError::Invalid(format!(
                "step must be positive and finite, got {t}"
            )));
        }
        Ok(t)
    }
}

/// Parses `0.1`, `2/11`, `1/L`, `0.5/L` or `2/(L+mu)`.
pub fn parse_step(token: &str, mu: f64, lip: f64) -> Result<f64, CliError> {
    let compact: String = token.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Invalid(format!("cannot parse step '{token}'"));
    if let Ok(v) = compact.parse::<f64>() {
        return Ok(v);
    }
    let (num, den) = compact.split_once('/').ok_or_else(bad)?;
    let num: f64 = num.parse().map_err(|_| bad())?;
    let den = match den {
        "L" => lip,
        "(L+mu)" | "(mu+L)" | "(L+μ)" | "(μ+L)" => lip + mu,
        d => d.parse().map_err(|_| bad())?,
    };
    if den == 0.0 {
        return Err(CliError::Invalid(format!("step '{token}' divides by zero")));
    }
    Ok(num / den)
}

/// Reads and parses a config, reporting syntax and shape errors as `path:line:column`.
pub fn load(path: &Path) -> Result<Config, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let config: Config = serde_json::from_str(&text).map_err(|e| {
        let full = e.to_string();
        let message = match full.rsplit_once(" at line ") {
            Some((m, _)) => m.to_string(),
            None => full,
        };
        CliError::Config {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message,
        }
    })?;
    validate(&config)?;
    Ok(config)
}

fn validate(config: &Config) -> Result<(), CliError> {
    let mut seen = HashSet::new();
    for e in &config.experiments {
        let usable = !e.id.is_empty()
            && e.id
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
            && !e.id.starts_with('.');
        if !usable {
            return Err(CliError::Invalid(format!(
                "experiment id '{}' must be non-empty and use only letters, digits, '-', '_', '.'",
                e.id
            )));
        }
        if !seen.insert(e.id.as_str()) {
            return Err(CliError::Invalid(format!(
                "duplicate experiment id '{}'",
                e.id
            )));
        }
        if !(e.tol >= 0.0) {
            return Err(CliError::Invalid(format!(
                "experiment '{}': tol must be >= 0",
                e.id
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_tokens() {
        assert_eq!(parse_step("0.1", 1.0, 10.0).unwrap(), 0.1);
        assert_eq!(parse_step("2/11", 1.0, 10.0).unwrap(), 2.0 / 11.0);
        assert_eq!(parse_step("1/L", 1.0, 10.0).unwrap(), 0.1);
        assert_eq!(parse_step("0.5/L", 1.0, 10.0).unwrap(), 0.05);
        assert_eq!(parse_step("2/(L+mu)", 1.0, 10.0).unwrap(), 2.0 / 11.0);
        assert_eq!(parse_step(" 2 / (L + mu) ", 1.0, 10.0).unwrap(), 2.0 / 11.0);
        assert!(parse_step("L/2", 1.0, 10.0).is_err());
        assert!(parse_step("1/0", 1.0, 10.0).is_err());
    }

    #[test]
    fn step_must_be_positive() {
        assert!(StepSpec::Value(0.0).resolve(1.0, 10.0).is_err());
        assert!(StepSpec::Symbolic("1/L".into()).resolve(0.0, 0.0).is_err());
    }

    #[test]
    fn random_start_has_requested_norm() {
        let x = StartSpec::Random {
            seed: 3,
            norm: 10.0,
        }
        .resolve(6, None)
        .unwrap();
        assert!((linalg::norm(&x) - 10.0).abs() < 1e-12);
        let y = StartSpec::Random {
            seed: 3,
            norm: 10.0,
        }
        .resolve(6, Some(4))
        .unwrap();
        assert_ne!(x, y);
    }

    #[test]
    fn start_specs_parse() {
        let s: StartSpec = serde_json::from_str("[1, 2]").unwrap();
        assert_eq!(s, StartSpec::Explicit(vec![1.0, 2.0]));
        let s: StartSpec = serde_json::from_str(r#"{"seed": 5}"#).unwrap();
        assert_eq!(
            s,
            StartSpec::Random {
                seed: 5,
                norm: 10.0
            }
        );
    }
}

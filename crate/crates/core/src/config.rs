//! Run configuration: TOML with sections, validated at load.
//!
//! ```toml
//! seed = 42
//!
//! [operator]
//! m = 1
//! n_modes = 256          # or: lambda_file = "eigenvalues.txt"
//!
//! [params]
//! alpha = 1.0
//! beta = 1.0
//! gamma = 1.0
//! delta = 1.0
//!
//! [nonlinearity]
//! f1 = "cubic"
//! f2 = "zero"
//! f3 = "saturating"
//! rho = 3.0
//! N = 3
//! m = 1
//!
//! [solver]
//! T = 1.0
//! dt = 0.01
//!
//! [output]
//! path = "out.csv"
//! ```
//!
//! Only `[params]` is required. Individual keys can be overridden with
//! `section.key=value` strings (see [`apply_override`]).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::block::{BlockOperator, MgtParams};
use crate::error::{MgtError, Result};
use crate::nonlinearity::{subcritical_exponent, Nonlinearity, ScalarFn};
use crate::solver::SolverConfig;
use crate::spectral::SpectralOperator;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub operator: OperatorSection,
    pub params: ParamsSection,
    #[serde(default)]
    pub nonlinearity: NonlinearitySection,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output: OutputSection,
}

fn default_seed() -> u64 {
    42
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OperatorSection {
    /// `A` is the Dirichlet Laplacian to the power `m`.
    pub m: u32,
    pub n_modes: usize,
    /// Whitespace-separated eigenvalues; replaces the Dirichlet model (and
    /// with it the collocation grid).
    pub lambda_file: Option<PathBuf>,
}

impl Default for OperatorSection {
    fn default() -> Self {
        Self {
            m: 1,
            n_modes: 256,
            lambda_file: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NonlinearitySection {
    pub f1: String,
    pub f2: String,
    pub f3: String,
    pub rho: f64,
    #[serde(rename = "N")]
    pub n_dim: u32,
    pub m: u32,
}

impl Default for NonlinearitySection {
    fn default() -> Self {
        Self {
            f1: "cubic".into(),
            f2: "zero".into(),
            f3: "saturating".into(),
            rho: 3.0,
            n_dim: 3,
            m: 1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    /// Include every coefficient column in `simulate` output.
    pub full_coefficients: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let cfg_err = |msg: String| Err(MgtError::Config(msg));
        for (name, x) in [
            ("alpha", self.params.alpha),
            ("beta", self.params.beta),
            ("gamma", self.params.gamma),
            ("delta", self.params.delta),
        ] {
            if !(x > 0.0 && x.is_finite()) {
                return cfg_err(format!("params.{name} must be positive"));
            }
        }
        if self.operator.m == 0 {
            return cfg_err("operator.m must be at least 1".into());
        }
        if self.operator.n_modes == 0 {
            return cfg_err("operator.n_modes must be at least 1".into());
        }
        let nl = &self.nonlinearity;
        for (key, name) in [("f1", &nl.f1), ("f2", &nl.f2), ("f3", &nl.f3)] {
            if ScalarFn::gallery(name, 2.0).is_err() {
                return cfg_err(format!(
                    "nonlinearity.{key}: unknown gallery function `{name}` (expected one of {})",
                    crate::nonlinearity::GALLERY.join(", ")
                ));
            }
        }
        let cap = subcritical_exponent(nl.n_dim, nl.m).map_err(|e| MgtError::Config(format!("nonlinearity.N: {e}")))?;
        if !(nl.rho > 1.0) {
            return cfg_err(format!("nonlinearity.rho = {} must exceed 1", nl.rho));
        }
        if nl.rho > cap {
            return cfg_err(format!(
                "nonlinearity.rho = {} exceeds the subcritical exponent (N+2m)/(N-2m) = {cap}",
                nl.rho
            ));
        }
        self.solver.validate()
    }

    pub fn mgt_params(&self) -> Result<MgtParams> {
        let p = &self.params;
        MgtParams::new(p.alpha, p.beta, p.gamma, p.delta)
    }

    /// The spectral model; a relative `lambda_file` is resolved against `base`.
    pub fn spectral_operator(&self, base: Option<&Path>) -> Result<SpectralOperator> {
        match &self.operator.lambda_file {
            Some(file) => {
                let path = match base {
                    Some(dir) if file.is_relative() => dir.join(file),
                    _ => file.clone(),
                };
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| MgtError::Config(format!("operator.lambda_file {}: {e}", path.display())))?;
                let lambdas = text
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<f64>()
                            .map_err(|_| MgtError::Config(format!("operator.lambda_file: bad number `{t}`")))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                SpectralOperator::from_sequence(lambdas)
            }
            None => SpectralOperator::dirichlet_power(self.operator.m, self.operator.n_modes),
        }
    }

    pub fn block_operator(&self, base: Option<&Path>) -> Result<BlockOperator> {
        BlockOperator::new(self.spectral_operator(base)?, self.mgt_params()?)
    }

    pub fn nonlinearity(&self) -> Result<Nonlinearity> {
        let nl = &self.nonlinearity;
        let f = |name: &str| ScalarFn::gallery(name, nl.rho);
        Nonlinearity::new(f(&nl.f1)?, f(&nl.f2)?, f(&nl.f3)?, nl.rho, nl.n_dim, nl.m)
    }

    /// SHA-256 of the canonical JSON form of the configuration.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let hash = Sha256::digest(json.as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Sets `section.key` (or a top-level `key`) to `value`, parsed as a TOML
/// value when possible and as a string otherwise.
pub fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<()> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| MgtError::Config(format!("override `{assignment}` is not of the form section.key=value")))?;
    let path = path.trim();
    let raw = raw.trim();
    let value = match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let mut parts: Vec<&str> = path.split('.').collect();
    let last = parts.pop().filter(|k| !k.is_empty());
    let Some(last) = last else {
        return Err(MgtError::Config(format!("override `{assignment}` has an empty key")));
    };
    let mut cur = table;
    for p in parts {
        cur = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| MgtError::Config(format!("override `{assignment}`: `{p}` is not a section")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

/// Parses and validates configuration text with overrides applied.
pub fn parse_config_str(text: &str, overrides: &[String]) -> Result<RunConfig> {
    let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| MgtError::Config(e.to_string()))?;
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    let cfg: RunConfig = toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| MgtError::Config(e.to_string().trim_end().to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    parse_config_with(path, &[])
}

pub fn parse_config_with(path: &Path, overrides: &[String]) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| MgtError::Io(format!("{}: {e}", path.display())))?;
    parse_config_str(&text, overrides)
}

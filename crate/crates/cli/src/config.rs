use std::fs;
use std::path::{Path, PathBuf};

use levymc::levy::{DriftConvention, ProcessSpec};
use levymc::moment::{geometric_grid, Statistic, MIN_PATHS};
use levymc::sampler::{PathGenerator, Scheme};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] levymc::Error),
}

/// Horizons `t_max, …, t_min`, geometrically spaced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t_max: f64,
    pub t_min: f64,
    pub points: usize,
}

impl Default for GridSpec {
    /// `2^{-4}, …, 2^{-16}`.
    fn default() -> Self {
        Self {
            t_max: 2f64.powi(-4),
            t_min: 2f64.powi(-16),
            points: 13,
        }
    }
}

impl GridSpec {
    pub fn dyadic(k_min: i32, k_max: i32) -> Self {
        Self {
            t_max: 2f64.powi(-k_min),
            t_min: 2f64.powi(-k_max),
            points: (k_max - k_min + 1) as usize,
        }
    }

    pub fn times(&self) -> levymc::Result<Vec<f64>> {
        geometric_grid(self.t_max, self.t_min, self.points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub process: ProcessSpec,
    pub p_list: Vec<f64>,
    #[serde(default)]
    pub t_grid: GridSpec,
    pub n_paths: usize,
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default)]
    pub convention: DriftConvention,
    #[serde(default)]
    pub statistic: Statistic,
    #[serde(default)]
    pub seed: u64,
    /// Fit the log term as well; verification decides this per row instead.
    #[serde(default)]
    pub with_log: bool,
    pub output: PathBuf,
}

impl ExperimentConfig {
    pub fn new(process: ProcessSpec, p_list: Vec<f64>, output: impl Into<PathBuf>) -> Self {
        Self {
            process,
            p_list,
            t_grid: GridSpec::default(),
            n_paths: 100_000,
            scheme: Scheme::default(),
            convention: DriftConvention::default(),
            statistic: Statistic::default(),
            seed: 1,
            with_log: false,
            output: output.into(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text).map_err(|e| match e {
            ConfigError::Parse { source, .. } => ConfigError::Parse {
                path: path.to_owned(),
                source,
            },
            other => other,
        })
    }

    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let config: Self = serde_json::from_str(text).map_err(|source| ConfigError::Parse {
            path: PathBuf::from("<string>"),
            source,
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: String| Err(ConfigError::Invalid(m));
        if self.p_list.is_empty() {
            return invalid("p_list is empty".into());
        }
        if let Some(p) = self.p_list.iter().find(|p| !(**p > 0.0 && p.is_finite())) {
            return invalid(format!("moment order p = {p} must be positive"));
        }
        let g = self.t_grid;
        if !(g.t_min > 0.0 && g.t_min < g.t_max && g.t_max <= 1.0) {
            return invalid(format!(
                "need 0 < t_min < t_max ≤ 1, got t_min = {}, t_max = {}",
                g.t_min, g.t_max
            ));
        }
        if g.points < 2 {
            return invalid(format!("grid needs at least 2 points, got {}", g.points));
        }
        if self.n_paths < MIN_PATHS {
            return invalid(format!("n_paths must be at least {MIN_PATHS}, got {}", self.n_paths));
        }
        PathGenerator::new(&self.process, g.t_max, self.convention, &self.scheme, &[])?;
        Ok(())
    }
}

//! Small-time rate laws `m(t) ≈ c·t^γ·(-log t)^δ`: predicted from the index
//! of the Lévy measure, or fitted to Monte Carlo curves.

mod compensator;
mod fit;
mod predict;

use serde::{Deserialize, Serialize};

pub use compensator::{compensator_closed_form, compensator_integrals, CompensatorIntegrals};
pub use fit::{fit_points, fit_rate, fit_rate_with, FitOptions};
pub use predict::predict_rate;

/// Where a rate law comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RateSource {
    /// `p` above the index: `O(t)`.
    AboveIndex,
    /// `p` below the index under a regularly varying bound: `t^{p/β}` times
    /// powers of the slowly varying part.
    BelowIndex,
    /// `p` at the index under a pure power-law bound: `t(-log t)`, or
    /// `(t(-log t))^p` when the index is 1.
    AtIndex,
    /// `p` below the index with an unbounded or vanishing slowly varying part,
    /// using the envelope exponent.
    SlowlyVaryingEnvelope,
    /// Exact self-similarity of a strictly stable process.
    StrictStableScaling,
    Fitted,
}

/// The free exponents `r`, `q` and the margin `ε` behind a below-index bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Slack {
    pub r: f64,
    pub q: f64,
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateModel {
    #[serde(rename = "gamma")]
    pub t_exponent: f64,
    #[serde(rename = "delta")]
    pub log_exponent: f64,
    /// Fitted prefactor; unset for predictions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    #[serde(default)]
    pub stderr_gamma: Option<f64>,
    #[serde(default)]
    pub stderr_delta: Option<f64>,
    pub source: RateSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<Slack>,
    #[serde(default)]
    pub n_points: Option<usize>,
    /// Whether the log term lowers the penalised residual by the fixed margin.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_preferred: Option<bool>,
}

impl RateModel {
    pub(crate) fn predicted(t_exponent: f64, log_exponent: f64, source: RateSource) -> Self {
        Self {
            t_exponent,
            log_exponent,
            constant: None,
            stderr_gamma: None,
            stderr_delta: None,
            source,
            slack: None,
            n_points: None,
            log_preferred: None,
        }
    }

    pub fn exponents(&self) -> (f64, f64) {
        (self.t_exponent, self.log_exponent)
    }

    /// `c·t^γ·(-log t)^δ`, with `c = 1` when unset.
    pub fn eval(&self, t: f64) -> f64 {
        self.constant.unwrap_or(1.0) * t.powf(self.t_exponent) * (-t.ln()).powf(self.log_exponent)
    }
}

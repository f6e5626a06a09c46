//! Drift conventions: which deterministic linear term is removed from `X`.

use serde::{Deserialize, Serialize};

use super::process::ProcessSpec;
use crate::error::{Error, Result};

/// The process actually studied, written as `X_t - b·t` for a rate `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum DriftConvention {
    /// `X` itself.
    #[default]
    Raw,
    /// `X_t - t·E X₁`.
    CenteredMartingale,
    /// `Y_t = X_t - t(a - ∫_{|x|≤1} x dν)`.
    CompensatedSmallJumps,
    /// `Z_t = X_t - t(a - ∫_{c<|x|≤1} x dν)` with `c` the small-ball cutoff.
    TruncAdjusted,
}

impl DriftConvention {
    pub const ALL: [DriftConvention; 4] = [
        DriftConvention::Raw,
        DriftConvention::CenteredMartingale,
        DriftConvention::CompensatedSmallJumps,
        DriftConvention::TruncAdjusted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DriftConvention::Raw => "raw",
            DriftConvention::CenteredMartingale => "centered",
            DriftConvention::CompensatedSmallJumps => "compensated",
            DriftConvention::TruncAdjusted => "trunc-adjusted",
        }
    }
}

impl std::fmt::Display for DriftConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for DriftConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DriftConvention::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown drift convention '{s}' (expected raw, centered, compensated or trunc-adjusted)"
                ))
            })
    }
}

/// The rate `b` such that the convention's process is `X_t - b·t`.
///
/// The shift is linear in time, so `b` does not depend on the horizon.
pub fn drift_for(spec: &ProcessSpec, convention: DriftConvention) -> Result<f64> {
    let a = spec.drift();
    let m = spec.measure();
    match convention {
        DriftConvention::Raw => Ok(0.0),
        DriftConvention::CenteredMartingale => {
            if !m.moment_exists(1.0)? {
                return Err(Error::Divergent(format!(
                    "E|X₁| is infinite for {:?}; the centered convention needs a finite mean",
                    spec.family()
                )));
            }
            Ok(a + m.first_moment(1.0, f64::INFINITY)?)
        }
        DriftConvention::CompensatedSmallJumps => Ok(a - m.first_moment(0.0, 1.0)?),
        DriftConvention::TruncAdjusted => Ok(a - m.first_moment(m.cutoff().min(1.0), 1.0)?),
    }
}

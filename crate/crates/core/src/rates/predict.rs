use super::{RateModel, RateSource, Slack};
use crate::error::{Error, Result};
use crate::levy::{drift_for, DriftConvention, Family, ProcessSpec, SlowlyVarying};

/// Whether `X - b_conv·t` coincides with the small-jump-compensated process.
fn compensated(spec: &ProcessSpec, convention: DriftConvention) -> bool {
    let (Ok(b), Ok(y)) = (
        drift_for(spec, convention),
        drift_for(spec, DriftConvention::CompensatedSmallJumps),
    ) else {
        return false;
    };
    (b - y).abs() <= 1e-9 * spec.drift().abs().max(1.0)
}

fn not_covered(spec: &ProcessSpec, p: f64, why: &str) -> Error {
    Error::NotCovered(format!("{:?} with p = {p}: {why}", spec.family()))
}

/// Strictly stable, and still so after the convention's linear shift.
fn scales_exactly(spec: &ProcessSpec, convention: DriftConvention) -> bool {
    if !spec.is_strictly_stable() {
        return false;
    }
    match (spec.family(), drift_for(spec, convention)) {
        (Family::Stable { alpha, .. }, Ok(b)) => *alpha == 1.0 || b == 0.0,
        _ => false,
    }
}

/// Sharpest rate law for `E sup_{s≤t}|U_s|^p`, `U` the convention's process,
/// that the index, symmetry and slowly varying structure of `ν` support.
pub fn predict_rate(spec: &ProcessSpec, p: f64, convention: DriftConvention) -> Result<RateModel> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p must be positive, got {p}")));
    }
    let m = spec.measure();
    let beta = spec.bg_index();
    if !m.moment_exists(p)? {
        return Err(not_covered(spec, p, "E|X₁|^p is infinite"));
    }
    let symmetric = spec.is_symmetric();

    if p > beta {
        // below 1 the bound holds for Y only: any other drift contributes t^p ≫ t
        if p < 1.0 && !compensated(spec, convention) {
            return Err(not_covered(
                spec,
                p,
                "the O(t) bound for p < 1 needs the small-jump-compensated process",
            ));
        }
        return Ok(RateModel::predicted(1.0, 0.0, RateSource::AboveIndex));
    }

    if p < beta && scales_exactly(spec, convention) {
        return Ok(RateModel::predicted(p / beta, 0.0, RateSource::StrictStableScaling));
    }

    if beta == 1.0 && !(symmetric && p < 1.0) {
        // p ≤ 1 at index one: (t(-log t))^p under a pure power-law bound
        if !m.has_power_law_bound() {
            return Err(not_covered(spec, p, "index 1 with a non-constant slowly varying part"));
        }
        return Ok(RateModel::predicted(p, p, RateSource::AtIndex));
    }

    if p == beta {
        if beta >= 2.0 {
            return Err(not_covered(spec, p, "p = β = 2 is outside every bound"));
        }
        if !m.has_power_law_bound() {
            return Err(not_covered(spec, p, "p = β needs a pure power-law bound near 0"));
        }
        if beta < 1.0 && !compensated(spec, convention) {
            return Err(not_covered(
                spec,
                p,
                "for β < 1 the t(-log t) bound needs the small-jump-compensated process",
            ));
        }
        return Ok(RateModel::predicted(1.0, 1.0, RateSource::AtIndex));
    }

    // p < β from here on
    if beta < 1.0 && !compensated(spec, convention) {
        return Err(not_covered(
            spec,
            p,
            "for β < 1 the t^{p/β} bound needs the small-jump-compensated process",
        ));
    }
    let slack = envelope(beta, p, symmetric);
    match m.slowly_varying() {
        SlowlyVarying::Bounded => Ok(RateModel {
            slack: Some(slack),
            ..RateModel::predicted(p / beta, 0.0, RateSource::BelowIndex)
        }),
        SlowlyVarying::LogPower { power } => {
            // l(t^{1/β}) = β^{-k}(-log t)^k, so powers of l become powers of -log t
            // symmetric index one: the bound is for X - as, and a drift adds
            // t^p, which outweighs a vanishing log factor
            let drifting = beta == 1.0 && !compensated(spec, convention);
            let delta = if beta >= 2.0 || (drifting && power < 0.0) {
                // the r-term is replaced by a constant; l → 0 requires k < 0
                0.0
            } else if power > 0.0 {
                power * p / slack.q
            } else {
                power * p / (beta + slack.epsilon)
            };
            Ok(RateModel {
                slack: Some(slack),
                ..RateModel::predicted(p / beta, delta, RateSource::SlowlyVaryingEnvelope)
            })
        }
    }
}

/// Fixed display choice of `(r, q, ε)` inside the admissible ranges.
fn envelope(beta: f64, p: f64, symmetric: bool) -> Slack {
    let r_max = if beta < 1.0 && !symmetric { 1.0 } else { 2.0 };
    let r = (beta + (r_max - beta) / 2.0).min(r_max);
    let q_min = if beta > 1.0 && !symmetric { p.max(1.0) } else { p };
    let q = (beta * (1.0 - 1.0 / 16.0)).max(0.5 * (q_min + beta));
    Slack {
        r,
        q,
        epsilon: beta - q,
    }
}

//! Time-integrated small- and big-jump compensator integrals
//! `∫₀ᵗ∫ |x|^r 1{|x|≤s^{1/β}} ν(dx) ds` and relatives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levy::{Density, LevyMeasure};
use crate::quadrature::Tolerance;

const TOL: Tolerance = Tolerance::new(0.0, 1e-10);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompensatorIntegrals {
    /// `∫₀ᵗ∫ |x|^r 1{|x|≤s^{1/β}} dν ds`.
    pub small_jump: f64,
    /// `∫₀ᵗ∫ |x|^q 1{|x|>s^{1/β}} dν₁ ds`, `ν₁` the restriction of `ν` to `|x| ≤ c`.
    pub big_jump: f64,
    /// `∫₀ᵗ∫ x 1{|x|>s^{1/β}} dν₁ ds`.
    pub psi: f64,
}

const ZERO: CompensatorIntegrals = CompensatorIntegrals {
    small_jump: 0.0,
    big_jump: 0.0,
    psi: 0.0,
};

fn check(beta: f64, r: f64, q: f64, t: f64, cutoff: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= 2.0) {
        return Err(Error::InvalidParameter(format!("β must lie in (0, 2], got {beta}")));
    }
    if !(r > beta) {
        return Err(Error::Divergent(format!(
            "the small-jump integral needs r > β, got r = {r}, β = {beta}"
        )));
    }
    if !(q > 0.0 && q <= beta) {
        return Err(Error::InvalidParameter(format!(
            "q must lie in (0, β], got q = {q}, β = {beta}"
        )));
    }
    if !(t >= 0.0 && t <= cutoff.powf(beta)) {
        return Err(Error::InvalidParameter(format!(
            "t must lie in [0, c^β] = [0, {}], got {t}",
            cutoff.powf(beta)
        )));
    }
    Ok(())
}

/// Evaluates the three integrals by quadrature in `x`, after doing the `s`
/// integral in closed form: `∫₀ᵗ 1{|x|≤s^{1/β}} ds = (t - |x|^β)⁺` and
/// `∫₀ᵗ 1{|x|>s^{1/β}} ds = min(|x|^β, t)`.
pub fn compensator_integrals(measure: &LevyMeasure, beta: f64, r: f64, q: f64, t: f64) -> Result<CompensatorIntegrals> {
    let c = measure.cutoff();
    check(beta, r, q, t, c)?;
    if t == 0.0 {
        return Ok(ZERO);
    }
    let knee = t.powf(1.0 / beta);
    let small_jump = measure
        .integrate(|x| x.abs().powf(r) * (t - x.abs().powf(beta)), r, 0.0, knee, TOL)?
        .value;
    let big = |g: &dyn Fn(f64) -> f64, power: f64| -> Result<f64> {
        let inner = measure.integrate(|x| g(x) * x.abs().powf(beta), power + beta, 0.0, knee, TOL)?;
        let outer = measure.integrate(|x| g(x) * t, power, knee, c, TOL)?;
        Ok(inner.value + outer.value)
    };
    let big_jump = big(&|x: f64| x.abs().powf(q), q)?;
    let psi = if measure.is_symmetric() {
        0.0
    } else {
        big(&|x: f64| x, 1.0)?
    };
    Ok(CompensatorIntegrals {
        small_jump,
        big_jump,
        psi,
    })
}

/// `∫_{|x|≤c} |x|^q min(|x|^β, t) |x|^{-β-1} dx / 2` on one side, `t ≤ c^β`.
fn one_sided_big(beta: f64, q: f64, t: f64, c: f64) -> f64 {
    if q == beta {
        t * (1.0 / beta + c.ln() - t.ln() / beta)
    } else {
        t.powf(q / beta) * beta / (q * (beta - q)) - t * c.powf(q - beta) / (beta - q)
    }
}

/// Exact values for a pure power-law measure `C₁x^{-β-1}` / `C₂|x|^{-β-1}`
/// (stable, or truncated without log factor).
pub fn compensator_closed_form(measure: &LevyMeasure, r: f64, q: f64, t: f64) -> Result<CompensatorIntegrals> {
    let (beta, c_pos, c_neg) = match *measure.density_kind() {
        Density::Stable { alpha, c_pos, c_neg } => (alpha, c_pos, c_neg),
        Density::TruncatedPowerLaw {
            beta,
            c_pos,
            c_neg,
            log_power: 0.0,
            ..
        } => (beta, c_pos, c_neg),
        _ => {
            return Err(Error::Unsupported(
                "closed-form compensator integrals exist only for pure power-law measures".into(),
            ))
        }
    };
    let c = measure.cutoff();
    check(beta, r, q, t, c)?;
    if t == 0.0 {
        return Ok(ZERO);
    }
    let total = c_pos + c_neg;
    Ok(CompensatorIntegrals {
        small_jump: total * t.powf(r / beta) * beta / ((r - beta) * r),
        big_jump: total * one_sided_big(beta, q, t, c),
        psi: if measure.is_symmetric() {
            0.0
        } else {
            (c_pos - c_neg) * one_sided_big(beta, 1.0, t, c)
        },
    })
}

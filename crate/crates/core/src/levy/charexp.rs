//! Characteristic exponent `Ψ` with `E e^{iuX_t} = e^{-tΨ(u)}`.

use num_complex::Complex64;

use super::measure::Density;
use super::process::{Family, ProcessSpec};
use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};

const TOL: Tolerance = Tolerance::new(1e-10, 1e-8);
/// Below this `|ux|` the compensated integrand is replaced by its leading Taylor term.
const TAYLOR_SWITCH: f64 = 1e-4;

/// `Ψ(u) = -iua - ∫ (e^{iux} - 1 - iux·1{|x|≤1}) ν(dx)`.
pub fn char_exponent(spec: &ProcessSpec, u: f64) -> Result<Complex64> {
    if !u.is_finite() {
        return Err(Error::Domain(format!("u must be finite, got {u}")));
    }
    if u == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if u < 0.0 {
        // ν is a real measure, so Ψ(-u) is the conjugate of Ψ(u)
        return Ok(char_exponent(spec, -u)?.conj());
    }
    if let Family::Gamma = spec.family() {
        return Ok(Complex64::new(1.0, -u).ln() - Complex64::new(0.0, u * spec.drift_offset()));
    }
    let m = spec.measure();
    if !m.has_density() {
        return Err(Error::Unsupported(
            "the characteristic exponent needs an explicit Lévy density".into(),
        ));
    }

    let cos_part = |x: f64| {
        let ux = u * x;
        if ux.abs() < TAYLOR_SWITCH {
            -0.5 * ux * ux
        } else {
            ux.cos() - 1.0
        }
    };
    let sin_part = |x: f64| {
        let ux = u * x;
        if ux.abs() < TAYLOR_SWITCH {
            -ux * ux * ux / 6.0
        } else {
            ux.sin() - ux
        }
    };
    let re_small = m.integrate(cos_part, 2.0, 0.0, 1.0, TOL)?.value;
    let im_small = if m.is_symmetric() {
        0.0
    } else {
        m.integrate(sin_part, 3.0, 0.0, 1.0, TOL)?.value
    };
    let small = Complex64::new(re_small, im_small);

    let large = match *m.density_kind() {
        Density::Stable { alpha, c_pos, c_neg } => stable_tail(alpha, c_pos, c_neg, u)?,
        _ => {
            let re = m
                .integrate(|x| (u * x).cos() - 1.0, 0.0, 1.0, f64::INFINITY, TOL)?
                .value;
            let im = if m.is_symmetric() {
                0.0
            } else {
                m.integrate(|x| (u * x).sin(), 0.0, 1.0, f64::INFINITY, TOL)?.value
            };
            Complex64::new(re, im)
        }
    };
    Ok(Complex64::new(0.0, -u * spec.drift()) - small - large)
}

/// `∫_{|x|>1} (e^{iux} - 1) ν(dx)` for a pure power-law density, `u > 0`.
///
/// Rotating `x = 1 + is/u` turns the slowly decaying oscillatory integral into
/// `(i/u) e^{iu} ∫₀^∞ e^{-s} (1 + is/u)^{-α-1} ds`.
fn stable_tail(alpha: f64, c_pos: f64, c_neg: f64, u: f64) -> Result<Complex64> {
    let i = Complex64::i();
    let kernel = |s: f64| (-s).exp() * Complex64::new(1.0, s / u).powf(-alpha - 1.0);
    let breaks = [0.0, u.min(1.0), 1.0, 4.0, 12.0, 40.0];
    let re = quadrature::integrate_breaks(|s| kernel(s).re, &breaks, TOL)?.value;
    let im = quadrature::integrate_breaks(|s| kernel(s).im, &breaks, TOL)?.value;
    let rotated = i / u * Complex64::new(u.cos(), u.sin()) * Complex64::new(re, im);
    let mass = 1.0 / alpha;
    Ok(c_pos * (rotated - mass) + c_neg * (rotated.conj() - mass))
}

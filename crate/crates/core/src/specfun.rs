//! Modified Bessel function of the third kind and the Gamma function.
//!
//! `K_ν(z)` is computed straight from its integral representation
//! `K_ν(z) = ½ ∫₀^∞ u^{ν-1} exp(-(z/2)(u + 1/u)) du`. The substitution
//! `u = e^s` turns it into `∫₀^∞ cosh(νs) exp(-z cosh s) ds`, an even, smooth,
//! double-exponentially decaying integrand on which the trapezoid rule
//! converges geometrically. Using `cosh(νs)` makes `K_ν = K_{-ν}` hold by
//! construction.

use crate::error::{Error, Result};

/// Largest order accepted by [`bessel_k`].
pub const MAX_ORDER: f64 = 50.0;

/// Smallest tolerance accepted by [`bessel_k`].
pub const MIN_TOL: f64 = 1e-12;

/// Tolerance used by the library's own density and oracle evaluations.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    pub order: f64,
    pub argument: f64,
    pub value: f64,
    pub abs_error_estimate: f64,
}

/// `K_ν(z)` to relative tolerance `tol`.
pub fn bessel_k(nu: f64, z: f64, tol: f64) -> Result<BesselEval> {
    let scaled = bessel_k_scaled(nu, z, tol)?;
    let factor = (-z).exp();
    let value = scaled.value * factor;
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::Domain(format!(
            "K_{nu}({z}) is not representable in double precision"
        )));
    }
    Ok(BesselEval {
        value,
        abs_error_estimate: scaled.abs_error_estimate * factor,
        ..scaled
    })
}

/// Exponentially scaled `e^z K_ν(z)`, usable where `K_ν(z)` itself underflows.
pub fn bessel_k_scaled(nu: f64, z: f64, tol: f64) -> Result<BesselEval> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("K_nu(z) requires z > 0, got z = {z}")));
    }
    if !nu.is_finite() || nu.abs() > MAX_ORDER {
        return Err(Error::Domain(format!("|nu| must be at most {MAX_ORDER}, got {nu}")));
    }
    if !(tol >= MIN_TOL) {
        return Err(Error::Domain(format!(
            "tolerance must be at least {MIN_TOL}, got {tol}"
        )));
    }
    let nu = nu.abs();
    // log of the scaled integrand: ln cosh(νs) - z (cosh s - 1)
    let log_integrand = |s: f64| ln_cosh(nu * s) - z * (s.cosh() - 1.0);

    let peak_at = peak_location(nu, z);
    let log_peak = log_integrand(peak_at);

    // truncate where the integrand has fallen well below tol relative to the peak
    let cut = (tol * 1e-3).ln();
    let mut upper = peak_at.max(1.0);
    while log_integrand(upper) - log_peak > cut {
        upper *= 1.5;
    }

    let integrand = |s: f64| (log_integrand(s) - log_peak).exp();
    let mut n = 32usize;
    let mut previous = trapezoid(&integrand, upper, n);
    loop {
        n *= 2;
        let current = trapezoid(&integrand, upper, n);
        let diff = (current - previous).abs();
        if diff <= 0.1 * tol * current || n >= 1 << 20 {
            let scale = log_peak.exp();
            let value = current * scale;
            let abs_error_estimate = diff * scale;
            if !value.is_finite() {
                return Err(Error::Domain(format!("e^z K_{nu}({z}) overflows double precision")));
            }
            if abs_error_estimate > tol * value {
                return Err(Error::NotConverged {
                    what: format!("K_{nu}({z})"),
                    estimate: value,
                    abs_error: abs_error_estimate,
                });
            }
            return Ok(BesselEval {
                order: nu,
                argument: z,
                value,
                abs_error_estimate,
            });
        }
        previous = current;
    }
}

/// Convenience wrapper for `e^z K_ν(z)` at the library default tolerance.
pub(crate) fn k_scaled(nu: f64, z: f64) -> f64 {
    bessel_k_scaled(nu, z, DEFAULT_TOL).map(|e| e.value).unwrap_or(f64::NAN)
}

fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Maximiser of `ln cosh(νs) - z cosh s` on `s ≥ 0`.
fn peak_location(nu: f64, z: f64) -> f64 {
    if nu * nu <= z {
        return 0.0;
    }
    let slope = |s: f64| nu * (nu * s).tanh() - z * s.sinh();
    let mut lo = 0.0;
    let mut hi = (nu / z).asinh() + 1.0;
    while slope(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * hi.max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Trapezoid rule on `[0, upper]` for an even integrand (half weight at 0).
fn trapezoid<F: Fn(f64) -> f64>(f: &F, upper: f64, n: usize) -> f64 {
    let h = upper / n as f64;
    let mut sum = 0.5 * (f(0.0) + f(upper));
    for i in 1..n {
        sum += f(i as f64 * h);
    }
    sum * h
}

/// Constant `C_p` in `K_{p-1/2}(z) ~ C_p z^{-|p-1/2|}` as `z → 0`.
pub fn bessel_k_small_z_constant(p: f64) -> Result<f64> {
    if !p.is_finite() {
        return Err(Error::Domain(format!("p must be finite, got {p}")));
    }
    if p == 0.5 {
        return Err(Error::Domain(
            "p = 1/2 gives K_0, which grows like |log z| rather than a power of z".into(),
        ));
    }
    if p > 0.5 {
        Ok(2f64.powf(p - 1.5) * gamma_fn(p - 0.5)?)
    } else {
        Ok(2f64.powf(-p - 0.5) * gamma_fn(0.5 - p)?)
    }
}

/// `Γ(x)` for `x > 0` (Lanczos approximation).
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("gamma_fn requires x > 0, got {x}")));
    }
    Ok(statrs::function::gamma::gamma(x))
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma_fn requires x > 0, got {x}")));
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn k(nu: f64, z: f64) -> f64 {
        bessel_k(nu, z, DEFAULT_TOL).unwrap().value
    }

    fn half_integer_closed_form(nu: f64, z: f64) -> f64 {
        let base = (PI / (2.0 * z)).sqrt() * (-z).exp();
        if nu.abs() == 0.5 {
            base
        } else {
            assert_eq!(nu.abs(), 1.5);
            base * (1.0 + 1.0 / z)
        }
    }

    #[test]
    fn half_order_at_one() {
        let e = bessel_k(0.5, 1.0, 1e-12).unwrap();
        assert!((e.value - 0.461_068_5).abs() < 1e-7);
        assert!(rel(e.value, half_integer_closed_form(0.5, 1.0)) < 1e-10);
        assert!(e.abs_error_estimate <= 1e-12 * e.value);
    }

    #[test]
    fn half_integer_orders_match_closed_forms() {
        for &nu in &[0.5, -0.5, 1.5, -1.5] {
            for &z in &[1e-3, 0.1, 1.0, 7.0, 40.0] {
                let v = bessel_k(nu, z, 1e-12).unwrap().value;
                assert!(rel(v, half_integer_closed_form(nu, z)) < 1e-10, "nu={nu} z={z}");
            }
        }
    }

    #[test]
    fn small_argument_asymptotics() {
        let k1 = bessel_k(1.0, 1e-4, 1e-12).unwrap().value;
        assert!(rel(k1, 1e4) < 1e-3, "{k1}");
        let k0 = bessel_k(0.0, 1e-6, 1e-12).unwrap().value;
        assert!(rel(k0, (1e-6f64).ln().abs()) < 0.05, "{k0}");
    }

    #[test]
    fn reference_values() {
        // K_0(1), K_1(1), K_1(0.1), K_2(3) from standard tables
        assert!(rel(k(0.0, 1.0), 0.421_024_438_240_708_3) < 1e-11);
        assert!(rel(k(1.0, 1.0), 0.601_907_230_197_234_6) < 1e-11);
        assert!(rel(k(1.0, 0.1), 9.853_844_780_870_606) < 1e-11);
        assert!(rel(k(2.0, 3.0), 0.061_510_458_471_742_04) < 1e-10);
    }

    #[test]
    fn recurrence_holds() {
        for &nu in &[0.5, 1.0, 1.5] {
            for &z in &[0.1, 1.0, 10.0] {
                let lhs = k(nu + 1.0, z);
                let rhs = k(nu - 1.0, z) + 2.0 * nu / z * k(nu, z);
                assert!(rel(lhs, rhs) < 1e-8, "nu={nu} z={z}");
            }
        }
    }

    #[test]
    fn decreasing_in_argument() {
        for &nu in &[0.0, 0.3, 1.0, 4.5] {
            let mut last = f64::INFINITY;
            for i in 0..60 {
                let z = 1e-3 * 1.25f64.powi(i);
                let v = k(nu, z);
                assert!(v < last, "nu={nu} z={z}");
                last = v;
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_k(1.0, 0.0, 1e-12), Err(Error::Domain(_))));
        assert!(matches!(bessel_k(1.0, -2.0, 1e-12), Err(Error::Domain(_))));
        assert!(matches!(bessel_k(51.0, 1.0, 1e-12), Err(Error::Domain(_))));
        assert!(matches!(bessel_k(1.0, 1.0, 1e-14), Err(Error::Domain(_))));
    }

    #[test]
    fn very_small_and_large_arguments() {
        // K_1(z) ~ 1/z holds to O(z log z)
        let v = k(1.0, 1e-10);
        assert!(rel(v, 1e10) < 1e-8);
        let s = bessel_k_scaled(0.5, 800.0, 1e-12).unwrap().value;
        assert!(rel(s, (PI / 1600.0).sqrt()) < 1e-10);
        assert!(bessel_k(0.5, 800.0, 1e-12).is_err());
    }

    #[test]
    fn small_z_constants() {
        let root_half_pi = (PI / 2.0).sqrt();
        assert!(rel(bessel_k_small_z_constant(1.0).unwrap(), root_half_pi) < 1e-12);
        assert!(rel(bessel_k_small_z_constant(0.0).unwrap(), root_half_pi) < 1e-12);
        assert!(bessel_k_small_z_constant(0.5).is_err());
        let z: f64 = 1e-5;
        let limit = k(0.5, z) * z.powf(0.5);
        assert!(rel(limit, bessel_k_small_z_constant(1.0).unwrap()) < 0.01);
        let limit = k(-0.25, z) * z.powf(0.25);
        assert!(rel(limit, bessel_k_small_z_constant(0.25).unwrap()) < 0.01);
    }

    #[test]
    fn gamma_values() {
        assert!(rel(gamma_fn(1.0).unwrap(), 1.0) < 1e-12);
        assert!(rel(gamma_fn(0.5).unwrap(), PI.sqrt()) < 1e-12);
        assert!(rel(gamma_fn(5.0).unwrap(), 24.0) < 1e-12);
        assert!(rel(gamma_fn(1.5).unwrap(), 0.5 * PI.sqrt()) < 1e-12);
        assert!(rel(gamma_fn(10.5).unwrap(), 1_133_278.388_948_785_6) < 1e-12);
        assert!(rel(gamma_fn(1e-3).unwrap(), 999.423_772_484_595_5) < 1e-12);
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.5).is_err());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn order_symmetry(nu in -20.0f64..20.0, z in 1e-3f64..50.0) {
                let a = bessel_k(nu, z, 1e-12).unwrap().value;
                let b = bessel_k(-nu, z, 1e-12).unwrap().value;
                prop_assert!(((a - b) / b).abs() <= 1e-10);
            }
        }
    }
}

//! Exact laws used as oracles by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use levymc::quadrature::{integrate, Tolerance};
use levymc::specfun::{bessel_k, gamma_fn, ln_gamma_fn};

const TOL: Tolerance = Tolerance::new(1e-13, 1e-10);

/// `E X_t^p = Γ(p+t)/Γ(t)` for the standard Gamma subordinator.
pub fn gamma_moment(p: f64, t: f64) -> f64 {
    (ln_gamma_fn(p + t).unwrap() - ln_gamma_fn(t).unwrap()).exp()
}

/// `E X_t^p` for the IG(γ) subordinator, `X_t ~ IG(mean t/γ, shape t²)`:
/// `(2/√(2π)) γ^{1/2-p} t^{p+1/2} e^{tγ} K_{p-1/2}(tγ)`.
pub fn ig_moment(p: f64, gamma: f64, t: f64) -> f64 {
    let k = bessel_k(p - 0.5, t * gamma, 1e-12).unwrap().value;
    2.0 / (2.0 * PI).sqrt() * gamma.powf(0.5 - p) * t.powf(p + 0.5) * (t * gamma).exp() * k
}

/// CDF values at increasing points, from a density integrated gap by gap.
fn cumulative<F: Fn(f64) -> f64>(density: F, start: f64, sorted: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut prev = start;
    sorted
        .iter()
        .map(|&x| {
            if x > prev {
                acc += integrate(&density, prev, x, TOL).unwrap().value;
                prev = x;
            }
            acc
        })
        .collect()
}

/// Gamma(t, 1) CDF at sorted points, by quadrature of the density after the
/// substitution `u = y^t`, which removes the `y^{t-1}` singularity.
pub fn gamma_cdf(t: f64, sorted: &[f64]) -> Vec<f64> {
    let norm = gamma_fn(t + 1.0).unwrap();
    let u: Vec<f64> = sorted.iter().map(|&x| x.max(0.0).powf(t)).collect();
    cumulative(|v: f64| (-v.powf(1.0 / t)).exp() / norm, 0.0, &u)
}

/// IG marginal density `(t/√(2π)) x^{-3/2} exp(-(t/√x - γ√x)²/2)`.
pub fn ig_density(t: f64, gamma: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let z = t / x.sqrt() - gamma * x.sqrt();
    t / (2.0 * PI).sqrt() * x.powf(-1.5) * (-0.5 * z * z).exp()
}

pub fn ig_cdf(t: f64, gamma: f64, sorted: &[f64]) -> Vec<f64> {
    let pos: Vec<f64> = sorted.iter().map(|&x| x.max(0.0)).collect();
    cumulative(|x| ig_density(t, gamma, x), 0.0, &pos)
}

/// NIG marginal density at time `t`.
pub fn nig_density(alpha: f64, gamma: f64, delta: f64, t: f64, x: f64) -> f64 {
    let r = (t * t * delta * delta + x * x).sqrt();
    let kappa = (alpha * alpha - gamma * gamma).sqrt();
    t * delta * alpha / PI * (t * delta * kappa + gamma * x).exp() * bessel_k(1.0, alpha * r, 1e-12).unwrap().value / r
}

/// CDF of a symmetric NIG law: `1/2 ± ∫₀^{|x|} f`.
pub fn symmetric_nig_cdf(alpha: f64, delta: f64, t: f64, sorted: &[f64]) -> Vec<f64> {
    let mut abs: Vec<(f64, usize)> = sorted.iter().enumerate().map(|(i, x)| (x.abs(), i)).collect();
    abs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let points: Vec<f64> = abs.iter().map(|a| a.0).collect();
    let mass = cumulative(|x| nig_density(alpha, 0.0, delta, t, x), 0.0, &points);
    let mut out = vec![0.0; sorted.len()];
    for ((_, i), m) in abs.iter().zip(mass) {
        out[*i] = if sorted[*i] < 0.0 { 0.5 - m } else { 0.5 + m };
    }
    out
}

/// Symmetric Cauchy process with density `C/x²` on both sides: scale `πCt`.
pub fn cauchy_cdf(c: f64, t: f64, x: f64) -> f64 {
    0.5 + (x / (PI * c * t)).atan() / PI
}

pub fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

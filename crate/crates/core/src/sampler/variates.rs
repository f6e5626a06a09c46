//! Exact samplers for the increments of the catalog processes.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};

use crate::error::{Error, Result};
use crate::levy::{Family, ProcessSpec};
use crate::specfun;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn uniform_open<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Standard `S_α(1, β, 0)` variate by the Chambers–Mallows–Stuck method:
/// `E e^{iuX} = exp(-|u|^α (1 - iβ sgn(u) tan(πα/2)))` for `α ≠ 1` and
/// `exp(-|u|(1 + iβ (2/π) sgn(u) ln|u|))` for `α = 1`.
pub fn stable_standard<R: Rng + ?Sized>(alpha: f64, beta: f64, rng: &mut R) -> f64 {
    let v = PI * (uniform_open(rng) - 0.5);
    let w: f64 = Exp1.sample(rng);
    if alpha == 1.0 {
        let shifted = FRAC_PI_2 + beta * v;
        return (shifted * v.tan() - beta * (FRAC_PI_2 * w * v.cos() / shifted).ln()) / FRAC_PI_2;
    }
    let t = beta * (PI * alpha / 2.0).tan();
    let b = t.atan() / alpha;
    let s = (1.0 + t * t).powf(0.5 / alpha);
    let av = alpha * (v + b);
    s * av.sin() / v.cos().powf(1.0 / alpha) * ((v - av).cos() / w).powf((1.0 - alpha) / alpha)
}

/// Positive stable variate with `E e^{-λS} = e^{-λ^α}`, `α ∈ (0,1)` (Kanter's representation).
pub fn positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let u = PI * uniform_open(rng);
    let w: f64 = Exp1.sample(rng);
    (alpha * u).sin() / u.sin().powf(1.0 / alpha) * (((1.0 - alpha) * u).sin() / w).powf((1.0 - alpha) / alpha)
}

/// Inverse Gaussian `IG(mean, shape)` by the Michael–Schucany–Haas transformation.
pub fn inverse_gaussian<R: Rng + ?Sized>(mean: f64, shape: f64, rng: &mut R) -> f64 {
    let n: f64 = StandardNormal.sample(rng);
    let r = mean * n * n / (2.0 * shape);
    // smaller root of the quadratic, written to avoid cancellation for large r
    let x = mean / (1.0 + r + (r * r + 2.0 * r).sqrt());
    let u: f64 = rng.random();
    if u * (mean + x) <= mean {
        x
    } else {
        mean * mean / x
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Gamma,
    /// `X_dt = (dt)^{1/α} scale · S_α(1, skew, 0) + dt·shift`.
    Stable {
        alpha: f64,
        scale: f64,
        skew: f64,
        shift: f64,
    },
    /// `α = 1`: `X_dt = dt·scale·S + (2/π) skew·dt·scale·ln(dt·scale) + dt·shift`.
    StableUnit {
        scale: f64,
        skew: f64,
        shift: f64,
    },
    /// Positive stable of Laplace exponent `2^α λ^α` per unit time, tilted by `e^{-tilt·x}`.
    Tempered {
        alpha: f64,
        tilt: f64,
        gamma: f64,
    },
    InverseGaussian {
        gamma: f64,
    },
    /// Brownian motion with drift `gamma` run on an IG clock.
    Nig {
        gamma: f64,
        delta: f64,
        kappa: f64,
    },
}

/// Draws exact increments `X_{s+dt} - X_s` for one process.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementSampler {
    kind: Kind,
    drift_offset: f64,
}

impl IncrementSampler {
    pub fn new(spec: &ProcessSpec) -> Result<Self> {
        let kind = match *spec.family() {
            Family::Gamma => Kind::Gamma,
            Family::Stable { alpha, c1, c2 } => {
                let skew = (c1 - c2) / (c1 + c2);
                if alpha == 1.0 {
                    Kind::StableUnit {
                        scale: (c1 + c2) * FRAC_PI_2,
                        skew,
                        shift: spec.drift() + (c1 - c2) * (1.0 - EULER_GAMMA),
                    }
                } else {
                    let scale_pow = -(c1 + c2) * specfun::gamma_fn(2.0 - alpha)? / (alpha * (alpha - 1.0))
                        * (PI * alpha / 2.0).cos();
                    Kind::Stable {
                        alpha,
                        scale: scale_pow.powf(1.0 / alpha),
                        skew,
                        shift: spec.drift_offset(),
                    }
                }
            }
            Family::TemperedStable { alpha, gamma } => Kind::Tempered {
                alpha,
                tilt: 0.5 * gamma.powf(1.0 / alpha),
                gamma,
            },
            Family::InverseGaussian { gamma } => Kind::InverseGaussian { gamma },
            Family::Nig { alpha, gamma, delta } => Kind::Nig {
                gamma,
                delta,
                kappa: (alpha * alpha - gamma * gamma).sqrt(),
            },
            Family::Meixner { .. } => {
                return Err(Error::Unsupported(
                    "no exact increment sampler for Meixner; use the compound Poisson scheme".into(),
                ))
            }
            Family::Hyperbolic { .. } => return Err(Error::Unsupported("hyperbolic paths cannot be simulated".into())),
            Family::TruncatedPowerLaw { .. } => {
                return Err(Error::Unsupported(
                    "no exact increment sampler for truncated power laws; use the compound Poisson scheme".into(),
                ))
            }
        };
        let drift_offset = match kind {
            Kind::Stable { .. } | Kind::StableUnit { .. } => 0.0,
            _ => spec.drift_offset(),
        };
        Ok(Self { kind, drift_offset })
    }

    /// One draw of `X_dt`, `dt > 0`.
    pub fn sample<R: Rng + ?Sized>(&self, dt: f64, rng: &mut R) -> f64 {
        let x = match self.kind {
            Kind::Gamma => Gamma::new(dt, 1.0).expect("positive shape").sample(rng),
            Kind::Stable {
                alpha,
                scale,
                skew,
                shift,
            } => dt.powf(1.0 / alpha) * scale * stable_standard(alpha, skew, rng) + dt * shift,
            Kind::StableUnit { scale, skew, shift } => {
                let s = dt * scale;
                s * stable_standard(1.0, skew, rng) + skew * s * s.ln() / FRAC_PI_2 + dt * shift
            }
            Kind::Tempered { alpha, tilt, gamma } => {
                // split so each piece needs e^{piece·γ} ≤ e trials on average
                let pieces = (dt * gamma).ceil().max(1.0) as usize;
                let h = dt / pieces as f64;
                let scale = 2.0 * h.powf(1.0 / alpha);
                (0..pieces)
                    .map(|_| loop {
                        let s = scale * positive_stable(alpha, rng);
                        let u: f64 = rng.random();
                        if u <= (-tilt * s).exp() {
                            break s;
                        }
                    })
                    .sum()
            }
            Kind::InverseGaussian { gamma } => inverse_gaussian(dt / gamma, dt * dt, rng),
            Kind::Nig { gamma, delta, kappa } => {
                let td = dt * delta;
                let z = inverse_gaussian(td / kappa, td * td, rng);
                let n: f64 = StandardNormal.sample(rng);
                gamma * z + z.sqrt() * n
            }
        };
        x + dt * self.drift_offset
    }
}

/// One draw of `X_dt` for `spec`.
pub fn sample_increment<R: Rng + ?Sized>(spec: &ProcessSpec, dt: f64, rng: &mut R) -> Result<f64> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    Ok(IncrementSampler::new(spec)?.sample(dt, rng))
}

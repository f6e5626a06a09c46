//! Jump-size samplers for the jumps larger than a cutoff `ε`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::levy::{Density, LevyMeasure, Side};
use crate::quadrature::{self, Tolerance};

const CELLS: usize = 4096;
const CDF_ACCURACY: f64 = 1e-6;

/// Inverse CDF of `ρ(±x)/ν(±x > ε)` on `x > ε` for one side, built on a
/// log-spaced grid with a power law fitted inside each cell.
#[derive(Debug, Clone)]
struct SideTable {
    nodes: Vec<f64>,
    /// Cumulative normalised mass at the right edge of each cell.
    cdf: Vec<f64>,
    /// Power `s` with `ρ ∝ x^{-s}` inside each cell.
    slopes: Vec<f64>,
}

impl SideTable {
    fn build(measure: &LevyMeasure, side: Side, eps: f64) -> Result<Self> {
        let upper = measure.support_upper()?;
        if upper <= eps {
            return Err(Error::InvalidParameter(format!(
                "cutoff ε = {eps} leaves no jumps below the support bound {upper}"
            )));
        }
        let (la, lb) = (eps.ln(), upper.ln());
        let nodes: Vec<f64> = (0..=CELLS)
            .map(|i| (la + (lb - la) * i as f64 / CELLS as f64).exp())
            .collect();
        let rho = |x: f64| measure.rho(side.sign() * x);
        let mut slopes = Vec::with_capacity(CELLS);
        let mut masses = Vec::with_capacity(CELLS);
        let mut worst: f64 = 0.0;
        for w in nodes.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (ra, rb) = (rho(a), rho(b));
            let slope = if ra > 0.0 && rb > 0.0 {
                -(rb / ra).ln() / (b / a).ln()
            } else {
                0.0
            };
            let tol = Tolerance::new(1e-300, 1e-12);
            let mass = quadrature::integrate(&rho, a, b, tol)?.value;
            let mid = (a * b).sqrt();
            let half = quadrature::integrate(&rho, a, mid, tol)?.value;
            if mass > 0.0 {
                let fitted = power_mass(a, mid, slope) / power_mass(a, b, slope);
                worst = worst.max(mass * (fitted - half / mass).abs());
            }
            slopes.push(slope);
            masses.push(mass);
        }
        let total: f64 = masses.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "no jump mass above ε = {eps} on the {side:?} side"
            )));
        }
        if worst / total > CDF_ACCURACY {
            return Err(Error::NotConverged {
                what: "tabulated inverse CDF of the jump-size law".into(),
                estimate: total,
                abs_error: worst / total,
            });
        }
        let mut acc = 0.0;
        let cdf = masses
            .iter()
            .map(|m| {
                acc += m;
                acc / total
            })
            .collect();
        Ok(Self { nodes, cdf, slopes })
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let i = self.cdf.partition_point(|&c| c < u).min(CELLS - 1);
        let lo = if i == 0 { 0.0 } else { self.cdf[i - 1] };
        let frac = ((u - lo) / (self.cdf[i] - lo)).clamp(0.0, 1.0);
        invert_power(self.nodes[i], self.nodes[i + 1], self.slopes[i], frac)
    }
}

/// `∫_a^x y^{-s} dy` up to a common factor.
fn power_mass(a: f64, x: f64, s: f64) -> f64 {
    let e = 1.0 - s;
    if e.abs() < 1e-9 {
        (x / a).ln()
    } else {
        ((x / a).powf(e) - 1.0) / e
    }
}

/// Point `x ∈ [a, b]` holding fraction `f` of the `y^{-s}` mass of the cell.
fn invert_power(a: f64, b: f64, s: f64, f: f64) -> f64 {
    let e = 1.0 - s;
    let x = if e.abs() < 1e-9 {
        a * (b / a).powf(f)
    } else {
        a * (1.0 + f * ((b / a).powf(e) - 1.0)).powf(1.0 / e)
    };
    x.clamp(a, b)
}

#[derive(Debug, Clone)]
enum SideSampler {
    /// `P(|J| > y) = (y/ε)^{-α}`.
    Pareto {
        alpha: f64,
    },
    Table(SideTable),
}

/// Sampler for signed jump sizes with `|J| > ε`, distributed as `ν` restricted
/// and normalised.
#[derive(Debug, Clone)]
pub struct JumpSampler {
    eps: f64,
    rate_pos: f64,
    rate_neg: f64,
    pos: Option<SideSampler>,
    neg: Option<SideSampler>,
}

impl JumpSampler {
    pub fn new(measure: &LevyMeasure, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidParameter(format!("ε must be positive, got {eps}")));
        }
        let build = |side: Side| -> Result<(f64, Option<SideSampler>)> {
            let rate = measure.side_mass_above(side, eps)?;
            if rate <= 0.0 {
                return Ok((0.0, None));
            }
            let sampler = match *measure.density_kind() {
                Density::Stable { alpha, .. } => SideSampler::Pareto { alpha },
                _ => SideSampler::Table(SideTable::build(measure, side, eps)?),
            };
            Ok((rate, Some(sampler)))
        };
        let (rate_pos, pos) = build(Side::Positive)?;
        let (rate_neg, neg) = build(Side::Negative)?;
        Ok(Self {
            eps,
            rate_pos,
            rate_neg,
            pos,
            neg,
        })
    }

    /// `ν(|x| > ε)`.
    pub fn rate(&self) -> f64 {
        self.rate_pos + self.rate_neg
    }

    pub fn epsilon(&self) -> f64 {
        self.eps
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random::<f64>() * self.rate();
        let (side, sign) = if u < self.rate_pos {
            (&self.pos, 1.0)
        } else {
            (&self.neg, -1.0)
        };
        let size = match side.as_ref().expect("side with positive rate has a sampler") {
            SideSampler::Pareto { alpha } => {
                let v: f64 = 1.0 - rng.random::<f64>();
                self.eps * v.powf(-1.0 / alpha)
            }
            SideSampler::Table(t) => t.sample(rng),
        };
        sign * size
    }
}

//! Adaptive Gauss–Kronrod quadrature (7-point Gauss / 15-point Kronrod pair).
//!
//! The error estimate follows the QUADPACK heuristic, which is far less
//! pessimistic than the raw `|K15 - G7|` difference on smooth integrands.

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    fn reached(&self, value: f64, error: f64) -> bool {
        error <= self.abs.max(self.rel * value.abs())
    }
}

impl Default for Tolerance {
    /// Absolute 1e-10, relative 1e-8.
    fn default() -> Self {
        Self::new(1e-10, 1e-8)
    }
}

/// An integral value together with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
}

impl std::ops::Add for Estimate {
    type Output = Estimate;

    fn add(self, rhs: Estimate) -> Estimate {
        Estimate {
            value: self.value + rhs.value,
            abs_error: self.abs_error + rhs.abs_error,
        }
    }
}

/// Single 15-point Kronrod rule on `[a, b]` with its error estimate.
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    resasc *= half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    Estimate {
        value,
        abs_error: err.max(50.0 * f64::EPSILON * value.abs()),
    }
}

struct Piece {
    a: f64,
    b: f64,
    est: Estimate,
}

/// Globally adaptive integration of `f` over the finite interval `[a, b]`.
///
/// Non-finite integrand values are reported as a domain error rather than
/// silently propagated.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "integration bounds must be finite, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            abs_error: 0.0,
        });
    }
    let first = gk15(&mut f, a, b);
    let mut pieces = vec![Piece { a, b, est: first }];
    let mut total = first;
    loop {
        if !total.value.is_finite() {
            return Err(Error::Domain(format!("integrand is not finite on [{a}, {b}]")));
        }
        if tol.reached(total.value, total.abs_error) {
            return Ok(total);
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(Error::NotConverged {
                what: "adaptive quadrature".into(),
                estimate: total.value,
                abs_error: total.abs_error,
            });
        }
        let (worst, _) = pieces.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, p)| {
            if p.est.abs_error > acc.1 {
                (i, p.est.abs_error)
            } else {
                acc
            }
        });
        let piece = pieces.swap_remove(worst);
        let mid = 0.5 * (piece.a + piece.b);
        if mid <= piece.a || mid >= piece.b {
            // interval cannot be split further in floating point
            return Err(Error::NotConverged {
                what: "adaptive quadrature (interval underflow)".into(),
                estimate: total.value,
                abs_error: total.abs_error,
            });
        }
        let left = gk15(&mut f, piece.a, mid);
        let right = gk15(&mut f, mid, piece.b);
        total.value += left.value + right.value - piece.est.value;
        total.abs_error += left.abs_error + right.abs_error - piece.est.abs_error;
        pieces.push(Piece {
            a: piece.a,
            b: mid,
            est: left,
        });
        pieces.push(Piece {
            a: mid,
            b: piece.b,
            est: right,
        });
        // re-sum occasionally to stop drift from the incremental updates
        if pieces.len() % 64 == 0 {
            total = pieces.iter().fold(
                Estimate {
                    value: 0.0,
                    abs_error: 0.0,
                },
                |acc, p| acc + p.est,
            );
        }
    }
}

/// Integrates over several consecutive breakpoints, splitting the tolerance budget.
pub fn integrate_breaks<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], tol: Tolerance) -> Result<Estimate> {
    let mut total = Estimate {
        value: 0.0,
        abs_error: 0.0,
    };
    let n = breaks.len().saturating_sub(1).max(1) as f64;
    let part_tol = Tolerance::new(tol.abs / n, tol.rel);
    for w in breaks.windows(2) {
        total = total + integrate(&mut f, w[0], w[1], part_tol)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_rule_is_exact_for_low_degree_polynomials() {
        // K15 integrates degree 22 exactly; G7 degree 13.
        let est = gk15(&mut |x: f64| x.powi(22) + 3.0 * x.powi(7), -1.0, 1.0);
        assert!((est.value - 2.0 / 23.0).abs() < 1e-14);
        let mut gauss_only = 0.0;
        for j in [1usize, 3, 5] {
            gauss_only += WG[j / 2] * 2.0 * XGK[j].powi(12);
        }
        assert!((gauss_only - 2.0 / 13.0).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        let k: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let g: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-14);
        assert!((g - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let est = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, Tolerance::new(1e-10, 1e-10)).unwrap();
        assert!((est.value - 2.0).abs() < 1e-8, "{est:?}");
    }

    #[test]
    fn oscillatory_integrand() {
        let est = integrate(|x: f64| (50.0 * x).cos(), 0.0, 3.0, Tolerance::default()).unwrap();
        assert!((est.value - (150.0f64).sin() / 50.0).abs() < 1e-9);
    }

    #[test]
    fn reports_non_convergence() {
        let err = integrate(|x: f64| 1.0 / x, 0.0, 1.0, Tolerance::new(1e-12, 1e-12)).unwrap_err();
        assert!(matches!(err, Error::NotConverged { .. } | Error::Domain(_)));
    }
}

//! Weighted least-squares fits of `log m(t)` against `log t` and `log(-log t)`.

use nalgebra::{DMatrix, DVector};

use super::{RateModel, RateSource};
use crate::error::{Error, Result};
use crate::moment::MomentCurve;

pub const MIN_POINTS: usize = 6;
/// Standard errors are floored at this fraction of the estimate.
pub const SE_FLOOR: f64 = 1e-12;
/// Penalised-residual improvement the log term must buy to be preferred.
pub const AIC_MARGIN: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub with_log: bool,
    /// Largest horizons dropped from a log fit.
    pub drop_largest: usize,
}

impl FitOptions {
    pub fn new(with_log: bool) -> Self {
        Self {
            with_log,
            drop_largest: if with_log { 2 } else { 0 },
        }
    }
}

struct Wls {
    coef: DVector<f64>,
    cov: DMatrix<f64>,
    rss: f64,
}

fn wls(x: &DMatrix<f64>, y: &DVector<f64>, w: &DVector<f64>) -> Result<Wls> {
    let (n, k) = x.shape();
    let sw = w.map(f64::sqrt);
    let xw = DMatrix::from_fn(n, k, |i, j| x[(i, j)] * sw[i]);
    let yw = y.component_mul(&sw);
    // QR on the scaled design; the normal equations square the condition number
    let svd = xw.clone().svd(true, true);
    let (smax, smin) = svd
        .singular_values
        .iter()
        .fold((0.0f64, f64::INFINITY), |(hi, lo), &s| (hi.max(s), lo.min(s)));
    if !(smin > 1e-10 * smax) {
        return Err(Error::Singular(format!(
            "design matrix is rank deficient (singular values {smax:e} .. {smin:e}); widen the t grid"
        )));
    }
    let coef = svd.solve(&yw, 0.0).map_err(|e| Error::Singular(e.to_string()))?;
    let resid = &yw - &xw * &coef;
    let rss = resid.norm_squared();
    let dof = (n - k).max(1) as f64;
    let xtx_inv = (xw.transpose() * &xw)
        .try_inverse()
        .ok_or_else(|| Error::Singular("normal matrix is not invertible".into()))?;
    Ok(Wls {
        coef,
        cov: xtx_inv * (rss / dof),
        rss,
    })
}

fn aic(rss: f64, n: usize, k: usize) -> f64 {
    n as f64 * (rss / n as f64).max(1e-300).ln() + 2.0 * k as f64
}

/// Fits `m(t) = c·t^γ` or `c·t^γ·(-log t)^δ` to a moment curve.
pub fn fit_rate(curve: &MomentCurve, with_log: bool) -> Result<RateModel> {
    fit_rate_with(curve, FitOptions::new(with_log))
}

pub fn fit_rate_with(curve: &MomentCurve, options: FitOptions) -> Result<RateModel> {
    let points: Vec<(f64, f64, f64)> = curve.estimates.iter().map(|e| (e.t, e.estimate, e.std_error)).collect();
    fit_points(&points, options)
}

/// `(t, estimate, std_error)` triples in any order.
pub fn fit_points(points: &[(f64, f64, f64)], options: FitOptions) -> Result<RateModel> {
    if points.len() < MIN_POINTS {
        return Err(Error::InvalidParameter(format!(
            "a rate fit needs at least {MIN_POINTS} grid points, got {}",
            points.len()
        )));
    }
    if let Some(bad) = points.iter().find(|p| !(p.1 > 0.0 && p.1.is_finite())) {
        return Err(Error::InvalidParameter(format!(
            "estimates must be positive to take logarithms, got {} at t = {}",
            bad.1, bad.0
        )));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.truncate(pts.len().saturating_sub(options.drop_largest));
    if options.with_log {
        if let Some(bad) = pts.iter().find(|p| !(p.0 > 0.0 && p.0 < 1.0)) {
            return Err(Error::InvalidParameter(format!(
                "log fits need t in (0, 1), got {}",
                bad.0
            )));
        }
    }
    let k = if options.with_log { 3 } else { 2 };
    let n = pts.len();
    if n <= k {
        return Err(Error::InvalidParameter(format!(
            "{n} points cannot determine {k} coefficients"
        )));
    }
    let column = |i: usize, j: usize| -> f64 {
        let t = pts[i].0;
        match j {
            0 => 1.0,
            1 => t.ln(),
            _ => (-t.ln()).ln(),
        }
    };
    let y = DVector::from_fn(n, |i, _| pts[i].1.ln());
    let w = DVector::from_fn(n, |i, _| {
        let (_, est, se) = pts[i];
        let rel = se.max(SE_FLOOR * est) / est;
        1.0 / (rel * rel)
    });
    let full = wls(&DMatrix::from_fn(n, k, column), &y, &w)?;
    let log_preferred = if options.with_log {
        let plain = wls(&DMatrix::from_fn(n, 2, column), &y, &w)?;
        Some(aic(full.rss, n, 3) + AIC_MARGIN < aic(plain.rss, n, 2))
    } else {
        None
    };
    Ok(RateModel {
        t_exponent: full.coef[1],
        log_exponent: if options.with_log { full.coef[2] } else { 0.0 },
        constant: Some(full.coef[0].exp()),
        stderr_gamma: Some(full.cov[(1, 1)].max(0.0).sqrt()),
        stderr_delta: Some(if options.with_log {
            full.cov[(2, 2)].max(0.0).sqrt()
        } else {
            0.0
        }),
        source: RateSource::Fitted,
        slack: None,
        n_points: Some(n),
        log_preferred,
    })
}

//! Monte Carlo estimates of `E sup_{s≤t}|X_s|^p` (and `E|X_t|^p`) on a grid of
//! horizons, with every horizon evaluated on the same paths.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levy::{DriftConvention, ProcessSpec, TailDecay};
use crate::sampler::{path_rng, PathGenerator, PathSample, Scheme};

pub const MIN_PATHS: usize = 100;
/// Blocks used by the median-of-means estimate.
pub const MOM_BLOCKS: usize = 16;
/// Distance to the moment boundary inside which estimates are flagged.
pub const HEAVY_TAIL_MARGIN: f64 = 0.2;
const CHUNK: usize = 512;

/// Which functional of the path is raised to the power `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// `sup_{s≤t} |X_s|`.
    #[default]
    RunningSup,
    /// `|X_t|`.
    Marginal,
}

/// How paths are drawn for an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sampling {
    pub convention: DriftConvention,
    pub scheme: Scheme,
    pub n_paths: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub t: f64,
    pub p: f64,
    pub estimate: f64,
    /// Sample standard deviation over `√n_paths`.
    pub std_error: f64,
    pub n_paths: usize,
    pub convention: DriftConvention,
    pub scheme: Scheme,
    pub seed: u64,
    /// Median of the means of 16 contiguous path blocks; reported when `p` is
    /// close to the moment boundary, where `std_error` is unreliable.
    pub median_of_means: Option<f64>,
    pub heavy_tail_warning: bool,
}

impl MomentEstimate {
    /// Whether `value` lies within `z` standard errors.
    pub fn covers(&self, value: f64, z: f64) -> bool {
        (self.estimate - value).abs() <= z * self.std_error
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentCurve {
    pub p: f64,
    pub statistic: Statistic,
    /// Decreasing horizons.
    pub t_grid: Vec<f64>,
    pub estimates: Vec<MomentEstimate>,
}

impl MomentCurve {
    pub fn values(&self) -> Vec<f64> {
        self.estimates.iter().map(|e| e.estimate).collect()
    }
}

/// `2^{-k_min}, …, 2^{-k_max}` in decreasing order.
pub fn dyadic_grid(k_min: i32, k_max: i32) -> Vec<f64> {
    (k_min..=k_max).map(|k| 2f64.powi(-k)).collect()
}

/// `points` geometrically spaced horizons from `t_max` down to `t_min`.
pub fn geometric_grid(t_max: f64, t_min: f64, points: usize) -> Result<Vec<f64>> {
    if !(t_min > 0.0 && t_min < t_max && t_max.is_finite()) || points < 2 {
        return Err(Error::InvalidParameter(format!(
            "geometric grid needs 0 < t_min < t_max and at least 2 points, got ({t_min}, {t_max}, {points})"
        )));
    }
    let ratio = (t_min / t_max).ln() / (points - 1) as f64;
    Ok((0..points).map(|i| t_max * (ratio * i as f64).exp()).collect())
}

/// Smallest `p` at which `∫_{|x|>1}|x|^p dν` diverges, if any.
pub fn moment_boundary(spec: &ProcessSpec) -> Option<f64> {
    match spec.measure().tail_decay() {
        TailDecay::Power { index } => Some(index),
        _ => None,
    }
}

/// Sum and Welford second moment. The mean is taken from the plain sum so that
/// nondecreasing inputs give nondecreasing means after rounding.
#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    n: f64,
    sum: f64,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        self.sum += x;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, other: &Accumulator) {
        if other.n == 0.0 {
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        self.m2 += other.m2 + d * d * self.n * other.n / n;
        self.mean += d * other.n / n;
        self.sum += other.sum;
        self.n = n;
    }

    fn mean(&self) -> f64 {
        self.sum / self.n
    }

    fn std_error(&self) -> f64 {
        if self.n < 2.0 {
            return 0.0;
        }
        (self.m2.max(0.0) / (self.n - 1.0) / self.n).sqrt()
    }
}

fn validate(spec: &ProcessSpec, p_list: &[f64], sampling: &Sampling) -> Result<()> {
    if sampling.n_paths < MIN_PATHS {
        return Err(Error::InvalidParameter(format!(
            "n_paths must be at least {MIN_PATHS}, got {}",
            sampling.n_paths
        )));
    }
    for &p in p_list {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!("p must be positive, got {p}")));
        }
        if !spec.measure().moment_exists(p)? {
            return Err(Error::Divergent(format!(
                "E|X_t|^{p} is infinite: the Lévy measure has ∫_{{|x|>1}} |x|^{p} dν = ∞ (moment boundary {})",
                moment_boundary(spec).map_or("none".into(), |b| b.to_string())
            )));
        }
    }
    Ok(())
}

fn evaluate(path: &PathSample, t: f64, statistic: Statistic) -> f64 {
    let v = match statistic {
        Statistic::RunningSup => path.sup_abs_at(t),
        Statistic::Marginal => path.value_at(t).map(f64::abs),
    };
    v.expect("grid horizons lie inside the path")
}

/// One curve per entry of `p_list`, all from the same set of paths.
pub fn moment_curves(
    spec: &ProcessSpec,
    p_list: &[f64],
    t_grid: &[f64],
    sampling: &Sampling,
    statistic: Statistic,
) -> Result<Vec<MomentCurve>> {
    validate(spec, p_list, sampling)?;
    if t_grid.is_empty() || t_grid.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(Error::InvalidParameter(
            "t grid must be non-empty and nonnegative".into(),
        ));
    }
    let mut grid = t_grid.to_vec();
    grid.sort_by(|a, b| b.total_cmp(a));
    grid.dedup();
    let positive: Vec<f64> = grid.iter().copied().filter(|&t| t > 0.0).collect();
    let n = sampling.n_paths;
    let slots = p_list.len() * positive.len();

    let mut blocks = vec![vec![Accumulator::default(); slots]; MOM_BLOCKS];
    if let Some(&horizon) = positive.first() {
        let generator = PathGenerator::new(spec, horizon, sampling.convention, &sampling.scheme, &positive)?;
        // chunks never straddle a block, and are merged in index order
        let mut chunks = Vec::new();
        for b in 0..MOM_BLOCKS {
            let (lo, hi) = (b * n / MOM_BLOCKS, (b + 1) * n / MOM_BLOCKS);
            let mut start = lo;
            while start < hi {
                let end = (start + CHUNK).min(hi);
                chunks.push((b, start, end));
                start = end;
            }
        }
        let partial: Vec<(usize, Vec<Accumulator>)> = chunks
            .par_iter()
            .map(|&(b, start, end)| {
                let mut acc = vec![Accumulator::default(); slots];
                for i in start..end {
                    let path = generator.generate(&mut path_rng(sampling.seed, i as u64));
                    for (k, &t) in positive.iter().enumerate() {
                        let s = evaluate(&path, t, statistic);
                        for (j, &p) in p_list.iter().enumerate() {
                            acc[j * positive.len() + k].push(s.powf(p));
                        }
                    }
                }
                (b, acc)
            })
            .collect();
        for (b, acc) in partial {
            for (dst, src) in blocks[b].iter_mut().zip(&acc) {
                dst.merge(src);
            }
        }
    }

    let boundary = moment_boundary(spec);
    Ok(p_list
        .iter()
        .enumerate()
        .map(|(j, &p)| {
            let heavy = boundary.is_some_and(|b| b - p <= HEAVY_TAIL_MARGIN);
            let estimates = grid
                .iter()
                .map(|&t| {
                    let base = MomentEstimate {
                        t,
                        p,
                        estimate: 0.0,
                        std_error: 0.0,
                        n_paths: n,
                        convention: sampling.convention,
                        scheme: sampling.scheme,
                        seed: sampling.seed,
                        median_of_means: None,
                        heavy_tail_warning: heavy,
                    };
                    let Some(k) = positive.iter().position(|&s| s == t) else {
                        // the supremum over {0} of X₀ = 0
                        return MomentEstimate {
                            median_of_means: heavy.then_some(0.0),
                            ..base
                        };
                    };
                    let slot = j * positive.len() + k;
                    let mut total = Accumulator::default();
                    for block in &blocks {
                        total.merge(&block[slot]);
                    }
                    MomentEstimate {
                        estimate: total.mean(),
                        std_error: total.std_error(),
                        median_of_means: heavy.then(|| median(blocks.iter().map(|b| b[slot].mean()).collect())),
                        ..base
                    }
                })
                .collect();
            MomentCurve {
                p,
                statistic,
                t_grid: grid.clone(),
                estimates,
            }
        })
        .collect())
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        0.5 * (v[m - 1] + v[m])
    } else {
        v[m]
    }
}

/// `E sup_{s≤t}|X_s|^p` on every horizon of `t_grid`, from one set of paths
/// simulated up to the largest horizon.
pub fn moment_curve(
    spec: &ProcessSpec,
    p: f64,
    t_grid: &[f64],
    convention: DriftConvention,
    scheme: &Scheme,
    n_paths: usize,
    seed: u64,
) -> Result<MomentCurve> {
    let sampling = Sampling {
        convention,
        scheme: *scheme,
        n_paths,
        seed,
    };
    Ok(moment_curves(spec, &[p], t_grid, &sampling, Statistic::RunningSup)?.remove(0))
}

/// `E sup_{s≤t}|X_s|^p` at a single horizon.
pub fn estimate_sup_moment(
    spec: &ProcessSpec,
    p: f64,
    t: f64,
    convention: DriftConvention,
    scheme: &Scheme,
    n_paths: usize,
    seed: u64,
) -> Result<MomentEstimate> {
    Ok(moment_curve(spec, p, &[t], convention, scheme, n_paths, seed)?
        .estimates
        .remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::StepGrid;
    use crate::specfun::ln_gamma_fn;

    fn exact_grid() -> Scheme {
        Scheme::ExactIncrement {
            grid: StepGrid::PerGap { steps: 1 },
        }
    }

    /// `E X_t^p = Γ(p+t)/Γ(t)` for the Gamma subordinator.
    fn gamma_moment(p: f64, t: f64) -> f64 {
        (ln_gamma_fn(p + t).unwrap() - ln_gamma_fn(t).unwrap()).exp()
    }

    #[test]
    fn gamma_unit_horizon() {
        let e = estimate_sup_moment(
            &ProcessSpec::gamma(),
            1.0,
            1.0,
            DriftConvention::Raw,
            &exact_grid(),
            100_000,
            1,
        )
        .unwrap();
        assert!(e.covers(1.0, 4.0), "{e:?}");
        assert!(!e.heavy_tail_warning);
    }

    #[test]
    fn zero_horizon_is_exactly_zero() {
        let spec = ProcessSpec::stable(1.5, 1.0, 1.0).unwrap();
        let e = estimate_sup_moment(&spec, 1.0, 0.0, DriftConvention::Raw, &Scheme::default(), 100, 1).unwrap();
        assert_eq!((e.estimate, e.std_error), (0.0, 0.0));
    }

    #[test]
    fn inverse_gaussian_mean() {
        let spec = ProcessSpec::inverse_gaussian(1.0).unwrap();
        let e = estimate_sup_moment(&spec, 1.0, 0.25, DriftConvention::Raw, &exact_grid(), 100_000, 2).unwrap();
        assert!(e.covers(0.25, 4.0), "{e:?}");
    }

    #[test]
    fn gamma_curve_matches_oracle() {
        let grid = dyadic_grid(4, 10);
        let curve = moment_curve(
            &ProcessSpec::gamma(),
            0.5,
            &grid,
            DriftConvention::Raw,
            &exact_grid(),
            50_000,
            3,
        )
        .unwrap();
        for e in &curve.estimates {
            assert!(e.covers(gamma_moment(0.5, e.t), 4.0), "{e:?}");
        }
    }

    #[test]
    fn curve_is_monotone_in_t() {
        let spec = ProcessSpec::nig(1.0, 0.3, 1.0).unwrap();
        let grid = dyadic_grid(2, 12);
        let curve = moment_curve(
            &spec,
            1.0,
            &grid,
            DriftConvention::Raw,
            &Scheme::compound_poisson_for(&spec),
            400,
            4,
        )
        .unwrap();
        let v = curve.values();
        assert!(curve.t_grid.windows(2).all(|w| w[0] > w[1]));
        assert!(v.windows(2).all(|w| w[0] >= w[1]), "{v:?}");
    }

    #[test]
    fn refuses_moments_past_boundary() {
        let spec = ProcessSpec::stable(1.2, 1.0, 1.0).unwrap();
        let err = estimate_sup_moment(&spec, 1.2, 0.1, DriftConvention::Raw, &Scheme::default(), 100, 1).unwrap_err();
        assert!(matches!(err, Error::Divergent(_)));
    }

    #[test]
    fn near_boundary_reports_median_of_means() {
        let spec = ProcessSpec::stable(1.2, 1.0, 1.0).unwrap();
        let e = estimate_sup_moment(&spec, 1.1, 0.1, DriftConvention::Raw, &exact_grid(), 1600, 1).unwrap();
        assert!(e.heavy_tail_warning);
        assert!(e.median_of_means.is_some_and(|m| m > 0.0));
    }

    #[test]
    fn requires_enough_paths() {
        let err = estimate_sup_moment(
            &ProcessSpec::gamma(),
            1.0,
            1.0,
            DriftConvention::Raw,
            &exact_grid(),
            99,
            1,
        );
        assert!(matches!(err, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let spec = ProcessSpec::stable(1.5, 1.0, 0.5).unwrap();
        let grid = dyadic_grid(1, 6);
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| moment_curve(&spec, 0.8, &grid, DriftConvention::Raw, &Scheme::default(), 3000, 9).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn shared_paths_across_p() {
        let grid = dyadic_grid(1, 3);
        let sampling = Sampling {
            convention: DriftConvention::Raw,
            scheme: exact_grid(),
            n_paths: 500,
            seed: 5,
        };
        let both = moment_curves(
            &ProcessSpec::gamma(),
            &[0.5, 2.0],
            &grid,
            &sampling,
            Statistic::RunningSup,
        )
        .unwrap();
        let single = moment_curve(
            &ProcessSpec::gamma(),
            2.0,
            &grid,
            DriftConvention::Raw,
            &exact_grid(),
            500,
            5,
        )
        .unwrap();
        assert_eq!(both[1], single);
    }

    #[test]
    fn std_error_shrinks_like_root_n() {
        let spec = ProcessSpec::gamma();
        let a = estimate_sup_moment(&spec, 1.0, 0.5, DriftConvention::Raw, &exact_grid(), 20_000, 6).unwrap();
        let b = estimate_sup_moment(&spec, 1.0, 0.5, DriftConvention::Raw, &exact_grid(), 40_000, 7).unwrap();
        let ratio = a.std_error / b.std_error;
        assert!((ratio / 2f64.sqrt() - 1.0).abs() < 0.15, "{ratio}");
    }

    #[test]
    fn accumulator_merge_matches_direct() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut whole = Accumulator::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut left = Accumulator::default();
        let mut right = Accumulator::default();
        xs[..313].iter().for_each(|&x| left.push(x));
        xs[313..].iter().for_each(|&x| right.push(x));
        left.merge(&right);
        assert!((left.mean() - whole.mean()).abs() < 1e-12);
        assert!((left.std_error() - whole.std_error()).abs() < 1e-12);
    }

    #[test]
    fn symmetric_nig_convention_shift_is_pathwise() {
        // Y = X - a t, so |sup|Y| - sup|X|| ≤ |a| t on every path
        let spec = ProcessSpec::nig(1.0, 0.0, 1.0).unwrap().with_drift(0.5).unwrap();
        let scheme = Scheme::compound_poisson_for(&spec);
        let gen_x = PathGenerator::new(&spec, 1.0, DriftConvention::Raw, &scheme, &[0.5]).unwrap();
        let gen_y = PathGenerator::new(&spec, 1.0, DriftConvention::CompensatedSmallJumps, &scheme, &[0.5]).unwrap();
        for i in 0..200 {
            let x = gen_x.generate(&mut path_rng(1, i));
            let y = gen_y.generate(&mut path_rng(1, i));
            for t in [0.5, 1.0] {
                let d = (x.sup_abs_at(t).unwrap() - y.sup_abs_at(t).unwrap()).abs();
                assert!(d <= 0.5 * t + 1e-12);
                assert!((x.value_at(t).unwrap() - y.value_at(t).unwrap() - 0.5 * t).abs() < 1e-12);
            }
        }
    }
}

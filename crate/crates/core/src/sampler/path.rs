//! Simulated trajectories and their running suprema.

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use super::jump_table::JumpSampler;
use super::variates::IncrementSampler;
use crate::error::{Error, Result};
use crate::levy::{drift_for, DriftConvention, ProcessSpec};

/// Time discretisation of exact-increment paths and of the Brownian part of
/// Gaussian-substituted compound Poisson paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepGrid {
    /// `steps` equal steps over `[0, T]`.
    Uniform { steps: usize },
    /// `steps` equal steps between consecutive evaluation times, so a
    /// geometric set of evaluation times gets a self-similar grid.
    PerGap { steps: usize },
}

impl Default for StepGrid {
    fn default() -> Self {
        StepGrid::Uniform { steps: 1024 }
    }
}

impl StepGrid {
    fn steps(self) -> usize {
        match self {
            StepGrid::Uniform { steps } | StepGrid::PerGap { steps } => steps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmallJumpMode {
    /// Jumps below `ε` are replaced by their mean, folded into the drift.
    #[default]
    DropAndCompensate,
    /// Jumps below `ε` are replaced by a Brownian motion of variance rate `σ²(ε)`.
    GaussianSubstitute,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scheme {
    ExactIncrement {
        #[serde(default)]
        grid: StepGrid,
    },
    CompoundPoisson {
        epsilon: f64,
        #[serde(default)]
        small_jumps: SmallJumpMode,
        /// Brownian grid, used only with [`SmallJumpMode::GaussianSubstitute`].
        #[serde(default)]
        grid: StepGrid,
    },
}

impl Default for Scheme {
    fn default() -> Self {
        Scheme::ExactIncrement {
            grid: StepGrid::default(),
        }
    }
}

impl Scheme {
    /// Compound Poisson with the default cutoff `min(0.01, c/10)`.
    pub fn compound_poisson_for(spec: &ProcessSpec) -> Self {
        Scheme::CompoundPoisson {
            epsilon: 0.01f64.min(spec.measure().cutoff() / 10.0),
            small_jumps: SmallJumpMode::DropAndCompensate,
            grid: StepGrid::default(),
        }
    }

    /// Short label for tables and CSV files.
    pub fn label(&self) -> String {
        match self {
            Scheme::ExactIncrement { grid } => match grid {
                StepGrid::Uniform { steps } => format!("exact(uniform:{steps})"),
                StepGrid::PerGap { steps } => format!("exact(per-gap:{steps})"),
            },
            Scheme::CompoundPoisson {
                epsilon, small_jumps, ..
            } => match small_jumps {
                SmallJumpMode::DropAndCompensate => format!("cp(eps={epsilon:e})"),
                SmallJumpMode::GaussianSubstitute => format!("cp-gauss(eps={epsilon:e})"),
            },
        }
    }
}

/// One trajectory on `[0, T]`. Between knots the path is linear: exact for
/// compound Poisson paths with compensated drift, an interpolation otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    times: Vec<f64>,
    values: Vec<f64>,
    left_limits: Vec<f64>,
    running_sup: Vec<f64>,
    jumps: Vec<(f64, f64)>,
    convention: DriftConvention,
}

impl PathSample {
    /// Builds a path from knot times, right-continuous values and left limits,
    /// with the drift convention already applied.
    pub fn new(
        times: Vec<f64>,
        values: Vec<f64>,
        left_limits: Vec<f64>,
        jumps: Vec<(f64, f64)>,
        convention: DriftConvention,
    ) -> Result<Self> {
        let n = times.len();
        if n == 0 || values.len() != n || left_limits.len() != n {
            return Err(Error::InvalidParameter(
                "times, values and left limits must be non-empty and of equal length".into(),
            ));
        }
        if times[0] != 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "knot times must start at 0 and increase".into(),
            ));
        }
        let mut acc: f64 = 0.0;
        let running_sup = values
            .iter()
            .zip(&left_limits)
            .map(|(v, l)| {
                acc = acc.max(v.abs()).max(l.abs());
                acc
            })
            .collect();
        Ok(Self {
            times,
            values,
            left_limits,
            running_sup,
            jumps,
            convention,
        })
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("non-empty")
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn left_limits(&self) -> &[f64] {
        &self.left_limits
    }

    /// Recorded `(time, size)` pairs; empty for exact-increment paths.
    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.jumps
    }

    pub fn convention(&self) -> DriftConvention {
        self.convention
    }

    fn locate(&self, t: f64) -> Result<usize> {
        if !(t >= 0.0 && t <= self.horizon()) {
            return Err(Error::Domain(format!(
                "t = {t} lies outside the path horizon [0, {}]",
                self.horizon()
            )));
        }
        Ok(self.times.partition_point(|&s| s <= t) - 1)
    }

    fn interpolate(&self, i: usize, t: f64) -> f64 {
        if t == self.times[i] || i + 1 == self.times.len() {
            return self.values[i];
        }
        let w = (t - self.times[i]) / (self.times[i + 1] - self.times[i]);
        self.values[i] + w * (self.left_limits[i + 1] - self.values[i])
    }

    /// `X_t`.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        let i = self.locate(t)?;
        Ok(self.interpolate(i, t))
    }

    /// `sup_{s≤t} |X_s|`, including left limits at jumps.
    pub fn sup_abs_at(&self, t: f64) -> Result<f64> {
        let i = self.locate(t)?;
        Ok(self.running_sup[i].max(self.interpolate(i, t).abs()))
    }
}

/// `sup_{s≤t} |X_s|` on a simulated path.
pub fn path_sup(path: &PathSample, t: f64) -> Result<f64> {
    path.sup_abs_at(t)
}

#[derive(Debug, Clone)]
enum Engine {
    Exact(IncrementSampler),
    CompoundPoisson {
        jumps: JumpSampler,
        drift: f64,
        diffusion: f64,
    },
}

/// A sampler prepared for one `(spec, horizon, convention, scheme)`; jump
/// tables and knot grids are built once and shared by every path.
#[derive(Debug, Clone)]
pub struct PathGenerator {
    engine: Engine,
    horizon: f64,
    knots: Vec<f64>,
    shift: f64,
    convention: DriftConvention,
}

impl PathGenerator {
    /// `anchors` are evaluation times in `(0, T]` that must be grid knots;
    /// `PerGap` grids refine between consecutive anchors.
    pub fn new(
        spec: &ProcessSpec,
        horizon: f64,
        convention: DriftConvention,
        scheme: &Scheme,
        anchors: &[f64],
    ) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        if let Some(bad) = anchors.iter().find(|&&a| !(a > 0.0 && a <= horizon)) {
            return Err(Error::InvalidParameter(format!(
                "evaluation time {bad} lies outside (0, {horizon}]"
            )));
        }
        let shift = drift_for(spec, convention)?;
        let (engine, grid) = match *scheme {
            Scheme::ExactIncrement { grid } => (Engine::Exact(IncrementSampler::new(spec)?), Some(grid)),
            Scheme::CompoundPoisson {
                epsilon,
                small_jumps,
                grid,
            } => {
                let measure = spec.measure();
                if !measure.has_density() {
                    return Err(Error::Unsupported(
                        "compound Poisson simulation needs an explicit Lévy density".into(),
                    ));
                }
                if !(epsilon > 0.0 && epsilon < measure.cutoff()) {
                    return Err(Error::InvalidParameter(format!(
                        "cutoff ε = {epsilon} must lie in (0, c) with c = {}",
                        measure.cutoff()
                    )));
                }
                let jumps = JumpSampler::new(measure, epsilon)?;
                let drift = spec.drift() - measure.first_moment(epsilon, 1.0)?;
                match small_jumps {
                    SmallJumpMode::DropAndCompensate => (
                        Engine::CompoundPoisson {
                            jumps,
                            drift,
                            diffusion: 0.0,
                        },
                        None,
                    ),
                    SmallJumpMode::GaussianSubstitute => (
                        Engine::CompoundPoisson {
                            jumps,
                            drift,
                            diffusion: measure.truncated_second_moment(epsilon)?.sqrt(),
                        },
                        Some(grid),
                    ),
                }
            }
        };
        let knots = build_knots(horizon, anchors, grid)?;
        Ok(Self {
            engine,
            horizon,
            knots,
            shift,
            convention,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Deterministic knots every path contains (jump times come on top).
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> PathSample {
        let (times, mut values, mut left, jumps) = match &self.engine {
            Engine::Exact(inc) => {
                let mut values = Vec::with_capacity(self.knots.len());
                let mut x = 0.0;
                values.push(0.0);
                for w in self.knots.windows(2) {
                    x += inc.sample(w[1] - w[0], rng);
                    values.push(x);
                }
                (self.knots.clone(), values.clone(), values, Vec::new())
            }
            Engine::CompoundPoisson {
                jumps: sampler,
                drift,
                diffusion,
            } => self.compound_poisson(sampler, *drift, *diffusion, rng),
        };
        if self.shift != 0.0 {
            for ((v, l), t) in values.iter_mut().zip(left.iter_mut()).zip(&times) {
                *v -= self.shift * t;
                *l -= self.shift * t;
            }
        }
        PathSample::new(times, values, left, jumps, self.convention).expect("generated knots are valid")
    }

    #[allow(clippy::type_complexity)]
    fn compound_poisson<R: Rng + ?Sized>(
        &self,
        sampler: &JumpSampler,
        drift: f64,
        diffusion: f64,
        rng: &mut R,
    ) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<(f64, f64)>) {
        let mean = sampler.rate() * self.horizon;
        let count = if mean > 0.0 {
            Poisson::new(mean).expect("finite positive mean").sample(rng) as usize
        } else {
            0
        };
        let mut jump_times: Vec<f64> = (0..count).map(|_| self.horizon * (1.0 - rng.random::<f64>())).collect();
        jump_times.sort_by(f64::total_cmp);
        let jumps: Vec<(f64, f64)> = jump_times.iter().map(|&t| (t, sampler.sample(rng))).collect();

        let n = self.knots.len() + jumps.len();
        let mut times = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        let mut left = Vec::with_capacity(n);
        times.push(0.0);
        values.push(0.0);
        left.push(0.0);
        let (mut i, mut j) = (1, 0);
        let mut x = 0.0;
        let mut last = 0.0;
        while i < self.knots.len() || j < jumps.len() {
            let next_knot = self.knots.get(i).copied().unwrap_or(f64::INFINITY);
            let next_jump = jumps.get(j).map_or(f64::INFINITY, |jump| jump.0);
            let t = next_knot.min(next_jump);
            let dt = t - last;
            x += drift * dt;
            if diffusion > 0.0 {
                let z: f64 = StandardNormal.sample(rng);
                x += diffusion * dt.sqrt() * z;
            }
            let before = x;
            let mut size = 0.0;
            if next_jump <= next_knot {
                size = jumps[j].1;
                j += 1;
            }
            if next_knot <= next_jump {
                i += 1;
            }
            x += size;
            if t == last {
                // jump landing exactly on the previous knot
                *values.last_mut().expect("non-empty") = x;
            } else {
                times.push(t);
                left.push(before);
                values.push(x);
            }
            last = t;
        }
        (times, values, left, jumps)
    }
}

fn build_knots(horizon: f64, anchors: &[f64], grid: Option<StepGrid>) -> Result<Vec<f64>> {
    let mut marks: Vec<f64> = anchors.to_vec();
    marks.push(horizon);
    marks.sort_by(f64::total_cmp);
    marks.dedup();
    let mut knots = vec![0.0];
    match grid {
        None => knots.extend(marks),
        Some(grid) => {
            let steps = grid.steps();
            if steps == 0 {
                return Err(Error::InvalidParameter("step grid needs at least one step".into()));
            }
            match grid {
                StepGrid::Uniform { .. } => {
                    knots.extend((1..steps).map(|k| horizon * k as f64 / steps as f64));
                    knots.extend(marks);
                    knots.sort_by(f64::total_cmp);
                    knots.dedup();
                }
                StepGrid::PerGap { .. } => {
                    let mut prev = 0.0;
                    for m in marks {
                        knots.extend((1..steps).map(|k| prev + (m - prev) * k as f64 / steps as f64));
                        knots.push(m);
                        prev = m;
                    }
                }
            }
        }
    }
    Ok(knots)
}

/// One trajectory on `[0, T]` from a fresh generator.
pub fn sample_path<R: Rng + ?Sized>(
    spec: &ProcessSpec,
    horizon: f64,
    convention: DriftConvention,
    scheme: &Scheme,
    rng: &mut R,
) -> Result<PathSample> {
    Ok(PathGenerator::new(spec, horizon, convention, scheme, &[])?.generate(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::rng::path_rng;

    #[test]
    fn hand_built_path_supremum() {
        // drift -1 with one +3 jump at s = 0.5 on [0, 1]
        let path = PathSample::new(
            vec![0.0, 0.5, 1.0],
            vec![0.0, 2.5, 2.0],
            vec![0.0, -0.5, 2.0],
            vec![(0.5, 3.0)],
            DriftConvention::Raw,
        )
        .unwrap();
        assert_eq!(path_sup(&path, 1.0).unwrap(), 2.5);
        assert_eq!(path_sup(&path, 0.0).unwrap(), 0.0);
        assert_eq!(path_sup(&path, 0.25).unwrap(), 0.25);
        assert_eq!(path.value_at(0.75).unwrap(), 2.25);
        assert!(matches!(path_sup(&path, 1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn subordinator_sup_is_terminal_value() {
        let spec = ProcessSpec::gamma();
        let mut rng = path_rng(1, 0);
        for scheme in [Scheme::default(), Scheme::compound_poisson_for(&spec)] {
            let path = sample_path(&spec, 1.0, DriftConvention::Raw, &scheme, &mut rng).unwrap();
            assert!(path.values().windows(2).all(|w| w[1] >= w[0]));
            for t in [0.1, 0.37, 1.0] {
                assert_eq!(path_sup(&path, t).unwrap(), path.value_at(t).unwrap());
            }
        }
    }

    #[test]
    fn sup_is_nondecreasing() {
        let spec = ProcessSpec::stable(1.5, 1.0, 1.0).unwrap();
        let scheme = Scheme::compound_poisson_for(&spec);
        let path = sample_path(&spec, 1.0, DriftConvention::Raw, &scheme, &mut path_rng(2, 0)).unwrap();
        let mut prev = 0.0;
        for k in 0..=1000 {
            let s = path_sup(&path, k as f64 / 1000.0).unwrap();
            assert!(s >= prev);
            prev = s;
        }
    }

    #[test]
    fn recorded_jumps_exceed_cutoff() {
        let spec = ProcessSpec::meixner(0.4, 1.0).unwrap();
        let eps = 0.02;
        let scheme = Scheme::CompoundPoisson {
            epsilon: eps,
            small_jumps: SmallJumpMode::GaussianSubstitute,
            grid: StepGrid::Uniform { steps: 64 },
        };
        let path = sample_path(&spec, 0.5, DriftConvention::Raw, &scheme, &mut path_rng(3, 0)).unwrap();
        assert!(!path.jumps().is_empty());
        for &(t, size) in path.jumps() {
            assert!(t > 0.0 && t <= 0.5);
            assert!(size.abs() > eps);
        }
        assert_eq!(path.values()[0], 0.0);
    }

    #[test]
    fn deterministic_given_stream() {
        let spec = ProcessSpec::nig(1.0, 0.3, 1.0).unwrap();
        for scheme in [Scheme::default(), Scheme::compound_poisson_for(&spec)] {
            let a = sample_path(&spec, 0.3, DriftConvention::Raw, &scheme, &mut path_rng(9, 4)).unwrap();
            let b = sample_path(&spec, 0.3, DriftConvention::Raw, &scheme, &mut path_rng(9, 4)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn convention_shift_is_linear() {
        let spec = ProcessSpec::nig(1.0, 0.0, 1.0).unwrap().with_drift(0.7).unwrap();
        let scheme = Scheme::compound_poisson_for(&spec);
        let raw = sample_path(&spec, 1.0, DriftConvention::Raw, &scheme, &mut path_rng(5, 0)).unwrap();
        let y = sample_path(
            &spec,
            1.0,
            DriftConvention::CompensatedSmallJumps,
            &scheme,
            &mut path_rng(5, 0),
        )
        .unwrap();
        for t in [0.0, 0.2, 0.55, 1.0] {
            let d = raw.value_at(t).unwrap() - y.value_at(t).unwrap();
            assert!((d - 0.7 * t).abs() < 1e-12);
        }
    }

    #[test]
    fn per_gap_grid_is_self_similar() {
        let knots = build_knots(1.0, &[0.25, 0.5], Some(StepGrid::PerGap { steps: 4 })).unwrap();
        assert_eq!(knots.len(), 13);
        assert_eq!(&knots[..5], &[0.0, 0.0625, 0.125, 0.1875, 0.25]);
        let uniform = build_knots(1.0, &[0.3], Some(StepGrid::Uniform { steps: 4 })).unwrap();
        assert_eq!(uniform, vec![0.0, 0.25, 0.3, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn rejects_invalid_schemes() {
        let spec = ProcessSpec::stable(1.5, 1.0, 1.0).unwrap();
        let too_big = Scheme::CompoundPoisson {
            epsilon: 1.0,
            small_jumps: SmallJumpMode::DropAndCompensate,
            grid: StepGrid::default(),
        };
        assert!(PathGenerator::new(&spec, 1.0, DriftConvention::Raw, &too_big, &[]).is_err());
        let meixner = ProcessSpec::meixner(0.0, 1.0).unwrap();
        assert!(PathGenerator::new(&meixner, 1.0, DriftConvention::Raw, &Scheme::default(), &[]).is_err());
        let hyperbolic = ProcessSpec::hyperbolic(1.0, 1.0).unwrap();
        let cp = Scheme::compound_poisson_for(&hyperbolic);
        assert!(PathGenerator::new(&hyperbolic, 1.0, DriftConvention::Raw, &cp, &[]).is_err());
        assert!(PathGenerator::new(&spec, 1.0, DriftConvention::Raw, &Scheme::default(), &[2.0]).is_err());
    }

    #[test]
    fn scheme_json_round_trip() {
        let schemes = [
            Scheme::default(),
            Scheme::ExactIncrement {
                grid: StepGrid::PerGap { steps: 8 },
            },
            Scheme::CompoundPoisson {
                epsilon: 1e-3,
                small_jumps: SmallJumpMode::GaussianSubstitute,
                grid: StepGrid::Uniform { steps: 16 },
            },
        ];
        for s in schemes {
            let json = serde_json::to_string(&s).unwrap();
            assert_eq!(serde_json::from_str::<Scheme>(&json).unwrap(), s);
        }
    }
}

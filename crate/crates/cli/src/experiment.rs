//! Moment experiments and the predicted-versus-fitted verification table.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use levymc::levy::{DriftConvention, ProcessSpec};
use levymc::moment::{moment_curves, MomentCurve, Sampling, Statistic};
use levymc::rates::{fit_rate, predict_rate, RateModel};
use levymc::sampler::{Scheme, SmallJumpMode, StepGrid};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, GridSpec};
use crate::output::{write_curves, write_json, write_text};
use crate::process_arg::describe;

/// Files written by [`run_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentFiles {
    pub curves: PathBuf,
    pub fit: PathBuf,
}

#[derive(Debug, Clone, Serialize)]
struct FitRecord {
    p: f64,
    with_log: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    fitted: Option<RateModel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    predicted: Option<RateModel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    prediction_note: Option<String>,
}

fn curves_for(config: &ExperimentConfig) -> Result<Vec<MomentCurve>> {
    config.validate()?;
    let sampling = Sampling {
        convention: config.convention,
        scheme: config.scheme,
        n_paths: config.n_paths,
        seed: config.seed,
    };
    Ok(moment_curves(
        &config.process,
        &config.p_list,
        &config.t_grid.times()?,
        &sampling,
        config.statistic,
    )?)
}

/// Estimates every curve of the configuration, then writes `curves.csv` and
/// `fit.json` into the output directory. Reruns produce identical files.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentFiles> {
    let curves = curves_for(config)?;
    fs::create_dir_all(&config.output).with_context(|| format!("cannot create {}", config.output.display()))?;
    let files = ExperimentFiles {
        curves: config.output.join("curves.csv"),
        fit: config.output.join("fit.json"),
    };
    write_curves(&files.curves, &curves)?;
    let records: Vec<FitRecord> = curves
        .iter()
        .map(|curve| {
            let fit = fit_rate(curve, config.with_log);
            let prediction = predict_rate(&config.process, curve.p, config.convention);
            FitRecord {
                p: curve.p,
                with_log: config.with_log,
                fit_error: fit.as_ref().err().map(|e| e.to_string()),
                fitted: fit.ok(),
                prediction_note: prediction.as_ref().err().map(|e| e.to_string()),
                predicted: prediction.ok(),
            }
        })
        .collect();
    write_json(&files.fit, &records)?;
    Ok(files)
}

/// Allowed distance between fitted and predicted exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// For fits without a log term.
    pub gamma: f64,
    /// For fits with a log term.
    pub gamma_log: f64,
    pub delta: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            gamma: 0.05,
            gamma_log: 0.1,
            delta: 0.3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Pass,
    Fail,
    /// No rate is stated for this combination.
    NotCovered,
    /// A rate is stated but the process cannot be simulated.
    Unsupported,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyRow {
    pub process: String,
    pub p: f64,
    pub convention: DriftConvention,
    pub scheme: String,
    pub with_log: bool,
    pub predicted: Option<RateModel>,
    pub fitted: Option<RateModel>,
    pub status: RowStatus,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
    /// Wall time of the curve set shared by this row.
    pub runtime_secs: f64,
    pub n_paths: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub tolerances: Tolerances,
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    /// Whether some row with a stated rate failed.
    pub fn any_failed(&self) -> bool {
        self.rows.iter().any(|r| r.status == RowStatus::Fail)
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<44} {:>5} {:>9} {:>17} {:>17} {:>7} {:>8}",
            "process", "p", "log fit", "predicted (γ,δ)", "fitted (γ,δ)", "time", "status"
        );
        for r in &self.rows {
            let pair = |m: &Option<RateModel>| {
                m.as_ref()
                    .map(|m| format!("({:.3}, {:.3})", m.t_exponent, m.log_exponent))
                    .unwrap_or_else(|| "-".into())
            };
            let status = match r.status {
                RowStatus::Pass => "pass",
                RowStatus::Fail => "FAIL",
                RowStatus::NotCovered => "n/c",
                RowStatus::Unsupported => "unsupp",
            };
            let _ = writeln!(
                s,
                "{:<44} {:>5} {:>9} {:>17} {:>17} {:>6.1}s {:>8}",
                r.process,
                r.p,
                if r.with_log { "yes" } else { "no" },
                pair(&r.predicted),
                pair(&r.fitted),
                r.runtime_secs,
                status
            );
        }
        let count = |st: RowStatus| self.rows.iter().filter(|r| r.status == st).count();
        let _ = writeln!(
            s,
            "{} pass, {} fail, {} not covered, {} unsupported",
            count(RowStatus::Pass),
            count(RowStatus::Fail),
            count(RowStatus::NotCovered),
            count(RowStatus::Unsupported)
        );
        s
    }
}

fn judge(predicted: &RateModel, fitted: &RateModel, with_log: bool, tol: Tolerances) -> bool {
    let tol_gamma = if with_log { tol.gamma_log } else { tol.gamma };
    let gamma_ok = (fitted.t_exponent - predicted.t_exponent).abs() <= tol_gamma;
    let delta_ok = predicted.log_exponent <= 0.0 || (fitted.log_exponent - predicted.log_exponent).abs() <= tol.delta;
    gamma_ok && delta_ok
}

/// Predicts, simulates and fits every `p` of the configuration. The log term
/// is fitted when the prediction has one or the configuration asks for it.
/// Rows without a stated rate are recorded, not simulated.
pub fn run_verify(config: &ExperimentConfig, tol: Tolerances) -> Result<Vec<VerifyRow>> {
    let name = describe(&config.process);
    let base = |p: f64, status: RowStatus, note: String, predicted: Option<RateModel>| VerifyRow {
        process: name.clone(),
        p,
        convention: config.convention,
        scheme: config.scheme.label(),
        with_log: false,
        predicted,
        fitted: None,
        status,
        note,
        runtime_secs: 0.0,
        n_paths: config.n_paths,
    };
    let mut rows = Vec::with_capacity(config.p_list.len());
    let mut covered = Vec::new();
    for &p in &config.p_list {
        match predict_rate(&config.process, p, config.convention) {
            Ok(m) => {
                covered.push(rows.len());
                rows.push(base(p, RowStatus::Fail, String::new(), Some(m)));
            }
            Err(levymc::Error::NotCovered(why)) => rows.push(base(p, RowStatus::NotCovered, why, None)),
            Err(e) => rows.push(base(p, RowStatus::NotCovered, e.to_string(), None)),
        }
    }
    if covered.is_empty() {
        return Ok(rows);
    }
    let sim = ExperimentConfig {
        p_list: covered.iter().map(|&i| rows[i].p).collect(),
        ..config.clone()
    };
    let start = Instant::now();
    let curves = match curves_for(&sim) {
        Ok(c) => c,
        Err(e) => {
            for &i in &covered {
                rows[i].status = RowStatus::Unsupported;
                rows[i].note = e.to_string();
            }
            return Ok(rows);
        }
    };
    let secs = start.elapsed().as_secs_f64();
    for (&i, curve) in covered.iter().zip(&curves) {
        let row = &mut rows[i];
        let predicted = row.predicted.clone().expect("covered rows carry a prediction");
        row.with_log = config.with_log || predicted.log_exponent != 0.0;
        row.runtime_secs = secs;
        match fit_rate(curve, row.with_log) {
            Ok(fit) => {
                row.status = if judge(&predicted, &fit, row.with_log, tol) {
                    RowStatus::Pass
                } else {
                    RowStatus::Fail
                };
                row.fitted = Some(fit);
            }
            Err(e) => row.note = format!("fit failed: {e}"),
        }
    }
    Ok(rows)
}

/// One block of the verification table.
#[derive(Debug, Clone)]
pub struct VerifyCase {
    pub config: ExperimentConfig,
}

/// Runs the cases concurrently; rows come back in case order.
pub fn run_verify_cases(cases: &[VerifyCase], tol: Tolerances) -> Result<VerifyReport> {
    let blocks: Vec<Result<Vec<VerifyRow>>> = cases.par_iter().map(|c| run_verify(&c.config, tol)).collect();
    let mut rows = Vec::new();
    for b in blocks {
        rows.extend(b?);
    }
    Ok(VerifyReport { tolerances: tol, rows })
}

pub fn write_report(dir: &std::path::Path, report: &VerifyReport) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    write_json(&dir.join("verify.json"), report)?;
    write_text(&dir.join("verify.txt"), &report.table())
}

fn exact(steps: usize) -> Scheme {
    Scheme::ExactIncrement {
        grid: StepGrid::PerGap { steps },
    }
}

fn compound_poisson(epsilon: f64) -> Scheme {
    Scheme::CompoundPoisson {
        epsilon,
        small_jumps: SmallJumpMode::DropAndCompensate,
        grid: StepGrid::default(),
    }
}

/// The example processes with the moment orders whose small-time rates are
/// stated, plus a few orders without a stated rate. Sample sizes and schemes
/// are chosen so the whole table runs in about a minute on one core.
pub fn reference_table(seed: u64, output: PathBuf) -> Vec<VerifyCase> {
    let case = |process: ProcessSpec, p_list: &[f64], grid: GridSpec, scheme: Scheme, n_paths: usize| {
        let mut config = ExperimentConfig::new(process, p_list.to_vec(), output.clone());
        config.t_grid = grid;
        config.scheme = scheme;
        config.n_paths = n_paths;
        config.statistic = Statistic::RunningSup;
        config
    };
    let full = GridSpec::dyadic(4, 16);
    let mut configs = vec![
        case(
            ProcessSpec::gamma(),
            &[0.5, 1.0, 2.0],
            GridSpec::dyadic(4, 10),
            exact(1),
            100_000,
        ),
        case(
            ProcessSpec::stable(1.5, 1.0, 1.0).unwrap(),
            &[0.5, 1.5],
            full,
            exact(8),
            100_000,
        ),
        case(ProcessSpec::cauchy(1.0).unwrap(), &[0.5, 1.0], full, exact(8), 100_000),
        case(
            ProcessSpec::stable(0.5, 1.0, 1.0).unwrap(),
            &[0.2],
            full,
            exact(8),
            100_000,
        ),
        case(
            ProcessSpec::tempered_stable(0.3, 1.0).unwrap(),
            &[0.1, 0.3, 1.0],
            full,
            exact(1),
            200_000,
        ),
        case(
            ProcessSpec::inverse_gaussian(1.0).unwrap(),
            &[0.25, 0.5, 1.0],
            full,
            exact(1),
            1_000_000,
        ),
        case(
            ProcessSpec::nig(1.0, 0.0, 1.0).unwrap(),
            &[0.5, 1.0],
            full,
            exact(8),
            100_000,
        ),
        case(
            ProcessSpec::nig(1.0, 0.0, 1.0).unwrap(),
            &[2.0],
            GridSpec::dyadic(6, 12),
            compound_poisson(2f64.powi(-10)),
            1_000_000,
        ),
        case(
            ProcessSpec::meixner(0.0, 1.0).unwrap(),
            &[2.0],
            GridSpec::dyadic(6, 12),
            compound_poisson(2f64.powi(-10)),
            1_000_000,
        ),
        case(
            ProcessSpec::hyperbolic(1.0, 1.0).unwrap(),
            &[0.5, 2.0],
            full,
            exact(8),
            100_000,
        ),
    ];
    for (i, c) in configs.iter_mut().enumerate() {
        c.seed = seed.wrapping_add(i as u64);
    }
    configs.into_iter().map(|config| VerifyCase { config }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(g: f64, d: f64) -> RateModel {
        predict_rate(&ProcessSpec::gamma(), 1.0, DriftConvention::Raw)
            .map(|mut m| {
                m.t_exponent = g;
                m.log_exponent = d;
                m
            })
            .unwrap()
    }

    #[test]
    fn tolerance_rule() {
        let tol = Tolerances::default();
        assert!(judge(&model(1.0, 0.0), &model(1.04, 0.5), false, tol));
        assert!(!judge(&model(1.0, 0.0), &model(1.06, 0.0), false, tol));
        assert!(judge(&model(1.0, 1.0), &model(1.08, 0.75), true, tol));
        assert!(!judge(&model(1.0, 1.0), &model(1.0, 0.65), true, tol));
    }

    #[test]
    fn uncovered_rows_are_not_simulated() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = ExperimentConfig::new(ProcessSpec::stable(1.5, 1.0, 1.0).unwrap(), vec![1.5, 2.0], dir.path());
        c.n_paths = 100;
        let rows = run_verify(&c, Tolerances::default()).unwrap();
        assert!(rows
            .iter()
            .all(|r| r.status == RowStatus::NotCovered && r.fitted.is_none()));
    }

    #[test]
    fn unsamplable_rows_are_unsupported() {
        let dir = tempfile::tempdir().unwrap();
        let c = ExperimentConfig::new(ProcessSpec::hyperbolic(1.0, 1.0).unwrap(), vec![0.5], dir.path());
        let rows = run_verify(&c, Tolerances::default()).unwrap();
        assert_eq!(rows[0].status, RowStatus::Unsupported);
        assert_eq!(rows[0].predicted.as_ref().unwrap().exponents(), (0.5, 0.0));
    }
}

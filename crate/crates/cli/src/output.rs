//! CSV and JSON writers. Floats are written in shortest round-trip form.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use levymc::moment::MomentCurve;
use levymc::sampler::PathSample;
use serde::{Deserialize, Serialize};

/// One row of a curves file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub p: f64,
    pub t: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub n_paths: usize,
    pub median_of_means: Option<f64>,
    pub heavy_tail_warning: bool,
    pub statistic: String,
    pub scheme: String,
    pub convention: String,
    pub seed: u64,
}

pub fn curve_rows(curves: &[MomentCurve]) -> Vec<CurveRow> {
    let statistic = |c: &MomentCurve| match c.statistic {
        levymc::moment::Statistic::RunningSup => "running_sup",
        levymc::moment::Statistic::Marginal => "marginal",
    };
    curves
        .iter()
        .flat_map(|c| {
            c.estimates.iter().map(move |e| CurveRow {
                p: e.p,
                t: e.t,
                estimate: e.estimate,
                std_error: e.std_error,
                n_paths: e.n_paths,
                median_of_means: e.median_of_means,
                heavy_tail_warning: e.heavy_tail_warning,
                statistic: statistic(c).to_owned(),
                scheme: e.scheme.label(),
                convention: e.convention.name().to_owned(),
                seed: e.seed,
            })
        })
        .collect()
}

pub fn write_curves(path: &Path, curves: &[MomentCurve]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot create {}", path.display()))?;
    for row in curve_rows(curves) {
        w.serialize(row)
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    w.flush().with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// `(t, estimate, std_error)` triples of one moment order, in file order.
pub type CurvePoints = (f64, Vec<(f64, f64, f64)>);

/// Curve points grouped by `p`, keyed by its decimal form.
pub fn read_curves(path: &Path) -> Result<BTreeMap<String, CurvePoints>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut out: BTreeMap<String, CurvePoints> = BTreeMap::new();
    for row in r.deserialize::<CurveRow>() {
        let row = row.with_context(|| format!("bad row in {}", path.display()))?;
        out.entry(format!("{}", row.p))
            .or_insert_with(|| (row.p, Vec::new()))
            .1
            .push((row.t, row.estimate, row.std_error));
    }
    Ok(out)
}

#[derive(Serialize)]
struct PathPoint {
    path_id: usize,
    time: f64,
    value: f64,
}

/// Paths as `path_id,time,value` rows, knots only.
pub fn write_paths(path: &Path, paths: &[PathSample]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot create {}", path.display()))?;
    for (id, sample) in paths.iter().enumerate() {
        for (&time, &value) in sample.times().iter().zip(sample.values()) {
            w.serialize(PathPoint {
                path_id: id,
                time,
                value,
            })
            .with_context(|| format!("cannot write {}", path.display()))?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JumpList {
    path_id: usize,
    /// `[time, size]` pairs.
    jumps: Vec<(f64, f64)>,
}

pub fn write_jumps(path: &Path, paths: &[PathSample]) -> Result<()> {
    let lists: Vec<JumpList> = paths
        .iter()
        .enumerate()
        .map(|(path_id, s)| JumpList {
            path_id,
            jumps: s.jumps().to_vec(),
        })
        .collect();
    write_json(path, &lists)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    let mut f = fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    f.write_all(text.as_bytes())
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use levymc::levy::{DriftConvention, ProcessSpec};
    use levymc::moment::moment_curve;
    use levymc::sampler::{Scheme, StepGrid};

    #[test]
    fn curves_read_back_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("curves.csv");
        let scheme = Scheme::ExactIncrement {
            grid: StepGrid::PerGap { steps: 1 },
        };
        let spec = ProcessSpec::gamma();
        let curves: Vec<MomentCurve> = [0.5, 2.0]
            .iter()
            .map(|&p| moment_curve(&spec, p, &[0.5, 0.25, 0.1], DriftConvention::Raw, &scheme, 200, 3).unwrap())
            .collect();
        write_curves(&path, &curves).unwrap();
        let back = read_curves(&path).unwrap();
        assert_eq!(back.len(), 2);
        let (p, points) = &back["0.5"];
        assert_eq!(*p, 0.5);
        let e = &curves[0].estimates[1];
        assert_eq!(points[1], (e.t, e.estimate, e.std_error));
    }
}

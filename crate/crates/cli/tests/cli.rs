use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use levymc::levy::ProcessSpec;
use levymc::specfun::ln_gamma_fn;
use levymc_cli::output::read_curves;
use levymc_cli::{run_experiment, ExperimentConfig, GridSpec};

fn quickcheck_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/gamma_quickcheck.json")
}

fn levymc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_levymc"))
}

fn small_config(out: &Path) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(ProcessSpec::nig(2.0, 0.8, 0.5).unwrap(), vec![0.5, 1.5], out);
    c.n_paths = 2_000;
    c.t_grid = GridSpec::dyadic(3, 9);
    c.scheme = levymc::sampler::Scheme::compound_poisson_for(&c.process);
    c
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let first = run_experiment(&config).unwrap();
    let curves = std::fs::read(&first.curves).unwrap();
    let fit = std::fs::read(&first.fit).unwrap();
    let second = run_experiment(&config).unwrap();
    assert_eq!(std::fs::read(&second.curves).unwrap(), curves);
    assert_eq!(std::fs::read(&second.fit).unwrap(), fit);
}

#[test]
fn binary_and_library_agree() {
    let dir = tempfile::tempdir().unwrap();
    let lib_dir = dir.path().join("lib");
    let bin_dir = dir.path().join("bin");
    let config = small_config(&lib_dir);
    run_experiment(&config).unwrap();
    let config_file = dir.path().join("config.json");
    std::fs::write(&config_file, config.to_json()).unwrap();
    let status = levymc()
        .args(["moment", "--config"])
        .arg(&config_file)
        .arg("--out")
        .arg(&bin_dir)
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    assert_eq!(
        std::fs::read(lib_dir.join("curves.csv")).unwrap(),
        std::fs::read(bin_dir.join("curves.csv")).unwrap()
    );
}

#[test]
fn zero_paths_is_rejected() {
    let out = levymc()
        .args(["moment", "--process", "gamma", "--p", "1", "--paths", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_paths"));
}

#[test]
fn bundled_config_round_trips() {
    let config = ExperimentConfig::load(&quickcheck_path()).unwrap();
    assert_eq!(ExperimentConfig::from_json(&config.to_json()).unwrap(), config);
}

#[test]
fn quickcheck_matches_gamma_moments() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = ExperimentConfig::load(&quickcheck_path()).unwrap();
    config.output = dir.path().to_owned();
    let start = Instant::now();
    let files = run_experiment(&config).unwrap();
    assert!(start.elapsed().as_secs() < 60);
    for (p, points) in read_curves(&files.curves).unwrap().values() {
        for &(t, estimate, se) in points {
            let exact = (ln_gamma_fn(p + t).unwrap() - ln_gamma_fn(t).unwrap()).exp();
            assert!(
                (estimate - exact).abs() <= 4.0 * se,
                "p={p} t={t}: {estimate} vs {exact} ± {se}"
            );
        }
    }
    let fit: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&files.fit).unwrap()).unwrap();
    for record in fit.as_array().unwrap() {
        let gamma = record["fitted"]["gamma"].as_f64().unwrap();
        assert!((gamma - 1.0).abs() <= 0.05, "{record}");
        assert_eq!(record["predicted"]["gamma"].as_f64(), Some(1.0));
    }
}

#[test]
fn verify_exit_code_tracks_failures() {
    let run = |tol: &str| {
        levymc()
            .args([
                "verify",
                "--process",
                "gamma",
                "--p",
                "1",
                "--paths",
                "2000",
                "--t-min",
                "0.001",
            ])
            .args([
                "--t-max",
                "0.0625",
                "--grid-points",
                "7",
                "--steps",
                "1",
                "--per-gap",
                "--tol-gamma",
                tol,
            ])
            .output()
            .unwrap()
    };
    let pass = run("0.2");
    assert!(pass.status.success(), "{}", String::from_utf8_lossy(&pass.stdout));
    let fail = run("1e-9");
    assert_eq!(fail.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&fail.stdout).contains("FAIL"));
}

#[test]
fn uncovered_rows_do_not_fail_verification() {
    let out = levymc()
        .args([
            "verify",
            "--process",
            "stable:alpha=1.5,C1=1,C2=1",
            "--p",
            "1.5,2",
            "--paths",
            "200",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("2 not covered"));
}

#[test]
fn predict_and_specfun_print_json() {
    let out = levymc()
        .args(["predict", "--process", "ig:gamma=1", "--p", "0.5"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["rate"]["gamma"], 1.0);
    assert_eq!(v[0]["rate"]["delta"], 1.0);
    let out = levymc()
        .args(["specfun", "besselk", "--nu", "-0.5", "--z", "2"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let closed = (std::f64::consts::PI / 4.0).sqrt() * (-2.0f64).exp();
    assert!((v["value"].as_f64().unwrap() / closed - 1.0).abs() < 1e-10);
}

#[test]
fn simulate_writes_paths_and_jumps() {
    let dir = tempfile::tempdir().unwrap();
    let status = levymc()
        .args([
            "simulate",
            "--process",
            "nig:alpha=1,gamma=0,delta=1",
            "--paths",
            "3",
            "--scheme",
            "cp",
        ])
        .args(["--epsilon", "0.01", "--t-max", "0.5", "--out"])
        .arg(dir.path())
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let mut r = csv::Reader::from_path(dir.path().join("paths.csv")).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["path_id", "time", "value"]);
    let ids: std::collections::BTreeSet<String> = r.records().map(|r| r.unwrap()[0].to_owned()).collect();
    assert_eq!(ids.len(), 3);
    let jumps: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("jumps.json")).unwrap()).unwrap();
    assert_eq!(jumps.as_array().unwrap().len(), 3);
}

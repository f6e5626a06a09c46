use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use levymc::levy::{catalog_examples, DriftConvention, ProcessSpec};
use levymc::moment::{moment_boundary, Statistic};
use levymc::rates::{fit_points, predict_rate, FitOptions};
use levymc::sampler::{path_rng, PathGenerator, Scheme, SmallJumpMode, StepGrid};
use levymc::specfun::bessel_k;
use levymc_cli::experiment::write_report;
use levymc_cli::output::{read_curves, write_jumps, write_paths};
use levymc_cli::process_arg::{describe, parse_process};
use levymc_cli::{
    reference_table, run_experiment, run_verify, run_verify_cases, ExperimentConfig, Tolerances, VerifyReport,
};
use serde_json::json;

/// Small-time moments of the running supremum of Lévy processes.
#[derive(Parser)]
#[command(name = "levymc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the example processes with their index and symmetry.
    Catalog {
        /// Print catalog documents as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Simulate paths; writes paths.csv and jumps.json.
    Simulate(SimulateArgs),
    /// Estimate moment curves; writes curves.csv and fit.json.
    Moment(ExperimentArgs),
    /// Fit rate laws to a curves.csv file.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        with_log: bool,
    },
    /// Predict the small-time rate of E sup|X|^p.
    Predict {
        #[arg(long)]
        process: String,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long, default_value = "raw")]
        convention: DriftConvention,
    },
    /// Compare predicted and fitted rates; exits nonzero if a covered row fails.
    Verify {
        /// Run the built-in table of example processes.
        #[arg(long = "paper-table")]
        reference: bool,
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[arg(long, default_value_t = 0.05)]
        tol_gamma: f64,
        #[arg(long, default_value_t = 0.1)]
        tol_gamma_log: f64,
        #[arg(long, default_value_t = 0.3)]
        tol_delta: f64,
    },
    /// Special functions.
    Specfun {
        #[command(subcommand)]
        function: Specfun,
    },
}

#[derive(Subcommand)]
enum Specfun {
    /// Modified Bessel function K_ν(z).
    Besselk {
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
        #[arg(long)]
        z: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeKind {
    Exact,
    Cp,
    CpGauss,
}

#[derive(Args)]
struct SchemeArgs {
    #[arg(long, value_enum)]
    scheme: Option<SchemeKind>,
    /// Jump cutoff of the compound Poisson schemes.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Grid steps: over the horizon, or per gap with --per-gap.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    per_gap: bool,
}

impl SchemeArgs {
    fn resolve(&self, spec: &ProcessSpec, current: Option<Scheme>) -> Result<Scheme> {
        let grid = match self.steps {
            Some(steps) if self.per_gap => Some(StepGrid::PerGap { steps }),
            Some(steps) => Some(StepGrid::Uniform { steps }),
            None if self.per_gap => bail!("--per-gap needs --steps"),
            None => None,
        };
        let current = current.unwrap_or_default();
        let default_eps = || match Scheme::compound_poisson_for(spec) {
            Scheme::CompoundPoisson { epsilon, .. } => epsilon,
            _ => unreachable!(),
        };
        let current_eps = match current {
            Scheme::CompoundPoisson { epsilon, .. } => Some(epsilon),
            _ => None,
        };
        let current_grid = match current {
            Scheme::ExactIncrement { grid } | Scheme::CompoundPoisson { grid, .. } => grid,
        };
        let kind = match (self.scheme, current) {
            (Some(k), _) => k,
            (None, Scheme::ExactIncrement { .. }) if self.epsilon.is_none() => SchemeKind::Exact,
            (
                None,
                Scheme::CompoundPoisson {
                    small_jumps: SmallJumpMode::GaussianSubstitute,
                    ..
                },
            ) => SchemeKind::CpGauss,
            (None, _) => SchemeKind::Cp,
        };
        let grid = grid.unwrap_or(current_grid);
        let epsilon = self.epsilon.or(current_eps).unwrap_or_else(default_eps);
        Ok(match kind {
            SchemeKind::Exact => {
                if self.epsilon.is_some() {
                    bail!("--epsilon applies only to compound Poisson schemes");
                }
                Scheme::ExactIncrement { grid }
            }
            SchemeKind::Cp => Scheme::CompoundPoisson {
                epsilon,
                small_jumps: SmallJumpMode::DropAndCompensate,
                grid,
            },
            SchemeKind::CpGauss => Scheme::CompoundPoisson {
                epsilon,
                small_jumps: SmallJumpMode::GaussianSubstitute,
                grid,
            },
        })
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    process: String,
    #[arg(long, default_value_t = 10)]
    paths: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Horizon T.
    #[arg(long, default_value_t = 1.0)]
    t_max: f64,
    #[arg(long, default_value = "raw")]
    convention: DriftConvention,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

/// Experiment settings; flags override the fields of `--config`.
#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    process: Option<String>,
    /// Moment orders, comma separated.
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    convention: Option<DriftConvention>,
    /// Use |X_t| instead of the running supremum.
    #[arg(long)]
    marginal: bool,
    #[arg(long)]
    with_log: bool,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExperimentArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => {
                let process = self
                    .process
                    .as_deref()
                    .ok_or_else(|| anyhow!("--process or --config is required"))?;
                if self.p.is_empty() {
                    bail!("--p or --config is required");
                }
                ExperimentConfig::new(parse_process(process).map_err(|e| anyhow!(e))?, self.p.clone(), "out")
            }
        };
        if let Some(process) = &self.process {
            config.process = parse_process(process).map_err(|e| anyhow!(e))?;
        }
        if !self.p.is_empty() {
            config.p_list = self.p.clone();
        }
        let g = &mut config.t_grid;
        g.t_max = self.t_max.unwrap_or(g.t_max);
        g.t_min = self.t_min.unwrap_or(g.t_min);
        g.points = self.grid_points.unwrap_or(g.points);
        config.n_paths = self.paths.unwrap_or(config.n_paths);
        config.seed = self.seed.unwrap_or(config.seed);
        config.convention = self.convention.unwrap_or(config.convention);
        if self.marginal {
            config.statistic = Statistic::Marginal;
        }
        config.with_log |= self.with_log;
        config.scheme = self.scheme.resolve(&config.process, Some(config.scheme))?;
        if let Some(out) = &self.out {
            config.output = out.clone();
        }
        config.validate()?;
        Ok(config)
    }
}

fn catalog(as_json: bool) -> Result<()> {
    let specs = catalog_examples();
    if as_json {
        let docs: Vec<_> = specs.iter().map(ProcessSpec::to_document).collect();
        println!("{}", serde_json::to_string_pretty(&docs)?);
        return Ok(());
    }
    println!(
        "{:<46} {:>5} {:>9} {:>12} {:>10} {:>12}",
        "process", "β", "symmetric", "subordinator", "drift a", "moments < p"
    );
    for s in &specs {
        let boundary = moment_boundary(s).map_or("all".to_owned(), |b| format!("{b}"));
        println!(
            "{:<46} {:>5} {:>9} {:>12} {:>10.6} {:>12}",
            describe(s),
            s.bg_index(),
            s.is_symmetric(),
            s.is_subordinator(),
            s.drift() + 0.0,
            boundary
        );
    }
    Ok(())
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let spec = parse_process(&args.process).map_err(|e| anyhow!(e))?;
    let scheme = args.scheme.resolve(&spec, None)?;
    let generator = PathGenerator::new(&spec, args.t_max, args.convention, &scheme, &[])?;
    let paths: Vec<_> = (0..args.paths)
        .map(|i| generator.generate(&mut path_rng(args.seed, i as u64)))
        .collect();
    std::fs::create_dir_all(&args.out).with_context(|| format!("cannot create {}", args.out.display()))?;
    write_paths(&args.out.join("paths.csv"), &paths)?;
    write_jumps(&args.out.join("jumps.json"), &paths)?;
    println!("wrote {} paths to {}", paths.len(), args.out.display());
    Ok(())
}

fn fit(input: &Path, with_log: bool) -> Result<()> {
    let curves = read_curves(input)?;
    let results: Vec<_> = curves
        .values()
        .map(|(p, points)| match fit_points(points, FitOptions::new(with_log)) {
            Ok(m) => json!({"p": p, "fit": m}),
            Err(e) => json!({"p": p, "error": e.to_string()}),
        })
        .collect();
    println!("{}", serde_json::to_string_pretty(&results)?);
    Ok(())
}

fn predict(process: &str, p: &[f64], convention: DriftConvention) -> Result<()> {
    let spec = parse_process(process).map_err(|e| anyhow!(e))?;
    let results: Vec<_> = p
        .iter()
        .map(|&p| match predict_rate(&spec, p, convention) {
            Ok(m) => json!({"p": p, "rate": m}),
            Err(levymc::Error::NotCovered(why)) => json!({"p": p, "not_covered": why}),
            Err(e) => json!({"p": p, "error": e.to_string()}),
        })
        .collect();
    println!("{}", serde_json::to_string_pretty(&results)?);
    Ok(())
}

fn verify(reference: bool, experiment: &ExperimentArgs, tol: Tolerances) -> Result<bool> {
    let report = if reference {
        let seed = experiment.seed.unwrap_or(1);
        let out = experiment.out.clone().unwrap_or_else(|| "out".into());
        run_verify_cases(&reference_table(seed, out), tol)?
    } else {
        let config = experiment.config()?;
        VerifyReport {
            tolerances: tol,
            rows: run_verify(&config, tol)?,
        }
    };
    print!("{}", report.table());
    if let Some(out) = &experiment.out {
        write_report(out, &report)?;
    }
    Ok(!report.any_failed())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Catalog { json } => catalog(json)?,
        Command::Simulate(args) => simulate(&args)?,
        Command::Moment(args) => {
            let files = run_experiment(&args.config()?)?;
            println!("wrote {} and {}", files.curves.display(), files.fit.display());
        }
        Command::Fit { input, with_log } => fit(&input, with_log)?,
        Command::Predict { process, p, convention } => predict(&process, &p, convention)?,
        Command::Verify {
            reference,
            experiment,
            tol_gamma,
            tol_gamma_log,
            tol_delta,
        } => {
            let tol = Tolerances {
                gamma: tol_gamma,
                gamma_log: tol_gamma_log,
                delta: tol_delta,
            };
            return verify(reference, &experiment, tol);
        }
        Command::Specfun {
            function: Specfun::Besselk { nu, z, tol },
        } => {
            let k = bessel_k(nu, z, tol)?;
            println!(
                "{}",
                json!({"nu": nu, "z": z, "value": k.value, "abs_error": k.abs_error_estimate})
            );
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

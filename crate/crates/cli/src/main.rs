//! Experiment runner: wires the model library, Lindblad engine, spectral
//! diagnostics, and the variational loop into reproducible, config-driven
//! runs that emit CSV data plus a manifest.

// Guards are written `!(x >= 0.0)` so NaN parameters fail validation; the
// negation is load-bearing.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use config::{preset, ConfigError, ExperimentConfig, PRESETS};
use twistqa_core::diagnostics::{estimation_error, overlap, purity, MeritReport};
use twistqa_core::error::CoreError;
use twistqa_core::models::{transverse_field_driver, twisted_driver, AnnealSchedule, TwistAngles};
use twistqa_core::report;
use twistqa_core::spectral::{adiabatic_trace, eigendecompose, gap_trace, spectrum_trace};
use twistqa_core::variational::{anneal_time_scan, gradient_descent, VariationalState};
use twistqa_core::{evolve, ground_state_density, PauliSum};

#[derive(Parser)]
#[command(
    name = "twistqa",
    version,
    about = "Twisted-field quantum annealing simulator"
)]
struct Cli {
    /// Experiment configuration file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Use a shipped preset instead of --config.
    #[arg(long, global = true)]
    preset: Option<String>,

    /// Output directory (overrides `out_dir` from the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (default: all logical processors).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// RNG seed (overrides `seed` from the config).
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Conventional baseline plus variational optimization at fixed T.
    Run {
        /// Also write evolution snapshots (this many, evenly spaced) for the
        /// baseline and optimized pipelines.
        #[arg(long)]
        snapshots: Option<usize>,
        /// Also dump the final density matrices as row-major complex doubles
        /// (little-endian).
        #[arg(long)]
        dump_states: bool,
    },
    /// Scan annealing times; conventional and twisted pipelines at each T.
    Timescan,
    /// Emit spectrum, gap, and adiabatic-metric CSVs along the schedule.
    Spectrum {
        /// Twist-angle file (one angle per line); default is θ = 0.
        #[arg(long)]
        thetas: Option<PathBuf>,
    },
    /// Preset management.
    Presets {
        #[command(subcommand)]
        action: PresetsAction,
    },
}

#[derive(Subcommand)]
enum PresetsAction {
    /// List shipped presets.
    List,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();

    if let Command::Presets { action } = &cli.command {
        match action {
            PresetsAction::List => {
                for (name, _) in PRESETS {
                    println!("{name}");
                }
            }
        }
        return ExitCode::SUCCESS;
    }

    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: cannot size worker pool: {e}");
            return ExitCode::from(1);
        }
    }

    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else if matches!(
                e.downcast_ref::<CoreError>(),
                Some(CoreError::NumericalAbort(_))
            ) {
                ExitCode::from(3)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let mut config = load_config(cli)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let out_dir = cli
        .out
        .clone()
        .or_else(|| config.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&out_dir)?;

    let problem = config.build_problem()?;
    let mut outputs: Vec<String> = Vec::new();

    match &cli.command {
        Command::Run {
            snapshots,
            dump_states,
        } => run_single(
            &config,
            &problem,
            &out_dir,
            &mut outputs,
            snapshots.unwrap_or(0),
            *dump_states,
        )?,
        Command::Timescan => run_timescan(&config, &problem, &out_dir, &mut outputs)?,
        Command::Spectrum { thetas } => {
            run_spectrum(&config, &problem, thetas.as_deref(), &out_dir, &mut outputs)?
        }
        Command::Presets { .. } => unreachable!("handled before dispatch"),
    }

    write_manifest(cli, &config, &out_dir, &outputs)?;
    Ok(())
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, ConfigError> {
    match (&cli.config, &cli.preset) {
        (Some(_), Some(_)) => Err(ConfigError(
            "pass either --config or --preset, not both".into(),
        )),
        (Some(path), None) => ExperimentConfig::load(path),
        (None, Some(name)) => {
            let text = preset(name).ok_or_else(|| {
                ConfigError(format!(
                    "unknown preset `{name}`; run `twistqa presets list`"
                ))
            })?;
            ExperimentConfig::from_toml(text)
        }
        (None, None) => Err(ConfigError(
            "a configuration is required: pass --config <path> or --preset <name>".into(),
        )),
    }
}

/// Merit figures plus the evolution itself for one pipeline.
fn run_pipeline(
    problem: &PauliSum,
    config: &ExperimentConfig,
    thetas: &TwistAngles,
    step: usize,
    sample_count: usize,
) -> anyhow::Result<(MeritReport, twistqa_core::EvolutionResult)> {
    let driver = transverse_field_driver(problem.n_qubits())?;
    let driver_dense = twisted_driver(&driver, thetas)?;
    let problem_dense = problem.to_dense()?;
    let driver_eigen = eigendecompose(&driver_dense)?;
    let problem_eigen = eigendecompose(&problem_dense)?;
    let rho0 = ground_state_density(&driver_dense)?;
    let schedule = AnnealSchedule::new(driver_dense, problem_dense.clone(), config.annealing_time)?;
    let out = evolve(&rho0, &schedule, &config.anneal_config()?, sample_count)?;
    let energy = problem_dense.expectation(out.final_state.matrix())?;
    let merit = MeritReport {
        annealing_time: config.annealing_time,
        gamma: config.gamma,
        step,
        energy,
        error: estimation_error(energy, problem_eigen.values[0]),
        purity: purity(&out.final_state),
        overlap: overlap(driver_eigen.ground_vector(), problem_eigen.ground_vector())?,
    };
    Ok((merit, out))
}

fn run_single(
    config: &ExperimentConfig,
    problem: &PauliSum,
    out_dir: &Path,
    outputs: &mut Vec<String>,
    snapshots: usize,
    dump_states: bool,
) -> anyhow::Result<()> {
    let anneal = config.anneal_config()?;
    let n = problem.n_qubits();
    let problem_dense = problem.to_dense()?;

    let (conventional, conv_evolution) =
        run_pipeline(problem, config, &TwistAngles::zeros(n), 0, snapshots)?;
    println!(
        "conventional: energy {:.10}  error {:.4e}",
        conventional.energy, conventional.error
    );

    let init =
        VariationalState::seeded(n, config.alpha, config.n_steps, config.fd_step, config.seed)?;
    let optimized = gradient_descent(&init, problem, &anneal)?;
    let last = optimized.history.last().expect("history never empty");
    println!(
        "twisted:      energy {:.10}  error {:.4e}  ({} steps{})",
        last.energy,
        last.error,
        last.step,
        if optimized.plateau_converged {
            ", plateaued"
        } else {
            ""
        }
    );

    let (twisted, twisted_evolution) =
        run_pipeline(problem, config, &optimized.thetas, last.step, snapshots)?;

    write_to(out_dir, "trajectory.csv", outputs, |w| {
        report::write_trajectory(w, &optimized)
    })?;
    write_to(out_dir, "merit.csv", outputs, |w| {
        report::write_merit(w, &[conventional, twisted])
    })?;
    if snapshots > 0 {
        for (name, evolution) in [
            ("snapshots_conventional.csv", &conv_evolution),
            ("snapshots_twisted.csv", &twisted_evolution),
        ] {
            write_to(out_dir, name, outputs, |w| {
                report::write_snapshots(w, &evolution.sampled_states, &problem_dense)
            })?;
        }
    }
    if dump_states {
        for (name, evolution) in [
            ("final_conventional.bin", &conv_evolution),
            ("final_twisted.bin", &twisted_evolution),
        ] {
            write_to(out_dir, name, outputs, |w| {
                report::write_state_binary(w, &evolution.final_state)
            })?;
        }
    }
    Ok(())
}

fn run_timescan(
    config: &ExperimentConfig,
    problem: &PauliSum,
    out_dir: &Path,
    outputs: &mut Vec<String>,
) -> anyhow::Result<()> {
    let base = config.anneal_config()?;
    let template = VariationalState::seeded(
        problem.n_qubits(),
        config.alpha,
        config.n_steps,
        config.fd_step,
        config.seed,
    )?;
    let t_values = config.scan_values();
    let scan = anneal_time_scan(&t_values, problem, &base, &template)?;
    let best = scan.best_entry();
    let conventional = scan.conventional_best();
    println!(
        "T_opt(twisted) = {:.6}  error {:.4e}",
        scan.t_opt, best.twisted_error
    );
    println!(
        "T_opt(conventional) = {:.6}  error {:.4e}",
        conventional.annealing_time, conventional.conventional_error
    );
    write_to(out_dir, "timescan.csv", outputs, |w| {
        report::write_timescan(w, &scan)
    })?;
    Ok(())
}

fn run_spectrum(
    config: &ExperimentConfig,
    problem: &PauliSum,
    thetas_path: Option<&Path>,
    out_dir: &Path,
    outputs: &mut Vec<String>,
) -> anyhow::Result<()> {
    let n = problem.n_qubits();
    let thetas = match thetas_path {
        None => TwistAngles::zeros(n),
        Some(path) => read_thetas(path, n)?,
    };
    let driver = transverse_field_driver(n)?;
    let driver_dense = twisted_driver(&driver, &thetas)?;
    let schedule = AnnealSchedule::new(driver_dense, problem.to_dense()?, config.annealing_time)?;

    let trace = spectrum_trace(&schedule, config.n_points, config.n_levels)?;
    let max_level = config.n_levels.min(schedule.dim()) - 1;
    let gaps: Vec<_> = (1..=max_level)
        .map(|j| gap_trace(&trace, j))
        .collect::<Result<_, _>>()?;
    let adiabatic: Vec<_> = (1..=max_level)
        .map(|j| adiabatic_trace(&schedule, config.n_points, j))
        .collect::<Result<_, _>>()?;

    println!(
        "min first gap {:.6e} at t = {:.6}",
        gaps[0].min_gap, gaps[0].min_gap_time
    );
    write_to(out_dir, "spectrum.csv", outputs, |w| {
        report::write_spectrum(w, &trace)
    })?;
    write_to(out_dir, "gaps.csv", outputs, |w| {
        report::write_gaps(w, &gaps)
    })?;
    write_to(out_dir, "adiabatic.csv", outputs, |w| {
        report::write_adiabatic(w, &adiabatic)
    })?;
    Ok(())
}

fn read_thetas(path: &Path, n: usize) -> anyhow::Result<TwistAngles> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    let values: Result<Vec<f64>, _> = text
        .split_whitespace()
        .map(|tok| tok.parse::<f64>())
        .collect();
    let values = values.map_err(|e| ConfigError(format!("{}: bad angle: {e}", path.display())))?;
    if values.len() != n {
        return Err(ConfigError(format!(
            "{}: {} angles given, problem has {} qubits",
            path.display(),
            values.len(),
            n
        ))
        .into());
    }
    Ok(TwistAngles::new(values)?)
}

fn write_to(
    out_dir: &Path,
    name: &str,
    outputs: &mut Vec<String>,
    emit: impl FnOnce(&mut BufWriter<File>) -> twistqa_core::Result<()>,
) -> anyhow::Result<()> {
    let path = out_dir.join(name);
    let mut w = BufWriter::new(File::create(&path)?);
    emit(&mut w)?;
    w.flush()?;
    outputs.push(name.to_string());
    println!("wrote {}", path.display());
    Ok(())
}

fn write_manifest(
    cli: &Cli,
    config: &ExperimentConfig,
    out_dir: &Path,
    outputs: &[String],
) -> anyhow::Result<()> {
    let command = match &cli.command {
        Command::Run { .. } => "run",
        Command::Timescan => "timescan",
        Command::Spectrum { .. } => "spectrum",
        Command::Presets { .. } => "presets",
    };
    let manifest = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "seed": config.seed,
        "rng": "chacha8",
        "jobs": cli.jobs,
        "preset": cli.preset,
        "config": config,
        "outputs": outputs,
    });
    let path = out_dir.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)?)?;
    println!("wrote {}", path.display());
    Ok(())
}

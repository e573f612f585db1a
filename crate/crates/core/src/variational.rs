//! Outer optimization loop: measure the post-anneal energy as a function of
//! the twist angles, form central-difference gradients, update the angles by
//! plain gradient descent, and scan the annealing time for its optimum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dense::DenseOperator;
use crate::diagnostics::estimation_error;
use crate::error::{CoreError, Result};
use crate::lindblad::{evolve, ground_state_density};
use crate::models::{
    transverse_field_driver, twisted_driver, AnnealConfig, AnnealSchedule, TwistAngles,
};
use crate::pauli::PauliSum;
use crate::spectral::eigendecompose;

/// Default finite-difference half step, radians.
pub const DEFAULT_FD_STEP: f64 = 1e-3;

/// Half-width of the uniform perturbation applied to the all-zero start.
pub const INIT_PERTURBATION: f64 = 0.05;

/// Energy plateau threshold and run length for optional early stopping.
pub const PLATEAU_THRESHOLD: f64 = 1e-12;
pub const PLATEAU_RUN: usize = 10;

/// Scan points never use fewer integrator steps than this (unless the base
/// configuration itself asks for fewer).
pub const SCAN_MIN_STEPS: usize = 200;

/// One recorded optimization step.
#[derive(Debug, Clone)]
pub struct HistoryEntry {
    pub step: usize,
    pub thetas: TwistAngles,
    pub energy: f64,
    pub error: f64,
}

/// Twist angles together with the optimizer hyperparameters and the recorded
/// trajectory.
#[derive(Debug, Clone)]
pub struct VariationalState {
    pub thetas: TwistAngles,
    /// Learning rate α of the update θ ← θ − α·∂E/∂θ.
    pub alpha: f64,
    /// Number of descent steps to run.
    pub n_steps: usize,
    /// Central-difference half step ε.
    pub fd_step: f64,
    pub history: Vec<HistoryEntry>,
    /// Set when the energy plateaued and the run stopped early.
    pub plateau_converged: bool,
}

impl VariationalState {
    pub fn new(thetas: TwistAngles, alpha: f64, n_steps: usize, fd_step: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(CoreError::InvalidConfig(format!(
                "learning rate must be finite and nonnegative, got {alpha}"
            )));
        }
        if !(fd_step > 0.0) {
            return Err(CoreError::InvalidConfig(format!(
                "finite-difference step must be positive, got {fd_step}"
            )));
        }
        Ok(Self {
            thetas,
            alpha,
            n_steps,
            fd_step,
            history: Vec::new(),
            plateau_converged: false,
        })
    }

    /// The all-zero start plus an i.i.d. uniform perturbation in
    /// ±[`INIT_PERTURBATION`] rad drawn from a seeded RNG. The zero point can
    /// sit on a symmetry-induced stationary point of the energy, which plain
    /// gradient descent would never leave.
    pub fn seeded(
        n_qubits: usize,
        alpha: f64,
        n_steps: usize,
        fd_step: f64,
        seed: u64,
    ) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let thetas: Vec<f64> = (0..n_qubits)
            .map(|_| rng.gen_range(-INIT_PERTURBATION..=INIT_PERTURBATION))
            .collect();
        Self::new(TwistAngles::new(thetas)?, alpha, n_steps, fd_step)
    }

    pub fn final_energy(&self) -> Option<f64> {
        self.history.last().map(|h| h.energy)
    }

    pub fn final_error(&self) -> Option<f64> {
        self.history.last().map(|h| h.error)
    }
}

/// One scan point of [`anneal_time_scan`].
#[derive(Debug, Clone)]
pub struct ScanEntry {
    pub annealing_time: f64,
    /// Integrator steps used at this point (scaled with T, see the scan).
    pub n_time_steps: usize,
    pub conventional_energy: f64,
    pub conventional_error: f64,
    pub twisted_energy: f64,
    pub twisted_error: f64,
    /// Optimized angles at this annealing time.
    pub thetas: TwistAngles,
}

/// Scan results plus the annealing time minimizing the twisted error.
#[derive(Debug, Clone)]
pub struct TimeScanResult {
    pub entries: Vec<ScanEntry>,
    pub t_opt: f64,
    pub t_opt_index: usize,
}

impl TimeScanResult {
    pub fn best_entry(&self) -> &ScanEntry {
        &self.entries[self.t_opt_index]
    }

    /// Conventional optimum over the same scan grid, ties toward smaller T.
    pub fn conventional_best(&self) -> &ScanEntry {
        argmin_by(&self.entries, |e| (e.conventional_error, e.annealing_time))
    }
}

/// Caches the dense problem realization and its ground energy so repeated
/// energy evaluations only pay for the time evolution.
pub struct EnergyEvaluator {
    problem_dense: DenseOperator,
    driver: PauliSum,
    config: AnnealConfig,
    ground_energy: f64,
}

impl EnergyEvaluator {
    pub fn new(problem: &PauliSum, config: &AnnealConfig) -> Result<Self> {
        config.validate()?;
        let problem_dense = problem.to_dense()?;
        let dev = problem_dense.hermiticity_deviation();
        if dev > 1e-9 {
            return Err(CoreError::NotHermitian { deviation: dev });
        }
        let ground_energy = eigendecompose(&problem_dense)?.values[0];
        Ok(Self {
            problem_dense,
            driver: transverse_field_driver(problem.n_qubits())?,
            config: config.clone(),
            ground_energy,
        })
    }

    /// Exact ground-state energy of the dense problem Hamiltonian.
    pub fn ground_energy(&self) -> f64 {
        self.ground_energy
    }

    pub fn config(&self) -> &AnnealConfig {
        &self.config
    }

    /// E^(ann)(T, θ): prepare the twisted driver's ground state, evolve it
    /// under the Lindblad engine, measure the problem energy.
    pub fn energy(&self, thetas: &TwistAngles) -> Result<f64> {
        let driver = twisted_driver(&self.driver, thetas)?;
        let rho0 = ground_state_density(&driver)?;
        let schedule = AnnealSchedule::new(
            driver,
            self.problem_dense.clone(),
            self.config.annealing_time,
        )?;
        let out = evolve(&rho0, &schedule, &self.config, 0)?;
        self.problem_dense.expectation(out.final_state.matrix())
    }

    /// Central-difference gradient, 2L energy evaluations in parallel.
    pub fn gradient(&self, thetas: &TwistAngles, fd_step: f64) -> Result<Vec<f64>> {
        if !(fd_step > 0.0) {
            return Err(CoreError::InvalidConfig(format!(
                "finite-difference step must be positive, got {fd_step}"
            )));
        }
        let base = thetas.as_slice();
        let probes: Vec<TwistAngles> = (0..base.len())
            .flat_map(|j| {
                let mut plus = base.to_vec();
                let mut minus = base.to_vec();
                plus[j] += fd_step;
                minus[j] -= fd_step;
                [
                    TwistAngles::new(plus).expect("finite angles stay finite"),
                    TwistAngles::new(minus).expect("finite angles stay finite"),
                ]
            })
            .collect();
        let energies: Vec<Result<f64>> = probes.par_iter().map(|t| self.energy(t)).collect();
        let mut gradient = Vec::with_capacity(base.len());
        let mut it = energies.into_iter();
        for _ in 0..base.len() {
            let plus = it.next().expect("two probes per angle")?;
            let minus = it.next().expect("two probes per angle")?;
            gradient.push((plus - minus) / (2.0 * fd_step));
        }
        Ok(gradient)
    }
}

/// Post-anneal energy for one set of twist angles.
pub fn estimate_energy(
    thetas: &TwistAngles,
    problem: &PauliSum,
    config: &AnnealConfig,
) -> Result<f64> {
    EnergyEvaluator::new(problem, config)?.energy(thetas)
}

/// Central-difference gradient of the post-anneal energy.
pub fn numerical_gradient(
    thetas: &TwistAngles,
    problem: &PauliSum,
    config: &AnnealConfig,
    fd_step: f64,
) -> Result<Vec<f64>> {
    EnergyEvaluator::new(problem, config)?.gradient(thetas, fd_step)
}

/// Run `initial.n_steps` updates θ ← θ − α·g with the plain gradient rule,
/// recording the full trajectory. Stops early only when the energy changes
/// by less than [`PLATEAU_THRESHOLD`] for [`PLATEAU_RUN`] consecutive steps.
pub fn gradient_descent(
    initial: &VariationalState,
    problem: &PauliSum,
    config: &AnnealConfig,
) -> Result<VariationalState> {
    let evaluator = EnergyEvaluator::new(problem, config)?;
    descend(&evaluator, initial)
}

pub(crate) fn descend(
    evaluator: &EnergyEvaluator,
    initial: &VariationalState,
) -> Result<VariationalState> {
    let e_exact = evaluator.ground_energy();
    let mut state = VariationalState {
        thetas: initial.thetas.clone(),
        alpha: initial.alpha,
        n_steps: initial.n_steps,
        fd_step: initial.fd_step,
        history: Vec::with_capacity(initial.n_steps + 1),
        plateau_converged: false,
    };

    let mut energy = evaluator.energy(&state.thetas)?;
    check_finite(energy, 0)?;
    state.history.push(HistoryEntry {
        step: 0,
        thetas: state.thetas.clone(),
        energy,
        error: estimation_error(energy, e_exact),
    });

    let mut plateau = 0usize;
    for step in 1..=initial.n_steps {
        let gradient = evaluator.gradient(&state.thetas, initial.fd_step)?;
        let updated: Vec<f64> = state
            .thetas
            .as_slice()
            .iter()
            .zip(&gradient)
            .map(|(t, g)| t - initial.alpha * g)
            .collect();
        state.thetas = TwistAngles::new(updated)?;
        let next = evaluator.energy(&state.thetas)?;
        check_finite(next, step)?;
        state.history.push(HistoryEntry {
            step,
            thetas: state.thetas.clone(),
            energy: next,
            error: estimation_error(next, e_exact),
        });

        if (next - energy).abs() < PLATEAU_THRESHOLD {
            plateau += 1;
            if plateau >= PLATEAU_RUN {
                state.plateau_converged = true;
                break;
            }
        } else {
            plateau = 0;
        }
        energy = next;
    }
    Ok(state)
}

fn check_finite(energy: f64, step: usize) -> Result<()> {
    if !energy.is_finite() {
        return Err(CoreError::NumericalAbort(format!(
            "non-finite energy {energy} at descent step {step}"
        )));
    }
    Ok(())
}

/// For each annealing time, run the conventional pipeline (θ = 0, no
/// optimization) and the full variational pipeline, then pick T^(opt) as the
/// argmin of the twisted error with ties broken toward smaller T.
///
/// The integrator step count is scaled per point as
/// `n_k = clamp(ceil(base·T_k/T_max), min(base, 200), base)`, i.e. the base
/// configuration's `n_time_steps` applies at the largest scanned time and the
/// step density h = T/n never becomes coarser at smaller times. Every scan
/// point starts the descent from the same `template.thetas`.
pub fn anneal_time_scan(
    t_values: &[f64],
    problem: &PauliSum,
    base_config: &AnnealConfig,
    template: &VariationalState,
) -> Result<TimeScanResult> {
    if t_values.is_empty() {
        return Err(CoreError::InvalidConfig(
            "annealing-time scan needs at least one value".into(),
        ));
    }
    if t_values.iter().any(|t| !(*t > 0.0)) {
        return Err(CoreError::InvalidConfig(
            "annealing times must be positive".into(),
        ));
    }
    let t_max = t_values.iter().copied().fold(f64::MIN, f64::max);
    let floor = base_config.n_time_steps.clamp(2, SCAN_MIN_STEPS.max(2));

    let entries: Vec<Result<ScanEntry>> = t_values
        .par_iter()
        .map(|&t| {
            let scaled = (base_config.n_time_steps as f64 * t / t_max).ceil() as usize;
            let n_time_steps = scaled.clamp(floor, base_config.n_time_steps);
            let config = AnnealConfig {
                annealing_time: t,
                n_time_steps,
                gamma: base_config.gamma,
                lindblad_axis: base_config.lindblad_axis,
            };
            let evaluator = EnergyEvaluator::new(problem, &config)?;
            let e_exact = evaluator.ground_energy();

            let conventional_energy = evaluator.energy(&TwistAngles::zeros(problem.n_qubits()))?;
            let optimized = descend(&evaluator, template)?;
            let last = optimized
                .history
                .last()
                .expect("descent always records the initial step");
            Ok(ScanEntry {
                annealing_time: t,
                n_time_steps,
                conventional_energy,
                conventional_error: estimation_error(conventional_energy, e_exact),
                twisted_energy: last.energy,
                twisted_error: last.error,
                thetas: optimized.thetas,
            })
        })
        .collect();
    let entries = entries.into_iter().collect::<Result<Vec<_>>>()?;

    let best = argmin_by(&entries, |e| (e.twisted_error, e.annealing_time));
    let t_opt = best.annealing_time;
    let t_opt_index = entries
        .iter()
        .position(|e| e.annealing_time == t_opt)
        .expect("best entry comes from the list");
    Ok(TimeScanResult {
        entries,
        t_opt,
        t_opt_index,
    })
}

fn argmin_by<T, K: PartialOrd>(items: &[T], key: impl Fn(&T) -> K) -> &T {
    let mut best = &items[0];
    let mut best_key = key(best);
    for item in &items[1..] {
        let k = key(item);
        if k < best_key {
            best = item;
            best_key = k;
        }
    }
    best
}

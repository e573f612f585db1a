//! Fixed-step RK4 integration of the Lindblad master equation
//!
//!   dρ/dt = −i[H(t), ρ] + γ Σ_n (Z_n ρ Z_n − ρ)
//!
//! along a linear annealing schedule, with per-site σ_z dephasing. The
//! dissipator is implemented exactly in the form above, which is valid
//! because the jump operators are Hermitian and unitary.

use num_complex::Complex64;

use crate::dense::DenseOperator;
use crate::error::{CoreError, Result};
use crate::models::{AnnealConfig, AnnealSchedule};
use crate::spectral::eigendecompose;

/// Tolerances of the [`DensityMatrix`] invariants.
pub const TRACE_TOLERANCE: f64 = 1e-8;
pub const HERMITICITY_TOLERANCE: f64 = 1e-9;
pub const POSITIVITY_TOLERANCE: f64 = 1e-7;

/// Trace drift past this value aborts the integration: the step size is too
/// coarse for the schedule.
pub const TRACE_ABORT_THRESHOLD: f64 = 1e-4;

/// Final states with trace drift above this are renormalized once.
pub const RENORMALIZE_THRESHOLD: f64 = 1e-10;

/// A density matrix: Hermitian, unit trace, positive up to integration error.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DenseOperator,
}

impl DensityMatrix {
    /// Wrap a matrix after checking the density-matrix invariants.
    pub fn new(matrix: DenseOperator) -> Result<Self> {
        let rho = Self { matrix };
        rho.validate()?;
        Ok(rho)
    }

    /// |ψ⟩⟨ψ| from a normalized state vector.
    pub fn from_pure_state(state: &[Complex64]) -> Result<Self> {
        let norm: f64 = state.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(CoreError::NotNormalized { norm });
        }
        let d = state.len();
        if !d.is_power_of_two() {
            return Err(CoreError::InvalidState(format!(
                "state vector length {d} is not a power of two"
            )));
        }
        let mut m = DenseOperator::zeros(d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = state[i] * state[j].conj();
            }
        }
        Ok(Self { matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &DenseOperator {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseOperator {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Check Hermiticity, unit trace, and approximate positivity.
    pub fn validate(&self) -> Result<()> {
        let herm = self.matrix.hermiticity_deviation();
        if herm > HERMITICITY_TOLERANCE {
            return Err(CoreError::InvalidState(format!(
                "Hermiticity deviation {herm:.3e} exceeds {HERMITICITY_TOLERANCE:.0e}"
            )));
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOLERANCE || tr.im.abs() > TRACE_TOLERANCE {
            return Err(CoreError::InvalidState(format!(
                "trace {tr} deviates from 1 by more than {TRACE_TOLERANCE:.0e}"
            )));
        }
        let eigen = eigendecompose(&self.matrix)?;
        if eigen.values[0] < -POSITIVITY_TOLERANCE {
            return Err(CoreError::InvalidState(format!(
                "negative eigenvalue {:.3e}",
                eigen.values[0]
            )));
        }
        Ok(())
    }
}

/// Drift diagnostics accumulated while integrating.
#[derive(Debug, Clone, Copy, Default)]
pub struct EvolutionDiagnostics {
    /// max |Tr ρ(t) − 1| seen at any integrator step.
    pub trace_drift: f64,
    /// max ‖ρ − ρ†‖_max at the sampled states and the final state.
    pub hermiticity_drift: f64,
    /// Whether the final state was trace-renormalized.
    pub renormalized: bool,
}

/// Final state of an evolution plus optional intermediate snapshots.
#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub final_state: DensityMatrix,
    /// `(t, ρ(t))` snapshots, evenly spaced over [0, T], when requested.
    pub sampled_states: Vec<(f64, DensityMatrix)>,
    pub diagnostics: EvolutionDiagnostics,
}

/// |φ₀⟩⟨φ₀| for the lowest eigenvector of a Hermitian operator.
pub fn ground_state_density(op: &DenseOperator) -> Result<DensityMatrix> {
    let eigen = eigendecompose(op)?;
    DensityMatrix::from_pure_state(eigen.ground_vector())
}

/// One evaluation of the master-equation right-hand side,
/// −i[H, ρ] + γ Σ_n (Z_n ρ Z_n − ρ).
///
/// Because each Z_n is diagonal with ±1 entries, the dissipator acts
/// entrywise: (Σ_n Z_n ρ Z_n − ρ)_{ij} = −2·popcount(i⊕j)·ρ_{ij}. The
/// integrator uses the same identity; this entry point exists for tests and
/// for callers needing a single derivative.
pub fn lindblad_rhs(
    rho: &DenseOperator,
    hamiltonian: &DenseOperator,
    gamma: f64,
    n_qubits: usize,
) -> Result<DenseOperator> {
    if rho.dim() != hamiltonian.dim() {
        return Err(CoreError::DimensionMismatch {
            left: rho.dim(),
            right: hamiltonian.dim(),
        });
    }
    if rho.dim() != 1usize << n_qubits {
        return Err(CoreError::DimensionMismatch {
            left: rho.dim(),
            right: 1usize << n_qubits,
        });
    }
    if !(gamma >= 0.0) {
        return Err(CoreError::InvalidConfig(format!(
            "gamma must be nonnegative, got {gamma}"
        )));
    }
    let d = rho.dim();
    let hr = hamiltonian.matmul(rho)?;
    let rh = rho.matmul(hamiltonian)?;
    let mut out = hr.sub(&rh)?.scale(Complex64::new(0.0, -1.0));
    if gamma > 0.0 {
        for i in 0..d {
            for j in 0..d {
                let w = (i ^ j).count_ones() as f64;
                out[(i, j)] += Complex64::new(-2.0 * gamma * w, 0.0) * rho[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Integrate the schedule with fixed-step RK4 over `config.n_time_steps`
/// uniform steps, evaluating H(t) at the RK4 stage times.
///
/// The final state is re-Hermitized as (ρ+ρ†)/2 and trace-renormalized once
/// if the drift exceeds [`RENORMALIZE_THRESHOLD`]. `sample_count` > 0
/// requests that many evenly spaced snapshots (endpoints included).
pub fn evolve(
    initial: &DensityMatrix,
    schedule: &AnnealSchedule,
    config: &AnnealConfig,
    sample_count: usize,
) -> Result<EvolutionResult> {
    config.validate()?;
    initial.validate()?;
    if initial.dim() != schedule.dim() {
        return Err(CoreError::DimensionMismatch {
            left: initial.dim(),
            right: schedule.dim(),
        });
    }

    let d = schedule.dim();
    let n_steps = config.n_time_steps;
    let h = config.annealing_time / n_steps as f64;
    let mut ws = Workspace::new(d, schedule, config.gamma);
    ws.load_rho(initial.matrix());

    let sample_steps: Vec<usize> = if sample_count == 0 {
        Vec::new()
    } else if sample_count == 1 {
        vec![n_steps]
    } else {
        (0..sample_count)
            .map(|k| (k * n_steps + (sample_count - 1) / 2) / (sample_count - 1))
            .collect()
    };

    let mut sampled = Vec::with_capacity(sample_steps.len());
    let mut diagnostics = EvolutionDiagnostics::default();

    let mut record = |ws: &Workspace, step: usize, diag: &mut EvolutionDiagnostics| {
        if sample_steps.contains(&step) {
            let m = ws.extract_rho();
            diag.hermiticity_drift = diag.hermiticity_drift.max(m.hermiticity_deviation());
            sampled.push((step as f64 * h, DensityMatrix { matrix: m }));
        }
    };
    record(&ws, 0, &mut diagnostics);

    for step in 0..n_steps {
        let t = step as f64 * h;
        ws.rk4_step(t, h, config.annealing_time);
        let drift = (ws.trace_re() - 1.0).abs();
        diagnostics.trace_drift = diagnostics.trace_drift.max(drift);
        if !(drift <= TRACE_ABORT_THRESHOLD) {
            return Err(CoreError::NumericalAbort(format!(
                "trace drift {drift:.3e} after step {} of {n_steps} (T={}, dt={h:.3e}); \
                 increase n_time_steps",
                step + 1,
                config.annealing_time
            )));
        }
        record(&ws, step + 1, &mut diagnostics);
    }

    let mut final_matrix = ws.extract_rho();
    diagnostics.hermiticity_drift = diagnostics
        .hermiticity_drift
        .max(final_matrix.hermiticity_deviation());

    // (ρ + ρ†)/2
    let adj = final_matrix.adjoint();
    final_matrix = final_matrix.add(&adj)?.scale_re(0.5);
    let trace = final_matrix.trace().re;
    if (trace - 1.0).abs() > RENORMALIZE_THRESHOLD {
        final_matrix = final_matrix.scale_re(1.0 / trace);
        diagnostics.renormalized = true;
    }

    Ok(EvolutionResult {
        final_state: DensityMatrix {
            matrix: final_matrix,
        },
        sampled_states: sampled,
        diagnostics,
    })
}

/// Scratch buffers for the integrator, split into real and imaginary parts
/// so the inner loops autovectorize.
struct Workspace {
    d: usize,
    gamma: f64,
    // driver and (problem − driver) for fast H(t) assembly
    dr: Vec<f64>,
    di: Vec<f64>,
    mr: Vec<f64>,
    mi: Vec<f64>,
    // dephasing weights −2·popcount(i⊕j)
    damp: Vec<f64>,
    // state and RK4 scratch
    rr: Vec<f64>,
    ri: Vec<f64>,
    hr: Vec<f64>,
    hi: Vec<f64>,
    sr: Vec<f64>,
    si: Vec<f64>,
    er: Vec<f64>,
    ei: Vec<f64>,
    kr: Vec<f64>,
    ki: Vec<f64>,
    ar: Vec<f64>,
    ai: Vec<f64>,
}

impl Workspace {
    fn new(d: usize, schedule: &AnnealSchedule, gamma: f64) -> Self {
        let n = d * d;
        let mut ws = Self {
            d,
            gamma,
            dr: vec![0.0; n],
            di: vec![0.0; n],
            mr: vec![0.0; n],
            mi: vec![0.0; n],
            damp: vec![0.0; n],
            rr: vec![0.0; n],
            ri: vec![0.0; n],
            hr: vec![0.0; n],
            hi: vec![0.0; n],
            sr: vec![0.0; n],
            si: vec![0.0; n],
            er: vec![0.0; n],
            ei: vec![0.0; n],
            kr: vec![0.0; n],
            ki: vec![0.0; n],
            ar: vec![0.0; n],
            ai: vec![0.0; n],
        };
        let driver = schedule.driver().entries();
        let problem = schedule.problem().entries();
        for idx in 0..n {
            ws.dr[idx] = driver[idx].re;
            ws.di[idx] = driver[idx].im;
            ws.mr[idx] = problem[idx].re - driver[idx].re;
            ws.mi[idx] = problem[idx].im - driver[idx].im;
        }
        for i in 0..d {
            for j in 0..d {
                ws.damp[i * d + j] = -2.0 * ((i ^ j).count_ones() as f64);
            }
        }
        ws
    }

    fn load_rho(&mut self, rho: &DenseOperator) {
        for (idx, e) in rho.entries().iter().enumerate() {
            self.rr[idx] = e.re;
            self.ri[idx] = e.im;
        }
    }

    fn extract_rho(&self) -> DenseOperator {
        let entries = self
            .rr
            .iter()
            .zip(&self.ri)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        DenseOperator::from_entries(self.d, entries)
    }

    fn trace_re(&self) -> f64 {
        (0..self.d).map(|i| self.rr[i * self.d + i]).sum()
    }

    /// H(t) = driver + s·(problem − driver) into (hr, hi).
    fn build_h(&mut self, s: f64) {
        for idx in 0..self.d * self.d {
            self.hr[idx] = self.dr[idx] + s * self.mr[idx];
            self.hi[idx] = self.di[idx] + s * self.mi[idx];
        }
    }

    /// k = −i(E − E†) + γ·damp∘σ with E = H·σ, where σ is the stage state in
    /// (sr, si). Both H and σ are Hermitian, so one product suffices and the
    /// result is Hermitian by construction.
    fn stage_rhs(&mut self) {
        let d = self.d;
        gemm(
            d,
            &self.hr,
            &self.hi,
            &self.sr,
            &self.si,
            &mut self.er,
            &mut self.ei,
        );
        let g = self.gamma;
        for i in 0..d {
            for j in 0..d {
                let ij = i * d + j;
                let ji = j * d + i;
                // −i(E_ij − conj(E_ji)) = (Im E_ij + Im E_ji) − i(Re E_ij − Re E_ji)
                let mut re = self.ei[ij] + self.ei[ji];
                let mut im = self.er[ji] - self.er[ij];
                if g > 0.0 {
                    let w = g * self.damp[ij];
                    re += w * self.sr[ij];
                    im += w * self.si[ij];
                }
                self.kr[ij] = re;
                self.ki[ij] = im;
            }
        }
    }

    fn rk4_step(&mut self, t: f64, h: f64, annealing_time: f64) {
        let n = self.d * self.d;
        let s_mid = (t + 0.5 * h) / annealing_time;
        let s_end = (t + h) / annealing_time;

        // stage 1 at t
        self.sr.copy_from_slice(&self.rr);
        self.si.copy_from_slice(&self.ri);
        self.build_h(t / annealing_time);
        self.stage_rhs();
        self.ar.copy_from_slice(&self.kr);
        self.ai.copy_from_slice(&self.ki);
        for idx in 0..n {
            self.sr[idx] = self.rr[idx] + 0.5 * h * self.kr[idx];
            self.si[idx] = self.ri[idx] + 0.5 * h * self.ki[idx];
        }

        // stage 2 at t + h/2
        self.build_h(s_mid);
        self.stage_rhs();
        for idx in 0..n {
            self.ar[idx] += 2.0 * self.kr[idx];
            self.ai[idx] += 2.0 * self.ki[idx];
            self.sr[idx] = self.rr[idx] + 0.5 * h * self.kr[idx];
            self.si[idx] = self.ri[idx] + 0.5 * h * self.ki[idx];
        }

        // stage 3 at t + h/2 (same H as stage 2)
        self.stage_rhs();
        for idx in 0..n {
            self.ar[idx] += 2.0 * self.kr[idx];
            self.ai[idx] += 2.0 * self.ki[idx];
            self.sr[idx] = self.rr[idx] + h * self.kr[idx];
            self.si[idx] = self.ri[idx] + h * self.ki[idx];
        }

        // stage 4 at t + h
        self.build_h(s_end);
        self.stage_rhs();
        let w = h / 6.0;
        for idx in 0..n {
            self.rr[idx] += w * (self.ar[idx] + self.kr[idx]);
            self.ri[idx] += w * (self.ai[idx] + self.ki[idx]);
        }
    }
}

/// E = H·S on split real/imaginary buffers, row-major. The explicit
/// `mul_add` calls are what let LLVM emit vector FMAs; plain `a*b + c` is
/// not contracted under Rust's float semantics.
fn gemm(d: usize, hr: &[f64], hi: &[f64], sr: &[f64], si: &[f64], er: &mut [f64], ei: &mut [f64]) {
    er.fill(0.0);
    ei.fill(0.0);
    for i in 0..d {
        let row = i * d;
        let er_row = &mut er[row..row + d];
        let ei_row = &mut ei[row..row + d];
        for k in 0..d {
            let ar = hr[row + k];
            let ai = hi[row + k];
            let bcol = k * d;
            let br = &sr[bcol..bcol + d];
            let bi = &si[bcol..bcol + d];
            for j in 0..d {
                er_row[j] = ai.mul_add(-bi[j], ar.mul_add(br[j], er_row[j]));
                ei_row[j] = ai.mul_add(br[j], ar.mul_add(bi[j], ei_row[j]));
            }
        }
    }
}

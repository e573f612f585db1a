//! Problem and driving Hamiltonians, the inhomogeneous twist operator, and
//! the time-dependent annealing schedule.

use num_complex::Complex64;

use crate::dense::DenseOperator;
use crate::error::{CoreError, Result};
use crate::pauli::{PauliAxis, PauliSum, PauliTerm};

/// Per-qubit twist angles, in radians. Effects are 2π-periodic through
/// cos 2θ / sin 2θ, so no range restriction is imposed.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistAngles {
    thetas: Vec<f64>,
}

impl TwistAngles {
    pub fn new(thetas: Vec<f64>) -> Result<Self> {
        if thetas.iter().any(|t| !t.is_finite()) {
            return Err(CoreError::InvalidConfig(
                "twist angles must be finite".into(),
            ));
        }
        Ok(Self { thetas })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            thetas: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.thetas
    }
}

/// Which per-site Lindblad operator the dissipator uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LindbladAxis {
    Z,
}

/// Fixed parameters of one open-system annealing run.
///
/// Times are in ns, rates in GHz, with ħ = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnealConfig {
    /// Total annealing time T.
    pub annealing_time: f64,
    /// Number of uniform integrator steps on [0, T].
    pub n_time_steps: usize,
    /// Decoherence rate γ of the per-site dephasing dissipator.
    pub gamma: f64,
    pub lindblad_axis: LindbladAxis,
}

impl AnnealConfig {
    pub const DEFAULT_TIME_STEPS: usize = 2000;

    pub fn new(annealing_time: f64, n_time_steps: usize, gamma: f64) -> Result<Self> {
        let config = Self {
            annealing_time,
            n_time_steps,
            gamma,
            lindblad_axis: LindbladAxis::Z,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.annealing_time > 0.0) {
            return Err(CoreError::InvalidConfig(format!(
                "annealing_time must be positive, got {}",
                self.annealing_time
            )));
        }
        if self.n_time_steps < 2 {
            return Err(CoreError::InvalidConfig(format!(
                "n_time_steps must be at least 2, got {}",
                self.n_time_steps
            )));
        }
        if !(self.gamma >= 0.0) {
            return Err(CoreError::InvalidConfig(format!(
                "gamma must be nonnegative, got {}",
                self.gamma
            )));
        }
        Ok(())
    }
}

/// Linear interpolation H(t) = (1 − t/T)·driver + (t/T)·problem between a
/// (possibly twisted) driver and a problem Hamiltonian.
#[derive(Debug, Clone)]
pub struct AnnealSchedule {
    driver: DenseOperator,
    problem: DenseOperator,
    annealing_time: f64,
}

impl AnnealSchedule {
    pub fn new(driver: DenseOperator, problem: DenseOperator, annealing_time: f64) -> Result<Self> {
        if driver.dim() != problem.dim() {
            return Err(CoreError::DimensionMismatch {
                left: driver.dim(),
                right: problem.dim(),
            });
        }
        if !(annealing_time > 0.0) {
            return Err(CoreError::InvalidConfig(format!(
                "annealing_time must be positive, got {annealing_time}"
            )));
        }
        Ok(Self {
            driver,
            problem,
            annealing_time,
        })
    }

    pub fn driver(&self) -> &DenseOperator {
        &self.driver
    }

    pub fn problem(&self) -> &DenseOperator {
        &self.problem
    }

    pub fn annealing_time(&self) -> f64 {
        self.annealing_time
    }

    pub fn dim(&self) -> usize {
        self.driver.dim()
    }

    /// H(t) for t ∈ [0, T]. The endpoints reproduce the driver and problem
    /// matrices exactly.
    pub fn hamiltonian_at(&self, t: f64) -> Result<DenseOperator> {
        if !(0.0..=self.annealing_time).contains(&t) {
            return Err(CoreError::TimeOutOfRange {
                t,
                annealing_time: self.annealing_time,
            });
        }
        let s = t / self.annealing_time;
        let mut out = self.driver.scale_re(1.0 - s);
        let scaled = self.problem.scale_re(s);
        out = out.add(&scaled)?;
        Ok(out)
    }

    /// ∂H/∂t = (problem − driver)/T, constant for the linear schedule.
    pub fn time_derivative(&self) -> DenseOperator {
        self.problem
            .sub(&self.driver)
            .expect("driver and problem dimensions checked at construction")
            .scale_re(1.0 / self.annealing_time)
    }
}

/// The transverse-field driver −Σ_i X_i whose ground state is |+⟩^⊗n.
pub fn transverse_field_driver(n: usize) -> Result<PauliSum> {
    let mut sum = PauliSum::new(n)?;
    for i in 0..n {
        sum.push(PauliTerm::single(
            n,
            i,
            PauliAxis::X,
            Complex64::new(-1.0, 0.0),
        ))?;
    }
    Ok(sum)
}

/// Coefficients of the 4-qubit hydrogen-molecule Hamiltonian in the STO-3G
/// basis after the Jordan–Wigner transformation, at interatomic distance
/// 0.74 Å. Units are GHz.
const HYDROGEN_COEFFS: [(f64, &str); 15] = [
    (-0.09706626816762881, "IIII"),
    (0.17141282644776895, "ZIII"),
    (0.17141282644776892, "IZII"),
    (-0.22343153690813586, "IIZI"),
    (-0.22343153690813589, "IIIZ"),
    (0.16868898170361213, "ZZII"),
    (0.12062523483390428, "ZIZI"),
    (0.16592785033770355, "IZZI"),
    (0.16592785033770355, "ZIIZ"),
    (0.12062523483390428, "IZIZ"),
    (0.17441287612261597, "IIZZ"),
    (-0.04530261550379928, "YYXX"),
    (0.04530261550379928, "XYYX"),
    (0.04530261550379928, "YXXY"),
    (-0.04530261550379928, "XXYY"),
];

/// The 15-term hydrogen-molecule Hamiltonian.
pub fn hydrogen_hamiltonian() -> PauliSum {
    let terms = HYDROGEN_COEFFS
        .iter()
        .map(|(c, axes)| {
            PauliTerm::parse(Complex64::new(*c, 0.0), axes).expect("static axis strings are valid")
        })
        .collect();
    PauliSum::from_terms(4, terms).expect("static term list is consistent")
}

/// Deformed spin star: one central spin exchange-coupled to `n_peripheral`
/// spins with site-dependent phases,
///
///   H = ω σ₀^z + ω₁ Ĵ^z + J (σ₀⁺ Ĵ⁻ + σ₀⁻ Ĵ⁺),
///
/// with Ĵ⁺ = Σ_j e^{2πi j/N} σ_j⁺ and Ĵ⁻ its adjoint. Qubit 0 is the
/// central spin; peripheral sites are numbered j = 1..=N.
pub fn deformed_spin_star(
    n_peripheral: usize,
    omega: f64,
    omega1: f64,
    coupling: f64,
) -> Result<PauliSum> {
    if n_peripheral == 0 {
        return Err(CoreError::EmptyRegister);
    }
    let n = n_peripheral + 1;
    let mut sum = PauliSum::new(n)?;
    sum.push(PauliTerm::single(
        n,
        0,
        PauliAxis::Z,
        Complex64::new(omega, 0.0),
    ))?;
    for j in 1..n {
        sum.push(PauliTerm::single(
            n,
            j,
            PauliAxis::Z,
            Complex64::new(omega1, 0.0),
        ))?;
    }

    // σ⁺ = (X + iY)/2 and σ⁻ = (X − iY)/2 expanded into Pauli strings. The
    // individual terms carry complex weights; Hermiticity is restored when
    // the two exchange directions are summed.
    let half = Complex64::new(0.5, 0.0);
    let plus_parts = |sign: f64| {
        [
            (PauliAxis::X, half),
            (PauliAxis::Y, Complex64::new(0.0, sign * 0.5)),
        ]
    };
    for j in 1..n {
        let phi = 2.0 * std::f64::consts::PI * (j as f64) / (n_peripheral as f64);
        let phase = Complex64::from_polar(1.0, phi);
        // σ₀⁺ σ_j⁻ e^{-iφ_j} + σ₀⁻ σ_j⁺ e^{+iφ_j}
        for (dir_phase, central_sign, outer_sign) in [(phase.conj(), 1.0, -1.0), (phase, -1.0, 1.0)]
        {
            for (ax0, c0) in plus_parts(central_sign) {
                for (axj, cj) in plus_parts(outer_sign) {
                    let mut axes = vec![PauliAxis::I; n];
                    axes[0] = ax0;
                    axes[j] = axj;
                    sum.push(PauliTerm::new(
                        Complex64::new(coupling, 0.0) * dir_phase * c0 * cj,
                        axes,
                    ))?;
                }
            }
        }
    }
    Ok(sum)
}

/// The unitary Π_j exp(iθ_j σ_j^y), built as a tensor product of the 2×2
/// rotations cos θ·I + i sin θ·σ_y.
pub fn twist_operator(angles: &TwistAngles) -> DenseOperator {
    let mut u = DenseOperator::from_entries(1, vec![Complex64::new(1.0, 0.0)]);
    for &theta in angles.as_slice() {
        let (s, c) = theta.sin_cos();
        // cosθ·I + i sinθ·σ_y = [[c, s], [-s, c]]
        let rot = DenseOperator::from_entries(
            2,
            vec![
                Complex64::new(c, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::new(c, 0.0),
            ],
        );
        u = u.kron(&rot);
    }
    u
}

/// The deformed driving Hamiltonian U†·H_D·U.
///
/// For the standard transverse-field driver this equals
/// −Σ_j (cos 2θ_j X_j − sin 2θ_j Z_j), which spectral tests use as an
/// independent cross-check.
pub fn twisted_driver(driver: &PauliSum, angles: &TwistAngles) -> Result<DenseOperator> {
    if driver.n_qubits() != angles.len() {
        return Err(CoreError::AngleCountMismatch {
            angles: angles.len(),
            qubits: driver.n_qubits(),
        });
    }
    let h = driver.to_dense()?;
    let u = twist_operator(angles);
    u.adjoint().matmul(&h)?.matmul(&u)
}

/// The analytic expansion of the twisted transverse-field driver as a Pauli
/// sum: −Σ_j cos 2θ_j X_j + Σ_j sin 2θ_j Z_j.
pub fn twisted_driver_analytic(angles: &TwistAngles) -> Result<PauliSum> {
    let n = angles.len();
    let mut sum = PauliSum::new(n)?;
    for (j, &theta) in angles.as_slice().iter().enumerate() {
        let (s2, c2) = (2.0 * theta).sin_cos();
        sum.push(PauliTerm::single(
            n,
            j,
            PauliAxis::X,
            Complex64::new(-c2, 0.0),
        ))?;
        sum.push(PauliTerm::single(
            n,
            j,
            PauliAxis::Z,
            Complex64::new(s2, 0.0),
        ))?;
    }
    Ok(sum)
}

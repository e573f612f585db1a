//! Desk-scale simulation of quantum annealing with variationally twisted
//! transverse fields.
//!
//! The crate builds spin Hamiltonians symbolically ([`pauli`]), realizes them
//! as dense matrices ([`dense`]), integrates the Lindblad master equation
//! along a linear annealing schedule ([`lindblad`]), inspects instantaneous
//! spectra and adiabaticity ([`spectral`]), and runs the outer
//! gradient-descent loop over per-qubit twist angles ([`variational`]).
//! Scalar figures of merit live in [`diagnostics`] and CSV emission in
//! [`report`].
//!
//! Units: energies in GHz, times in ns, ħ = 1.

// Guards are written `!(x >= 0.0)` so NaN parameters fail validation; the
// negation is load-bearing.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dense;
pub mod diagnostics;
pub mod error;
pub mod lindblad;
pub mod models;
pub mod pauli;
pub mod report;
pub mod spectral;
pub mod variational;

pub use dense::DenseOperator;
pub use error::{CoreError, Result};
pub use lindblad::{evolve, ground_state_density, DensityMatrix, EvolutionResult};
pub use models::{
    deformed_spin_star, hydrogen_hamiltonian, transverse_field_driver, twist_operator,
    twisted_driver, AnnealConfig, AnnealSchedule, TwistAngles,
};
pub use pauli::{PauliAxis, PauliSum, PauliTerm};
pub use spectral::{eigendecompose, spectrum_trace, EigenDecomposition, SpectrumTrace};
pub use variational::{
    anneal_time_scan, estimate_energy, gradient_descent, numerical_gradient, TimeScanResult,
    VariationalState,
};

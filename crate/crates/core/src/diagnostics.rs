//! Scalar figures of merit: purity, ground-state overlap, estimation error.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::lindblad::DensityMatrix;

/// Purity P = Re Tr(ρ²); 1 for pure states, 1/d for the maximally mixed state.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix()
        .trace_product(rho.matrix())
        .expect("dimensions match by construction")
        .re
}

/// |⟨a|b⟩| for two normalized state vectors.
pub fn overlap(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(CoreError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    for v in [a, b] {
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(CoreError::NotNormalized { norm });
        }
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        .norm())
}

/// |E^(ann) − E₀|, the gap between the measured post-anneal energy and the
/// true ground-state energy.
pub fn estimation_error(e_ann: f64, e_exact: f64) -> f64 {
    (e_ann - e_exact).abs()
}

/// One row of the per-experiment merit CSV.
#[derive(Debug, Clone, Copy)]
pub struct MeritReport {
    pub annealing_time: f64,
    pub gamma: f64,
    pub step: usize,
    pub energy: f64,
    pub error: f64,
    pub purity: f64,
    pub overlap: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseOperator;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn purity_of_pure_and_mixed_states() {
        let pure = DensityMatrix::from_pure_state(&[c(1.0), c(0.0)]).unwrap();
        assert!((purity(&pure) - 1.0).abs() < 1e-15);

        let mixed = DensityMatrix::new(DenseOperator::identity(2).scale(c(0.5))).unwrap();
        assert!((purity(&mixed) - 0.5).abs() < 1e-15);

        let mut m = DenseOperator::zeros(2);
        m[(0, 0)] = c(0.75);
        m[(1, 1)] = c(0.25);
        let diag = DensityMatrix::new(m).unwrap();
        assert!((purity(&diag) - 0.625).abs() < 1e-15);
    }

    #[test]
    fn purity_equals_sum_of_squared_eigenvalues() {
        let mut m = DenseOperator::zeros(2);
        m[(0, 0)] = c(0.7);
        m[(1, 1)] = c(0.3);
        m[(0, 1)] = c(0.2);
        m[(1, 0)] = c(0.2);
        let rho = DensityMatrix::new(m).unwrap();
        let eig = crate::spectral::eigendecompose(rho.matrix()).unwrap();
        let from_eig: f64 = eig.values.iter().map(|l| l * l).sum();
        assert!((purity(&rho) - from_eig).abs() < 1e-10);
    }

    #[test]
    fn overlap_basic_cases() {
        let zero = [c(1.0), c(0.0)];
        let one = [c(0.0), c(1.0)];
        let s = 1.0 / 2f64.sqrt();
        let plus = [c(s), c(s)];
        assert!((overlap(&zero, &zero).unwrap() - 1.0).abs() < 1e-15);
        assert!(overlap(&zero, &one).unwrap() < 1e-15);
        assert!((overlap(&plus, &zero).unwrap() - s).abs() < 1e-15);
    }

    #[test]
    fn overlap_is_symmetric_and_phase_invariant() {
        let s = 1.0 / 2f64.sqrt();
        let a = [c(s), Complex64::new(0.0, s)];
        let b = [c(0.6), c(0.8)];
        let ab = overlap(&a, &b).unwrap();
        let ba = overlap(&b, &a).unwrap();
        assert_eq!(ab, ba);
        let phase = Complex64::from_polar(1.0, 1.234);
        let a_rot: Vec<Complex64> = a.iter().map(|x| x * phase).collect();
        assert!((overlap(&a_rot, &b).unwrap() - ab).abs() < 1e-15);
    }

    #[test]
    fn overlap_rejects_unnormalized_input() {
        let bad = [c(1.0), c(1.0)];
        let good = [c(1.0), c(0.0)];
        assert!(matches!(
            overlap(&bad, &good),
            Err(CoreError::NotNormalized { .. })
        ));
    }

    #[test]
    fn estimation_error_cases() {
        assert_eq!(estimation_error(-1.0, -1.0), 0.0);
        assert!((estimation_error(-0.9, -1.0) - 0.1).abs() < 1e-15);
        assert!(estimation_error(2.0, -3.0) >= 0.0);
    }
}

//! Dense complex-matrix realization of operators on the full Hilbert space.
//!
//! All operators in this crate act on registers of n qubits, so the matrix
//! dimension is always d = 2^n. Matrices are stored row-major.

use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// A d×d complex matrix with d a power of two.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseOperator {
    /// Zero matrix of the given dimension. `dim` must be a power of two.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim.is_power_of_two(), "operator dimension must be 2^n");
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a row-major entry buffer.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Self {
        assert!(dim.is_power_of_two(), "operator dimension must be 2^n");
        assert_eq!(entries.len(), dim * dim);
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.entries
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(CoreError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.entries[k * d..(k + 1) * d];
                let orow = &mut out.entries[i * d..(i + 1) * d];
                for (o, b) in orow.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let mut out = self.clone();
        for (o, b) in out.entries.iter_mut().zip(&other.entries) {
            *o += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let mut out = self.clone();
        for (o, b) in out.entries.iter_mut().zip(&other.entries) {
            *o -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e *= factor;
        }
        out
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.entries[j * d + i] = self.entries[i * d + j].conj();
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let d = da * db;
        let mut out = Self::zeros(d);
        for ia in 0..da {
            for ja in 0..da {
                let a = self.entries[ia * da + ja];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for ib in 0..db {
                    for jb in 0..db {
                        out.entries[(ia * db + ib) * d + (ja * db + jb)] =
                            a * other.entries[ib * db + jb];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    /// Tr(self · other) without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<Complex64> {
        self.check_same_dim(other)?;
        let d = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += self.entries[i * d + j] * other.entries[j * d + i];
            }
        }
        Ok(acc)
    }

    /// Max-norm distance from Hermiticity, `max_ij |M_ij - conj(M_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                let delta = self.entries[i * d + j] - self.entries[j * d + i].conj();
                dev = dev.max(delta.norm());
            }
        }
        dev
    }

    /// Entrywise max-norm of the difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// `Re Tr[self · rho]` with a guard on the imaginary part; `self` is
    /// expected to be Hermitian and `rho` a density matrix.
    pub fn expectation(&self, rho: &Self) -> Result<f64> {
        let tr = self.trace_product(rho)?;
        if tr.im.abs() > 1e-9 {
            return Err(CoreError::NumericalAbort(format!(
                "expectation value trace has imaginary part {:.3e}",
                tr.im
            )));
        }
        Ok(tr.re)
    }

    /// Apply to a state vector: `self · v`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(CoreError::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d];
        for (row, out_i) in self.entries.chunks_exact(d).zip(&mut out) {
            *out_i = row.iter().zip(v).map(|(m, x)| m * x).sum();
        }
        Ok(out)
    }
}

impl std::ops::Index<(usize, usize)> for DenseOperator {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseOperator {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        let d = self.dim;
        &mut self.entries[i * d + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_x() -> DenseOperator {
        DenseOperator::from_entries(2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
    }

    fn sigma_y() -> DenseOperator {
        DenseOperator::from_entries(2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
    }

    fn sigma_z() -> DenseOperator {
        DenseOperator::from_entries(2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
    }

    #[test]
    fn adjoint_of_sigma_y_is_itself() {
        let y = sigma_y();
        assert_eq!(y.adjoint(), y);
    }

    #[test]
    fn identity_is_neutral_for_matmul() {
        let a = DenseOperator::from_entries(2, vec![c(1., 2.), c(3., -1.), c(0., 0.5), c(-2., 0.)]);
        let id = DenseOperator::identity(2);
        assert_eq!(id.matmul(&a).unwrap(), a);
        assert_eq!(a.matmul(&id).unwrap(), a);
    }

    #[test]
    fn pauli_product_xy_is_i_z() {
        let xy = sigma_x().matmul(&sigma_y()).unwrap();
        let iz = sigma_z().scale(c(0., 1.));
        assert!(xy.max_abs_diff(&iz).unwrap() == 0.0);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = DenseOperator::zeros(2);
        let b = DenseOperator::zeros(4);
        assert!(matches!(
            a.matmul(&b),
            Err(CoreError::DimensionMismatch { left: 2, right: 4 })
        ));
    }

    #[test]
    fn trace_product_matches_full_product() {
        let a = sigma_x().add(&sigma_z().scale(c(0.5, 0.))).unwrap();
        let b = sigma_y().add(&DenseOperator::identity(2)).unwrap();
        let full = a.matmul(&b).unwrap().trace();
        let fast = a.trace_product(&b).unwrap();
        assert!((full - fast).norm() < 1e-15);
    }

    #[test]
    fn kron_dimensions_and_entries() {
        let zx = sigma_z().kron(&sigma_x());
        assert_eq!(zx.dim(), 4);
        assert_eq!(zx[(0, 1)], c(1., 0.));
        assert_eq!(zx[(2, 3)], c(-1., 0.));
    }
}

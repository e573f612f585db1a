//! Brute-force eigensolver used as an independent oracle by the integration
//! and acceptance tests.
//!
//! A complex Hermitian matrix H = A + iB is embedded as the real symmetric
//! matrix S = [[A, −B], [B, A]] of twice the size, which carries every
//! eigenvalue of H twice. S is then diagonalized by classic cyclic Jacobi
//! rotations. Nothing here touches the library's eigensolver path.

use num_complex::Complex64;
use twistqa_core::DenseOperator;

/// Eigenvalues (ascending) and eigenvectors (columns) of a real symmetric
/// matrix via cyclic Jacobi rotations.
#[allow(clippy::needless_range_loop)] // textbook index form kept on purpose
pub fn jacobi_symmetric(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let frobenius: f64 = a
        .iter()
        .flat_map(|r| r.iter())
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    let tol = 1e-14 * frobenius.max(1.0);

    for _sweep in 0..200 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() <= tol / (n as f64) {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values: Vec<f64> = order.iter().map(|&i| a[i][i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row][col]).collect())
        .collect();
    (values, vectors)
}

fn real_embedding(m: &DenseOperator) -> Vec<Vec<f64>> {
    let d = m.dim();
    let mut s = vec![vec![0.0; 2 * d]; 2 * d];
    for i in 0..d {
        for j in 0..d {
            let e = m[(i, j)];
            s[i][j] = e.re;
            s[i + d][j + d] = e.re;
            s[i][j + d] = -e.im;
            s[i + d][j] = e.im;
        }
    }
    s
}

/// Eigenvalues of a complex Hermitian matrix, ascending. Each eigenvalue of
/// the embedding appears twice; representatives are taken pairwise after
/// sorting.
pub fn hermitian_eigenvalues(m: &DenseOperator) -> Vec<f64> {
    let (doubled, _) = jacobi_symmetric(real_embedding(m));
    doubled.into_iter().step_by(2).collect()
}

/// Ground eigenvalue and eigenvector of a complex Hermitian matrix. The
/// embedding eigenvector (u; v) maps back to u + iv.
pub fn hermitian_ground_state(m: &DenseOperator) -> (f64, Vec<Complex64>) {
    let d = m.dim();
    let (values, vectors) = jacobi_symmetric(real_embedding(m));
    let value = values[0];
    let w = &vectors[0];
    let mut state: Vec<Complex64> = (0..d).map(|i| Complex64::new(w[i], w[i + d])).collect();
    let norm: f64 = state.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in &mut state {
        *c /= norm;
    }
    (value, state)
}

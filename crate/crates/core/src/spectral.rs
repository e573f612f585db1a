//! Instantaneous spectra, energy gaps, and adiabatic-condition diagnostics
//! along the annealing schedule.

use num_complex::Complex64;

use crate::dense::DenseOperator;
use crate::error::{CoreError, Result};
use crate::models::AnnealSchedule;

/// Hermiticity tolerance accepted by [`eigendecompose`].
pub const HERMITICITY_TOLERANCE: f64 = 1e-9;

/// Eigenvalues within this distance are treated as degenerate for ordering
/// and for the adiabatic metric.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Result of a Hermitian eigendecomposition with a deterministic ordering
/// and phase convention.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, `vectors[k]` belonging to `values[k]`.
    pub vectors: Vec<Vec<Complex64>>,
}

impl EigenDecomposition {
    pub fn ground_value(&self) -> f64 {
        self.values[0]
    }

    pub fn ground_vector(&self) -> &[Complex64] {
        &self.vectors[0]
    }
}

/// Eigendecompose a Hermitian operator.
///
/// Eigenvalues are ascending. Within a near-degenerate cluster
/// (spacing ≤ [`DEGENERACY_TOLERANCE`]) eigenpairs are ordered by the index
/// of the largest-magnitude eigenvector component, and every eigenvector's
/// global phase is fixed by making its largest-magnitude component real and
/// positive, so repeated calls give identical output.
pub fn eigendecompose(op: &DenseOperator) -> Result<EigenDecomposition> {
    let dev = op.hermiticity_deviation();
    if dev > HERMITICITY_TOLERANCE {
        return Err(CoreError::NotHermitian { deviation: dev });
    }
    let d = op.dim();
    let m = nalgebra::DMatrix::<Complex64>::from_fn(d, d, |i, j| op[(i, j)]);
    let eigen = m.symmetric_eigen();

    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..d)
        .map(|k| {
            let v: Vec<Complex64> = eigen.eigenvectors.column(k).iter().copied().collect();
            (eigen.eigenvalues[k], v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Deterministic tie-break inside near-degenerate clusters.
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && (pairs[end].0 - pairs[end - 1].0).abs() <= DEGENERACY_TOLERANCE {
            end += 1;
        }
        if end - start > 1 {
            pairs[start..end].sort_by_key(|(_, v)| argmax_magnitude(v));
        }
        start = end;
    }

    let mut values = Vec::with_capacity(d);
    let mut vectors = Vec::with_capacity(d);
    for (value, mut v) in pairs {
        fix_phase(&mut v);
        values.push(value);
        vectors.push(v);
    }
    Ok(EigenDecomposition { values, vectors })
}

fn argmax_magnitude(v: &[Complex64]) -> usize {
    let mut best = 0;
    let mut best_norm = -1.0;
    for (i, c) in v.iter().enumerate() {
        let n = c.norm_sqr();
        if n > best_norm {
            best_norm = n;
            best = i;
        }
    }
    best
}

/// Rotate the global phase so the largest-magnitude component is real-positive.
fn fix_phase(v: &mut [Complex64]) {
    let i = argmax_magnitude(v);
    let pivot = v[i];
    if pivot.norm() == 0.0 {
        return;
    }
    let phase = pivot.conj() / pivot.norm();
    for c in v.iter_mut() {
        *c *= phase;
    }
}

/// Instantaneous spectrum sampled along the schedule.
#[derive(Debug, Clone)]
pub struct SpectrumTrace {
    /// Sample times, uniform on [0, T].
    pub times: Vec<f64>,
    /// `levels[k]` holds the lowest eigenvalues at `times[k]`, ascending.
    pub levels: Vec<Vec<f64>>,
}

impl SpectrumTrace {
    pub fn n_levels(&self) -> usize {
        self.levels.first().map_or(0, Vec::len)
    }
}

/// Pointwise gap E_j − E₀ along the schedule, with its minimum.
#[derive(Debug, Clone)]
pub struct GapTrace {
    pub level: usize,
    pub times: Vec<f64>,
    pub gaps: Vec<f64>,
    pub min_gap: f64,
    pub min_gap_time: f64,
}

/// Transition amplitudes |⟨E_j|∂H/∂t|E₀⟩| and the adiabatic metric
/// A_j = |⟨E_j|∂H/∂t|E₀⟩| / (E_j − E₀)² along the schedule. Entries are
/// `None` where E_j and E₀ are degenerate.
#[derive(Debug, Clone)]
pub struct AdiabaticTrace {
    pub level: usize,
    pub times: Vec<f64>,
    pub numerators: Vec<Option<f64>>,
    pub metric: Vec<Option<f64>>,
}

impl AdiabaticTrace {
    pub fn max_numerator(&self) -> Option<f64> {
        self.numerators
            .iter()
            .flatten()
            .copied()
            .fold(None, |acc, x| Some(acc.map_or(x, |a: f64| a.max(x))))
    }

    pub fn max_metric(&self) -> Option<f64> {
        self.metric
            .iter()
            .flatten()
            .copied()
            .fold(None, |acc, x| Some(acc.map_or(x, |a: f64| a.max(x))))
    }
}

/// Eigendecompose H(t) on a uniform `n_points` grid and keep the lowest
/// `n_levels` eigenvalues at each point.
///
/// Consecutive ground-state eigenvectors are checked for continuity
/// (overlap > 0.9); failures are logged, not fatal, since they usually mean
/// a level crossing was sampled too coarsely.
pub fn spectrum_trace(
    schedule: &AnnealSchedule,
    n_points: usize,
    n_levels: usize,
) -> Result<SpectrumTrace> {
    if n_points < 2 {
        return Err(CoreError::InvalidConfig(format!(
            "spectrum trace needs at least 2 points, got {n_points}"
        )));
    }
    let n_levels = n_levels.min(schedule.dim());
    let times = sample_times(schedule.annealing_time(), n_points);
    let mut levels = Vec::with_capacity(n_points);
    let mut previous_ground: Option<Vec<Complex64>> = None;
    for &t in &times {
        let eigen = eigendecompose(&schedule.hamiltonian_at(t)?)?;
        if let Some(prev) = &previous_ground {
            let overlap = inner_magnitude(prev, eigen.ground_vector());
            if overlap <= 0.9 {
                log::warn!(
                    "ground-state continuity overlap {overlap:.3} at t={t:.6}; \
                     possible level mislabeling"
                );
            }
        }
        previous_ground = Some(eigen.ground_vector().to_vec());
        levels.push(eigen.values[..n_levels].to_vec());
    }
    Ok(SpectrumTrace { times, levels })
}

/// Pointwise E_j − E₀ from a spectrum trace.
pub fn gap_trace(trace: &SpectrumTrace, level: usize) -> Result<GapTrace> {
    if level == 0 || level >= trace.n_levels() {
        return Err(CoreError::LevelOutOfRange {
            level,
            available: trace.n_levels(),
        });
    }
    let gaps: Vec<f64> = trace.levels.iter().map(|e| e[level] - e[0]).collect();
    let (min_idx, min_gap) = gaps
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("trace has at least two points");
    Ok(GapTrace {
        level,
        times: trace.times.clone(),
        gaps,
        min_gap,
        min_gap_time: trace.times[min_idx],
    })
}

/// Transition amplitude and adiabatic metric for level `j` along the
/// schedule. The numerator uses the exact constant ∂H/∂t of the linear
/// schedule; degenerate points are reported as missing rather than infinite.
pub fn adiabatic_trace(
    schedule: &AnnealSchedule,
    n_points: usize,
    level: usize,
) -> Result<AdiabaticTrace> {
    if n_points < 2 {
        return Err(CoreError::InvalidConfig(format!(
            "adiabatic trace needs at least 2 points, got {n_points}"
        )));
    }
    if level == 0 || level >= schedule.dim() {
        return Err(CoreError::LevelOutOfRange {
            level,
            available: schedule.dim(),
        });
    }
    let dh_dt = schedule.time_derivative();
    let times = sample_times(schedule.annealing_time(), n_points);
    let mut numerators = Vec::with_capacity(n_points);
    let mut metric = Vec::with_capacity(n_points);
    for &t in &times {
        let eigen = eigendecompose(&schedule.hamiltonian_at(t)?)?;
        let gap = eigen.values[level] - eigen.values[0];
        if gap < 1e-10 {
            numerators.push(None);
            metric.push(None);
            continue;
        }
        let applied = dh_dt.apply(eigen.ground_vector())?;
        let amplitude = inner_product(&eigen.vectors[level], &applied).norm();
        numerators.push(Some(amplitude));
        metric.push(Some(amplitude / (gap * gap)));
    }
    Ok(AdiabaticTrace {
        level,
        times,
        numerators,
        metric,
    })
}

fn sample_times(annealing_time: f64, n_points: usize) -> Vec<f64> {
    (0..n_points)
        .map(|k| annealing_time * (k as f64) / ((n_points - 1) as f64))
        .collect()
}

fn inner_product(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn inner_magnitude(a: &[Complex64], b: &[Complex64]) -> f64 {
    inner_product(a, b).norm()
}

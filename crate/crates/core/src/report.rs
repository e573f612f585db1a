//! CSV emitters for the schemas produced by runs, scans, and spectral
//! diagnostics. Headers are always written; no NaN or infinite value is ever
//! emitted (missing adiabatic points produce empty fields).

use std::io::Write;

use crate::diagnostics::MeritReport;
use crate::error::Result;
use crate::lindblad::DensityMatrix;
use crate::spectral::{AdiabaticTrace, GapTrace, SpectrumTrace};
use crate::variational::{TimeScanResult, VariationalState};

/// Format a float with 17 significant digits so that parsing it back
/// reproduces the exact f64.
pub fn format_f64(x: f64) -> String {
    debug_assert!(x.is_finite(), "refusing to serialize non-finite value");
    format!("{x:.16e}")
}

/// `trajectory.csv`: step, energy, error, theta_0..theta_{L-1}.
pub fn write_trajectory<W: Write>(w: &mut W, state: &VariationalState) -> Result<()> {
    let n_angles = state.thetas.len();
    write!(w, "step,energy,error")?;
    for j in 0..n_angles {
        write!(w, ",theta_{j}")?;
    }
    writeln!(w)?;
    for entry in &state.history {
        write!(
            w,
            "{},{},{}",
            entry.step,
            format_f64(entry.energy),
            format_f64(entry.error)
        )?;
        for theta in entry.thetas.as_slice() {
            write!(w, ",{}", format_f64(*theta))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// `timescan.csv`: T, conventional energy/error, twisted energy/error.
pub fn write_timescan<W: Write>(w: &mut W, scan: &TimeScanResult) -> Result<()> {
    writeln!(
        w,
        "T,conventional_energy,conventional_error,twisted_energy,twisted_error"
    )?;
    for e in &scan.entries {
        writeln!(
            w,
            "{},{},{},{},{}",
            format_f64(e.annealing_time),
            format_f64(e.conventional_energy),
            format_f64(e.conventional_error),
            format_f64(e.twisted_energy),
            format_f64(e.twisted_error)
        )?;
    }
    Ok(())
}

/// `spectrum.csv`: t, E0..E{k-1}.
pub fn write_spectrum<W: Write>(w: &mut W, trace: &SpectrumTrace) -> Result<()> {
    write!(w, "t")?;
    for k in 0..trace.n_levels() {
        write!(w, ",E{k}")?;
    }
    writeln!(w)?;
    for (t, levels) in trace.times.iter().zip(&trace.levels) {
        write!(w, "{}", format_f64(*t))?;
        for e in levels {
            write!(w, ",{}", format_f64(*e))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// `gaps.csv`: t, gap_j for each supplied trace.
pub fn write_gaps<W: Write>(w: &mut W, traces: &[GapTrace]) -> Result<()> {
    write!(w, "t")?;
    for trace in traces {
        write!(w, ",gap_{}", trace.level)?;
    }
    writeln!(w)?;
    if traces.is_empty() {
        return Ok(());
    }
    for (i, t) in traces[0].times.iter().enumerate() {
        write!(w, "{}", format_f64(*t))?;
        for trace in traces {
            write!(w, ",{}", format_f64(trace.gaps[i]))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// `adiabatic.csv`: t, numer_j, A_j for each supplied trace. Degenerate
/// points are written as empty fields.
pub fn write_adiabatic<W: Write>(w: &mut W, traces: &[AdiabaticTrace]) -> Result<()> {
    write!(w, "t")?;
    for trace in traces {
        write!(w, ",numer_{},A_{}", trace.level, trace.level)?;
    }
    writeln!(w)?;
    if traces.is_empty() {
        return Ok(());
    }
    for (i, t) in traces[0].times.iter().enumerate() {
        write!(w, "{}", format_f64(*t))?;
        for trace in traces {
            match (trace.numerators[i], trace.metric[i]) {
                (Some(n), Some(a)) => write!(w, ",{},{}", format_f64(n), format_f64(a))?,
                _ => write!(w, ",,")?,
            }
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Merit CSV: one row per experiment.
pub fn write_merit<W: Write>(w: &mut W, rows: &[MeritReport]) -> Result<()> {
    writeln!(w, "T,gamma,step,energy,error,purity,overlap")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            format_f64(r.annealing_time),
            format_f64(r.gamma),
            r.step,
            format_f64(r.energy),
            format_f64(r.error),
            format_f64(r.purity),
            format_f64(r.overlap)
        )?;
    }
    Ok(())
}

/// Snapshot CSV for sampled evolution states: t, trace_re, purity, energy.
pub fn write_snapshots<W: Write>(
    w: &mut W,
    samples: &[(f64, DensityMatrix)],
    problem: &crate::dense::DenseOperator,
) -> Result<()> {
    writeln!(w, "t,trace_re,purity,energy")?;
    for (t, rho) in samples {
        let energy = problem.expectation(rho.matrix())?;
        writeln!(
            w,
            "{},{},{},{}",
            format_f64(*t),
            format_f64(rho.trace().re),
            format_f64(crate::diagnostics::purity(rho)),
            format_f64(energy)
        )?;
    }
    Ok(())
}

/// Row-major complex doubles, little-endian, for the optional full-matrix
/// binary dump.
pub fn write_state_binary<W: Write>(w: &mut W, rho: &DensityMatrix) -> Result<()> {
    for e in rho.matrix().entries() {
        w.write_all(&e.re.to_le_bytes())?;
        w.write_all(&e.im.to_le_bytes())?;
    }
    Ok(())
}

//! Data-file exports. All CSV schemas and JSON summaries are stable
//! interfaces consumed by external plotting tools.

use crate::gbz::{CriticalPeriodResult, FloquetGbz};
use crate::observables::{default_im_tol, LyapunovTrace, PhaseDiagram};
use crate::resultant::GbzPoint;
use crate::scalar::Real;
use crate::spectrum::SpectrumSet;
use serde_json::{json, Value};
use std::fmt::Display;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

fn writer(path: &Path) -> std::io::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// GBZ / aGBZ curve: `re_beta, im_beta, ell, theta, re_E, im_E`.
pub fn write_gbz_csv<T: Real>(path: &Path, points: &[GbzPoint<T>]) -> std::io::Result<()> {
    let mut w = writer(path)?;
    writeln!(w, "re_beta,im_beta,ell,theta,re_E,im_E")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            p.beta.re, p.beta.im, p.ell, p.theta, p.energy.re, p.energy.im
        )?;
    }
    w.flush()
}

/// Bare spectrum: `re_E, im_E`.
pub fn write_spectrum_csv<T: Real>(path: &Path, s: &SpectrumSet<T>) -> std::io::Result<()> {
    let mut w = writer(path)?;
    writeln!(w, "re_E,im_E")?;
    for e in &s.energies {
        writeln!(w, "{},{}", e.re, e.im)?;
    }
    w.flush()
}

/// Oracle spectrum: `re_E, im_E, L, T, model`.
pub fn write_oracle_csv<T: Real>(
    path: &Path,
    s: &SpectrumSet<T>,
    cells: usize,
    period: impl Display,
    model: &str,
) -> std::io::Result<()> {
    let mut w = writer(path)?;
    writeln!(w, "re_E,im_E,L,T,model")?;
    for e in &s.energies {
        writeln!(w, "{},{},{},{},{}", e.re, e.im, cells, period, model)?;
    }
    w.flush()
}

/// Phase diagram: `axis1, axis2, eta` (missing cells print `nan`).
pub fn write_phase_diagram_csv<T: Real>(path: &Path, pd: &PhaseDiagram<T>) -> std::io::Result<()> {
    let mut w = writer(path)?;
    writeln!(w, "axis1,axis2,eta")?;
    for (i1, a1) in pd.axis1.iter().enumerate() {
        for (i2, a2) in pd.axis2.iter().enumerate() {
            match pd.value(i1, i2) {
                Some(eta) => writeln!(w, "{},{},{}", a1, a2, eta)?,
                None => writeln!(w, "{},{},nan", a1, a2)?,
            }
        }
    }
    w.flush()
}

pub fn phase_diagram_meta<T: Real>(pd: &PhaseDiagram<T>) -> Value {
    json!({
        "model": pd.model.name(),
        "axis1_name": pd.axis1_name,
        "axis2_name": pd.axis2_name,
        "axis1": pd.axis1,
        "axis2": pd.axis2,
        "fixed": pd.fixed,
        "im_tol_rel": pd.im_tol_rel,
        "n_missing": pd.values.iter().filter(|v| v.is_none()).count(),
    })
}

/// Lyapunov trace: `n_period, log_norm, lambda_est`.
pub fn write_lyapunov_csv<T: Real>(path: &Path, trace: &LyapunovTrace<T>) -> std::io::Result<()> {
    let mut w = writer(path)?;
    writeln!(w, "n_period,log_norm,lambda_est")?;
    for (k, (ln, le)) in trace.log_norm.iter().zip(trace.lambda_est.iter()).enumerate() {
        writeln!(w, "{},{},{}", k, ln, le)?;
    }
    w.flush()
}

/// Summary of a GBZ run: `{T, cutoffUsed, converged, n_points, n_complex_E}`.
pub fn gbz_summary<T: Real>(g: &FloquetGbz<T>) -> Value {
    let im_tol = default_im_tol(&g.spectrum);
    let n_complex = g
        .spectrum
        .energies
        .iter()
        .filter(|e| e.im.abs() > im_tol)
        .count();
    json!({
        "T": g.period.map(|p| p.to_f64().unwrap()),
        "cutoffUsed": g.cutoff_used,
        "converged": g.converged,
        "n_points": g.points.len(),
        "n_complex_E": n_complex,
    })
}

/// Critical-period gap samples: `T, distance`.
pub fn write_gap_csv<T: Real>(path: &Path, result: &CriticalPeriodResult<T>) -> std::io::Result<()> {
    let mut w = writer(path)?;
    writeln!(w, "T,distance")?;
    for (t, d) in &result.gap_samples {
        writeln!(w, "{},{}", t, d)?;
    }
    w.flush()
}

pub fn critical_period_summary<T: Real>(result: &CriticalPeriodResult<T>) -> Value {
    json!({
        "Tc": result.t_c.to_f64().unwrap(),
        "bracket_lo": result.bracket.0.to_f64().unwrap(),
        "bracket_hi": result.bracket.1.to_f64().unwrap(),
        "touch_curvature": result.touch_curvature.map(|c| c.to_f64().unwrap()),
        "n_gap_samples": result.gap_samples.len(),
    })
}

/// Write a JSON value with a trailing newline.
pub fn write_json(path: &Path, value: &Value) -> std::io::Result<()> {
    let mut w = writer(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()
}

//! Derived quantities: complex-fraction eta, phase-diagram sweeps, Hausdorff
//! distances, and Lyapunov-exponent dynamics.

use crate::error::{Error, Result};
use crate::lattice::{build_model, floquet_operator, quasienergies, BoundaryCond, DriveProtocol, ModelKind};
use crate::scalar::{r, Real, C};
use crate::spectrum::SpectrumSet;
use num_traits::Zero;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Relative factor for the default complexity threshold: `imTol = 1e-8 *
/// spectral radius` keeps the criterion dimensionless.
pub const DEFAULT_IM_TOL_REL: f64 = 1e-8;

/// Default `imTol` for a spectrum: `1e-8` times its spectral radius.
pub fn default_im_tol<T: Real>(s: &SpectrumSet<T>) -> T {
    let radius = s.spectral_radius().max(T::min_positive_value());
    r::<T>(DEFAULT_IM_TOL_REL) * radius
}

/// Fraction of eigenvalues with `|Im E| > im_tol`.
pub fn eta_fraction<T: Real>(s: &SpectrumSet<T>, im_tol: T) -> Result<T, T> {
    s.eta(im_tol)
}

/// Symmetric Hausdorff distance between two point sets in the complex plane.
pub fn hausdorff<T: Real>(a: &[C<T>], b: &[C<T>]) -> Result<T, T> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let directed = |x: &[C<T>], y: &[C<T>]| {
        x.iter().fold(T::zero(), |worst, p| {
            let nearest = y.iter().fold(T::infinity(), |acc, q| acc.min((p - q).norm()));
            worst.max(nearest)
        })
    };
    Ok(directed(a, b).max(directed(b, a)))
}

/// eta over a two-parameter grid. Cells are independent jobs; a failing
/// cell is recorded as missing rather than aborting the sweep.
#[derive(Clone, Debug)]
pub struct PhaseDiagram<T: Real> {
    pub model: ModelKind,
    pub axis1_name: String,
    pub axis1: Vec<f64>,
    pub axis2_name: String,
    pub axis2: Vec<f64>,
    /// Row-major over `(axis1, axis2)`; `None` marks a failed cell.
    pub values: Vec<Option<T>>,
    pub fixed: BTreeMap<String, f64>,
    pub im_tol_rel: f64,
}

impl<T: Real> PhaseDiagram<T> {
    pub fn value(&self, i1: usize, i2: usize) -> Option<T> {
        self.values[i1 * self.axis2.len() + i2]
    }
}

/// eta of one model realization at explicit parameters.
pub fn eta_for_params<T: Real>(
    model: ModelKind,
    params: &BTreeMap<String, f64>,
    im_tol_rel: f64,
) -> Result<T, T> {
    let protocol = build_model::<T>(model, params, BoundaryCond::Open)?;
    let op = floquet_operator(&protocol)?;
    let spectrum = quasienergies(&op.u_f, protocol.period)?;
    let im_tol = r::<T>(im_tol_rel) * spectrum.spectral_radius().max(T::min_positive_value());
    spectrum.eta(im_tol)
}

/// Sweep eta over two named parameter axes with the rest held fixed.
pub fn phase_diagram<T: Real>(
    model: ModelKind,
    axis1: (&str, &[f64]),
    axis2: (&str, &[f64]),
    fixed: &BTreeMap<String, f64>,
    im_tol_rel: f64,
) -> Result<PhaseDiagram<T>, T> {
    if axis1.1.len() < 2 || axis2.1.len() < 2 {
        return Err(Error::InvalidArgument("each axis needs at least 2 grid points".into()));
    }
    let n2 = axis2.1.len();
    let cells: Vec<(usize, usize)> = (0..axis1.1.len())
        .flat_map(|i1| (0..n2).map(move |i2| (i1, i2)))
        .collect();
    let values: Vec<Option<T>> = cells
        .par_iter()
        .map(|&(i1, i2)| {
            let mut params = fixed.clone();
            params.insert(axis1.0.to_string(), axis1.1[i1]);
            params.insert(axis2.0.to_string(), axis2.1[i2]);
            eta_for_params::<T>(model, &params, im_tol_rel).ok()
        })
        .collect();
    Ok(PhaseDiagram {
        model,
        axis1_name: axis1.0.to_string(),
        axis1: axis1.1.to_vec(),
        axis2_name: axis2.0.to_string(),
        axis2: axis2.1.to_vec(),
        values,
        fixed: fixed.clone(),
        im_tol_rel,
    })
}

/// Norm history of a periodically kicked state.
#[derive(Clone, Debug)]
pub struct LyapunovTrace<T: Real> {
    /// `0, T, 2T, ...`
    pub times: Vec<T>,
    /// `ln <psi(t)|psi(t)>`, zero at `t = 0`.
    pub log_norm: Vec<T>,
    /// Running `lambda(t) = log_norm / (2 t)`.
    pub lambda_est: Vec<T>,
    /// Final estimate: per-period growth averaged over the last half of the
    /// trace (transients discarded).
    pub lambda: T,
}

/// Evolve `|psi(0)> = |init_site>` by repeated application of `U_F`,
/// renormalizing each period and accumulating log-norms exactly.
pub fn lyapunov<T: Real>(
    p: &DriveProtocol<T>,
    init_site: usize,
    n_periods: usize,
) -> Result<LyapunovTrace<T>, T> {
    if n_periods == 0 {
        return Err(Error::InvalidArgument("need at least one period".into()));
    }
    let n = p.dim();
    if init_site >= n {
        return Err(Error::InvalidArgument(format!(
            "initial site {init_site} outside chain of {n} sites"
        )));
    }
    let op = floquet_operator(p)?;
    let u = op.u_f;
    let mut psi = vec![num_complex::Complex::<T>::zero(); n];
    psi[init_site] = num_complex::Complex::new(T::one(), T::zero());

    let mut times = Vec::with_capacity(n_periods + 1);
    let mut log_norm = Vec::with_capacity(n_periods + 1);
    let mut lambda_est = Vec::with_capacity(n_periods + 1);
    times.push(T::zero());
    log_norm.push(T::zero());
    lambda_est.push(T::zero());

    let mut acc = T::zero(); // sum of ln |psi| per period
    let mut work = vec![num_complex::Complex::<T>::zero(); n];
    for step in 1..=n_periods {
        for (i, w) in work.iter_mut().enumerate() {
            let mut s = num_complex::Complex::<T>::zero();
            for j in 0..n {
                s = s + u[[i, j]] * psi[j];
            }
            *w = s;
        }
        let norm = work
            .iter()
            .fold(T::zero(), |a, z| a + z.norm_sqr())
            .sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::InvalidArgument(
                "state norm collapsed or overflowed during evolution".into(),
            ));
        }
        for (p_i, w) in psi.iter_mut().zip(work.iter()) {
            *p_i = *w / norm;
        }
        acc = acc + norm.ln();
        let t = p.period * r::<T>(step as f64);
        times.push(t);
        log_norm.push(acc * r::<T>(2.0));
        lambda_est.push(acc / t);
    }
    // slope of log_norm over the last half = mean per-period growth rate
    let mid = n_periods / 2;
    let lambda = (log_norm[n_periods] - log_norm[mid])
        / (r::<T>(2.0) * (times[n_periods] - times[mid]));
    Ok(LyapunovTrace {
        times,
        log_norm,
        lambda_est,
        lambda,
    })
}

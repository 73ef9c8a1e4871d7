//! Floquet generalized Brillouin zones.
//!
//! Candidates from the auxiliary curves `aGBZ_l` (`l = 0..l_c`) are filtered
//! by the pooled middle-root condition: at a candidate energy `E`, the
//! `2 (2 l_c + 1) M` roots of `f(beta, E + 2 pi l / T) = 0` over
//! `l = -l_c..l_c` are sorted by modulus and the candidate survives iff the
//! middle two moduli coincide and the candidate sits on them. The recorded
//! pair of middle roots forms the Floquet GBZ; the associated energies,
//! folded to `Re E in (-pi/T, pi/T]`, form the open-boundary quasienergy
//! spectrum in the thermodynamic limit. The cutoff `l_c` is raised until the
//! point set stabilizes.

use crate::error::{Error, Result};
use crate::laurent::{CharPoly, LaurentMatrixPoly};
use crate::polyroots::{middle_pair, MiddlePair};
use crate::resultant::{agbz_points, AgbzConfig, GbzCurve, GbzPoint, InterpConfig};
use crate::scalar::{r, Real, C};
use crate::spectrum::{fold_re, SpectrumSet};
use num_complex::Complex;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Tunables of the GBZ assembly. Defaults follow the validated values used
/// throughout the test suite; `middle_gap_tol` is the equality tolerance on
/// log-moduli of the middle root pair.
#[derive(Clone, Debug)]
pub struct GbzConfig<T: Real> {
    pub theta_grid: usize,
    pub lc_init: u32,
    /// Extra cutoff increments allowed before declaring non-convergence.
    pub lc_max_extra: u32,
    /// Relative tolerance (log-modulus) for the middle-pair equality.
    pub middle_gap_tol: T,
    /// Tolerance for the candidate's own modulus to match the middle pair.
    pub modulus_match_tol: T,
    pub common_root_tol: T,
    /// Spectrum deduplication cell size.
    pub dedup_tol: T,
    /// Hausdorff threshold declaring the cutoff converged.
    pub hausdorff_tol: T,
    pub interp: InterpConfig<T>,
}

impl<T: Real> Default for GbzConfig<T> {
    fn default() -> Self {
        GbzConfig {
            theta_grid: 720,
            lc_init: 1,
            lc_max_extra: 8,
            middle_gap_tol: r(1e-6),
            modulus_match_tol: r(1e-6),
            common_root_tol: r(1e-8),
            dedup_tol: r(1e-8),
            hausdorff_tol: r(1e-6),
            interp: InterpConfig::default(),
        }
    }
}

impl<T: Real> GbzConfig<T> {
    fn agbz(&self) -> AgbzConfig<T> {
        AgbzConfig {
            theta_grid: self.theta_grid,
            common_root_tol: self.common_root_tol,
            interp: self.interp.clone(),
            ..AgbzConfig::default()
        }
    }
}

/// A converged Floquet GBZ with its thermodynamic-limit spectrum.
#[derive(Clone, Debug)]
pub struct FloquetGbz<T: Real> {
    /// Validated GBZ points (middle root pairs of surviving candidates).
    pub points: Vec<GbzPoint<T>>,
    /// Quasienergies attached to the validated points.
    pub spectrum: SpectrumSet<T>,
    /// Smallest cutoff whose GBZ was confirmed stable.
    pub cutoff_used: u32,
    pub converged: bool,
    /// Driving period; `None` for a static computation.
    pub period: Option<T>,
}

impl<T: Real> FloquetGbz<T> {
    pub fn betas(&self) -> Vec<C<T>> {
        self.points.iter().map(|p| p.beta).collect()
    }
}

/// Energy shifts `2 pi l / T` for `l = -l_c..=l_c` (just `{0}` for a static
/// single-zone filter).
fn zone_shifts<T: Real>(period: Option<T>, lc: u32) -> Vec<C<T>> {
    match period {
        None => vec![Complex::new(T::zero(), T::zero())],
        Some(p) => {
            let w = T::TAU() / p;
            (-(lc as i64)..=lc as i64)
                .map(|l| Complex::new(w * r::<T>(l as f64), T::zero()))
                .collect()
        }
    }
}

/// Filter candidates by the pooled middle-root condition, recording the
/// middle pair and folded energy of each survivor.
fn filter_candidates<T: Real>(
    f: &CharPoly<T>,
    shifts: &[C<T>],
    candidates: &[GbzPoint<T>],
    period: Option<T>,
    cfg: &GbzConfig<T>,
) -> (Vec<GbzPoint<T>>, Vec<C<T>>) {
    let verdicts: Vec<Option<(MiddlePair<T>, C<T>, u32, T)>> = candidates
        .par_iter()
        .map(|cand| {
            let mp = match middle_pair(f, shifts, cand.energy) {
                Ok(mp) => mp,
                // a root-count deficit at this energy disqualifies the point
                Err(_) => return None,
            };
            if mp.gap > cfg.middle_gap_tol {
                return None;
            }
            // the candidate itself must sit on the middle pair
            let mid = mp.lower.norm().max(T::min_positive_value());
            let own = cand.beta.norm();
            if (own / mid).ln().abs() > cfg.modulus_match_tol {
                return None;
            }
            let e = match period {
                Some(p) => Complex::new(fold_re(cand.energy.re, p), cand.energy.im),
                None => cand.energy,
            };
            Some((mp, e, cand.ell, cand.theta))
        })
        .collect();

    let mut points = Vec::new();
    let mut energies = Vec::new();
    for v in verdicts.into_iter().flatten() {
        let (mp, e, ell, theta) = v;
        points.push(GbzPoint { beta: mp.lower, ell, theta, energy: e });
        points.push(GbzPoint { beta: mp.upper, ell, theta, energy: e });
        energies.push(e);
    }
    (dedup_points(points, cfg.dedup_tol), energies)
}

/// Grid-snap deduplication of curve points on (beta, energy).
fn dedup_points<T: Real>(points: Vec<GbzPoint<T>>, tol: T) -> Vec<GbzPoint<T>> {
    let mut cells: BTreeMap<(i64, i64, i64, i64), GbzPoint<T>> = BTreeMap::new();
    for p in points {
        let snap = |x: T| (x / tol).round().to_f64().map(|v| v as i64).unwrap_or(0);
        let key = (snap(p.beta.re), snap(p.beta.im), snap(p.energy.re), snap(p.energy.im));
        cells.entry(key).or_insert(p);
    }
    cells.into_values().collect()
}

/// Directed-symmetric Hausdorff distance between point sets in the beta
/// plane; empty-vs-empty counts as zero.
fn hausdorff_points<T: Real>(a: &[GbzPoint<T>], b: &[GbzPoint<T>]) -> T {
    if a.is_empty() && b.is_empty() {
        return T::zero();
    }
    if a.is_empty() || b.is_empty() {
        return T::infinity();
    }
    let av: Vec<C<T>> = a.iter().map(|p| p.beta).collect();
    let bv: Vec<C<T>> = b.iter().map(|p| p.beta).collect();
    crate::observables::hausdorff(&av, &bv).unwrap_or_else(|_| T::infinity())
}

/// Static GBZ: auxiliary curve `aGBZ_0` filtered by the single-zone
/// middle-pair condition `|beta_M| = |beta_{M+1}|`. No folding is applied.
pub fn static_gbz<T: Real>(h: &LaurentMatrixPoly<T>, cfg: &GbzConfig<T>) -> Result<FloquetGbz<T>, T> {
    let f = h.char_poly();
    let curve = agbz_points(&f, 0, T::one(), &cfg.agbz())?;
    let shifts = zone_shifts::<T>(None, 0);
    let (points, energies) = filter_candidates(&f, &shifts, &curve.points, None, cfg);
    let spectrum = SpectrumSet::new_static(energies).deduped(cfg.dedup_tol);
    Ok(FloquetGbz {
        points,
        spectrum,
        cutoff_used: 0,
        converged: true,
        period: None,
    })
}

/// Floquet GBZ of the time-averaged non-Bloch Hamiltonian at driving period
/// `T`, with automatic cutoff convergence: the validated point set at `l_c`
/// is accepted once it agrees with `l_c + 1` within the Hausdorff tolerance.
///
/// On non-convergence the error carries the last partial result.
pub fn floquet_gbz<T: Real>(
    h_f: &LaurentMatrixPoly<T>,
    period: T,
    cfg: &GbzConfig<T>,
) -> Result<FloquetGbz<T>, T> {
    if period <= T::zero() {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    if cfg.lc_init < 1 {
        return Err(Error::InvalidArgument("lc_init must be at least 1".into()));
    }
    let f = h_f.char_poly();
    let agbz_cfg = cfg.agbz();

    // auxiliary curves are cached per zone index across cutoff increments
    let mut curves: Vec<GbzCurve<T>> = Vec::new();
    let ensure_curves = |upto: u32, curves: &mut Vec<GbzCurve<T>>| -> Result<(), T> {
        while curves.len() <= upto as usize {
            let ell = curves.len() as u32;
            curves.push(agbz_points(&f, ell, period, &agbz_cfg)?);
        }
        Ok(())
    };

    let validated = |lc: u32, curves: &[GbzCurve<T>]| -> (Vec<GbzPoint<T>>, Vec<C<T>>) {
        let shifts = zone_shifts(Some(period), lc);
        let candidates: Vec<GbzPoint<T>> = curves
            .iter()
            .take(lc as usize + 1)
            .flat_map(|c| c.points.iter().copied())
            .collect();
        filter_candidates(&f, &shifts, &candidates, Some(period), cfg)
    };

    let mut lc = cfg.lc_init;
    ensure_curves(lc, &mut curves)?;
    let (mut points, mut energies) = validated(lc, &curves);
    loop {
        ensure_curves(lc + 1, &mut curves)?;
        let (next_points, next_energies) = validated(lc + 1, &curves);
        let dist = hausdorff_points(&points, &next_points);
        if dist < cfg.hausdorff_tol {
            let spectrum =
                SpectrumSet::new_folded(energies, period).deduped(cfg.dedup_tol);
            return Ok(FloquetGbz {
                points,
                spectrum,
                cutoff_used: lc,
                converged: true,
                period: Some(period),
            });
        }
        lc += 1;
        points = next_points;
        energies = next_energies;
        if lc > cfg.lc_init + cfg.lc_max_extra {
            let spectrum =
                SpectrumSet::new_folded(energies, period).deduped(cfg.dedup_tol);
            return Err(Error::CutoffNonConvergence {
                cutoff: lc,
                partial: Box::new(FloquetGbz {
                    points,
                    spectrum,
                    cutoff_used: lc,
                    converged: false,
                    period: Some(period),
                }),
            });
        }
    }
}

/// The thermodynamic-limit quasienergy spectrum attached to a converged GBZ.
pub fn gbz_spectrum<T: Real>(g: &FloquetGbz<T>) -> Result<SpectrumSet<T>, T> {
    if !g.converged {
        return Err(Error::InvalidArgument(
            "GBZ is not converged; spectrum not trustworthy".into(),
        ));
    }
    Ok(g.spectrum.clone())
}

/// Result of the critical-period search.
#[derive(Clone, Debug)]
pub struct CriticalPeriodResult<T: Real> {
    pub t_c: T,
    /// Sampled distance function `d(T)` (sorted by `T`).
    pub gap_samples: Vec<(T, T)>,
    /// Final bisection bracket: `d(lo) > touch_tol >= d(hi)`.
    pub bracket: (T, T),
    /// Menger curvature of the auxiliary curve near the touching point, as
    /// a tangency diagnostic.
    pub touch_curvature: Option<T>,
}

/// Controls for [`critical_period`].
#[derive(Clone, Debug)]
pub struct CriticalPeriodConfig<T: Real> {
    /// Distance below which the curves are declared touching.
    pub touch_tol: T,
    /// Bisection terminates at `|hi - lo| < bisect_tol`.
    pub bisect_tol: T,
    /// Theta grid for the repeated aGBZ_1 sweeps.
    pub theta_grid: usize,
    /// Levels of local theta refinement near the minimizing pair.
    pub refine_levels: u32,
    pub refine_points: usize,
    pub gbz: GbzConfig<T>,
}

impl<T: Real> Default for CriticalPeriodConfig<T> {
    fn default() -> Self {
        CriticalPeriodConfig {
            touch_tol: r(2e-4),
            bisect_tol: r(1e-4),
            theta_grid: 512,
            refine_levels: 3,
            refine_points: 48,
            gbz: GbzConfig::default(),
        }
    }
}

/// Distance from the auxiliary curve `aGBZ_1(T)` to a fixed point set, with
/// local theta refinement around the minimizing point.
fn agbz1_distance<T: Real>(
    f: &CharPoly<T>,
    period: T,
    static_pts: &[C<T>],
    cfg: &CriticalPeriodConfig<T>,
) -> Result<(T, Option<T>), T> {
    let agbz_cfg = AgbzConfig {
        theta_grid: cfg.theta_grid,
        common_root_tol: cfg.gbz.common_root_tol,
        interp: cfg.gbz.interp.clone(),
        ..AgbzConfig::default()
    };
    let curve = agbz_points(f, 1, period, &agbz_cfg)?;
    if curve.is_empty() {
        return Ok((T::infinity(), None));
    }
    let dist_of = |p: &GbzPoint<T>| {
        static_pts
            .iter()
            .fold(T::infinity(), |a, s| a.min((p.beta - s).norm()))
    };
    let mut best = T::infinity();
    let mut best_theta = T::zero();
    for p in &curve.points {
        let d = dist_of(p);
        if d < best {
            best = d;
            best_theta = p.theta;
        }
    }
    // refine theta around the minimizer
    let mut width = T::TAU() / r::<T>(cfg.theta_grid as f64);
    let mut local_pts: Vec<GbzPoint<T>> = Vec::new();
    for _ in 0..cfg.refine_levels {
        let n = cfg.refine_points;
        let thetas: Vec<T> = (0..=n)
            .map(|i| {
                best_theta - width
                    + width * r::<T>(2.0) * r::<T>(i as f64) / r::<T>(n as f64)
            })
            .collect();
        let slices: Result<Vec<Vec<GbzPoint<T>>>, T> = thetas
            .par_iter()
            .map(|&th| {
                let th = th.rem(T::TAU());
                let th = if th < T::zero() { th + T::TAU() } else { th };
                crate::resultant::curve_slice(f, 1, period, th, &agbz_cfg)
            })
            .collect();
        local_pts = slices?.into_iter().flatten().collect();
        for p in &local_pts {
            let d = dist_of(p);
            if d < best {
                best = d;
                best_theta = p.theta;
            }
        }
        width = width * r::<T>(2.0) / r::<T>(cfg.refine_points as f64);
    }
    // tangency diagnostic: Menger curvature of three nearby curve points
    let curvature = menger_curvature_near(&local_pts, best_theta);
    Ok((best, curvature))
}

fn menger_curvature_near<T: Real>(pts: &[GbzPoint<T>], theta: T) -> Option<T> {
    if pts.len() < 3 {
        return None;
    }
    let mut sorted: Vec<&GbzPoint<T>> = pts.iter().collect();
    sorted.sort_by(|a, b| {
        (a.theta - theta)
            .abs()
            .partial_cmp(&(b.theta - theta).abs())
            .unwrap()
    });
    let (a, b, c) = (sorted[0].beta, sorted[1].beta, sorted[2].beta);
    let ab = (a - b).norm();
    let bc = (b - c).norm();
    let ca = (c - a).norm();
    let area2 = ((b - a) * (c - a).conj()).im.abs();
    let denom = ab * bc * ca;
    if denom <= T::min_positive_value() {
        return None;
    }
    Some(r::<T>(2.0) * area2 / denom)
}

/// One evaluation of the distance `d(T)` from `aGBZ_1` to the static GBZ
/// (recomputes the static set; intended for diagnostics and gap plots).
pub fn agbz1_distance_probe<T: Real>(
    h_f: &LaurentMatrixPoly<T>,
    period: T,
    cfg: &CriticalPeriodConfig<T>,
) -> Result<T, T> {
    let static_g = static_gbz(h_f, &cfg.gbz)?;
    if static_g.points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let f = h_f.char_poly();
    Ok(agbz1_distance(&f, period, &static_g.betas(), cfg)?.0)
}

/// Critical driving period: bisection on the distance `d(T)` between the
/// auxiliary curve `aGBZ_1` and the static (high-frequency) GBZ of `h_F`.
pub fn critical_period<T: Real>(
    h_f: &LaurentMatrixPoly<T>,
    bracket: (T, T),
    cfg: &CriticalPeriodConfig<T>,
) -> Result<CriticalPeriodResult<T>, T> {
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) || lo <= T::zero() {
        return Err(Error::InvalidArgument("invalid period bracket".into()));
    }
    let static_g = static_gbz(h_f, &cfg.gbz)?;
    if static_g.points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let static_pts = static_g.betas();
    let f = h_f.char_poly();

    let mut samples: Vec<(T, T)> = Vec::new();
    let eval = |t: T, samples: &mut Vec<(T, T)>| -> Result<(T, Option<T>), T> {
        let (d, curv) = agbz1_distance(&f, t, &static_pts, cfg)?;
        samples.push((t, d));
        Ok((d, curv))
    };

    let (d_lo, _) = eval(lo, &mut samples)?;
    let (d_hi, mut curvature) = eval(hi, &mut samples)?;
    if d_lo <= cfg.touch_tol || d_hi > cfg.touch_tol {
        return Err(Error::BracketError { lo, hi, d_lo, d_hi });
    }
    while hi - lo > cfg.bisect_tol {
        let mid = (lo + hi) * r::<T>(0.5);
        let (d_mid, curv) = eval(mid, &mut samples)?;
        if d_mid <= cfg.touch_tol {
            hi = mid;
            curvature = curv;
        } else {
            lo = mid;
        }
    }
    samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(CriticalPeriodResult {
        t_c: (lo + hi) * r::<T>(0.5),
        gap_samples: samples,
        bracket: (lo, hi),
        touch_curvature: curvature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentMatrixPoly;
    use crate::scalar::c;

    fn hermitian_chain(t1: f64) -> LaurentMatrixPoly<f64> {
        LaurentMatrixPoly::single_band(&[(1, c(t1, 0.0)), (-1, c(t1, 0.0))]).unwrap()
    }

    fn hatano_nelson(t: f64, g: f64) -> LaurentMatrixPoly<f64> {
        LaurentMatrixPoly::single_band(&[(1, c(t + g, 0.0)), (-1, c(t - g, 0.0))]).unwrap()
    }

    #[test]
    fn hermitian_static_gbz_is_unit_circle() {
        let cfg = GbzConfig { theta_grid: 128, ..Default::default() };
        let g = static_gbz(&hermitian_chain(1.0), &cfg).unwrap();
        assert!(g.points.len() > 100);
        for p in &g.points {
            assert!((p.beta.norm() - 1.0).abs() < 1e-7);
        }
        // spectrum = [-2 t1, 2 t1], real
        for e in &g.spectrum.energies {
            assert!(e.im.abs() < 1e-8);
            assert!(e.re.abs() <= 2.0 + 1e-8);
        }
        let min = g.spectrum.energies.iter().map(|e| e.re).fold(f64::INFINITY, f64::min);
        let max = g
            .spectrum
            .energies
            .iter()
            .map(|e| e.re)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(min < -1.95 && max > 1.95);
    }

    #[test]
    fn hatano_nelson_static_gbz_circle_and_real_spectrum() {
        let (t, g_amp) = (1.0, 0.4);
        let cfg = GbzConfig { theta_grid: 128, ..Default::default() };
        let g = static_gbz(&hatano_nelson(t, g_amp), &cfg).unwrap();
        let want = ((t - g_amp) / (t + g_amp)).sqrt();
        assert!(!g.points.is_empty());
        for p in &g.points {
            assert!((p.beta.norm() - want).abs() < 1e-7);
        }
        // spectrum 2 sqrt(t^2 - g^2) cos k: real, bounded
        let bound = 2.0 * (t * t - g_amp * g_amp).sqrt();
        for e in &g.spectrum.energies {
            assert!(e.im.abs() < 1e-7, "Im E = {}", e.im);
            assert!(e.re.abs() <= bound + 1e-6);
        }
    }
}

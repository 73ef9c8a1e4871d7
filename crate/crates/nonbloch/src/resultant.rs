//! Resultants of shifted characteristic polynomials and auxiliary
//! generalized Brillouin zones.
//!
//! For a characteristic polynomial `f(beta, E)` the auxiliary curve of
//! Floquet zone `l` is carved out by the common roots of
//!
//! ```text
//! f(beta, E) = 0,      f(e^{i theta} beta, E + 2 pi l / T) = 0,
//! ```
//!
//! eliminated through the resultant in `E`:
//! `g(beta, theta) = Res_E[f(beta, E), f(e^{i theta} beta, E + 2 pi l / T)]`.
//! `g` is a Laurent polynomial in `beta`; rather than expanding Sylvester
//! determinants symbolically, it is sampled on a circle and recovered by
//! discrete Fourier inversion, with held-out probes guarding conditioning.

use crate::error::{Error, Result};
use crate::laurent::{CharPoly, LaurentPoly};
use crate::linalg::{CMat, Lu};
use crate::polyroots::{laurent_poly_roots, poly_roots};
use crate::scalar::{r, Real, C};
use ndarray::Array2;
use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;

/// One point of an auxiliary or generalized Brillouin zone curve.
#[derive(Clone, Copy, Debug)]
pub struct GbzPoint<T: Real> {
    pub beta: C<T>,
    /// Floquet-zone index of the curve the point came from.
    pub ell: u32,
    /// Phase parameter of the resultant sweep.
    pub theta: T,
    /// Energy at which `beta` solves the characteristic equation.
    pub energy: C<T>,
}

/// A set of curve points in the complex `beta` plane.
#[derive(Clone, Debug, Default)]
pub struct GbzCurve<T: Real> {
    pub points: Vec<GbzPoint<T>>,
}

impl<T: Real> GbzCurve<T> {
    pub fn betas(&self) -> Vec<C<T>> {
        self.points.iter().map(|p| p.beta).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Parameters describing one resultant curve slice `g(beta, theta)`.
#[derive(Clone, Debug)]
pub struct ResultantCurveSpec<'a, T: Real> {
    pub f: &'a CharPoly<T>,
    /// Floquet-zone index `l >= 0`.
    pub ell: u32,
    /// Driving period (only enters through the shift `2 pi l / T`).
    pub period: T,
    /// Rotation phase in `[0, 2 pi)`.
    pub theta: T,
}

impl<'a, T: Real> ResultantCurveSpec<'a, T> {
    /// Energy shift `2 pi l / T` of the compared Floquet replica.
    pub fn shift(&self) -> C<T> {
        Complex::new(T::TAU() * r::<T>(self.ell as f64) / self.period, T::zero())
    }

    fn validate(&self) -> Result<(), T> {
        if self.ell == 0 && self.theta.is_zero() {
            return Err(Error::DegenerateResultantSpec);
        }
        if self.period <= T::zero() {
            return Err(Error::InvalidArgument("period must be positive".into()));
        }
        Ok(())
    }
}

/// Interpolation controls for the evaluate-and-invert resultant.
#[derive(Clone, Debug)]
pub struct InterpConfig<T: Real> {
    /// Sample circle radii, tried in order until the probe check passes.
    pub radii: Vec<T>,
    /// Relative residual allowed at held-out probe points.
    pub probe_tol: T,
}

impl<T: Real> Default for InterpConfig<T> {
    fn default() -> Self {
        InterpConfig {
            radii: vec![r(1.0), r(0.7), r(1.4)],
            probe_tol: r(1e-8),
        }
    }
}

/// Sylvester matrix of two polynomials given by ascending coefficients.
pub fn sylvester_matrix<T: Real>(p: &[C<T>], q: &[C<T>]) -> Result<CMat<T>, T> {
    let n = p.len().saturating_sub(1);
    let m = q.len().saturating_sub(1);
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument(
            "resultant needs both polynomials of degree >= 1".into(),
        ));
    }
    if p[n].is_zero() || q[m].is_zero() {
        return Err(Error::InvalidArgument(
            "leading coefficient must be nonzero".into(),
        ));
    }
    let size = n + m;
    let mut s = Array2::<C<T>>::zeros((size, size));
    // m rows of p coefficients (descending), then n rows of q coefficients
    for i in 0..m {
        for (k, c) in p.iter().rev().enumerate() {
            s[[i, i + k]] = *c;
        }
    }
    for i in 0..n {
        for (k, c) in q.iter().rev().enumerate() {
            s[[m + i, i + k]] = *c;
        }
    }
    Ok(s)
}

/// Resultant of two polynomials (ascending coefficients) as the determinant
/// of their Sylvester matrix. Vanishes iff the polynomials share a root.
pub fn sylvester_resultant_at<T: Real>(p: &[C<T>], q: &[C<T>]) -> Result<C<T>, T> {
    let s = sylvester_matrix(p, q)?;
    Ok(Lu::factor(&s)?.det())
}

/// Coefficients in `E` of `f(e^{i theta} beta, E + shift)` at fixed `beta`:
/// binomial re-expansion of the shifted argument.
fn shifted_coeffs<T: Real>(
    f: &CharPoly<T>,
    beta_rot: C<T>,
    shift: C<T>,
) -> Result<Vec<C<T>>, T> {
    let a = f.coeffs_at_beta(beta_rot)?;
    let q = f.deg_e();
    let mut out = vec![Complex::<T>::zero(); q + 1];
    // binomial table up to q <= ~4: computed on the fly
    for (k, ak) in a.iter().enumerate() {
        let mut binom = T::one();
        let mut shift_pow = Complex::<T>::one();
        for j in (0..=k).rev() {
            // C(k, j) * shift^(k-j)
            out[j] = out[j] + *ak * shift_pow * binom;
            if j > 0 {
                shift_pow = shift_pow * shift;
                binom = binom * r::<T>(j as f64) / r::<T>((k - j + 1) as f64);
            }
        }
    }
    Ok(out)
}

/// `g(beta)` sampled directly from the Sylvester determinant.
fn g_direct<T: Real>(spec: &ResultantCurveSpec<T>, beta: C<T>) -> Result<C<T>, T> {
    let rot = Complex::from_polar(T::one(), spec.theta);
    let p = spec.f.coeffs_at_beta(beta)?;
    let q = shifted_coeffs(spec.f, rot * beta, spec.shift())?;
    sylvester_resultant_at(&p, &q)
}

/// The resultant `g(beta, theta) = Res_E[f(beta, E), f(e^{i theta} beta,
/// E + 2 pi l / T)]` as a Laurent polynomial in `beta`, recovered by circle
/// sampling and discrete Fourier inversion.
///
/// The exponent span is bounded by `+-2 m q^2` (each Sylvester entry spans
/// `+- m q` and the determinant multiplies `2 q` of them); twice as many
/// sample points are used, and the interpolant is verified against direct
/// determinants at held-out probes.
pub fn resultant_in_e<T: Real>(
    spec: &ResultantCurveSpec<T>,
    cfg: &InterpConfig<T>,
) -> Result<LaurentPoly<T>, T> {
    spec.validate()?;
    let w = 2 * spec.f.deg_e() as i32 * spec.f.max_span();
    let width = (2 * w + 1) as usize;
    let n = 2 * width;
    let tau = T::TAU();

    let mut worst = T::infinity();
    let mut tried = Vec::new();
    for &radius in &cfg.radii {
        tried.push(radius);
        let samples: Result<Vec<C<T>>, T> = (0..n)
            .map(|j| {
                let ang = tau * r::<T>(j as f64) / r::<T>(n as f64);
                g_direct(spec, Complex::from_polar(radius, ang))
            })
            .collect();
        let samples = samples?;
        let scale = samples
            .iter()
            .fold(T::zero(), |a, z| a.max(z.norm()))
            .max(T::min_positive_value());

        // c_k = r^{-k} (1/N) sum_j g_j e^{-2 pi i j k / N}
        let mut coeffs = vec![Complex::<T>::zero(); width];
        let inv_n = T::one() / r::<T>(n as f64);
        for (idx, c) in coeffs.iter_mut().enumerate() {
            let k = idx as i32 - w;
            let mut acc = Complex::<T>::zero();
            for (j, gj) in samples.iter().enumerate() {
                let ang = -tau * r::<T>(j as f64) * r::<T>(k as f64) / r::<T>(n as f64);
                acc = acc + gj * Complex::from_polar(T::one(), ang);
            }
            *c = acc * inv_n * Complex::from_polar(radius.powi(-k), T::zero());
        }
        let g = LaurentPoly::from_range(-w, coeffs);

        // held-out probes: offset angles on the sample circle plus one
        // off-circle point
        let mut max_res = T::zero();
        let probe_angles = [0.5, 0.25 * n as f64 + 0.5, 0.5 * n as f64 + 0.5, 0.75 * n as f64 + 0.5];
        for pa in probe_angles {
            let ang = tau * r::<T>(pa) / r::<T>(n as f64);
            let b = Complex::from_polar(radius, ang);
            let direct = g_direct(spec, b)?;
            let interp = g.eval(b)?;
            max_res = max_res.max((direct - interp).norm());
        }
        let b_off = Complex::from_polar(radius * r::<T>(1.05), tau * r::<T>(0.137));
        let direct = g_direct(spec, b_off)?;
        let interp = g.eval(b_off)?;
        let off_scale = scale * r::<T>(1.05).powi(w).max(T::one());
        let off_res = (direct - interp).norm() / off_scale;
        let rel = (max_res / scale).max(off_res);
        if rel <= cfg.probe_tol {
            return Ok(g);
        }
        worst = worst.min(rel);
    }
    Err(Error::IllConditionedResultant {
        residual: worst,
        tried,
    })
}

/// Controls for the auxiliary-curve sweep.
#[derive(Clone, Debug)]
pub struct AgbzConfig<T: Real> {
    /// Number of theta samples over `[0, 2 pi)`.
    pub theta_grid: usize,
    /// Residual bound for accepting a common `E` root of the two defining
    /// equations.
    pub common_root_tol: T,
    /// Curve points closer to 0 / infinity than this are discarded as
    /// clearing artifacts.
    pub beta_cutoff: T,
    /// Spacing factor triggering one level of adaptive theta bisection.
    pub refine_factor: T,
    pub interp: InterpConfig<T>,
}

impl<T: Real> Default for AgbzConfig<T> {
    fn default() -> Self {
        AgbzConfig {
            theta_grid: 720,
            common_root_tol: r(1e-8),
            beta_cutoff: r(1e-12),
            refine_factor: r(5.0),
            interp: InterpConfig::default(),
        }
    }
}

/// Candidate points of `aGBZ_l` at a single theta.
fn curve_at_theta<T: Real>(
    f: &CharPoly<T>,
    ell: u32,
    period: T,
    theta: T,
    cfg: &AgbzConfig<T>,
) -> Result<Vec<GbzPoint<T>>, T> {
    let spec = ResultantCurveSpec { f, ell, period, theta };
    let shift = spec.shift();
    let g = match resultant_in_e(&spec, &cfg.interp) {
        Ok(g) => g,
        // a conditioning failure at one theta leaves a gap in the sampled
        // curve rather than aborting the sweep
        Err(Error::IllConditionedResultant { .. }) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let rl = match laurent_poly_roots(&g, 0) {
        Ok(rl) => rl,
        Err(Error::ZeroPolynomial) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let rot = Complex::from_polar(T::one(), theta);
    let mut out = Vec::new();
    for beta in rl.roots {
        let bn = beta.norm();
        if bn < cfg.beta_cutoff || bn > T::one() / cfg.beta_cutoff {
            continue;
        }
        // energies at beta: roots of f(beta, .) in E
        let ecoeffs = f.coeffs_at_beta(beta)?;
        let eroots = match poly_roots(&ecoeffs) {
            Ok(rl) => rl.roots,
            Err(_) => continue,
        };
        let beta_rot = rot * beta;
        let shifted = shifted_coeffs(f, beta_rot, shift)?;
        for e in eroots {
            // residual of the second defining equation at E
            let mut val = Complex::<T>::zero();
            let mut scale = T::min_positive_value();
            let mut epow = Complex::<T>::one();
            for c in &shifted {
                val = val + *c * epow;
                scale = scale + c.norm() * epow.norm().max(T::one());
                epow = epow * e;
            }
            if val.norm() / scale <= cfg.common_root_tol {
                out.push(GbzPoint { beta, ell, theta, energy: e });
                out.push(GbzPoint {
                    beta: beta_rot,
                    ell,
                    theta,
                    energy: e + shift,
                });
            }
        }
    }
    Ok(out)
}

/// Candidate points at a single theta (used by the critical-period search
/// to refine locally without re-sweeping the whole curve).
pub(crate) fn curve_slice<T: Real>(
    f: &CharPoly<T>,
    ell: u32,
    period: T,
    theta: T,
    cfg: &AgbzConfig<T>,
) -> Result<Vec<GbzPoint<T>>, T> {
    curve_at_theta(f, ell, period, theta, cfg)
}

fn min_set_distance<T: Real>(a: &[GbzPoint<T>], b: &[GbzPoint<T>]) -> T {
    let mut best = T::infinity();
    for x in a {
        for y in b {
            best = best.min((x.beta - y.beta).norm());
        }
    }
    best
}

/// The auxiliary curve `aGBZ_l`: candidate points `{beta_c, e^{i theta}
/// beta_c}` over a theta sweep, each validated to share a common energy root
/// between the two defining equations. `theta = 0` is excluded for `l = 0`
/// (the resultant degenerates) and an empty curve is a legal result.
pub fn agbz_points<T: Real>(
    f: &CharPoly<T>,
    ell: u32,
    period: T,
    cfg: &AgbzConfig<T>,
) -> Result<GbzCurve<T>, T> {
    if cfg.theta_grid < 8 {
        return Err(Error::InvalidArgument("theta grid must have at least 8 points".into()));
    }
    let n = cfg.theta_grid;
    let tau = T::TAU();
    let thetas: Vec<T> = (0..n)
        .filter(|&i| !(ell == 0 && i == 0))
        .map(|i| tau * r::<T>(i as f64) / r::<T>(n as f64))
        .collect();
    let per_theta: Result<Vec<Vec<GbzPoint<T>>>, T> = thetas
        .par_iter()
        .map(|&theta| curve_at_theta(f, ell, period, theta, cfg))
        .collect();
    let mut per_theta = per_theta?;

    // one level of adaptive bisection where consecutive theta slices are far
    // apart compared to the median spacing
    let mut gaps = Vec::new();
    for w in per_theta.windows(2) {
        if !w[0].is_empty() && !w[1].is_empty() {
            gaps.push(min_set_distance(&w[0], &w[1]));
        }
    }
    if gaps.len() >= 4 {
        let mut sorted = gaps.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = sorted[sorted.len() / 2];
        let mut extra_thetas = Vec::new();
        for (i, w) in per_theta.windows(2).enumerate() {
            if w[0].is_empty() || w[1].is_empty() {
                continue;
            }
            if min_set_distance(&w[0], &w[1]) > cfg.refine_factor * median {
                extra_thetas.push((i + 1, (thetas[i] + thetas[i + 1]) * r::<T>(0.5)));
            }
        }
        let refined: Result<Vec<(usize, Vec<GbzPoint<T>>)>, T> = extra_thetas
            .par_iter()
            .map(|&(pos, theta)| Ok((pos, curve_at_theta(f, ell, period, theta, cfg)?)))
            .collect();
        for (pos, pts) in refined?.into_iter().rev() {
            per_theta.insert(pos, pts);
        }
    }

    Ok(GbzCurve {
        points: per_theta.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentMatrixPoly;
    use crate::scalar::c;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn linear_pair_resultant() {
        // p = x + p0, q = x + q0 -> q0 - p0
        let p0 = c::<f64>(1.3, -0.4);
        let q0 = c::<f64>(-0.2, 2.0);
        let res = sylvester_resultant_at(&[p0, c(1.0, 0.0)], &[q0, c(1.0, 0.0)]).unwrap();
        assert!((res - (q0 - p0)).norm() < 1e-14);
    }

    #[test]
    fn identical_polynomials_share_roots() {
        let p = [c::<f64>(2.0, 1.0), c(0.5, 0.0), c(1.0, 0.0)];
        let res = sylvester_resultant_at(&p, &p).unwrap();
        assert!(res.norm() < 1e-12);
    }

    #[test]
    fn constructed_common_root_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let root = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let rand_c =
                |rng: &mut ChaCha8Rng| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            // cubics (x - root)(x^2 + a x + b)
            let (a1, b1) = (rand_c(&mut rng), rand_c(&mut rng));
            let (a2, b2) = (rand_c(&mut rng), rand_c(&mut rng));
            let mk = |a: Complex<f64>, b: Complex<f64>| {
                [
                    -root * b,
                    b - root * a,
                    a - root,
                    c::<f64>(1.0, 0.0),
                ]
            };
            let p = mk(a1, b1);
            let q = mk(a2, b2);
            let res = sylvester_resultant_at(&p, &q).unwrap();
            let norm = |v: &[Complex<f64>]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let scale = norm(&p).powi(3) * norm(&q).powi(3);
            assert!(res.norm() < 1e-8 * scale, "res = {res}, scale = {scale}");
        }
    }

    #[test]
    fn degree_zero_rejected() {
        assert!(sylvester_resultant_at(&[c::<f64>(1.0, 0.0)], &[c(1.0, 0.0), c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn q1_resultant_matches_closed_form() {
        // for q = 1: g = +-(h(e^{i t} b) - h(b) - shift)
        let h = LaurentMatrixPoly::single_band(&[
            (2, c(0.31, 0.0)),
            (-2, c(-0.01, 0.0)),
            (1, c(2.0, 0.0)),
            (-1, c(2.0, 0.0)),
        ])
        .unwrap();
        let f = h.char_poly();
        let period = 2.0;
        let theta = 1.1;
        let spec = ResultantCurveSpec { f: &f, ell: 1, period, theta };
        let g = resultant_in_e(&spec, &InterpConfig::default()).unwrap();
        let shift = spec.shift();
        let rot = Complex::from_polar(1.0, theta);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let b = Complex::from_polar(rng.gen_range(0.5..1.8), rng.gen_range(0.0..6.28));
            let closed = h.eval(rot * b).unwrap()[[0, 0]] - h.eval(b).unwrap()[[0, 0]] - shift;
            let got = g.eval(b).unwrap();
            // same zero set: the Sylvester convention flips the overall sign
            assert!(
                (got + closed).norm() < 1e-9 * (1.0 + closed.norm()),
                "mismatch at {b}: {got} vs {closed}"
            );
        }
    }

    #[test]
    fn degenerate_spec_rejected() {
        let h = LaurentMatrixPoly::single_band(&[(1, c(1.0, 0.0)), (-1, c(1.0, 0.0))]).unwrap();
        let f = h.char_poly();
        let spec = ResultantCurveSpec { f: &f, ell: 0, period: 1.0, theta: 0.0 };
        assert!(matches!(
            resultant_in_e(&spec, &InterpConfig::default()),
            Err(Error::DegenerateResultantSpec)
        ));
    }

    #[test]
    fn theta_zero_high_frequency_curve_is_empty() {
        // l = 1, theta = 0, T -> 0: g is a nonzero constant, no roots
        let h = LaurentMatrixPoly::single_band(&[
            (2, c(0.31, 0.0)),
            (-2, c(-0.01, 0.0)),
            (1, c(2.0, 0.0)),
            (-1, c(2.0, 0.0)),
        ])
        .unwrap();
        let f = h.char_poly();
        let spec = ResultantCurveSpec { f: &f, ell: 1, period: 1e-9, theta: 0.0 };
        let g = resultant_in_e(&spec, &InterpConfig::default()).unwrap();
        let trimmed = g.trimmed(1e-9);
        assert_eq!(trimmed.lo(), 0);
        assert_eq!(trimmed.hi(), 0);
    }

    #[test]
    fn hatano_nelson_agbz_circle() {
        let (t, g) = (1.0, 0.4);
        let h = LaurentMatrixPoly::single_band(&[(1, c(t + g, 0.0)), (-1, c(t - g, 0.0))]).unwrap();
        let f = h.char_poly();
        let cfg = AgbzConfig { theta_grid: 64, ..Default::default() };
        let curve = agbz_points(&f, 0, 1.0, &cfg).unwrap();
        assert!(curve.len() > 50);
        let want = ((t - g) / (t + g)).abs().sqrt();
        for p in &curve.points {
            assert!(
                (p.beta.norm() - want).abs() < 1e-7,
                "|beta| = {} expected {want}",
                p.beta.norm()
            );
        }
    }

    #[test]
    fn validated_points_come_in_rotated_pairs() {
        let h = LaurentMatrixPoly::single_band(&[
            (2, c(0.31, 0.0)),
            (-2, c(-0.01, 0.0)),
            (1, c(2.0, 0.0)),
            (-1, c(2.0, 0.0)),
        ])
        .unwrap();
        let f = h.char_poly();
        let cfg = AgbzConfig { theta_grid: 32, ..Default::default() };
        let curve = agbz_points(&f, 1, 2.0, &cfg).unwrap();
        assert!(!curve.is_empty());
        assert_eq!(curve.len() % 2, 0);
        for pair in curve.points.chunks(2) {
            let rot = Complex::from_polar(1.0, pair[0].theta);
            assert!((pair[0].beta * rot - pair[1].beta).norm() < 1e-9);
        }
    }
}

//! Complex polynomial and Laurent-polynomial root finding.
//!
//! Roots come from balanced companion-matrix eigenvalues, polished by a few
//! Newton steps, and are returned sorted by ascending modulus (ties broken
//! by principal argument so output is deterministic). The middle-pair gap
//! diagnostic implements the equal-modulus condition that carves the
//! generalized Brillouin zone out of the auxiliary curves.

use crate::error::{Error, Result};
use crate::laurent::{CharPoly, LaurentPoly};
use crate::scalar::{eps, r, Real, C};
use ndarray::Array2;
use num_complex::Complex;
use num_traits::Zero;

/// Relative threshold below which a leading/trailing coefficient is treated
/// as zero (roots pushed to infinity / the origin).
const DEGENERATE_REL: f64 = 1e-12;

/// Roots sorted by ascending modulus with per-root residuals.
#[derive(Clone, Debug)]
pub struct RootList<T: Real> {
    /// Roots, `|roots[i]| <= |roots[i+1]|`.
    pub roots: Vec<C<T>>,
    /// `|p(root)| / (|lead| max(1, |root|)^deg)` after polishing.
    pub residuals: Vec<T>,
    /// Number of roots lost to degenerate leading/trailing coefficients.
    pub deficit: usize,
}

impl<T: Real> RootList<T> {
    pub fn empty() -> Self {
        RootList {
            roots: Vec::new(),
            residuals: Vec::new(),
            deficit: 0,
        }
    }

    pub fn moduli(&self) -> Vec<T> {
        self.roots.iter().map(|z| z.norm()).collect()
    }
}

fn horner<T: Real>(coeffs: &[C<T>], x: C<T>) -> (C<T>, C<T>) {
    // value and derivative
    let mut p = Complex::<T>::zero();
    let mut dp = Complex::<T>::zero();
    for c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

fn newton_polish<T: Real>(coeffs: &[C<T>], mut x: C<T>) -> C<T> {
    let mut best = x;
    let (p0, _) = horner(coeffs, x);
    let mut best_val = p0.norm();
    for _ in 0..20 {
        let (p, dp) = horner(coeffs, x);
        if dp.is_zero() {
            break;
        }
        let step = p / dp;
        x = x - step;
        let (pn, _) = horner(coeffs, x);
        if pn.norm() < best_val {
            best_val = pn.norm();
            best = x;
        }
        if step.norm() <= eps::<T>() * (T::one() + x.norm()) {
            break;
        }
    }
    best
}

fn sort_roots<T: Real>(roots: &mut [C<T>]) {
    roots.sort_by(|a, b| {
        a.norm()
            .partial_cmp(&b.norm())
            .unwrap()
            .then(a.arg().partial_cmp(&b.arg()).unwrap())
    });
}

/// All complex roots of `sum_k coeffs[k] x^k` (ascending coefficients).
///
/// Leading coefficients relatively below `1e-12` are trimmed first; an
/// (effectively) zero polynomial is an error and a degree-0 polynomial has
/// no roots.
pub fn poly_roots<T: Real>(coeffs: &[C<T>]) -> Result<RootList<T>, T> {
    let maxc = coeffs.iter().fold(T::zero(), |a, c| a.max(c.norm()));
    if maxc.is_zero() || coeffs.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let cut = maxc * r::<T>(DEGENERATE_REL);
    let mut hi = coeffs.len();
    while hi > 0 && coeffs[hi - 1].norm() <= cut {
        hi -= 1;
    }
    if hi == 0 {
        return Err(Error::ZeroPolynomial);
    }
    let work = &coeffs[..hi];
    let deg = work.len() - 1;
    if deg == 0 {
        return Ok(RootList::empty());
    }
    let lead = work[deg];

    // companion matrix of the monic polynomial
    let mut comp = Array2::<C<T>>::zeros((deg, deg));
    for i in 0..deg {
        comp[[i, deg - 1]] = -work[i] / lead;
        if i + 1 < deg {
            comp[[i + 1, i]] = Complex::new(T::one(), T::zero());
        }
    }
    crate::eig::balance(&mut comp);
    let raw = crate::eig::eigenvalues(&comp)?;

    let mut roots: Vec<C<T>> = raw.into_iter().map(|x| newton_polish(work, x)).collect();
    sort_roots(&mut roots);
    let residuals = roots
        .iter()
        .map(|x| {
            let (p, _) = horner(work, *x);
            p.norm() / (lead.norm() * T::one().max(x.norm()).powi(deg as i32))
        })
        .collect();
    Ok(RootList {
        roots,
        residuals,
        deficit: 0,
    })
}

/// Roots in `beta` of a scalar Laurent polynomial after clearing the pole.
/// `expected_span` is the generic one-sided exponent span (`M = m q` for a
/// characteristic polynomial); the deficit reports how many of the generic
/// `2 expected_span` roots were lost to degenerate extreme coefficients.
pub fn laurent_poly_roots<T: Real>(
    p: &LaurentPoly<T>,
    expected_span: i32,
) -> Result<RootList<T>, T> {
    let trimmed = p.trimmed(r::<T>(DEGENERATE_REL));
    if trimmed.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let span = (trimmed.hi() - trimmed.lo()) as usize;
    let expected = (2 * expected_span).max(0) as usize;
    if span == 0 {
        // a monomial: no finite nonzero roots at all
        return Ok(RootList {
            roots: Vec::new(),
            residuals: Vec::new(),
            deficit: expected,
        });
    }
    let mut rl = poly_roots(trimmed.coeffs())?;
    rl.deficit = expected.saturating_sub(span);
    Ok(rl)
}

/// The `2M` roots in `beta` of `f(beta, E) = 0` at fixed energy.
pub fn laurent_roots<T: Real>(f: &CharPoly<T>, e: C<T>) -> Result<RootList<T>, T> {
    laurent_poly_roots(&f.beta_poly_at_energy(e), f.max_span())
}

/// Middle pair of the pooled, modulus-sorted roots.
#[derive(Clone, Debug)]
pub struct MiddlePair<T: Real> {
    /// `log(|b_{K+1}| / |b_K|) >= 0`; zero exactly on the Floquet GBZ.
    pub gap: T,
    /// The two middle roots, lower modulus first.
    pub lower: C<T>,
    pub upper: C<T>,
}

/// Pool `laurent_roots(f, E + s)` over all energy `shifts`, sort the
/// `2 K` moduli (`K = shifts.len() * M`), and return the middle pair with its
/// log-modulus gap. Any deficit in any pooled solve is an error: the GBZ
/// filter needs the full generic root count.
pub fn middle_pair<T: Real>(f: &CharPoly<T>, shifts: &[C<T>], e: C<T>) -> Result<MiddlePair<T>, T> {
    if shifts.is_empty() {
        return Err(Error::InvalidArgument("need at least one energy shift".into()));
    }
    let m = f.max_span().max(0) as usize;
    let mut pooled: Vec<C<T>> = Vec::with_capacity(2 * m * shifts.len());
    for s in shifts {
        let rl = laurent_roots(f, e + s)?;
        if rl.deficit > 0 {
            return Err(Error::RootDeficit {
                found: rl.roots.len(),
                expected: 2 * m,
            });
        }
        pooled.extend_from_slice(&rl.roots);
    }
    sort_roots(&mut pooled);
    let k = shifts.len() * m;
    debug_assert_eq!(pooled.len(), 2 * k);
    let lower = pooled[k - 1];
    let upper = pooled[k];
    let lo = lower.norm();
    let up = upper.norm();
    let gap = if lo.is_zero() {
        T::infinity()
    } else {
        (up / lo).ln()
    };
    Ok(MiddlePair { gap, lower, upper })
}

/// `log(|b_{K+1}| / |b_K|)` for the pooled roots; zero iff `E` lies on the
/// Floquet-GBZ spectrum for this shift set.
pub fn middle_pair_gap<T: Real>(f: &CharPoly<T>, shifts: &[C<T>], e: C<T>) -> Result<T, T> {
    Ok(middle_pair(f, shifts, e)?.gap)
}

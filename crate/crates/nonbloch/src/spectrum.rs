//! Quasienergy spectra with the branch convention `Re E in (-pi/T, pi/T]`.

use crate::error::{Error, Result};
use crate::scalar::{r, Real, C};
use num_complex::Complex;
use std::collections::BTreeMap;

/// A multiset of complex (quasi)energies. `period = None` marks a static
/// spectrum carrying no folding convention.
#[derive(Clone, Debug)]
pub struct SpectrumSet<T: Real> {
    pub energies: Vec<C<T>>,
    pub period: Option<T>,
}

/// Fold a real part into `(-pi/T, pi/T]`.
pub fn fold_re<T: Real>(re: T, period: T) -> T {
    let w = T::TAU() / period;
    let k = (re / w - r::<T>(0.5)).ceil();
    re - k * w
}

impl<T: Real> SpectrumSet<T> {
    pub fn new_static(energies: Vec<C<T>>) -> Self {
        SpectrumSet { energies, period: None }
    }

    /// Fold all real parts into the first Floquet zone of `period`.
    pub fn new_folded(energies: Vec<C<T>>, period: T) -> Self {
        let energies = energies
            .into_iter()
            .map(|e| Complex::new(fold_re(e.re, period), e.im))
            .collect();
        SpectrumSet { energies, period: Some(period) }
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Largest energy magnitude.
    pub fn spectral_radius(&self) -> T {
        self.energies
            .iter()
            .fold(T::zero(), |a, e| a.max(e.norm()))
    }

    pub fn max_imag(&self) -> T {
        self.energies
            .iter()
            .fold(T::neg_infinity(), |a, e| a.max(e.im))
    }

    /// Refold (no-op for static spectra).
    pub fn refolded(&self) -> Self {
        match self.period {
            None => self.clone(),
            Some(p) => SpectrumSet::new_folded(self.energies.clone(), p),
        }
    }

    /// Shift every energy by `delta` and refold; the spectrum as a set must
    /// be invariant under `delta = 2 pi / T`.
    pub fn shifted_refolded(&self, delta: T) -> Self {
        let shifted: Vec<C<T>> = self
            .energies
            .iter()
            .map(|e| Complex::new(e.re + delta, e.im))
            .collect();
        match self.period {
            None => SpectrumSet::new_static(shifted),
            Some(p) => SpectrumSet::new_folded(shifted, p),
        }
    }

    /// Deduplicate by grid snapping at cell size `tol` (deterministic and
    /// order-independent).
    pub fn deduped(&self, tol: T) -> Self {
        let mut cells: BTreeMap<(i64, i64), C<T>> = BTreeMap::new();
        for e in &self.energies {
            if !e.re.is_finite() || !e.im.is_finite() {
                continue;
            }
            let kr = (e.re / tol).round().to_f64().unwrap() as i64;
            let ki = (e.im / tol).round().to_f64().unwrap() as i64;
            cells.entry((kr, ki)).or_insert(*e);
        }
        SpectrumSet {
            energies: cells.into_values().collect(),
            period: self.period,
        }
    }

    /// Fraction of energies with `|Im E| > im_tol`.
    pub fn eta(&self, im_tol: T) -> Result<T, T> {
        if self.energies.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        if im_tol <= T::zero() {
            return Err(Error::InvalidArgument("imTol must be positive".into()));
        }
        let complex = self
            .energies
            .iter()
            .filter(|e| e.im.abs() > im_tol)
            .count();
        Ok(r::<T>(complex as f64) / r::<T>(self.energies.len() as f64))
    }

    /// Largest distance from any member's conjugate to the set; zero for a
    /// conjugation-closed (PT-symmetric) spectrum.
    pub fn conjugation_residual(&self) -> T {
        let mut worst = T::zero();
        for e in &self.energies {
            let conj = e.conj();
            let mut best = T::infinity();
            for o in &self.energies {
                best = best.min((conj - o).norm());
            }
            worst = worst.max(best);
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use std::f64::consts::PI;

    #[test]
    fn folding_brackets() {
        let t = 2.0;
        let w = PI / t; // zone half-width
        assert!((fold_re(w, t) - w).abs() < 1e-15); // +pi/T stays
        assert!((fold_re(-w, t) - w).abs() < 1e-15); // -pi/T maps to +pi/T
        assert!((fold_re(0.3, t) - 0.3).abs() < 1e-15);
        assert!((fold_re(0.3 + 2.0 * PI / t, t) - 0.3).abs() < 1e-12);
        assert!((fold_re(-5.0 * PI / t + 0.1, t) - (PI / t + 0.1 - 2.0 * PI / t)).abs() < 1e-12);
    }

    #[test]
    fn eta_counts() {
        let s = SpectrumSet::new_static(vec![c::<f64>(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)]);
        let eta = s.eta(1e-8).unwrap();
        assert!((eta - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn eta_empty_errors() {
        let s = SpectrumSet::<f64>::new_static(vec![]);
        assert!(s.eta(1e-8).is_err());
    }

    #[test]
    fn dedup_grid_snap() {
        let s = SpectrumSet::new_static(vec![
            c::<f64>(1.0, 0.0),
            c(1.0 + 1e-12, 0.0),
            c(2.0, 0.0),
        ]);
        assert_eq!(s.deduped(1e-8).len(), 2);
    }

    #[test]
    fn shift_refold_invariance() {
        let t = 0.9;
        let s = SpectrumSet::new_folded(
            vec![c::<f64>(0.3, 0.1), c(-1.2, -0.1), c(3.0, 0.4)],
            t,
        );
        let shifted = s.shifted_refolded(2.0 * PI / t);
        let d = crate::observables::hausdorff(&s.energies, &shifted.energies).unwrap();
        assert!(d < 1e-12);
    }
}

//! Matrix-valued Laurent polynomials and their characteristic polynomials.
//!
//! The bulk of a 1D tight-binding chain with hopping range `m` and `q`
//! orbitals per cell is encoded as `h(beta) = sum_{n=-m}^{m} h_n beta^n`
//! with `q x q` complex blocks `h_n`. Piecewise-constant drives are lists of
//! such polynomials with duration fractions. The characteristic polynomial
//! `f(beta, E) = det[h(beta) - E]` is expanded over the Laurent-coefficient
//! ring by the Faddeev-LeVerrier recursion, which needs only ring addition
//! and multiplication plus division by small integers.

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::scalar::{eps, r, Real, C};
use ndarray::Array2;
use num_complex::Complex;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Scalar Laurent polynomial with dense coefficients over `[lo, lo+len)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly<T: Real> {
    lo: i32,
    coeffs: Vec<C<T>>,
}

impl<T: Real> LaurentPoly<T> {
    pub fn zero() -> Self {
        LaurentPoly {
            lo: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: C<T>) -> Self {
        LaurentPoly {
            lo: 0,
            coeffs: vec![c],
        }
    }

    pub fn one() -> Self {
        Self::constant(Complex::one())
    }

    pub fn monomial(n: i32, c: C<T>) -> Self {
        LaurentPoly {
            lo: n,
            coeffs: vec![c],
        }
    }

    /// Coefficients over a contiguous exponent range starting at `lo`.
    pub fn from_range(lo: i32, coeffs: Vec<C<T>>) -> Self {
        LaurentPoly { lo, coeffs }
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.coeffs.len() as i32 - 1
    }

    pub fn coeff(&self, n: i32) -> C<T> {
        let idx = n - self.lo;
        if idx >= 0 && (idx as usize) < self.coeffs.len() {
            self.coeffs[idx as usize]
        } else {
            Complex::zero()
        }
    }

    pub fn coeffs(&self) -> &[C<T>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn max_coeff_norm(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, c| acc.max(c.norm()))
    }

    /// Drop exponents at both ends whose coefficients are relatively
    /// negligible (`|c| <= rel * max|c|`).
    pub fn trimmed(&self, rel: T) -> Self {
        let cut = self.max_coeff_norm() * rel;
        let mut lo_idx = 0usize;
        let mut hi_idx = self.coeffs.len();
        while lo_idx < hi_idx && self.coeffs[lo_idx].norm() <= cut {
            lo_idx += 1;
        }
        while hi_idx > lo_idx && self.coeffs[hi_idx - 1].norm() <= cut {
            hi_idx -= 1;
        }
        if lo_idx == hi_idx {
            return Self::zero();
        }
        LaurentPoly {
            lo: self.lo + lo_idx as i32,
            coeffs: self.coeffs[lo_idx..hi_idx].to_vec(),
        }
    }

    pub fn scale(&self, c: C<T>) -> Self {
        LaurentPoly {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() {
            return other.clone();
        }
        if other.coeffs.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let mut coeffs = vec![Complex::<T>::zero(); (hi - lo + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.lo - lo) as usize + i] = *c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let k = (other.lo - lo) as usize + i;
            coeffs[k] = coeffs[k] + *c;
        }
        LaurentPoly { lo, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-Complex::<T>::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let lo = self.lo + other.lo;
        let mut coeffs = vec![Complex::<T>::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j] + a * b;
            }
        }
        LaurentPoly { lo, coeffs }
    }

    /// Evaluate at `beta`. `beta = 0` is a pole whenever negative exponents
    /// are present.
    pub fn eval(&self, beta: C<T>) -> Result<C<T>, T> {
        if self.coeffs.is_empty() {
            return Ok(Complex::zero());
        }
        if beta.is_zero() {
            if self.lo < 0 {
                return Err(Error::LaurentPole);
            }
            return Ok(self.coeff(0));
        }
        // Horner on the polynomial part, then shift by beta^lo
        let mut acc = Complex::<T>::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * beta + c;
        }
        Ok(acc * beta.powi(self.lo))
    }
}

/// `q x q` matrix-valued Laurent polynomial `h(beta) = sum_n h_n beta^n`,
/// stored densely over `n` in `[-m, m]`.
#[derive(Clone, Debug)]
pub struct LaurentMatrixPoly<T: Real> {
    orbitals: usize,
    range: i32,
    blocks: Vec<CMat<T>>, // index i holds the block for exponent i - range
}

impl<T: Real> LaurentMatrixPoly<T> {
    /// Build from blocks for exponents `-m..=m`. The range is tightened so
    /// that at least one of the extreme blocks is nonzero (an all-zero
    /// polynomial collapses to `m = 0`).
    pub fn new(orbitals: usize, range: i32, blocks: Vec<CMat<T>>) -> Result<Self, T> {
        if orbitals == 0 {
            return Err(Error::InvalidArgument("orbital count must be positive".into()));
        }
        if range < 0 || blocks.len() != (2 * range + 1) as usize {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficient blocks, got {}",
                2 * range + 1,
                blocks.len()
            )));
        }
        for b in &blocks {
            if b.nrows() != orbitals || b.ncols() != orbitals {
                return Err(Error::InvalidArgument("coefficient block has wrong shape".into()));
            }
        }
        let mut h = LaurentMatrixPoly {
            orbitals,
            range,
            blocks,
        };
        h.tighten();
        Ok(h)
    }

    /// Zero polynomial.
    pub fn zeros(orbitals: usize) -> Self {
        LaurentMatrixPoly {
            orbitals,
            range: 0,
            blocks: vec![Array2::zeros((orbitals, orbitals))],
        }
    }

    /// Single-band convenience: scalar hopping amplitudes by exponent.
    pub fn single_band(terms: &[(i32, C<T>)]) -> Result<Self, T> {
        let m = terms.iter().map(|(n, _)| n.abs()).max().unwrap_or(0);
        let mut blocks: Vec<CMat<T>> = (0..2 * m + 1).map(|_| Array2::zeros((1, 1))).collect();
        for (n, c) in terms {
            let idx = (n + m) as usize;
            blocks[idx][[0, 0]] = blocks[idx][[0, 0]] + *c;
        }
        Self::new(1, m, blocks)
    }

    fn tighten(&mut self) {
        while self.range > 0 {
            let first = self.blocks.first().unwrap();
            let last = self.blocks.last().unwrap();
            if first.iter().all(|c| c.is_zero()) && last.iter().all(|c| c.is_zero()) {
                self.blocks.remove(0);
                self.blocks.pop();
                self.range -= 1;
            } else {
                break;
            }
        }
    }

    pub fn orbitals(&self) -> usize {
        self.orbitals
    }

    /// Maximum hopping range `m`.
    pub fn range(&self) -> i32 {
        self.range
    }

    pub fn coeff(&self, n: i32) -> Option<&CMat<T>> {
        if n.abs() > self.range {
            return None;
        }
        Some(&self.blocks[(n + self.range) as usize])
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|c| c.is_zero()))
    }

    /// Evaluate `sum_n h_n beta^n`.
    pub fn eval(&self, beta: C<T>) -> Result<CMat<T>, T> {
        if beta.is_zero() {
            return Err(Error::LaurentPole);
        }
        let q = self.orbitals;
        let mut acc = Array2::<C<T>>::zeros((q, q));
        for (i, block) in self.blocks.iter().enumerate() {
            let n = i as i32 - self.range;
            let w = beta.powi(n);
            for a in 0..q {
                for b in 0..q {
                    acc[[a, b]] = acc[[a, b]] + block[[a, b]] * w;
                }
            }
        }
        Ok(acc)
    }

    /// Entry `(a, b)` as a scalar Laurent polynomial.
    pub fn entry_poly(&self, a: usize, b: usize) -> LaurentPoly<T> {
        let coeffs: Vec<C<T>> = self.blocks.iter().map(|blk| blk[[a, b]]).collect();
        LaurentPoly::from_range(-self.range, coeffs)
    }

    /// Weighted sum of two matrix polynomials.
    pub fn add_scaled(&self, w_self: T, other: &Self, w_other: T) -> Result<Self, T> {
        if self.orbitals != other.orbitals {
            return Err(Error::InvalidArgument("orbital count mismatch".into()));
        }
        let m = self.range.max(other.range);
        let q = self.orbitals;
        let mut blocks: Vec<CMat<T>> = (0..2 * m + 1).map(|_| Array2::zeros((q, q))).collect();
        for n in -m..=m {
            let mut blk = Array2::<C<T>>::zeros((q, q));
            if let Some(b) = self.coeff(n) {
                blk = blk + &b.mapv(|z| z * w_self);
            }
            if let Some(b) = other.coeff(n) {
                blk = blk + &b.mapv(|z| z * w_other);
            }
            blocks[(n + m) as usize] = blk;
        }
        Self::new(q, m, blocks)
    }

    /// Characteristic polynomial `f(beta, E) = det[h(beta) - E]`, expanded in
    /// powers of `E` with scalar Laurent polynomials in `beta` as
    /// coefficients (Faddeev-LeVerrier over the Laurent ring).
    pub fn char_poly(&self) -> CharPoly<T> {
        let q = self.orbitals;
        // matrix over the Laurent ring
        let a: Vec<Vec<LaurentPoly<T>>> = (0..q)
            .map(|i| (0..q).map(|j| self.entry_poly(i, j)).collect())
            .collect();
        let ring_zero = LaurentPoly::<T>::zero();
        let mat_mul = |x: &Vec<Vec<LaurentPoly<T>>>, y: &Vec<Vec<LaurentPoly<T>>>| {
            let mut out = vec![vec![ring_zero.clone(); q]; q];
            for i in 0..q {
                for j in 0..q {
                    let mut s = ring_zero.clone();
                    for k in 0..q {
                        s = s.add(&x[i][k].mul(&y[k][j]));
                    }
                    out[i][j] = s;
                }
            }
            out
        };
        let trace = |x: &Vec<Vec<LaurentPoly<T>>>| {
            let mut s = ring_zero.clone();
            for i in 0..q {
                s = s.add(&x[i][i]);
            }
            s
        };

        // det(E I - A) = sum_k c_k E^k with c_q = 1
        let mut c = vec![ring_zero.clone(); q + 1];
        c[q] = LaurentPoly::one();
        let mut m_prev = vec![vec![ring_zero.clone(); q]; q]; // M_0 = 0
        for k in 1..=q {
            // M_k = A M_{k-1} + c_{q-k+1} I
            let mut m_k = mat_mul(&a, &m_prev);
            for i in 0..q {
                m_k[i][i] = m_k[i][i].add(&c[q - k + 1]);
            }
            let am = mat_mul(&a, &m_k);
            let inv_k = Complex::new(-T::one() / r::<T>(k as f64), T::zero());
            c[q - k] = trace(&am).scale(inv_k);
            m_prev = m_k;
        }
        // det(h - E) = (-1)^q det(E I - h)
        let sign = if q % 2 == 0 {
            Complex::<T>::one()
        } else {
            -Complex::<T>::one()
        };
        let coeffs_e = c.into_iter().map(|p| p.scale(sign)).collect();
        CharPoly {
            deg_e: q,
            max_span: self.range * q as i32,
            coeffs_e,
        }
    }
}

/// Characteristic polynomial `f(beta, E)` stored as a degree-`q` polynomial
/// in `E` whose coefficients are scalar Laurent polynomials in `beta`.
#[derive(Clone, Debug)]
pub struct CharPoly<T: Real> {
    deg_e: usize,
    max_span: i32,
    coeffs_e: Vec<LaurentPoly<T>>,
}

impl<T: Real> CharPoly<T> {
    pub fn deg_e(&self) -> usize {
        self.deg_e
    }

    /// Generic one-sided Laurent span `M = m q`; `f` has `2M` roots in beta.
    pub fn max_span(&self) -> i32 {
        self.max_span
    }

    pub fn coeff_e(&self, k: usize) -> &LaurentPoly<T> {
        &self.coeffs_e[k]
    }

    pub fn eval(&self, beta: C<T>, e: C<T>) -> Result<C<T>, T> {
        let mut acc = Complex::<T>::zero();
        let mut ek = Complex::<T>::one();
        for p in &self.coeffs_e {
            acc = acc + p.eval(beta)? * ek;
            ek = ek * e;
        }
        Ok(acc)
    }

    /// Coefficients of the polynomial in `E` at a fixed `beta`, ascending.
    pub fn coeffs_at_beta(&self, beta: C<T>) -> Result<Vec<C<T>>, T> {
        self.coeffs_e.iter().map(|p| p.eval(beta)).collect()
    }

    /// The Laurent polynomial in `beta` obtained by fixing `E`.
    pub fn beta_poly_at_energy(&self, e: C<T>) -> LaurentPoly<T> {
        let mut acc = LaurentPoly::zero();
        let mut ek = Complex::<T>::one();
        for p in &self.coeffs_e {
            acc = acc.add(&p.scale(ek));
            ek = ek * e;
        }
        acc
    }
}

/// Piecewise-constant drive: ordered segments `(duration fraction, h_k)`
/// covering one period.
#[derive(Clone, Debug)]
pub struct TimedLaurentPoly<T: Real> {
    segments: Vec<(T, LaurentMatrixPoly<T>)>,
    period: T,
}

impl<T: Real> TimedLaurentPoly<T> {
    pub fn new(segments: Vec<(T, LaurentMatrixPoly<T>)>, period: T) -> Result<Self, T> {
        if segments.is_empty() {
            return Err(Error::InvalidArgument("drive needs at least one segment".into()));
        }
        if period <= T::zero() {
            return Err(Error::InvalidArgument("period must be positive".into()));
        }
        let q = segments[0].1.orbitals();
        let mut total = T::zero();
        for (tau, h) in &segments {
            if *tau <= T::zero() || *tau > T::one() {
                return Err(Error::InvalidArgument(
                    "segment duration fraction must lie in (0, 1]".into(),
                ));
            }
            if h.orbitals() != q {
                return Err(Error::InvalidArgument("segment orbital counts differ".into()));
            }
            total = total + *tau;
        }
        let tol = r::<T>(1e-12).max(eps::<T>() * r::<T>(8.0));
        if (total - T::one()).abs() > tol {
            return Err(Error::InvalidArgument(format!(
                "segment duration fractions sum to {total}, expected 1"
            )));
        }
        Ok(TimedLaurentPoly { segments, period })
    }

    pub fn segments(&self) -> &[(T, LaurentMatrixPoly<T>)] {
        &self.segments
    }

    pub fn period(&self) -> T {
        self.period
    }

    /// Floquet non-Bloch Hamiltonian `h_F(beta) = sum_k tau_k h_k(beta)`,
    /// i.e. the time average of a piecewise-constant drive.
    pub fn time_average(&self) -> LaurentMatrixPoly<T> {
        let q = self.segments[0].1.orbitals();
        let mut acc = LaurentMatrixPoly::zeros(q);
        for (tau, h) in &self.segments {
            acc = acc
                .add_scaled(T::one(), h, *tau)
                .expect("segment orbital counts verified at construction");
        }
        acc
    }

    /// Check `[h(beta, t_k), h(beta, t_j)] = 0` over random `beta` samples
    /// drawn on annuli `|beta| in [0.5, 2]`. Returns the verdict together
    /// with the largest commutator norm encountered.
    pub fn commutation_check(&self, samples: usize) -> Result<(bool, T), T> {
        if samples == 0 {
            return Err(Error::InvalidArgument("need at least one sample".into()));
        }
        let tol = r::<T>(1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(0x6e6f_6e62_6c6f_6368);
        let mut max_res = T::zero();
        for _ in 0..samples {
            let radius = r::<T>(rng.gen_range(0.5f64..=2.0));
            let angle = r::<T>(rng.gen_range(0.0..std::f64::consts::TAU));
            let beta = Complex::from_polar(radius, angle);
            let mats: Vec<CMat<T>> = self
                .segments
                .iter()
                .map(|(_, h)| h.eval(beta))
                .collect::<Result<_, T>>()?;
            for i in 0..mats.len() {
                for j in i + 1..mats.len() {
                    let comm = mats[i].dot(&mats[j]) - mats[j].dot(&mats[i]);
                    let norm = crate::linalg::frobenius_norm(&comm);
                    max_res = max_res.max(norm);
                }
            }
        }
        Ok((max_res < tol, max_res))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use ndarray::arr2;

    /// Single-band bulk of the boundary-driven chain:
    /// `(t2+g) b^2 + (t2-g) b^-2 + t1 (b + b^-1)`.
    pub fn single_band_bulk(t1: f64, t2: f64, g: f64) -> LaurentMatrixPoly<f64> {
        LaurentMatrixPoly::single_band(&[
            (2, c(t2 + g, 0.0)),
            (-2, c(t2 - g, 0.0)),
            (1, c(t1, 0.0)),
            (-1, c(t1, 0.0)),
        ])
        .unwrap()
    }

    /// Two coupled Hatano-Nelson chains with opposite on-site potentials.
    pub fn two_band_bulk(t: f64, g: f64, mu: f64, delta: f64) -> LaurentMatrixPoly<f64> {
        let z = c(0.0, 0.0);
        let blocks = vec![
            arr2(&[[c(t - g, 0.0), z], [z, c(t + g, 0.0)]]),
            arr2(&[[c(mu, 0.0), c(delta, 0.0)], [c(delta, 0.0), c(-mu, 0.0)]]),
            arr2(&[[c(t + g, 0.0), z], [z, c(t - g, 0.0)]]),
        ];
        LaurentMatrixPoly::new(2, 1, blocks).unwrap()
    }

    #[test]
    fn eval_single_band_at_unity() {
        // gamma contributions cancel at beta = 1
        let h = single_band_bulk(2.0, 0.15, 0.16);
        let v = h.eval(c(1.0, 0.0)).unwrap();
        assert!((v[[0, 0]] - c::<f64>(4.3, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn eval_zero_poly() {
        let h = LaurentMatrixPoly::<f64>::zeros(2);
        let v = h.eval(c(1.0, 0.0)).unwrap();
        assert!(v.iter().all(|z| z.is_zero()));
    }

    #[test]
    fn eval_rejects_beta_zero() {
        let h = single_band_bulk(2.0, 0.15, 0.16);
        assert!(matches!(h.eval(c(0.0, 0.0)), Err(Error::LaurentPole)));
    }

    #[test]
    fn eval_two_band_matches_entrywise_formula() {
        let (t, g, mu, delta) = (1.0, 0.5, 2.5, 0.1);
        let h = two_band_bulk(t, g, mu, delta);
        let beta = c::<f64>(0.0, 1.0);
        let v = h.eval(beta).unwrap();
        let binv = 1.0 / beta;
        let a = c::<f64>(t + g, 0.0) * beta + c::<f64>(t - g, 0.0) * binv + c::<f64>(mu, 0.0);
        let d = c::<f64>(t - g, 0.0) * beta + c::<f64>(t + g, 0.0) * binv - c::<f64>(mu, 0.0);
        assert!((v[[0, 0]] - a).norm() < 1e-14);
        assert!((v[[1, 1]] - d).norm() < 1e-14);
        assert!((v[[0, 1]] - c::<f64>(delta, 0.0)).norm() < 1e-14);
        assert!((v[[1, 0]] - c::<f64>(delta, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn char_poly_single_band() {
        let h = single_band_bulk(2.0, 0.15, 0.16);
        let f = h.char_poly();
        assert_eq!(f.deg_e(), 1);
        assert_eq!(f.max_span(), 2);
        // coefficient of E^1 is -1, of E^0 is h(beta)
        assert!((f.coeff_e(1).coeff(0) + c::<f64>(1.0, 0.0)).norm() < 1e-14);
        let beta = c(0.7, 0.3);
        let h_val = h.eval(beta).unwrap()[[0, 0]];
        assert!((f.coeff_e(0).eval(beta).unwrap() - h_val).norm() < 1e-13);
    }

    #[test]
    fn char_poly_two_band_matches_symbolic_expansion() {
        let (t, g, mu, delta) = (1.0, 0.5, 2.5, 0.1);
        let h = two_band_bulk(t, g, mu, delta);
        let f = h.char_poly();
        assert_eq!(f.deg_e(), 2);
        assert_eq!(f.max_span(), 2);
        // (a - E)(d - E) - delta^2 = E^2 - (a + d) E + (a d - delta^2)
        let a = h.entry_poly(0, 0);
        let d = h.entry_poly(1, 1);
        let e2 = LaurentPoly::one();
        let e1 = a.add(&d).scale(c(-1.0, 0.0));
        let e0 = a.mul(&d).sub(&LaurentPoly::constant(c(delta * delta, 0.0)));
        for (got, want) in [(f.coeff_e(2), &e2), (f.coeff_e(1), &e1), (f.coeff_e(0), &e0)] {
            for n in -2..=2 {
                assert!(
                    (got.coeff(n) - want.coeff(n)).norm() < 1e-13,
                    "coefficient mismatch at beta^{n}"
                );
            }
        }
    }

    #[test]
    fn char_poly_matches_determinant_on_random_probes() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = two_band_bulk(1.0, 0.5, 2.5, 0.1);
        let f = h.char_poly();
        for _ in 0..50 {
            let beta = Complex::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            if beta.norm() < 0.1 {
                continue;
            }
            let e = Complex::new(rng.gen_range(-4.0..4.0), rng.gen_range(-1.0..1.0));
            let direct = {
                let m = h.eval(beta).unwrap();
                let shifted = &m - &Array2::from_diag_elem(2, e);
                crate::linalg::det(&shifted).unwrap()
            };
            let via_poly = f.eval(beta, e).unwrap();
            assert!(
                (direct - via_poly).norm() <= 1e-10 * (1.0 + direct.norm()),
                "probe mismatch: {direct} vs {via_poly}"
            );
        }
    }

    fn four_step_drive(t1: f64, t2: f64, g1: f64, g2: f64) -> TimedLaurentPoly<f64> {
        let seg = |terms: &[(i32, f64)]| {
            LaurentMatrixPoly::single_band(
                &terms.iter().map(|&(n, v)| (n, c(v, 0.0))).collect::<Vec<_>>(),
            )
            .unwrap()
        };
        TimedLaurentPoly::new(
            vec![
                (0.25, seg(&[(1, t1), (-1, t1)])),
                (0.25, seg(&[(1, g1), (-1, -g1)])),
                (0.25, seg(&[(2, t2), (-2, t2)])),
                (0.25, seg(&[(2, g2), (-2, -g2)])),
            ],
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn time_average_four_step() {
        let (t1, t2, g1, g2) = (1.0, 0.08, 0.1, 0.07);
        let hf = four_step_drive(t1, t2, g1, g2).time_average();
        let want = |n: i32| -> f64 {
            match n {
                1 => (t1 + g1) / 4.0,
                -1 => (t1 - g1) / 4.0,
                2 => (t2 + g2) / 4.0,
                -2 => (t2 - g2) / 4.0,
                _ => 0.0,
            }
        };
        for n in -2..=2 {
            let got = hf.coeff(n).unwrap()[[0, 0]];
            assert!((got - c::<f64>(want(n), 0.0)).norm() < 1e-15, "n = {n}");
        }
    }

    #[test]
    fn time_average_single_segment_is_identity_map() {
        let h = single_band_bulk(2.0, 0.15, 0.16);
        let drive = TimedLaurentPoly::new(vec![(1.0, h.clone())], 0.5).unwrap();
        let avg = drive.time_average();
        for n in -2..=2 {
            let a = avg.coeff(n).unwrap();
            let b = h.coeff(n).unwrap();
            assert!((a[[0, 0]] - b[[0, 0]]).norm() < 1e-15);
        }
    }

    #[test]
    fn time_average_cancellation() {
        let h = single_band_bulk(1.0, 0.3, 0.1);
        let neg = h.add_scaled(-2.0, &h, 1.0).unwrap(); // -h
        let drive = TimedLaurentPoly::new(vec![(0.5, h), (0.5, neg)], 1.0).unwrap();
        let avg = drive.time_average();
        assert!(avg.is_zero());
        assert_eq!(avg.range(), 0);
    }

    #[test]
    fn fraction_sum_is_checked() {
        let h = single_band_bulk(1.0, 0.3, 0.1);
        assert!(TimedLaurentPoly::new(vec![(0.6, h)], 1.0).is_err());
    }

    #[test]
    fn commutation_scalar_always_passes() {
        let drive = four_step_drive(1.0, 0.08, 0.1, 0.07);
        let (ok, res) = drive.commutation_check(32).unwrap();
        assert!(ok);
        assert!(res < 1e-12);
    }

    #[test]
    fn commutation_detects_pauli_pair() {
        let sx = arr2(&[[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]);
        let sz = arr2(&[[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]);
        let zero = Array2::zeros((2, 2));
        let hx = LaurentMatrixPoly::new(2, 1, vec![zero.clone(), zero.clone(), sx]).unwrap();
        let hz = LaurentMatrixPoly::new(2, 1, vec![zero.clone(), zero.clone(), sz]).unwrap();
        let drive = TimedLaurentPoly::new(vec![(0.5, hx), (0.5, hz)], 1.0).unwrap();
        let (ok, res) = drive.commutation_check(64).unwrap();
        assert!(!ok);
        // [sx b, sz b] = 2 i sy b^2, Frobenius norm 2 sqrt(2) |b|^2 with |b| >= 0.5
        assert!(res >= 2.0 * 2.0f64.sqrt() * 0.25 * 0.999);
    }
}

//! Matrix exponential by scaling and squaring with a degree-13 diagonal Padé
//! approximant and 1-norm based scaling.

use crate::error::{Error, Result};
use crate::linalg::{identity, one_norm, CMat, Lu};
use crate::scalar::{r, Real, C};
use num_complex::Complex;

/// Padé-13 numerator coefficients (denominator is the same with alternating
/// signs).
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// 1-norm threshold below which the unscaled Padé-13 approximant meets
/// double-precision backward error.
const THETA_13: f64 = 5.371920351148152;

/// Matrix exponential of a square complex matrix.
pub fn expm<T: Real>(a: &CMat<T>) -> Result<CMat<T>, T> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::ExpmOverflow(T::nan()));
    }
    let norm = one_norm(a);
    if !norm.is_finite() || norm > r::<T>(1e12) {
        return Err(Error::ExpmOverflow(norm));
    }
    let theta = r::<T>(THETA_13);
    let mut s = 0u32;
    if norm > theta {
        let ratio = (norm / theta).log2();
        s = ratio.ceil().to_f64().unwrap() as u32;
    }
    let scale = r::<T>(0.5).powi(s as i32);
    let a1 = a.mapv(|z| z * scale);

    let b: Vec<C<T>> = B13.iter().map(|&x| Complex::new(r(x), T::zero())).collect();
    let a2 = a1.dot(&a1);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);
    let id = identity::<T>(n);

    // u = A (A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    let mut w = a6.mapv(|z| z * b[13]);
    w = w + &a4.mapv(|z| z * b[11]);
    w = w + &a2.mapv(|z| z * b[9]);
    let mut u = a6.dot(&w);
    u = u + &a6.mapv(|z| z * b[7]);
    u = u + &a4.mapv(|z| z * b[5]);
    u = u + &a2.mapv(|z| z * b[3]);
    u = u + &id.mapv(|z| z * b[1]);
    let u = a1.dot(&u);

    // v = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    let mut w = a6.mapv(|z| z * b[12]);
    w = w + &a4.mapv(|z| z * b[10]);
    w = w + &a2.mapv(|z| z * b[8]);
    let mut v = a6.dot(&w);
    v = v + &a6.mapv(|z| z * b[6]);
    v = v + &a4.mapv(|z| z * b[4]);
    v = v + &a2.mapv(|z| z * b[2]);
    v = v + &id.mapv(|z| z * b[0]);

    // r = (v - u)^{-1} (v + u), then square s times
    let vmu = &v - &u;
    let vpu = &v + &u;
    let lu = Lu::factor(&vmu)?;
    if lu.is_singular() {
        return Err(Error::ExpmOverflow(norm));
    }
    let mut x = lu.solve_mat(&vpu)?;
    for _ in 0..s {
        x = x.dot(&x);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::scalar::c;
    use ndarray::{arr2, Array2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn expm_zero_is_identity() {
        let a = Array2::<Complex<f64>>::zeros((4, 4));
        let e = expm(&a).unwrap();
        assert!(max_abs(&(&e - &identity::<f64>(4))) < 1e-15);
    }

    #[test]
    fn expm_diagonal() {
        let a: CMat<f64> = arr2(&[[c(0.0, PI), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -PI)]]);
        let e = expm(&a).unwrap();
        assert!((e[[0, 0]] - c::<f64>(-1.0, 0.0)).norm() < 1e-13);
        assert!((e[[1, 1]] - c::<f64>(-1.0, 0.0)).norm() < 1e-13);
        assert!(e[[0, 1]].norm() < 1e-14);
        assert!(e[[1, 0]].norm() < 1e-14);
    }

    #[test]
    fn expm_nilpotent() {
        let a: CMat<f64> = arr2(&[[c(0.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]);
        let e = expm(&a).unwrap();
        let want = arr2(&[[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]);
        assert!(max_abs(&(&e - &want)) < 1e-15);
    }

    #[test]
    fn expm_inverse_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [5usize, 17, 40] {
            let a = Array2::from_shape_fn((n, n), |_| {
                Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let e = expm(&a).unwrap();
            let em = expm(&a.mapv(|z| -z)).unwrap();
            let prod = e.dot(&em);
            assert!(max_abs(&(&prod - &identity::<f64>(n))) < 1e-10);
        }
    }

    #[test]
    fn expm_large_norm_scaling() {
        // 40 i pi and -31 i pi on the diagonal exercise the squaring phase
        let a: CMat<f64> = arr2(&[[c(0.0, 40.0 * PI), c(3.0, 0.0)], [c(0.0, 0.0), c(0.0, -31.0 * PI)]]);
        let e = expm(&a).unwrap();
        assert!((e[[0, 0]] - c::<f64>(1.0, 0.0)).norm() < 1e-9);
        assert!((e[[1, 1]] - c::<f64>(-1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn expm_rejects_nonfinite() {
        let a: CMat<f64> = arr2(&[[c(f64::NAN, 0.0)]]);
        assert!(expm(&a).is_err());
    }
}

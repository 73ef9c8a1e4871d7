//! Real-space oracle: builds the driven lattice models, assembles Floquet
//! operators as ordered products of matrix exponentials, and extracts
//! quasienergies by dense diagonalization. Everything downstream of the
//! non-Bloch band theory is cross-validated against this module.

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::laurent::{LaurentMatrixPoly, TimedLaurentPoly};
use crate::linalg::CMat;
use crate::scalar::{r, Real, C};
use crate::spectrum::SpectrumSet;
use ndarray::Array2;
use num_complex::Complex;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Built-in driven models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ModelKind {
    /// Static single-band chain (NN hopping `t1`, non-reciprocal NNN
    /// `t2 +- gamma`) with a step potential `+-V` on the two end sites.
    SingleBand,
    /// Two coupled Hatano-Nelson chains with opposite on-site potentials
    /// `+-mu`, interchain coupling `delta`, and a step drive `+-V` coupling
    /// the A/B orbitals of the two end cells.
    TwoBand,
    /// Four-step bulk drive alternating reciprocal (`t1`, `t2`) and
    /// non-reciprocal (`gamma1`, `gamma2`) NN/NNN hoppings; no edge drive.
    BulkFourStep,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::SingleBand => "single_band",
            ModelKind::TwoBand => "two_band",
            ModelKind::BulkFourStep => "bulk_four_step",
        }
    }

    pub fn parse(name: &str) -> Option<ModelKind> {
        match name {
            "single_band" => Some(ModelKind::SingleBand),
            "two_band" => Some(ModelKind::TwoBand),
            "bulk_four_step" => Some(ModelKind::BulkFourStep),
            _ => None,
        }
    }

    /// Required parameter keys (`L` is the cell count, `T` the period).
    pub fn required_params(&self) -> &'static [&'static str] {
        match self {
            ModelKind::SingleBand => &["t1", "t2", "gamma", "V", "T", "L"],
            ModelKind::TwoBand => &["t", "gamma", "mu", "delta", "V", "T", "L"],
            ModelKind::BulkFourStep => &["t1", "t2", "gamma1", "gamma2", "T", "L"],
        }
    }

    pub fn orbitals(&self) -> usize {
        match self {
            ModelKind::TwoBand => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BoundaryCond {
    Open,
    Periodic,
}

/// One piecewise-constant drive segment: `H_k = bulk + edge`, active for a
/// fraction of the period.
#[derive(Clone, Debug)]
pub struct DriveSegment<T: Real> {
    pub fraction: T,
    pub bulk: CMat<T>,
    pub edge: CMat<T>,
}

impl<T: Real> DriveSegment<T> {
    pub fn hamiltonian(&self) -> CMat<T> {
        &self.bulk + &self.edge
    }
}

/// A period-T protocol on a finite chain.
#[derive(Clone, Debug)]
pub struct DriveProtocol<T: Real> {
    pub model: ModelKind,
    pub cells: usize,
    pub orbitals: usize,
    pub period: T,
    pub bc: BoundaryCond,
    pub segments: Vec<DriveSegment<T>>,
    pub params: BTreeMap<String, f64>,
}

impl<T: Real> DriveProtocol<T> {
    pub fn dim(&self) -> usize {
        self.cells * self.orbitals
    }

    /// Time-averaged Hamiltonian `sum_k tau_k H_k` (bulk plus edge).
    pub fn averaged_hamiltonian(&self) -> CMat<T> {
        let n = self.dim();
        let mut acc = Array2::<C<T>>::zeros((n, n));
        for seg in &self.segments {
            acc = acc + &seg.hamiltonian().mapv(|z| z * seg.fraction);
        }
        acc
    }
}

fn get_param<T: Real>(
    params: &BTreeMap<String, f64>,
    key: &str,
    model: ModelKind,
) -> Result<f64, T> {
    params.get(key).copied().ok_or_else(|| Error::MissingParam {
        key: key.to_string(),
        model: model.name().to_string(),
    })
}

fn get_cells<T: Real>(params: &BTreeMap<String, f64>, model: ModelKind) -> Result<usize, T> {
    let l = get_param::<T>(params, "L", model)?;
    if l < 1.0 || l.fract() != 0.0 || l > 1e7 {
        return Err(Error::InvalidParam {
            key: "L".into(),
            value: l,
            reason: "cell count must be a positive integer".into(),
        });
    }
    Ok(l as usize)
}

fn get_period<T: Real>(params: &BTreeMap<String, f64>, model: ModelKind) -> Result<f64, T> {
    let t = get_param::<T>(params, "T", model)?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParam {
            key: "T".into(),
            value: t,
            reason: "period must be positive".into(),
        });
    }
    Ok(t)
}

/// Add `amp * c_j^dag c_{j+off}` bonds for every site pair in range
/// (`off` in units of sites, including the periodic wrap when asked).
fn add_hopping<T: Real>(h: &mut CMat<T>, sites: usize, off: usize, amp: C<T>, bc: BoundaryCond) {
    for j in 0..sites {
        let k = j + off;
        if k < sites {
            h[[j, k]] = h[[j, k]] + amp;
        } else if bc == BoundaryCond::Periodic {
            h[[j, k % sites]] = h[[j, k % sites]] + amp;
        }
    }
}

/// Build the real-space drive protocol for a named model. Boundary drives
/// act on a fixed number of sites near each end, independent of `L`.
pub fn build_model<T: Real>(
    model: ModelKind,
    params: &BTreeMap<String, f64>,
    bc: BoundaryCond,
) -> Result<DriveProtocol<T>, T> {
    let cells = get_cells::<T>(params, model)?;
    let period = r::<T>(get_period::<T>(params, model)?);
    let q = model.orbitals();
    let n = cells * q;
    let half = r::<T>(0.5);
    let quarter = r::<T>(0.25);

    let segments = match model {
        ModelKind::SingleBand => {
            let t1 = get_param::<T>(params, "t1", model)?;
            let t2 = get_param::<T>(params, "t2", model)?;
            let g = get_param::<T>(params, "gamma", model)?;
            let v = get_param::<T>(params, "V", model)?;
            // forward amplitudes c_j^dag c_{j+n}; the reverse direction
            // carries t1 and t2 - gamma
            let mut fwd = Array2::<C<T>>::zeros((n, n));
            add_hopping(&mut fwd, n, 1, crate::scalar::c(t1, 0.0), bc);
            add_hopping(&mut fwd, n, 2, crate::scalar::c(t2 + g, 0.0), bc);
            let mut bwd = Array2::<C<T>>::zeros((n, n));
            add_hopping(&mut bwd, n, 1, crate::scalar::c(t1, 0.0), bc);
            add_hopping(&mut bwd, n, 2, crate::scalar::c(t2 - g, 0.0), bc);
            let bulk = fwd + bwd.t().to_owned();

            let mut edge = Array2::<C<T>>::zeros((n, n));
            let vv = crate::scalar::c::<T>(v, 0.0);
            edge[[0, 0]] = edge[[0, 0]] + vv;
            edge[[n - 1, n - 1]] = edge[[n - 1, n - 1]] + vv;
            let neg_edge = edge.mapv(|z| -z);
            vec![
                DriveSegment { fraction: half, bulk: bulk.clone(), edge },
                DriveSegment { fraction: half, bulk, edge: neg_edge },
            ]
        }
        ModelKind::TwoBand => {
            let t = get_param::<T>(params, "t", model)?;
            let g = get_param::<T>(params, "gamma", model)?;
            let mu = get_param::<T>(params, "mu", model)?;
            let delta = get_param::<T>(params, "delta", model)?;
            let v = get_param::<T>(params, "V", model)?;
            let mut bulk = Array2::<C<T>>::zeros((n, n));
            let idx = |j: usize, orb: usize| 2 * j + orb;
            for j in 0..cells {
                bulk[[idx(j, 0), idx(j, 1)]] = bulk[[idx(j, 0), idx(j, 1)]] + crate::scalar::c(delta, 0.0);
                bulk[[idx(j, 1), idx(j, 0)]] = bulk[[idx(j, 1), idx(j, 0)]] + crate::scalar::c(delta, 0.0);
                bulk[[idx(j, 0), idx(j, 0)]] = bulk[[idx(j, 0), idx(j, 0)]] + crate::scalar::c(mu, 0.0);
                bulk[[idx(j, 1), idx(j, 1)]] = bulk[[idx(j, 1), idx(j, 1)]] - crate::scalar::c::<T>(mu, 0.0);
            }
            let wrap = bc == BoundaryCond::Periodic;
            for j in 0..cells {
                let k = j + 1;
                if k >= cells && !wrap {
                    continue;
                }
                let k = k % cells;
                // xi_A = +1, xi_B = -1
                bulk[[idx(j, 0), idx(k, 0)]] = bulk[[idx(j, 0), idx(k, 0)]] + crate::scalar::c(t + g, 0.0);
                bulk[[idx(k, 0), idx(j, 0)]] = bulk[[idx(k, 0), idx(j, 0)]] + crate::scalar::c(t - g, 0.0);
                bulk[[idx(j, 1), idx(k, 1)]] = bulk[[idx(j, 1), idx(k, 1)]] + crate::scalar::c(t - g, 0.0);
                bulk[[idx(k, 1), idx(j, 1)]] = bulk[[idx(k, 1), idx(j, 1)]] + crate::scalar::c(t + g, 0.0);
            }
            let mut edge = Array2::<C<T>>::zeros((n, n));
            let vv = crate::scalar::c::<T>(v, 0.0);
            for j in [0, cells - 1] {
                edge[[idx(j, 0), idx(j, 1)]] = edge[[idx(j, 0), idx(j, 1)]] + vv;
                edge[[idx(j, 1), idx(j, 0)]] = edge[[idx(j, 1), idx(j, 0)]] + vv;
            }
            let neg_edge = edge.mapv(|z| -z);
            vec![
                DriveSegment { fraction: half, bulk: bulk.clone(), edge },
                DriveSegment { fraction: half, bulk, edge: neg_edge },
            ]
        }
        ModelKind::BulkFourStep => {
            let t1 = get_param::<T>(params, "t1", model)?;
            let t2 = get_param::<T>(params, "t2", model)?;
            let g1 = get_param::<T>(params, "gamma1", model)?;
            let g2 = get_param::<T>(params, "gamma2", model)?;
            let zero = Array2::<C<T>>::zeros((n, n));
            let sym = |amp: f64, off: usize| {
                let mut h = Array2::<C<T>>::zeros((n, n));
                add_hopping(&mut h, n, off, crate::scalar::c(amp, 0.0), bc);
                let ht = h.t().mapv(|z: C<T>| z);
                h + ht
            };
            let antisym = |amp: f64, off: usize| {
                let mut h = Array2::<C<T>>::zeros((n, n));
                add_hopping(&mut h, n, off, crate::scalar::c(amp, 0.0), bc);
                let ht = h.t().mapv(|z: C<T>| -z);
                h + ht
            };
            vec![
                DriveSegment { fraction: quarter, bulk: sym(t1, 1), edge: zero.clone() },
                DriveSegment { fraction: quarter, bulk: antisym(g1, 1), edge: zero.clone() },
                DriveSegment { fraction: quarter, bulk: sym(t2, 2), edge: zero.clone() },
                DriveSegment { fraction: quarter, bulk: antisym(g2, 2), edge: zero },
            ]
        }
    };

    Ok(DriveProtocol {
        model,
        cells,
        orbitals: q,
        period,
        bc,
        segments,
        params: params.clone(),
    })
}

/// The time-dependent non-Bloch Hamiltonian `h(beta, t)` of a named model
/// (the boundary drive does not enter the bulk polynomial).
pub fn bulk_drive_laurent<T: Real>(
    model: ModelKind,
    params: &BTreeMap<String, f64>,
) -> Result<TimedLaurentPoly<T>, T> {
    let period = r::<T>(get_period::<T>(params, model)?);
    match model {
        ModelKind::SingleBand => {
            let t1 = get_param::<T>(params, "t1", model)?;
            let t2 = get_param::<T>(params, "t2", model)?;
            let g = get_param::<T>(params, "gamma", model)?;
            let h = LaurentMatrixPoly::single_band(&[
                (2, crate::scalar::c(t2 + g, 0.0)),
                (-2, crate::scalar::c(t2 - g, 0.0)),
                (1, crate::scalar::c(t1, 0.0)),
                (-1, crate::scalar::c(t1, 0.0)),
            ])?;
            TimedLaurentPoly::new(vec![(T::one(), h)], period)
        }
        ModelKind::TwoBand => {
            let t = get_param::<T>(params, "t", model)?;
            let g = get_param::<T>(params, "gamma", model)?;
            let mu = get_param::<T>(params, "mu", model)?;
            let delta = get_param::<T>(params, "delta", model)?;
            let z = Complex::<T>::zero();
            let blocks = vec![
                ndarray::arr2(&[
                    [crate::scalar::c(t - g, 0.0), z],
                    [z, crate::scalar::c(t + g, 0.0)],
                ]),
                ndarray::arr2(&[
                    [crate::scalar::c(mu, 0.0), crate::scalar::c(delta, 0.0)],
                    [crate::scalar::c(delta, 0.0), crate::scalar::c(-mu, 0.0)],
                ]),
                ndarray::arr2(&[
                    [crate::scalar::c(t + g, 0.0), z],
                    [z, crate::scalar::c(t - g, 0.0)],
                ]),
            ];
            let h = LaurentMatrixPoly::new(2, 1, blocks)?;
            TimedLaurentPoly::new(vec![(T::one(), h)], period)
        }
        ModelKind::BulkFourStep => {
            let t1 = get_param::<T>(params, "t1", model)?;
            let t2 = get_param::<T>(params, "t2", model)?;
            let g1 = get_param::<T>(params, "gamma1", model)?;
            let g2 = get_param::<T>(params, "gamma2", model)?;
            let quarter = r::<T>(0.25);
            let seg = |terms: &[(i32, f64)]| {
                LaurentMatrixPoly::single_band(
                    &terms
                        .iter()
                        .map(|&(n, v)| (n, crate::scalar::c(v, 0.0)))
                        .collect::<Vec<_>>(),
                )
            };
            TimedLaurentPoly::new(
                vec![
                    (quarter, seg(&[(1, t1), (-1, t1)])?),
                    (quarter, seg(&[(1, g1), (-1, -g1)])?),
                    (quarter, seg(&[(2, t2), (-2, t2)])?),
                    (quarter, seg(&[(2, g2), (-2, -g2)])?),
                ],
                period,
            )
        }
    }
}

/// Floquet non-Bloch Hamiltonian `h_F(beta)` of a named model.
pub fn floquet_laurent<T: Real>(
    model: ModelKind,
    params: &BTreeMap<String, f64>,
) -> Result<LaurentMatrixPoly<T>, T> {
    Ok(bulk_drive_laurent::<T>(model, params)?.time_average())
}

/// Floquet operator together with its time-averaged reference.
#[derive(Clone, Debug)]
pub struct FloquetOperatorResult<T: Real> {
    /// `U_F = prod_k exp(-i H_k tau_k T)`, earliest segment rightmost.
    pub u_f: CMat<T>,
    /// `U_ave = exp(-i H_ave T)` with `H_ave = sum_k tau_k H_k`.
    pub u_ave: CMat<T>,
    /// `U_F - U_ave`; boundary-localized for commuting bulk drives.
    pub delta_u: CMat<T>,
}

/// Assemble the one-period evolution operator of a protocol.
pub fn floquet_operator<T: Real>(p: &DriveProtocol<T>) -> Result<FloquetOperatorResult<T>, T> {
    let n = p.dim();
    let mi = Complex::new(T::zero(), -T::one());
    let mut u_f = crate::linalg::identity::<T>(n);
    for seg in &p.segments {
        let h = seg.hamiltonian();
        let a = h.mapv(|z| z * mi * seg.fraction * p.period);
        let u_seg = expm(&a)?;
        u_f = u_seg.dot(&u_f); // later segments act on the left
    }
    let h_ave = p.averaged_hamiltonian();
    let u_ave = expm(&h_ave.mapv(|z| z * mi * p.period))?;
    let delta_u = &u_f - &u_ave;
    Ok(FloquetOperatorResult { u_f, u_ave, delta_u })
}

/// Quasienergies `E = i log(lambda) / T` of a Floquet operator, folded to
/// `Re E in (-pi/T, pi/T]`. Every eigenpair must satisfy
/// `|U v - lambda v| <= 1e-10 |U|`.
pub fn quasienergies<T: Real>(u: &CMat<T>, period: T) -> Result<SpectrumSet<T>, T> {
    let n = u.nrows();
    if u.ncols() != n {
        return Err(Error::NotSquare { rows: u.nrows(), cols: u.ncols() });
    }
    let (vals, vecs) = crate::eig::eig(u)?;
    let unorm = crate::linalg::frobenius_norm(u);
    let tol = r::<T>(1e-10);
    let mut worst = T::zero();
    for (k, lambda) in vals.iter().enumerate() {
        let v = vecs.column(k);
        let uv = u.dot(&v);
        let mut res2 = T::zero();
        for i in 0..n {
            res2 = res2 + (uv[i] - *lambda * v[i]).norm_sqr();
        }
        worst = worst.max(res2.sqrt());
    }
    if worst > tol * unorm {
        return Err(Error::EigResidual { residual: worst / unorm, tol });
    }
    let mut energies = Vec::with_capacity(n);
    for lambda in vals {
        let ln = lambda.norm();
        if ln.is_zero() {
            return Err(Error::InvalidArgument("singular Floquet operator".into()));
        }
        // E = i ln(lambda) / T = (-arg lambda + i ln|lambda|) / T
        energies.push(Complex::new(-lambda.arg() / period, ln.ln() / period));
    }
    Ok(SpectrumSet::new_folded(energies, period))
}

/// Eigenvalues of `h_F(e^{i k})` over a uniform momentum grid: the
/// periodic-boundary bulk spectrum.
pub fn pbc_spectrum<T: Real>(
    h_f: &LaurentMatrixPoly<T>,
    k_grid: usize,
) -> Result<SpectrumSet<T>, T> {
    if k_grid < 2 {
        return Err(Error::InvalidArgument("momentum grid needs at least 2 points".into()));
    }
    let tau = T::TAU();
    let mut energies = Vec::with_capacity(k_grid * h_f.orbitals());
    for j in 0..k_grid {
        let k = tau * r::<T>(j as f64) / r::<T>(k_grid as f64);
        let hk = h_f.eval(Complex::from_polar(T::one(), k))?;
        energies.extend(crate::eig::eigenvalues(&hk)?);
    }
    Ok(SpectrumSet::new_static(energies))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::scalar::c;

    fn single_band_params(l: usize, t_period: f64, v: f64) -> BTreeMap<String, f64> {
        BTreeMap::from([
            ("t1".to_string(), 2.0),
            ("t2".to_string(), 0.15),
            ("gamma".to_string(), 0.16),
            ("V".to_string(), v),
            ("T".to_string(), t_period),
            ("L".to_string(), l as f64),
        ])
    }

    #[test]
    fn single_band_small_chain_structure() {
        let params = single_band_params(3, 1.0, 0.0);
        let p = build_model::<f64>(ModelKind::SingleBand, &params, BoundaryCond::Open).unwrap();
        let h = p.segments[0].hamiltonian();
        // t1 on the two NN bonds, t2 +- gamma on the single NNN bond
        assert!((h[[0, 1]] - c::<f64>(2.0, 0.0)).norm() < 1e-15);
        assert!((h[[1, 2]] - c::<f64>(2.0, 0.0)).norm() < 1e-15);
        assert!((h[[1, 0]] - c::<f64>(2.0, 0.0)).norm() < 1e-15);
        assert!((h[[0, 2]] - c::<f64>(0.31, 0.0)).norm() < 1e-15);
        assert!((h[[2, 0]] - c::<f64>(-0.01, 0.0)).norm() < 1e-15);
        assert!(h[[0, 0]].is_zero());
    }

    #[test]
    fn single_band_boundary_drive_signs() {
        let params = single_band_params(5, 1.0, 0.3);
        let p = build_model::<f64>(ModelKind::SingleBand, &params, BoundaryCond::Open).unwrap();
        let e0 = &p.segments[0].edge;
        let e1 = &p.segments[1].edge;
        assert!((e0[[0, 0]] - c::<f64>(0.3, 0.0)).norm() < 1e-15);
        assert!((e0[[4, 4]] - c::<f64>(0.3, 0.0)).norm() < 1e-15);
        assert!((e1[[0, 0]] + c::<f64>(0.3, 0.0)).norm() < 1e-15);
        assert!((e1[[4, 4]] + c::<f64>(0.3, 0.0)).norm() < 1e-15);
        // edge acts nowhere else
        assert!(e0.iter().map(|z| z.norm()).sum::<f64>() - 0.6 < 1e-14);
    }

    #[test]
    fn two_band_boundary_drive_couples_end_orbitals() {
        let params = BTreeMap::from([
            ("t".to_string(), 1.0),
            ("gamma".to_string(), 0.5),
            ("mu".to_string(), 2.5),
            ("delta".to_string(), 0.1),
            ("V".to_string(), 0.01),
            ("T".to_string(), 1.0),
            ("L".to_string(), 4.0),
        ]);
        let p = build_model::<f64>(ModelKind::TwoBand, &params, BoundaryCond::Open).unwrap();
        let e = &p.segments[0].edge;
        assert!((e[[0, 1]] - c::<f64>(0.01, 0.0)).norm() < 1e-15);
        assert!((e[[1, 0]] - c::<f64>(0.01, 0.0)).norm() < 1e-15);
        assert!((e[[6, 7]] - c::<f64>(0.01, 0.0)).norm() < 1e-15);
        assert!((e[[7, 6]] - c::<f64>(0.01, 0.0)).norm() < 1e-15);
        assert!(e.iter().map(|z| z.norm()).sum::<f64>() - 0.04 < 1e-14);
    }

    #[test]
    fn missing_param_is_reported() {
        let mut params = single_band_params(3, 1.0, 0.0);
        params.remove("gamma");
        match build_model::<f64>(ModelKind::SingleBand, &params, BoundaryCond::Open) {
            Err(Error::MissingParam { key, .. }) => assert_eq!(key, "gamma"),
            other => panic!("expected missing-param error, got {other:?}"),
        }
    }

    #[test]
    fn undriven_floquet_operator_is_plain_exponential() {
        let params = single_band_params(8, 0.7, 0.0);
        let p = build_model::<f64>(ModelKind::SingleBand, &params, BoundaryCond::Open).unwrap();
        let result = floquet_operator(&p).unwrap();
        // identical segments commute: U_F = exp(-i H0 T) = U_ave exactly
        assert!(max_abs(&result.delta_u) < 1e-12);
    }

    #[test]
    fn single_site_chain_boundary_segments_cancel() {
        let params = single_band_params(1, 0.9, 0.37);
        let p = build_model::<f64>(ModelKind::SingleBand, &params, BoundaryCond::Open).unwrap();
        let result = floquet_operator(&p).unwrap();
        assert!((result.u_f[[0, 0]] - c::<f64>(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn quasienergies_identity() {
        let u = crate::linalg::identity::<f64>(6);
        let s = quasienergies(&u, 1.3).unwrap();
        for e in &s.energies {
            assert!(e.norm() < 1e-12);
        }
    }

    #[test]
    fn quasienergies_match_static_hermitian_spectrum() {
        // Hermitian chain, T small enough that no folding occurs
        let params = BTreeMap::from([
            ("t1".to_string(), 1.0),
            ("t2".to_string(), 0.0),
            ("gamma".to_string(), 0.0),
            ("V".to_string(), 0.0),
            ("T".to_string(), 0.5),
            ("L".to_string(), 12.0),
        ]);
        let p = build_model::<f64>(ModelKind::SingleBand, &params, BoundaryCond::Open).unwrap();
        let h0 = p.segments[0].hamiltonian();
        let result = floquet_operator(&p).unwrap();
        let s = quasienergies(&result.u_f, 0.5).unwrap();
        let mut direct = crate::eig::eigenvalues(&h0).unwrap();
        direct.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let mut folded: Vec<_> = s.energies.clone();
        folded.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (d, f) in direct.iter().zip(folded.iter()) {
            assert!((d - f).norm() < 1e-8, "{d} vs {f}");
        }
    }

    #[test]
    fn det_uf_equals_exp_trace() {
        let params = BTreeMap::from([
            ("t1".to_string(), 1.0),
            ("t2".to_string(), 0.08),
            ("gamma1".to_string(), 0.1),
            ("gamma2".to_string(), 0.07),
            ("T".to_string(), 2.5),
            ("L".to_string(), 10.0),
        ]);
        let p = build_model::<f64>(ModelKind::BulkFourStep, &params, BoundaryCond::Open).unwrap();
        let result = floquet_operator(&p).unwrap();
        let det = crate::linalg::det(&result.u_f).unwrap();
        let mut tr = Complex::new(0.0, 0.0);
        let h_ave = p.averaged_hamiltonian();
        for i in 0..p.dim() {
            tr += h_ave[[i, i]];
        }
        let want = (Complex::new(0.0, -1.0) * tr * 2.5).exp();
        assert!((det - want).norm() < 1e-8 * (1.0 + want.norm()));
    }

    #[test]
    fn pbc_spectrum_hatano_nelson_ellipse() {
        let (t, g) = (1.0, 0.3);
        let h = LaurentMatrixPoly::<f64>::single_band(&[
            (1, c(t + g, 0.0)),
            (-1, c(t - g, 0.0)),
        ])
        .unwrap();
        let s = pbc_spectrum(&h, 64).unwrap();
        for (j, e) in s.energies.iter().enumerate() {
            let k = 2.0 * std::f64::consts::PI * j as f64 / 64.0;
            let want = c::<f64>(2.0 * t * k.cos(), 2.0 * g * k.sin());
            assert!((e - want).norm() < 1e-10);
        }
    }
}

// Dev probe: end-to-end sanity of GBZ vs ED on the paper models.
use nonbloch::gbz::{critical_period, floquet_gbz, static_gbz, CriticalPeriodConfig, GbzConfig};
use nonbloch::lattice::{
    build_model, floquet_laurent, floquet_operator, quasienergies, BoundaryCond, ModelKind,
};
use nonbloch::observables::hausdorff;
use std::collections::BTreeMap;
use std::time::Instant;

fn single_band_params(l: usize, t: f64, v: f64) -> BTreeMap<String, f64> {
    BTreeMap::from([
        ("t1".to_string(), 2.0),
        ("t2".to_string(), 0.15),
        ("gamma".to_string(), 0.16),
        ("V".to_string(), v),
        ("T".to_string(), t),
        ("L".to_string(), l as f64),
    ])
}

fn two_band_params(l: usize, t: f64, v: f64) -> BTreeMap<String, f64> {
    BTreeMap::from([
        ("t".to_string(), 1.0),
        ("gamma".to_string(), 0.5),
        ("mu".to_string(), 2.5),
        ("delta".to_string(), 0.1),
        ("V".to_string(), v),
        ("T".to_string(), t),
        ("L".to_string(), l as f64),
    ])
}

fn main() {
    let which = std::env::args().nth(1).unwrap_or_else(|| "all".into());

    if which == "all" || which == "static" {
        let t0 = Instant::now();
        let params = single_band_params(100, 1.0, 0.0);
        let hf = floquet_laurent::<f64>(ModelKind::SingleBand, &params).unwrap();
        let g = static_gbz(&hf, &GbzConfig::default()).unwrap();
        println!(
            "[static single-band] {} points, {} spectrum pts, moduli range [{:.4}, {:.4}], max|ImE| = {:.2e}  ({:.2?})",
            g.points.len(),
            g.spectrum.len(),
            g.points.iter().map(|p| p.beta.norm()).fold(f64::INFINITY, f64::min),
            g.points.iter().map(|p| p.beta.norm()).fold(0.0, f64::max),
            g.spectrum.energies.iter().map(|e| e.im.abs()).fold(0.0, f64::max),
            t0.elapsed()
        );
        // ED comparison at a few sizes
        for l in [40usize, 80, 120, 200] {
            let p = build_model::<f64>(ModelKind::SingleBand, &single_band_params(l, 1.0, 0.0), BoundaryCond::Open).unwrap();
            let h0 = p.segments[0].hamiltonian();
            let ed = nonbloch::eig::eigenvalues(&h0).unwrap();
            let d = hausdorff(&ed, &g.spectrum.energies).unwrap();
            println!("  static ED L={l}: Hausdorff(ED, GBZ spectrum) = {d:.4}");
        }
    }

    if which == "all" || which == "floquet" {
        for t in [0.1, 0.9, 2.0, 3.4] {
            let t0 = Instant::now();
            let params = single_band_params(100, t, 0.01);
            let hf = floquet_laurent::<f64>(ModelKind::SingleBand, &params).unwrap();
            match floquet_gbz(&hf, t, &GbzConfig::default()) {
                Ok(g) => {
                    println!(
                        "[floquet T={t}] {} pts, cutoff {}, {} spectrum pts, max Im E = {:.4}  ({:.2?})",
                        g.points.len(),
                        g.cutoff_used,
                        g.spectrum.len(),
                        g.spectrum.max_imag(),
                        t0.elapsed()
                    );
                    for l in [40usize, 80, 120] {
                        let p = build_model::<f64>(
                            ModelKind::SingleBand,
                            &single_band_params(l, t, 0.01),
                            BoundaryCond::Open,
                        )
                        .unwrap();
                        let op = floquet_operator(&p).unwrap();
                        let ed = quasienergies(&op.u_f, t).unwrap();
                        let d = hausdorff(&ed.energies, &g.spectrum.energies).unwrap();
                        println!("  ED L={l}: eta = {:.3}, Hausdorff = {d:.4}", ed.eta(1e-8 * ed.spectral_radius()).unwrap());
                    }
                }
                Err(e) => println!("[floquet T={t}] ERROR: {e}"),
            }
        }
    }

    if which == "all" || which == "tc-single" {
        // distance function d(T) for the single-band model, coarse sweep
        let params = single_band_params(100, 1.0, 0.01);
        let hf = floquet_laurent::<f64>(ModelKind::SingleBand, &params).unwrap();
        let cfg = CriticalPeriodConfig::default();
        let stat = static_gbz(&hf, &cfg.gbz).unwrap();
        println!("[tc-single] static GBZ pts: {}", stat.points.len());
        for t in [0.3, 0.5, 0.6, 0.65, 0.7, 0.75, 0.8, 0.9, 1.1, 1.4] {
            let t0 = Instant::now();
            let d = nonbloch::gbz::agbz1_distance_probe(&hf, t, &cfg).unwrap();
            println!("  d({t}) = {d:.6}  ({:.2?})", t0.elapsed());
        }
        let t0 = Instant::now();
        match critical_period(&hf, (0.3, 1.4), &cfg) {
            Ok(r) => println!(
                "  T_c = {:.5} bracket ({:.5}, {:.5}) curvature {:?}  ({:.2?})",
                r.t_c, r.bracket.0, r.bracket.1, r.touch_curvature, t0.elapsed()
            ),
            Err(e) => println!("  critical_period ERROR: {e}"),
        }
    }

    if which == "all" || which == "tc-two" {
        let params = two_band_params(40, 1.0, 0.01);
        let hf = floquet_laurent::<f64>(ModelKind::TwoBand, &params).unwrap();
        let cfg = CriticalPeriodConfig::default();
        for t in [0.4, 0.5, 0.6, 0.64, 0.66, 0.7, 0.8, 0.9] {
            let t0 = Instant::now();
            let d = nonbloch::gbz::agbz1_distance_probe(&hf, t, &cfg).unwrap();
            println!("  d({t}) = {d:.6}  ({:.2?})", t0.elapsed());
        }
        let t0 = Instant::now();
        match critical_period(&hf, (0.4, 0.9), &cfg) {
            Ok(r) => println!(
                "  T_c = {:.5} bracket ({:.5}, {:.5})  ({:.2?})",
                r.t_c, r.bracket.0, r.bracket.1, t0.elapsed()
            ),
            Err(e) => println!("  critical_period ERROR: {e}"),
        }
    }

    if which == "all" || which == "deltau" {
        let params = BTreeMap::from([
            ("t1".to_string(), 1.0),
            ("t2".to_string(), 0.08),
            ("gamma1".to_string(), 0.1),
            ("gamma2".to_string(), 0.07),
            ("T".to_string(), 7.5),
            ("L".to_string(), 40.0),
        ]);
        let p = build_model::<f64>(ModelKind::BulkFourStep, &params, BoundaryCond::Open).unwrap();
        let op = floquet_operator(&p).unwrap();
        let n = p.dim();
        let mut global_max = 0.0f64;
        let mut mid_max = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let v = op.delta_u[[i, j]].norm();
                global_max = global_max.max(v);
                if i >= n / 4 && i < 3 * n / 4 && j >= n / 4 && j < 3 * n / 4 {
                    mid_max = mid_max.max(v);
                }
            }
        }
        println!("[deltaU] global max = {global_max:.4e}, middle-half max = {mid_max:.4e}, ratio = {:.4e}", mid_max / global_max);
    }
}

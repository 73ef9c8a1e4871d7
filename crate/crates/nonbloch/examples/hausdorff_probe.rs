// Directed Hausdorff decomposition ED <-> GBZ, larger sizes.
use nonbloch::gbz::{floquet_gbz, GbzConfig};
use nonbloch::lattice::{build_model, floquet_laurent, floquet_operator, quasienergies, BoundaryCond, ModelKind};
use nonbloch::C64;
use std::collections::BTreeMap;

fn directed(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .map(|p| b.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

fn main() {
    let t: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2.0);
    let params = |l: usize| -> BTreeMap<String, f64> {
        BTreeMap::from([
            ("t1".to_string(), 2.0),
            ("t2".to_string(), 0.15),
            ("gamma".to_string(), 0.16),
            ("V".to_string(), 0.01),
            ("T".to_string(), t),
            ("L".to_string(), l as f64),
        ])
    };
    let hf = floquet_laurent::<f64>(ModelKind::SingleBand, &params(10)).unwrap();
    let g = floquet_gbz(&hf, t, &GbzConfig::default()).unwrap();
    println!(
        "GBZ: {} pts, cutoff {}, max Im = {:.4}, min Im = {:.4}",
        g.spectrum.len(),
        g.cutoff_used,
        g.spectrum.max_imag(),
        g.spectrum.energies.iter().map(|e| e.im).fold(f64::INFINITY, f64::min)
    );
    // dump GBZ spectrum
    std::fs::write(
        "/tmp/gbz_spec.csv",
        g.spectrum
            .energies
            .iter()
            .map(|e| format!("{},{}", e.re, e.im))
            .collect::<Vec<_>>()
            .join("\n"),
    )
    .unwrap();
    for l in [40usize, 80, 120, 200, 300] {
        let p = build_model::<f64>(ModelKind::SingleBand, &params(l), BoundaryCond::Open).unwrap();
        let op = floquet_operator(&p).unwrap();
        let ed = quasienergies(&op.u_f, t).unwrap();
        let d_eg = directed(&ed.energies, &g.spectrum.energies);
        let d_ge = directed(&g.spectrum.energies, &ed.energies);
        println!(
            "L={l}: ED->GBZ = {d_eg:.4}, GBZ->ED = {d_ge:.4}, eta = {:.3}, maxIm(ED) = {:.4}",
            ed.eta(1e-8 * ed.spectral_radius()).unwrap(),
            ed.max_imag()
        );
        if l == 300 {
            std::fs::write(
                "/tmp/ed_spec.csv",
                ed.energies
                    .iter()
                    .map(|e| format!("{},{}", e.re, e.im))
                    .collect::<Vec<_>>()
                    .join("\n"),
            )
            .unwrap();
        }
    }
}

//! Coincidence fringe of the second interferometer versus its phase φ.
//!
//!     cargo run --release --example coupled_scan

use mzilab::scenarios::{default_ensemble, run, ScanSpec};

fn main() -> mzilab::Result<()> {
    let mut ens = default_ensemble();
    ens.n_samples = 401;
    for zeta in [None, Some(0.0), Some(1.0)] {
        let r = run(&ScanSpec::coupled_scan(ens, zeta))?;
        let rab = r.column("R_AB").unwrap();
        let (lo, hi) = rab.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        let label = zeta.map_or("per-pair".to_string(), |z| format!("{z}"));
        println!("ζ' = {label:>8}: R_AB spans [{lo:.4}, {hi:.4}] over {} phases", r.len());
    }
    Ok(())
}

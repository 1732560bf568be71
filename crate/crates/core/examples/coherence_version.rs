//! Coherence-driven version: correlations versus ζ, with and without the
//! AOM phase averaging.
//!
//!     cargo run --release --example coherence_version

use std::f64::consts::PI;

use mzilab::scenarios::{run, Grid, ScanSpec};

fn main() -> mzilab::Result<()> {
    let mut spec = ScanSpec::coherence_version();
    spec.abscissa = Grid::new(-PI, PI, 9);
    let r = run(&spec)?;
    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "ζ", "R_αβ", "R_AB", "I_α aom", "g²_AB aom");
    for k in 0..r.len() {
        println!(
            "{:>8.4} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            r.abscissa()[k],
            r.column("R_alphabeta").unwrap()[k],
            r.column("R_AB").unwrap()[k],
            r.column("I_alpha_aom").unwrap()[k],
            r.column("g2_AB_aom").unwrap()[k],
        );
    }
    Ok(())
}

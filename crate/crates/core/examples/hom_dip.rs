//! Two-photon dip versus delay, compared with the infinite-bandwidth closed
//! form, plus the ripple that appears when the spectrum is truncated.
//!
//!     cargo run --release --example hom_dip

use mzilab::scenarios::{closed_form_hom, default_ensemble, derivative_sign_changes, run, ScanSpec};

fn main() -> mzilab::Result<()> {
    let ens = default_ensemble();
    let r = run(&ScanSpec::hom_dip(ens))?;
    let g2 = r.column("g2").expect("g2 column");
    let worst = r
        .abscissa()
        .iter()
        .zip(g2)
        .map(|(&t, &g)| (g - closed_form_hom(ens.sigma, t)).abs())
        .fold(0.0, f64::max);
    let min = g2.iter().copied().fold(f64::INFINITY, f64::min);
    println!("{} delays, dip minimum {min:.2e}, max deviation from closed form {worst:.2e}", r.len());

    let mut narrow = ens;
    narrow.coverage = 0.5;
    let r = run(&ScanSpec::hom_dip(narrow))?;
    let wiggles = derivative_sign_changes(r.column("g2").unwrap(), 1e-6);
    println!("coverage 0.5: {wiggles} slope reversals in the wings");
    Ok(())
}

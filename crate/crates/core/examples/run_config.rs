//! Drive a scan from a JSON config, the same way the `mzilab` binary does.
//!
//!     cargo run --example run_config

use mzilab::config::parse_config;
use mzilab::scenarios::run;

fn main() -> mzilab::Result<()> {
    let cfg = parse_config(r#"{ "scenario": "coupled_scan", "n_samples": 101, "zeta_prime_rad": 0.0 }"#)?;
    let r = run(&cfg.scan_spec())?;
    println!("{} points, columns: {:?}", r.len(), r.columns.iter().map(|c| &c.name).collect::<Vec<_>>());

    match parse_config(r#"{ "scenario": "hom_dip", "sigma_rad_per_s": -1 }"#) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

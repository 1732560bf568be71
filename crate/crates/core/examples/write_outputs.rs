//! Write a scan as CSV, JSON and SVG into a temporary directory.
//!
//!     cargo run --example write_outputs [DIR]

use std::path::PathBuf;

use mzilab::output::{to_csv, to_json, to_svg, write_atomic};
use mzilab::scenarios::{default_ensemble, run, ScanSpec};

fn main() -> mzilab::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("mzilab-example"));
    let mut ens = default_ensemble();
    ens.n_samples = 201;
    let r = run(&ScanSpec::hom_dip(ens))?;
    for (ext, body) in [("csv", to_csv(&r)), ("json", to_json(&r)), ("svg", to_svg(&r))] {
        let path = dir.join(format!("hom_dip.{ext}"));
        write_atomic(&path, &body)?;
        println!("wrote {} ({} bytes)", path.display(), body.len());
    }
    Ok(())
}

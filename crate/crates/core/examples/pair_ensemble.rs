//! Sample a photon-pair ensemble and round-trip it through JSON.
//!
//!     cargo run --example pair_ensemble

use mzilab::scenarios::default_ensemble;
use mzilab::source::{ensemble_from_json, ensemble_to_json, sample_ensemble, PhaseMode, Sampling};

fn main() -> mzilab::Result<()> {
    let mut spec = default_ensemble();
    spec.n_samples = 11;
    let grid = sample_ensemble(&spec)?;
    for p in &grid {
        println!("δω = {:+.3e} rad/s  weight = {:.4}  δθ = {:.4}", p.delta_omega, p.weight, p.relative_phase());
    }

    spec.sampling = Sampling::MonteCarlo { seed: 7 };
    spec.phase_mode = PhaseMode::UniformRandom { seed: 3 };
    let mc = sample_ensemble(&spec)?;
    let back = ensemble_from_json(&ensemble_to_json(&mc))?;
    println!("monte carlo ensemble survives JSON round trip: {}", back == mc);
    Ok(())
}

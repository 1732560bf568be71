//! Weighted ensembles of symmetrically detuned signal/idler pairs.
//!
//! Each pair carries a signed detuning `δω` for the signal (the idler sits at
//! `−δω`), the two photon phases, and a quadrature weight. The spectrum is a
//! Gaussian of standard deviation `sigma` truncated at `±3σ·coverage`.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-width of the spectral support in units of `sigma` at full coverage.
pub const SUPPORT_SIGMAS: f64 = 3.0;

/// One signal/idler pair of the ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonPairSample {
    /// Signal detuning from half the pump frequency (rad/s).
    pub delta_omega: f64,
    pub theta_s: f64,
    pub theta_i: f64,
    pub weight: f64,
}

impl PhotonPairSample {
    /// Relative pair phase `θ_S − θ_I`.
    pub fn relative_phase(&self) -> f64 {
        self.theta_s - self.theta_i
    }

    /// The same pair with the signal and idler labels exchanged.
    pub fn interchanged(&self) -> Self {
        Self {
            delta_omega: -self.delta_omega,
            theta_s: self.theta_i,
            theta_i: self.theta_s,
            weight: self.weight,
        }
    }
}

/// Statistics of the relative signal/idler phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum PhaseMode {
    /// `θ_S − θ_I = π/2` for every pair.
    FixedPiOverTwo,
    /// `θ_S = θ_I` for every pair.
    Zero,
    /// Independent uniform draws of `θ_I` and of `θ_S − θ_I` on `[0, 2π)`.
    UniformRandom { seed: u64 },
}

/// How detunings are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Sampling {
    /// Equally spaced detunings with Gaussian density weights.
    DeterministicGrid,
    /// Truncated-normal draws, each emitted with both signs, equal weights.
    MonteCarlo { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    /// Pump angular frequency (rad/s).
    pub omega0: f64,
    /// Gaussian spectral standard deviation (rad/s).
    pub sigma: f64,
    /// Number of pairs; odd so that `δ = 0` is always present.
    pub n_samples: usize,
    /// Fraction of the full `±3σ` support that is kept, in `(0, 1]`.
    pub coverage: f64,
    pub phase_mode: PhaseMode,
    pub sampling: Sampling,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::config("sigma", format!("must be positive, got {}", self.sigma)));
        }
        if !self.omega0.is_finite() || self.omega0 < 0.0 {
            return Err(Error::config("omega0", format!("must be finite and non-negative, got {}", self.omega0)));
        }
        if self.n_samples < 3 || self.n_samples.is_multiple_of(2) {
            return Err(Error::config(
                "n_samples",
                format!("must be odd and at least 3, got {}", self.n_samples),
            ));
        }
        if !(self.coverage > 0.0 && self.coverage <= 1.0) {
            return Err(Error::config(
                "coverage",
                format!("must lie in (0, 1], got {}", self.coverage),
            ));
        }
        Ok(())
    }

    /// Largest detuning magnitude included in the ensemble (rad/s).
    pub fn half_width(&self) -> f64 {
        SUPPORT_SIGMAS * self.sigma * self.coverage
    }
}

/// Unnormalised Gaussian spectral density `exp(−δ²/2σ²)`.
pub fn spectral_weight(delta: f64, sigma: f64) -> f64 {
    (-(delta * delta) / (2.0 * sigma * sigma)).exp()
}

pub fn sample_ensemble(spec: &EnsembleSpec) -> Result<Vec<PhotonPairSample>> {
    spec.validate()?;
    let (detunings, weights) = match spec.sampling {
        Sampling::DeterministicGrid => grid_detunings(spec),
        Sampling::MonteCarlo { seed } => monte_carlo_detunings(spec, seed),
    };
    let phases = pair_phases(spec.phase_mode, detunings.len());
    Ok(detunings
        .into_iter()
        .zip(weights)
        .zip(phases)
        .map(|((delta_omega, weight), (theta_s, theta_i))| PhotonPairSample {
            delta_omega,
            theta_s,
            theta_i,
            weight,
        })
        .collect())
}

fn grid_detunings(spec: &EnsembleSpec) -> (Vec<f64>, Vec<f64>) {
    let n = spec.n_samples;
    let mid = n / 2;
    let h = spec.half_width();
    // mirror the lower half so that the grid is exactly sign-symmetric
    let mut detunings = vec![0.0; n];
    for k in 0..mid {
        let d = -h + 2.0 * h * k as f64 / (n - 1) as f64;
        detunings[k] = d;
        detunings[n - 1 - k] = -d;
    }
    let raw: Vec<f64> = detunings
        .iter()
        .map(|&d| spectral_weight(d, spec.sigma))
        .collect();
    let total = crate::correlator::compensated_sum(raw.iter().copied());
    let weights = raw.into_iter().map(|w| w / total).collect();
    (detunings, weights)
}

fn monte_carlo_detunings(spec: &EnsembleSpec, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, spec.sigma).expect("sigma validated positive");
    let h = spec.half_width();
    let mut detunings = Vec::with_capacity(spec.n_samples);
    detunings.push(0.0);
    while detunings.len() < spec.n_samples {
        let d: f64 = normal.sample(&mut rng);
        if d.abs() <= h {
            detunings.push(d.abs());
            detunings.push(-d.abs());
        }
    }
    detunings.sort_by(f64::total_cmp);
    let w = 1.0 / spec.n_samples as f64;
    let weights = vec![w; spec.n_samples];
    (detunings, weights)
}

fn pair_phases(mode: PhaseMode, n: usize) -> Vec<(f64, f64)> {
    match mode {
        PhaseMode::FixedPiOverTwo => vec![(FRAC_PI_2, 0.0); n],
        PhaseMode::Zero => vec![(0.0, 0.0); n],
        PhaseMode::UniformRandom { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| {
                    let theta_i = rng.gen_range(0.0..TAU);
                    let delta = rng.gen_range(0.0..TAU);
                    (theta_i + delta, theta_i)
                })
                .collect()
        }
    }
}

/// JSON array of `{delta_omega, theta_s, theta_i, weight}` records.
pub fn ensemble_to_json(ensemble: &[PhotonPairSample]) -> String {
    serde_json::to_string_pretty(ensemble).expect("plain numeric records serialise")
}

pub fn ensemble_from_json(text: &str) -> Result<Vec<PhotonPairSample>> {
    Ok(serde_json::from_str(text)?)
}

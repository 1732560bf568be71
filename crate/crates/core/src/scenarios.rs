//! End-to-end scans: the HOM dip of the first MZI, the coupled second-MZI
//! sweep, and the AOM-randomised coherence version of the coupled scheme.
//!
//! Every scan point is evaluated independently and each ensemble sum runs in a
//! fixed order, so results are bit-identical regardless of how rayon splits
//! the grid.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlator::{
    coherent_intensities, compensated_sum, ensemble_g2, mean_port_intensities, mzi2_intensities,
    normalized_product, zeta_prime, PhaseContext,
};
use crate::error::{Error, Result};
use crate::source::{sample_ensemble, EnsembleSpec, PhaseMode, PhotonPairSample, Sampling};

/// Spectral width used throughout the examples (rad/s).
pub const DEFAULT_SIGMA: f64 = 0.5e9;
/// Pump angular frequency for a 405 nm pump (rad/s).
pub const DEFAULT_OMEGA0: f64 = TAU * 299_792_458.0 / 405e-9;
pub const DEFAULT_N_SAMPLES: usize = 2001;
pub const DEFAULT_HOM_STEPS: usize = 501;
/// Half-width of the default delay window in units of `1/σ`.
pub const DEFAULT_HOM_HALF_WINDOW: f64 = 5.0;
pub const DEFAULT_ANGLE_STEPS: usize = 721;
pub const DEFAULT_RF_HZ: f64 = 80e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    HomDip,
    CoupledScan,
    CoherenceVersion,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::HomDip => "hom_dip",
            Scenario::CoupledScan => "coupled_scan",
            Scenario::CoherenceVersion => "coherence_version",
        }
    }
}

/// Inclusive, evenly spaced scan grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, steps: usize) -> Self {
        Self { start, stop, steps }
    }

    pub fn validate(&self, key: &str) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::config(key, format!("needs at least 2 steps, got {}", self.steps)));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::config(
                key,
                format!("start ({}) must be below stop ({})", self.start, self.stop),
            ));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.stop
                } else {
                    self.start + span * k as f64 / last
                }
            })
            .collect()
    }
}

/// Rf-pulse schedule of the acousto-optic modulator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AomSchedule {
    /// Rf frequency (Hz).
    pub f_rf: f64,
    /// Rf pulse duration (s).
    pub pulse: f64,
    /// Fraction of shots that are diffracted, in `[0, 1]`.
    pub duty: f64,
    /// Number of shots averaged per scan point.
    pub shots: usize,
}

impl Default for AomSchedule {
    /// Half-period pulses at 80 MHz, i.e. a π phase step, 50 % duty.
    fn default() -> Self {
        Self {
            f_rf: DEFAULT_RF_HZ,
            pulse: 0.5 / DEFAULT_RF_HZ,
            duty: 0.5,
            shots: 2,
        }
    }
}

impl AomSchedule {
    /// Phase imprinted by one diffracted shot, `2π·f_rf·T`.
    pub fn phase_step(&self) -> f64 {
        TAU * self.f_rf * self.pulse
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f_rf.is_finite() && self.pulse.is_finite()) {
            return Err(Error::config("aom", "f_rf and pulse duration must be finite"));
        }
        if !(0.0..=1.0).contains(&self.duty) {
            return Err(Error::config("aom_duty", format!("must lie in [0, 1], got {}", self.duty)));
        }
        if self.shots == 0 {
            return Err(Error::config("aom_shots", "must be at least 1"));
        }
        Ok(())
    }
}

/// Shot-by-shot phase offsets: `0` for undiffracted shots and
/// `2π·f_rf·T` for diffracted ones, interleaved so that after `k` shots
/// exactly `⌊k·duty⌋` have been diffracted.
pub fn aom_phase_sequence(sched: &AomSchedule, n: usize) -> Result<Vec<f64>> {
    sched.validate()?;
    if n == 0 {
        return Err(Error::config("n", "phase sequence needs at least one shot"));
    }
    let step = sched.phase_step();
    Ok((0..n)
        .map(|k| {
            let before = (k as f64 * sched.duty).floor();
            let after = ((k + 1) as f64 * sched.duty).floor();
            if after > before {
                step
            } else {
                0.0
            }
        })
        .collect())
}

/// Values held constant along a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedParams {
    pub context: PhaseContext,
    /// Coupled scan: effective phase forced on every pair instead of the
    /// per-pair value derived from `context`.
    pub zeta_prime: Option<f64>,
    /// Coherence version: `kΔL₁` added to `ζ`.
    pub k_delta_l1: f64,
    /// Coherence version: second-MZI phase for one-dimensional scans.
    pub phi: f64,
    /// Coherence version: optional second axis over `φ`.
    pub phi_grid: Option<Grid>,
}

impl Default for FixedParams {
    fn default() -> Self {
        Self {
            context: PhaseContext::default(),
            zeta_prime: None,
            k_delta_l1: FRAC_PI_2,
            phi: FRAC_PI_2,
            phi_grid: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub scenario: Scenario,
    pub ensemble: Option<EnsembleSpec>,
    /// `τ` (s) for the HOM dip, `φ` (rad) for the coupled scan, `ζ` (rad)
    /// for the coherence version.
    pub abscissa: Grid,
    pub fixed: FixedParams,
    pub aom: AomSchedule,
}

pub fn default_ensemble() -> EnsembleSpec {
    EnsembleSpec {
        omega0: DEFAULT_OMEGA0,
        sigma: DEFAULT_SIGMA,
        n_samples: DEFAULT_N_SAMPLES,
        coverage: 1.0,
        phase_mode: PhaseMode::FixedPiOverTwo,
        sampling: Sampling::DeterministicGrid,
    }
}

/// Default delay window `τ ∈ [−5/σ, 5/σ]` with 501 points.
pub fn default_tau_grid(sigma: f64) -> Grid {
    let h = DEFAULT_HOM_HALF_WINDOW / sigma;
    Grid::new(-h, h, DEFAULT_HOM_STEPS)
}

pub fn default_angle_grid() -> Grid {
    Grid::new(-PI, PI, DEFAULT_ANGLE_STEPS)
}

impl ScanSpec {
    pub fn hom_dip(ensemble: EnsembleSpec) -> Self {
        Self {
            scenario: Scenario::HomDip,
            abscissa: default_tau_grid(ensemble.sigma),
            ensemble: Some(ensemble),
            fixed: FixedParams::default(),
            aom: AomSchedule::default(),
        }
    }

    pub fn coupled_scan(ensemble: EnsembleSpec, zeta_prime: Option<f64>) -> Self {
        Self {
            scenario: Scenario::CoupledScan,
            ensemble: Some(ensemble),
            abscissa: default_angle_grid(),
            fixed: FixedParams { zeta_prime, ..FixedParams::default() },
            aom: AomSchedule::default(),
        }
    }

    pub fn coherence_version() -> Self {
        Self {
            scenario: Scenario::CoherenceVersion,
            ensemble: None,
            abscissa: default_angle_grid(),
            fixed: FixedParams::default(),
            aom: AomSchedule::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.abscissa.validate("abscissa")?;
        self.fixed.context.validate()?;
        match self.scenario {
            Scenario::HomDip | Scenario::CoupledScan => {
                self.ensemble
                    .as_ref()
                    .ok_or_else(|| Error::config("ensemble", "required for this scenario"))?
                    .validate()?;
            }
            Scenario::CoherenceVersion => {
                self.aom.validate()?;
                if let Some(g) = &self.fixed.phi_grid {
                    g.validate("phi_grid")?;
                }
            }
        }
        if let Some(z) = self.fixed.zeta_prime {
            if !z.is_finite() {
                return Err(Error::config("zeta_prime", "must be finite"));
            }
        }
        if !(self.fixed.k_delta_l1.is_finite() && self.fixed.phi.is_finite()) {
            return Err(Error::config("k_delta_l1", "fixed angles must be finite"));
        }
        Ok(())
    }

    fn ensemble(&self) -> Result<(EnsembleSpec, Vec<PhotonPairSample>)> {
        let spec = self
            .ensemble
            .ok_or_else(|| Error::config("ensemble", "required for this scenario"))?;
        Ok((spec, sample_ensemble(&spec)?))
    }
}

/// One named output column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub unit: String,
    pub values: Vec<f64>,
}

impl Series {
    pub fn new(name: &str, unit: &str, values: Vec<f64>) -> Self {
        Self { name: name.to_owned(), unit: unit.to_owned(), values }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub spec: ScanSpec,
    pub version: String,
}

/// Scan output: one or two abscissa axes followed by observable columns,
/// all of equal length (two-dimensional scans are flattened row-major).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub axes: Vec<Series>,
    pub columns: Vec<Series>,
    pub metadata: Metadata,
}

impl ScanResult {
    fn new(spec: &ScanSpec, axes: Vec<Series>, columns: Vec<Series>) -> Self {
        Self {
            axes,
            columns,
            metadata: Metadata {
                spec: *spec,
                version: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            },
        }
    }

    pub fn len(&self) -> usize {
        self.axes.first().map_or(0, |a| a.values.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn abscissa(&self) -> &[f64] {
        &self.axes[0].values
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .chain(self.axes.iter())
            .find(|s| s.name == name)
            .map(|s| s.values.as_slice())
    }

    /// The scenario's headline series.
    pub fn primary(&self) -> &Series {
        &self.columns[0]
    }
}

pub fn run(spec: &ScanSpec) -> Result<ScanResult> {
    match spec.scenario {
        Scenario::HomDip => run_hom_dip(spec),
        Scenario::CoupledScan => run_coupled_scan(spec),
        Scenario::CoherenceVersion => run_coherence_version(spec),
    }
}

fn expect_scenario(spec: &ScanSpec, want: Scenario) -> Result<()> {
    if spec.scenario != want {
        return Err(Error::config(
            "scenario",
            format!("expected {}, got {}", want.name(), spec.scenario.name()),
        ));
    }
    spec.validate()
}

/// Ensemble `g²(τ)` and mean first-MZI port intensities along a delay grid.
pub fn run_hom_dip(spec: &ScanSpec) -> Result<ScanResult> {
    expect_scenario(spec, Scenario::HomDip)?;
    let (ens_spec, ensemble) = spec.ensemble()?;
    let taus = spec.abscissa.values();
    let points = taus
        .par_iter()
        .map(|&tau| {
            let ctx = spec.fixed.context.with_tau(tau);
            let g2 = ensemble_g2(&ensemble, &ctx, ens_spec.omega0)?;
            let means = mean_port_intensities(&ensemble, &ctx, ens_spec.omega0)?;
            Ok([g2, means.first, means.second])
        })
        .collect::<Result<Vec<_>>>()?;
    let col = |k: usize| points.iter().map(|p| p[k]).collect::<Vec<_>>();
    Ok(ScanResult::new(
        spec,
        vec![Series::new("tau", "s", taus.clone())],
        vec![
            Series::new("g2", "1", col(0)),
            Series::new("I_alpha_mean", "I0", col(1)),
            Series::new("I_beta_mean", "I0", col(2)),
        ],
    ))
}

/// Mean port intensity of either second-MZI output, which also serves as the
/// normalisation of the coincidence product.
const MEAN_PORT_INTENSITY: f64 = 1.0;

/// Second-MZI sweep over `φ`: mean port intensities and the coincidence
/// product `R_AB = ⟨I_A·I_B⟩ / I₀²`.
pub fn run_coupled_scan(spec: &ScanSpec) -> Result<ScanResult> {
    expect_scenario(spec, Scenario::CoupledScan)?;
    let (ens_spec, ensemble) = spec.ensemble()?;
    let ctx = spec.fixed.context;
    let zetas: Vec<f64> = ensemble
        .iter()
        .map(|p| spec.fixed.zeta_prime.unwrap_or_else(|| zeta_prime(p, &ctx, ens_spec.omega0)))
        .collect();
    let phis = spec.abscissa.values();
    let points: Vec<[f64; 3]> = phis
        .par_iter()
        .map(|&phi| {
            let per_pair = || ensemble.iter().zip(&zetas).map(move |(p, &z)| (p.weight, mzi2_intensities(z, phi)));
            let a = compensated_sum(per_pair().map(|(w, i)| w * i.first));
            let b = compensated_sum(per_pair().map(|(w, i)| w * i.second));
            let ab = compensated_sum(per_pair().map(|(w, i)| w * i.product()));
            [a, b, ab / (MEAN_PORT_INTENSITY * MEAN_PORT_INTENSITY)]
        })
        .collect();
    let col = |k: usize| points.iter().map(|p| p[k]).collect::<Vec<_>>();
    Ok(ScanResult::new(
        spec,
        vec![Series::new("phi", "rad", phis.clone())],
        vec![
            Series::new("R_AB", "1", col(2)),
            Series::new("I_A_mean", "I0", col(0)),
            Series::new("I_B_mean", "I0", col(1)),
        ],
    ))
}

/// `⟨x·y⟩ / (⟨x⟩⟨y⟩)`, NaN when a mean vanishes.
fn normalized_correlation(xy: f64, x: f64, y: f64) -> f64 {
    let d = x * y;
    if d == 0.0 {
        f64::NAN
    } else {
        xy / d
    }
}

/// Coherence version of the coupled scheme over `ζ` (optionally `ζ × φ`),
/// with `ζ' = ζ + kΔL₁`.
///
/// Emits the single-shot intensities and `R_ij = 4·I_i·I_j`, then the same
/// quantities averaged over the AOM shot sequence together with the
/// normalised correlations `g²_αβ` and `g²_AB`.
pub fn run_coherence_version(spec: &ScanSpec) -> Result<ScanResult> {
    expect_scenario(spec, Scenario::CoherenceVersion)?;
    let offsets = aom_phase_sequence(&spec.aom, spec.aom.shots)?;
    let shot_weight = 1.0 / offsets.len() as f64;
    let zetas = spec.abscissa.values();
    let (zeta_axis, phi_axis): (Vec<f64>, Vec<f64>) = match &spec.fixed.phi_grid {
        None => (zetas.clone(), vec![spec.fixed.phi; zetas.len()]),
        Some(g) => {
            let phis = g.values();
            zetas
                .iter()
                .flat_map(|&z| phis.iter().map(move |&p| (z, p)))
                .unzip()
        }
    };
    let k_dl1 = spec.fixed.k_delta_l1;
    let points: Vec<[f64; 12]> = zeta_axis
        .par_iter()
        .zip(phi_axis.par_iter())
        .map(|(&zeta, &phi)| {
            let (ab, big) = coherent_intensities(zeta + k_dl1, phi);
            // [I_α, I_β, I_A, I_B, I_α·I_β, I_A·I_B] averaged over the shots
            let mut acc = [0.0f64; 6];
            for &o in &offsets {
                let (s_ab, s_big) = coherent_intensities(zeta + k_dl1 + o, phi);
                let shot = [
                    s_ab.first,
                    s_ab.second,
                    s_big.first,
                    s_big.second,
                    s_ab.product(),
                    s_big.product(),
                ];
                for (a, v) in acc.iter_mut().zip(shot) {
                    *a += shot_weight * v;
                }
            }
            let [ia, ib, i_a, i_b, iab, i_ab] = acc;
            [
                ab.first,
                ab.second,
                big.first,
                big.second,
                normalized_product(ab.first, ab.second),
                normalized_product(big.first, big.second),
                ia,
                ib,
                i_a,
                i_b,
                normalized_correlation(iab, ia, ib),
                normalized_correlation(i_ab, i_a, i_b),
            ]
        })
        .collect();
    let col = |k: usize| points.iter().map(|p| p[k]).collect::<Vec<_>>();
    let mut axes = vec![Series::new("zeta", "rad", zeta_axis.clone())];
    if spec.fixed.phi_grid.is_some() {
        axes.push(Series::new("phi", "rad", phi_axis.clone()));
    }
    Ok(ScanResult::new(
        spec,
        axes,
        vec![
            Series::new("R_alphabeta", "1", col(4)),
            Series::new("R_AB", "1", col(5)),
            Series::new("I_alpha", "I0", col(0)),
            Series::new("I_beta", "I0", col(1)),
            Series::new("I_A", "I0", col(2)),
            Series::new("I_B", "I0", col(3)),
            Series::new("I_alpha_aom", "I0", col(6)),
            Series::new("I_beta_aom", "I0", col(7)),
            Series::new("I_A_aom", "I0", col(8)),
            Series::new("I_B_aom", "I0", col(9)),
            Series::new("g2_alphabeta_aom", "1", col(10)),
            Series::new("g2_AB_aom", "1", col(11)),
        ],
    ))
}

/// Gaussian-spectrum HOM dip `½(1 − exp(−2σ²τ²))`.
pub fn closed_form_hom(sigma: f64, tau: f64) -> f64 {
    let x = sigma * tau;
    0.5 * (1.0 - (-2.0 * x * x).exp())
}

/// Number of sign changes in the forward differences of `values`, ignoring
/// differences whose magnitude does not exceed `threshold`.
pub fn derivative_sign_changes(values: &[f64], threshold: f64) -> usize {
    let signs: Vec<bool> = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| d.abs() > threshold)
        .map(|d| d > 0.0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

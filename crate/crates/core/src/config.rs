//! Run configuration documents.
//!
//! A configuration is a flat JSON object. Every physical quantity carries its
//! unit in the key name; omitted keys take their documented defaults, unknown
//! keys are rejected. Lengths are given in metres and converted to light-travel
//! time here, which is the only place the speed of light appears.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::correlator::PhaseContext;
use crate::error::{Error, Result};
use crate::scenarios::{
    default_tau_grid, AomSchedule, FixedParams, Grid, ScanSpec, Scenario, DEFAULT_ANGLE_STEPS,
    DEFAULT_HOM_STEPS, DEFAULT_N_SAMPLES, DEFAULT_OMEGA0, DEFAULT_RF_HZ, DEFAULT_SIGMA,
};
use crate::source::{EnsembleSpec, PhaseMode, Sampling};

/// Speed of light (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseModeName {
    FixedPiOverTwo,
    Zero,
    UniformRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingName {
    Grid,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

/// Fully defaulted, validated run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,

    pub sigma_rad_per_s: f64,
    pub omega0_rad_per_s: f64,
    pub n_samples: usize,
    pub coverage: f64,
    pub phase_mode: PhaseModeName,
    pub phase_seed: u64,
    pub sampling: SamplingName,
    pub sampling_seed: u64,

    pub tau_start_s: f64,
    pub tau_stop_s: f64,
    pub tau_steps: usize,
    pub phi_start_rad: f64,
    pub phi_stop_rad: f64,
    pub phi_steps: usize,
    pub zeta_start_rad: f64,
    pub zeta_stop_rad: f64,
    pub zeta_steps: usize,

    pub delta_l1_m: f64,
    pub delta_l2_m: f64,
    pub tau_s: f64,
    pub r_s_m: f64,
    pub t_s_s: f64,
    pub include_carrier: bool,
    pub zeta_prime_rad: Option<f64>,

    pub k_delta_l1_rad: f64,
    pub phi_rad: f64,
    pub coherence_2d: bool,
    pub aom_f_rf_hz: f64,
    pub aom_pulse_s: f64,
    pub aom_duty: f64,
    pub aom_shots: usize,

    pub output: PathBuf,
    pub formats: Vec<Format>,
}

/// Every accepted key, in documentation order.
pub const KEYS: &[&str] = &[
    "scenario",
    "sigma_rad_per_s",
    "omega0_rad_per_s",
    "n_samples",
    "coverage",
    "phase_mode",
    "phase_seed",
    "sampling",
    "sampling_seed",
    "tau_start_s",
    "tau_stop_s",
    "tau_steps",
    "phi_start_rad",
    "phi_stop_rad",
    "phi_steps",
    "zeta_start_rad",
    "zeta_stop_rad",
    "zeta_steps",
    "delta_l1_m",
    "delta_l2_m",
    "tau_s",
    "r_s_m",
    "t_s_s",
    "include_carrier",
    "zeta_prime_rad",
    "k_delta_l1_rad",
    "phi_rad",
    "coherence_2d",
    "aom_f_rf_hz",
    "aom_pulse_s",
    "aom_duty",
    "aom_shots",
    "output",
    "formats",
];

fn take<T: for<'de> Deserialize<'de>>(map: &mut Map<String, Value>, key: &str) -> Result<Option<T>> {
    match map.remove(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v)
            .map(Some)
            .map_err(|e| Error::config(key, e.to_string())),
    }
}

fn or<T>(v: Option<T>, default: T) -> T {
    v.unwrap_or(default)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let value: Value = serde_json::from_str(text)?;
    config_from_value(value)
}

/// Validates a JSON object and fills every missing key with its default.
pub fn config_from_value(value: Value) -> Result<RunConfig> {
    let Value::Object(mut map) = value else {
        return Err(Error::config("<root>", "configuration must be a JSON object"));
    };
    if let Some(bad) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(Error::config(bad.clone(), "unknown key"));
    }
    let scenario: Scenario = take(&mut map, "scenario")?
        .ok_or_else(|| Error::config("scenario", "missing required key"))?;
    let sigma = or(take(&mut map, "sigma_rad_per_s")?, DEFAULT_SIGMA);
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::config("sigma_rad_per_s", format!("must be positive, got {sigma}")));
    }
    let tau_grid = default_tau_grid(sigma);

    let cfg = RunConfig {
        scenario,
        sigma_rad_per_s: sigma,
        omega0_rad_per_s: or(take(&mut map, "omega0_rad_per_s")?, DEFAULT_OMEGA0),
        n_samples: or(take(&mut map, "n_samples")?, DEFAULT_N_SAMPLES),
        coverage: or(take(&mut map, "coverage")?, 1.0),
        phase_mode: or(take(&mut map, "phase_mode")?, PhaseModeName::FixedPiOverTwo),
        phase_seed: or(take(&mut map, "phase_seed")?, 0),
        sampling: or(take(&mut map, "sampling")?, SamplingName::Grid),
        sampling_seed: or(take(&mut map, "sampling_seed")?, 0),
        tau_start_s: or(take(&mut map, "tau_start_s")?, tau_grid.start),
        tau_stop_s: or(take(&mut map, "tau_stop_s")?, tau_grid.stop),
        tau_steps: or(take(&mut map, "tau_steps")?, DEFAULT_HOM_STEPS),
        phi_start_rad: or(take(&mut map, "phi_start_rad")?, -PI),
        phi_stop_rad: or(take(&mut map, "phi_stop_rad")?, PI),
        phi_steps: or(take(&mut map, "phi_steps")?, DEFAULT_ANGLE_STEPS),
        zeta_start_rad: or(take(&mut map, "zeta_start_rad")?, -PI),
        zeta_stop_rad: or(take(&mut map, "zeta_stop_rad")?, PI),
        zeta_steps: or(take(&mut map, "zeta_steps")?, DEFAULT_ANGLE_STEPS),
        delta_l1_m: or(take(&mut map, "delta_l1_m")?, 0.0),
        delta_l2_m: or(take(&mut map, "delta_l2_m")?, 0.0),
        tau_s: or(take(&mut map, "tau_s")?, 0.0),
        r_s_m: or(take(&mut map, "r_s_m")?, 0.0),
        t_s_s: or(take(&mut map, "t_s_s")?, 0.0),
        include_carrier: or(take(&mut map, "include_carrier")?, false),
        zeta_prime_rad: take(&mut map, "zeta_prime_rad")?,
        k_delta_l1_rad: or(take(&mut map, "k_delta_l1_rad")?, FRAC_PI_2),
        phi_rad: or(take(&mut map, "phi_rad")?, FRAC_PI_2),
        coherence_2d: or(take(&mut map, "coherence_2d")?, false),
        aom_f_rf_hz: or(take(&mut map, "aom_f_rf_hz")?, DEFAULT_RF_HZ),
        aom_pulse_s: or(take(&mut map, "aom_pulse_s")?, 0.5 / DEFAULT_RF_HZ),
        aom_duty: or(take(&mut map, "aom_duty")?, 0.5),
        aom_shots: or(take(&mut map, "aom_shots")?, 2),
        output: or(take(&mut map, "output")?, PathBuf::from(scenario.name())),
        formats: or(take(&mut map, "formats")?, vec![Format::Csv]),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn check(ok: bool, key: &str, reason: impl Into<String>) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::config(key, reason))
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        check(
            self.coverage > 0.0 && self.coverage <= 1.0,
            "coverage",
            format!("must lie in (0, 1], got {}", self.coverage),
        )?;
        check(
            self.n_samples >= 3 && self.n_samples % 2 == 1,
            "n_samples",
            format!("must be odd and at least 3, got {}", self.n_samples),
        )?;
        check(
            self.omega0_rad_per_s.is_finite() && self.omega0_rad_per_s >= 0.0,
            "omega0_rad_per_s",
            "must be finite and non-negative",
        )?;
        let grids = [
            ("tau", self.tau_start_s, self.tau_stop_s, self.tau_steps),
            ("phi", self.phi_start_rad, self.phi_stop_rad, self.phi_steps),
            ("zeta", self.zeta_start_rad, self.zeta_stop_rad, self.zeta_steps),
        ];
        for (name, start, stop, steps) in grids {
            check(steps >= 2, &format!("{name}_steps"), format!("must be at least 2, got {steps}"))?;
            check(
                start.is_finite() && stop.is_finite() && start < stop,
                &format!("{name}_start"),
                format!("start ({start}) must be below stop ({stop})"),
            )?;
        }
        let finite = [
            ("delta_l1_m", self.delta_l1_m),
            ("delta_l2_m", self.delta_l2_m),
            ("tau_s", self.tau_s),
            ("r_s_m", self.r_s_m),
            ("t_s_s", self.t_s_s),
            ("k_delta_l1_rad", self.k_delta_l1_rad),
            ("phi_rad", self.phi_rad),
            ("aom_f_rf_hz", self.aom_f_rf_hz),
            ("aom_pulse_s", self.aom_pulse_s),
            ("zeta_prime_rad", self.zeta_prime_rad.unwrap_or(0.0)),
        ];
        for (key, v) in finite {
            check(v.is_finite(), key, "must be finite")?;
        }
        check(
            (0.0..=1.0).contains(&self.aom_duty),
            "aom_duty",
            format!("must lie in [0, 1], got {}", self.aom_duty),
        )?;
        check(self.aom_shots >= 1, "aom_shots", "must be at least 1")?;
        check(!self.formats.is_empty(), "formats", "at least one output format is required")?;
        Ok(())
    }

    pub fn ensemble_spec(&self) -> EnsembleSpec {
        EnsembleSpec {
            omega0: self.omega0_rad_per_s,
            sigma: self.sigma_rad_per_s,
            n_samples: self.n_samples,
            coverage: self.coverage,
            phase_mode: match self.phase_mode {
                PhaseModeName::FixedPiOverTwo => PhaseMode::FixedPiOverTwo,
                PhaseModeName::Zero => PhaseMode::Zero,
                PhaseModeName::UniformRandom => PhaseMode::UniformRandom { seed: self.phase_seed },
            },
            sampling: match self.sampling {
                SamplingName::Grid => Sampling::DeterministicGrid,
                SamplingName::MonteCarlo => Sampling::MonteCarlo { seed: self.sampling_seed },
            },
        }
    }

    pub fn phase_context(&self) -> PhaseContext {
        PhaseContext {
            delta_l1: self.delta_l1_m / SPEED_OF_LIGHT,
            delta_l2: self.delta_l2_m / SPEED_OF_LIGHT,
            tau: self.tau_s,
            r_s: self.r_s_m / SPEED_OF_LIGHT,
            t_s: self.t_s_s,
            include_carrier: self.include_carrier,
        }
    }

    fn phi_grid(&self) -> Grid {
        Grid::new(self.phi_start_rad, self.phi_stop_rad, self.phi_steps)
    }

    pub fn scan_spec(&self) -> ScanSpec {
        let ensemble = self.ensemble_spec();
        let fixed = FixedParams {
            context: self.phase_context(),
            zeta_prime: self.zeta_prime_rad,
            k_delta_l1: self.k_delta_l1_rad,
            phi: self.phi_rad,
            phi_grid: (self.scenario == Scenario::CoherenceVersion && self.coherence_2d)
                .then(|| self.phi_grid()),
        };
        let aom = AomSchedule {
            f_rf: self.aom_f_rf_hz,
            pulse: self.aom_pulse_s,
            duty: self.aom_duty,
            shots: self.aom_shots,
        };
        let (ensemble, abscissa) = match self.scenario {
            Scenario::HomDip => (
                Some(ensemble),
                Grid::new(self.tau_start_s, self.tau_stop_s, self.tau_steps),
            ),
            Scenario::CoupledScan => (Some(ensemble), self.phi_grid()),
            Scenario::CoherenceVersion => (
                None,
                Grid::new(self.zeta_start_rad, self.zeta_stop_rad, self.zeta_steps),
            ),
        };
        ScanSpec { scenario: self.scenario, ensemble, abscissa, fixed, aom }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }
}

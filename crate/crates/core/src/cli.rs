//! Command-line front end: `hom`, `coupled` and `coherent` subcommands.
//!
//! Each subcommand reads an optional JSON config (`--config`) and then applies
//! flag overrides; flags win over file values. Set `MZILAB_THREADS` to cap the
//! number of worker threads.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::{config_from_value, Format, RunConfig};
use crate::error::{Error, Result};
use crate::output::{to_csv, to_json, to_svg, write_atomic};
use crate::scenarios::{self, ScanResult, Scenario};

pub const THREADS_ENV: &str = "MZILAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "mzilab", version, about = "Coupled Mach-Zehnder interferometer scans")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// HOM dip of the first interferometer versus pair delay.
    Hom(Overrides),
    /// Second-interferometer sweep over its phase.
    Coupled(Overrides),
    /// AOM-randomised coherence version of the coupled scheme.
    Coherent(Overrides),
}

impl Command {
    pub fn scenario(&self) -> Scenario {
        match self {
            Command::Hom(_) => Scenario::HomDip,
            Command::Coupled(_) => Scenario::CoupledScan,
            Command::Coherent(_) => Scenario::CoherenceVersion,
        }
    }

    pub fn overrides(&self) -> &Overrides {
        match self {
            Command::Hom(o) | Command::Coupled(o) | Command::Coherent(o) => o,
        }
    }
}

/// One flag per configuration key.
#[derive(Debug, Default, Clone, Args, Serialize)]
pub struct Overrides {
    /// JSON configuration file.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_rad_per_s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega0_rad_per_s: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<f64>,
    /// fixed_pi_over_two | zero | uniform_random
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_mode: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_seed: Option<u64>,
    /// grid | monte_carlo
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampling: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampling_seed: Option<u64>,

    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_start_s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_stop_s: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_steps: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_start_rad: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_stop_rad: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_steps: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta_start_rad: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta_stop_rad: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta_steps: Option<usize>,

    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_l1_m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_l2_m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_s_m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_s_s: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub include_carrier: Option<bool>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta_prime_rad: Option<f64>,

    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_delta_l1_rad: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_rad: Option<f64>,
    #[arg(long = "coherence-2d")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coherence_2d: Option<bool>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aom_f_rf_hz: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aom_pulse_s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aom_duty: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aom_shots: Option<usize>,

    /// Output path stem; one file per format is written next to it.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Comma-separated subset of csv,json,svg.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formats: Option<Vec<String>>,
}

/// Merges the config file (if any), the subcommand's scenario and the flag
/// overrides into one validated configuration.
pub fn resolve_config(command: &Command) -> Result<RunConfig> {
    let overrides = command.overrides();
    let mut map = match &overrides.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })?;
            match serde_json::from_str::<Value>(&text)? {
                Value::Object(m) => m,
                _ => return Err(Error::config("<root>", "configuration must be a JSON object")),
            }
        }
        None => Map::new(),
    };
    map.insert(
        "scenario".into(),
        serde_json::to_value(command.scenario()).expect("scenario serialises"),
    );
    if let Value::Object(flags) = serde_json::to_value(overrides).expect("overrides serialise") {
        map.extend(flags);
    }
    config_from_value(Value::Object(map))
}

/// Parses `MZILAB_THREADS`, if set.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::config(THREADS_ENV, format!("must be a positive integer, got {v:?}"))),
        },
    }
}

/// Runs a scan, capping rayon's worker count when requested.
pub fn execute(config: &RunConfig, threads: Option<usize>) -> Result<ScanResult> {
    let spec = config.scan_spec();
    match threads {
        None => scenarios::run(&spec),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::config(THREADS_ENV, e.to_string()))?;
            pool.install(|| scenarios::run(&spec))
        }
    }
}

/// Output path for one format: the configured stem with the format's
/// extension.
pub fn output_path(stem: &Path, format: Format) -> PathBuf {
    let mut name = stem.as_os_str().to_owned();
    name.push(".");
    name.push(format.extension());
    PathBuf::from(name)
}

pub fn write_outputs(config: &RunConfig, result: &ScanResult) -> Result<Vec<PathBuf>> {
    let mut formats = config.formats.clone();
    formats.sort();
    formats.dedup();
    formats
        .into_iter()
        .map(|f| {
            let path = output_path(&config.output, f);
            let body = match f {
                Format::Csv => to_csv(result),
                Format::Json => to_json(result),
                Format::Svg => to_svg(result),
            };
            write_atomic(&path, &body)?;
            Ok(path)
        })
        .collect()
}

/// One-line report: scenario, point count, range of the primary series.
pub fn summary(config: &RunConfig, result: &ScanResult) -> String {
    let primary = result.primary();
    let (lo, hi) = primary
        .values
        .iter()
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    format!(
        "{}: {} points, {} min {:.6e} max {:.6e}",
        config.scenario.name(),
        result.len(),
        primary.name,
        lo,
        hi
    )
}

/// Full invocation: resolve, scan, write, report.
pub fn run(config: &RunConfig) -> Result<(ScanResult, Vec<PathBuf>)> {
    let result = execute(config, thread_cap()?)?;
    let written = write_outputs(config, &result)?;
    println!("{}", summary(config, &result));
    Ok((result, written))
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match resolve_config(&cli.command).and_then(|cfg| run(&cfg)) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

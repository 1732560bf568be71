//! Simulation of coupled Mach-Zehnder interferometers driven by ensembles of
//! phase-correlated, symmetrically detuned photon pairs.
//!
//! The crate is organised bottom-up:
//!
//! - [`optics`]: 2×2 transfer matrices for splitters, phase shifters and
//!   the closed-form coupled-MZI matrix.
//! - [`source`]: Gaussian pair ensembles with fixed, zero or random relative
//!   phase.
//! - [`correlator`]: per-pair phase and intensity kernels and weighted
//!   ensemble averages (`g²`, mean port intensities).
//! - [`scenarios`]: the HOM dip, the second-MZI sweep and the AOM-driven
//!   coherence version as scan datasets.
//! - [`output`], [`config`], [`cli`]: CSV/JSON/SVG writers, run configuration
//!   documents and the `mzilab` command line.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod cli;
pub mod config;
pub mod correlator;
pub mod error;
pub mod optics;
pub mod output;
pub mod scenarios;
pub mod source;

pub use correlator::{IntensityPair, PhaseContext};
pub use error::{Error, Result};
pub use optics::{ComplexAmplitude, FieldPair, TransferMatrix2};
pub use scenarios::{ScanResult, ScanSpec, Scenario};
pub use source::{EnsembleSpec, PhaseMode, PhotonPairSample, Sampling};

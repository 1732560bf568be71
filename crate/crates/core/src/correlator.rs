//! Per-pair phase and intensity kernels and weighted ensemble averages.
//!
//! Internal units set `c = 1`, so a path-length difference is expressed as its
//! light-travel time in seconds and `δk = δω` numerically. Intensities are in
//! units of `I₀ = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::source::PhotonPairSample;

/// Measurement-arm configuration entering the per-pair phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseContext {
    /// First-MZI path difference (s, light-travel time).
    pub delta_l1: f64,
    /// Second-MZI path difference (s, light-travel time).
    pub delta_l2: f64,
    /// Relative pair delay (s).
    pub tau: f64,
    /// Beat-position offset (s, light-travel time).
    pub r_s: f64,
    /// Beat-time offset (s).
    pub t_s: f64,
    /// Keep the `ω₀/2`-scale carrier terms.
    pub include_carrier: bool,
}

impl Default for PhaseContext {
    fn default() -> Self {
        Self {
            delta_l1: 0.0,
            delta_l2: 0.0,
            tau: 0.0,
            r_s: 0.0,
            t_s: 0.0,
            include_carrier: false,
        }
    }
}

impl PhaseContext {
    pub fn with_tau(self, tau: f64) -> Self {
        Self { tau, ..self }
    }

    /// Second-MZI phase from the carrier, `(ω₀/2)·ΔL₂`. Detuning contributions
    /// of the two photons cancel inside the second interferometer.
    pub fn phi(&self, omega0: f64) -> f64 {
        0.5 * omega0 * self.delta_l2
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("delta_l1", self.delta_l1),
            ("delta_l2", self.delta_l2),
            ("tau", self.tau),
            ("r_s", self.r_s),
            ("t_s", self.t_s),
        ];
        for (key, v) in fields {
            if !v.is_finite() {
                return Err(Error::config(key, "must be finite"));
            }
        }
        Ok(())
    }
}

/// Intensities on the two output ports of one interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntensityPair {
    pub first: f64,
    pub second: f64,
}

impl IntensityPair {
    pub fn new(first: f64, second: f64) -> Self {
        Self { first, second }
    }

    pub fn sum(&self) -> f64 {
        self.first + self.second
    }

    pub fn product(&self) -> f64 {
        self.first * self.second
    }
}

/// Effective phase of one pair in the first MZI:
///
/// `(k₀/2 − δk)ΔL₁ − (ω₀/2 − δω)τ + δφ − 2(δk·r_s − δω·t_s)`
///
/// with `δφ = θ_S − θ_I`. Without the carrier the two `ω₀/2` terms are dropped.
pub fn zeta_prime(pair: &PhotonPairSample, ctx: &PhaseContext, omega0: f64) -> f64 {
    let d = pair.delta_omega;
    let carrier = if ctx.include_carrier { 0.5 * omega0 } else { 0.0 };
    (carrier - d) * ctx.delta_l1 - (carrier - d) * ctx.tau + pair.relative_phase()
        - 2.0 * (d * ctx.r_s - d * ctx.t_s)
}

/// First-MZI port intensities `(1 + sin ζ', 1 − sin ζ')`.
pub fn mzi1_intensities(zeta_p: f64) -> IntensityPair {
    let s = zeta_p.sin();
    IntensityPair::new(1.0 + s, 1.0 - s)
}

/// Single-pair intensity correlation `cos² ζ'`.
pub fn g2_pointwise(zeta_p: f64) -> f64 {
    let c = zeta_p.cos();
    c * c
}

/// Second-MZI port intensities `(1 − cos ζ' sin φ, 1 + cos ζ' sin φ)`.
pub fn mzi2_intensities(zeta_p: f64, phi: f64) -> IntensityPair {
    let m = zeta_p.cos() * phi.sin();
    IntensityPair::new(1.0 - m, 1.0 + m)
}

/// Output intensities of the coherence-driven coupled MZI, each port pair
/// summing to `I₀`: returns `((I_α, I_β), (I_A, I_B))`.
pub fn coherent_intensities(zeta_p: f64, phi: f64) -> (IntensityPair, IntensityPair) {
    let c = zeta_p.cos();
    let m = phi.sin() * zeta_p.sin();
    (
        IntensityPair::new(0.5 * (1.0 - c), 0.5 * (1.0 + c)),
        IntensityPair::new(0.5 * (1.0 - m), 0.5 * (1.0 + m)),
    )
}

/// `R_ij = 4·I_i·I_j`, unity when both ports sit at their mean `I₀/2`.
pub fn normalized_product(i: f64, j: f64) -> f64 {
    4.0 * i * j
}

/// Neumaier-compensated sum; the result does not depend on how callers
/// partition work as long as each partition is summed through here.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Weighted ensemble mean `Σ_j w_j · kernel(pair_j, ctx)`.
pub fn ensemble_average<K>(ensemble: &[PhotonPairSample], kernel: K, ctx: &PhaseContext) -> Result<f64>
where
    K: Fn(&PhotonPairSample, &PhaseContext) -> f64,
{
    if ensemble.is_empty() {
        return Err(Error::config("ensemble", "cannot average over an empty ensemble"));
    }
    Ok(compensated_sum(ensemble.iter().map(|p| p.weight * kernel(p, ctx))))
}

/// Ensemble `g²` of the first MZI at the given context.
pub fn ensemble_g2(ensemble: &[PhotonPairSample], ctx: &PhaseContext, omega0: f64) -> Result<f64> {
    ensemble_average(ensemble, |p, c| g2_pointwise(zeta_prime(p, c, omega0)), ctx)
}

/// Labelled first-MZI port intensities of one pair.
pub fn port_intensities(pair: &PhotonPairSample, ctx: &PhaseContext, omega0: f64) -> IntensityPair {
    mzi1_intensities(zeta_prime(pair, ctx, omega0))
}

/// Weighted mean of the first-MZI port intensities.
///
/// Signal and idler are indistinguishable at the detectors, so each pair
/// enters together with its label-exchanged image. Without the carrier the
/// exchange maps `ζ'` to `−ζ'`, which makes `⟨sin ζ'⟩` vanish and both means
/// equal `I₀`.
pub fn mean_port_intensities(
    ensemble: &[PhotonPairSample],
    ctx: &PhaseContext,
    omega0: f64,
) -> Result<IntensityPair> {
    let symmetric = |p: &PhotonPairSample, c: &PhaseContext| {
        let a = port_intensities(p, c, omega0);
        let b = port_intensities(&p.interchanged(), c, omega0);
        IntensityPair::new(0.5 * (a.first + b.first), 0.5 * (a.second + b.second))
    };
    let first = ensemble_average(ensemble, |p, c| symmetric(p, c).first, ctx)?;
    let second = ensemble_average(ensemble, |p, c| symmetric(p, c).second, ctx)?;
    Ok(IntensityPair::new(first, second))
}

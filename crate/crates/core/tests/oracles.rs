//! Scan outputs checked against routes that do not go through the
//! implementation: brute-force quadrature of the continuous spectrum,
//! characteristic-function closed forms and hand-substituted equations.

use std::f64::consts::{FRAC_PI_2, PI};

use mzilab::correlator::{ensemble_average, g2_pointwise, port_intensities, PhaseContext};
use mzilab::scenarios::{
    closed_form_hom, default_ensemble, run, run_coherence_version, run_coupled_scan, Grid, ScanSpec,
};
use mzilab::source::{sample_ensemble, PhaseMode};

const SIGMA: f64 = 0.5e9;

/// `⟨sin²(δ·τ)⟩` over a Gaussian truncated at `±3σ·coverage`, by composite
/// Simpson integration on a dense grid.
fn simpson_dip(sigma: f64, coverage: f64, tau: f64) -> f64 {
    let h = 3.0 * sigma * coverage;
    let n = 200_000;
    let dx = 2.0 * h / n as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for k in 0..=n {
        let x = -h + k as f64 * dx;
        let c = if k == 0 || k == n { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
        let w = c * (-x * x / (2.0 * sigma * sigma)).exp();
        num += w * (x * tau).sin().powi(2);
        den += w;
    }
    num / den
}

#[test]
fn hom_dip_matches_quadrature_and_closed_form() {
    let r = run(&ScanSpec::hom_dip(default_ensemble())).unwrap();
    let g2 = r.column("g2").unwrap();
    for (k, &tau) in r.abscissa().iter().enumerate().step_by(10) {
        let quad = simpson_dip(SIGMA, 1.0, tau);
        assert!((g2[k] - quad).abs() < 1e-3, "tau {tau}: {} vs {quad}", g2[k]);
        assert!((g2[k] - closed_form_hom(SIGMA, tau)).abs() < 0.01);
    }
}

#[test]
fn half_depth_delay() {
    // e^{-2x²} = ½ at x = 0.5887
    let tau = 0.5887 / SIGMA;
    let e = sample_ensemble(&default_ensemble()).unwrap();
    let g = ensemble_average(&e, |p, c| g2_pointwise(hom_phase(p.delta_omega, c.tau, p.relative_phase())), &PhaseContext::default().with_tau(tau)).unwrap();
    assert!((g - 0.25).abs() < 0.01, "g2 = {g}");
    assert!((closed_form_hom(SIGMA, tau) - 0.25).abs() < 1e-4);
}

// δω·τ + δθ, written out independently of `zeta_prime`
fn hom_phase(delta_omega: f64, tau: f64, dtheta: f64) -> f64 {
    delta_omega * tau + dtheta
}

#[test]
fn partial_coverage_matches_truncated_quadrature() {
    let mut ens = default_ensemble();
    ens.coverage = 0.5;
    let r = run(&ScanSpec::hom_dip(ens)).unwrap();
    let g2 = r.column("g2").unwrap();
    for (k, &tau) in r.abscissa().iter().enumerate().step_by(25) {
        assert!((g2[k] - simpson_dip(SIGMA, 0.5, tau)).abs() < 1e-3);
    }
}

#[test]
fn random_phase_ensemble_sits_at_one_half() {
    let mut ens = default_ensemble();
    ens.n_samples = 4001;
    ens.phase_mode = PhaseMode::UniformRandom { seed: 42 };
    let r = run(&ScanSpec::hom_dip(ens)).unwrap();
    let tol = 3.0 / (4001f64).sqrt();
    for &g in r.column("g2").unwrap() {
        assert!((g - 0.5).abs() < tol, "g2 = {g}");
    }
}

#[test]
fn zero_phase_ensemble_decays_from_one() {
    let mut ens = default_ensemble();
    ens.phase_mode = PhaseMode::Zero;
    let r = run(&ScanSpec::hom_dip(ens)).unwrap();
    let tau = r.abscissa();
    let g2 = r.column("g2").unwrap();
    let mid = tau.iter().position(|&t| t == 0.0).unwrap();
    assert!((g2[mid] - 1.0).abs() < 1e-12);
    assert!((g2[0] - 0.5).abs() < 0.01 && (g2[g2.len() - 1] - 0.5).abs() < 0.01);
    // ½(1 + e^{-2σ²τ²})
    for (k, &t) in tau.iter().enumerate() {
        assert!((g2[k] - (1.0 - closed_form_hom(SIGMA, t))).abs() < 0.01);
    }
}

#[test]
fn mean_port_intensities_are_flat_for_locked_pairs() {
    let r = run(&ScanSpec::hom_dip(default_ensemble())).unwrap();
    for name in ["I_alpha_mean", "I_beta_mean"] {
        for &v in r.column(name).unwrap() {
            assert!((v - 1.0).abs() < 1e-12, "{name} = {v}");
        }
    }
}

/// `⟨cos(δ·τ)⟩` over the full `±3σ` truncated Gaussian, by Simpson's rule.
fn simpson_cos(sigma: f64, tau: f64) -> f64 {
    let h = 3.0 * sigma;
    let n = 200_000;
    let dx = 2.0 * h / n as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for k in 0..=n {
        let x = -h + k as f64 * dx;
        let c = if k == 0 || k == n { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
        let w = c * (-x * x / (2.0 * sigma * sigma)).exp();
        num += w * (x * tau).cos();
        den += w;
    }
    num / den
}

#[test]
fn labelled_port_mean_follows_quadrature() {
    // without label exchange, sin(δτ + π/2) averages to ⟨cos δτ⟩
    let e = sample_ensemble(&default_ensemble()).unwrap();
    for x in [0.0, 0.3, 1.0, 2.0, 5.0] {
        let ctx = PhaseContext::default().with_tau(x / SIGMA);
        let m = ensemble_average(&e, |p, c| port_intensities(p, c, 0.0).first, &ctx).unwrap();
        let want = 1.0 + simpson_cos(SIGMA, x / SIGMA);
        assert!((m - want).abs() < 1e-3, "στ = {x}: {m} vs {want}");
    }
}

#[test]
fn coupled_scan_limits() {
    let mut ens = default_ensemble();
    ens.n_samples = 201;

    // Locked pairs at zero delay give ζ' = π/2 for every pair: flat outputs.
    let r = run_coupled_scan(&ScanSpec::coupled_scan(ens, None)).unwrap();
    for name in ["I_A_mean", "I_B_mean"] {
        assert!(r.column(name).unwrap().iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    let r = run_coupled_scan(&ScanSpec::coupled_scan(ens, Some(0.0))).unwrap();
    for (k, &phi) in r.abscissa().iter().enumerate() {
        assert!((r.column("I_A_mean").unwrap()[k] - (1.0 - phi.sin())).abs() < 1e-12);
        assert!((r.column("R_AB").unwrap()[k] - 0.5 * (1.0 + (2.0 * phi).cos())).abs() < 1e-10);
    }

    // φ = 0 at arbitrary ζ'
    let mut spec = ScanSpec::coupled_scan(ens, Some(1.234));
    spec.abscissa = Grid::new(0.0, 1.0, 2);
    let r = run_coupled_scan(&spec).unwrap();
    assert!((r.column("I_A_mean").unwrap()[0] - 1.0).abs() < 1e-15);
}

#[test]
fn coherence_version_hand_values() {
    let mut spec = ScanSpec::coherence_version();
    spec.abscissa = Grid::new(-PI, PI, 9); // steps of π/4
    let r = run_coherence_version(&spec).unwrap();
    let zeta = r.abscissa();
    let rab = r.column("R_alphabeta").unwrap();
    let r_ab = r.column("R_AB").unwrap();
    for k in 0..zeta.len() {
        // ζ' = ζ + π/2, φ = π/2:  R_αβ = cos²ζ,  R_AB = 1 − cos²ζ
        let c2 = zeta[k].cos().powi(2);
        assert!((rab[k] - c2).abs() < 1e-12);
        assert!((r_ab[k] - (1.0 - c2)).abs() < 1e-12);
    }
    // AOM {0, π} average gives I₀/2 on every port, and g² equals R
    for name in ["I_alpha_aom", "I_beta_aom", "I_A_aom", "I_B_aom"] {
        assert!(r.column(name).unwrap().iter().all(|v| (v - 0.5).abs() < 1e-12), "{name}");
    }
    let g2 = r.column("g2_alphabeta_aom").unwrap();
    assert!(g2.iter().zip(rab).all(|(a, b)| (a - b).abs() < 1e-12));
    let g2 = r.column("g2_AB_aom").unwrap();
    assert!(g2.iter().zip(r_ab).all(|(a, b)| (a - b).abs() < 1e-12));
}

#[test]
fn coherence_version_fringe_at_zero_zeta() {
    // ζ = 0, kΔL₁ = π/2: R_AB(φ) = (1 + cos 2φ)/2
    let mut spec = ScanSpec::coherence_version();
    spec.abscissa = Grid::new(-1e-3, 1e-3, 3);
    for k in 0..=32 {
        spec.fixed.phi = -PI + 2.0 * PI * k as f64 / 32.0;
        let r = run(&spec).unwrap();
        let want = 0.5 * (1.0 + (2.0 * spec.fixed.phi).cos());
        assert!((r.column("R_AB").unwrap()[1] - want).abs() < 1e-12);
    }
    spec.fixed.phi = FRAC_PI_2;
    assert!(run(&spec).unwrap().column("R_AB").unwrap()[1].abs() < 1e-12);
}

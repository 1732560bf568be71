use std::f64::consts::{FRAC_PI_2, PI};

use mzilab::correlator::{
    coherent_intensities, ensemble_g2, mean_port_intensities, mzi1_intensities, mzi2_intensities,
    zeta_prime, PhaseContext,
};
use mzilab::optics::{
    apply, bs_matrix, compose, coupled_mzi_chain, coupled_mzi_matrix, phase_lower, phase_upper,
    FieldPair,
};
use mzilab::scenarios::{run, ScanSpec};
use mzilab::source::{sample_ensemble, EnsembleSpec, PhaseMode, PhotonPairSample, Sampling};
use num_complex::Complex64;
use proptest::prelude::*;

fn small_spec(n: usize, phase_mode: PhaseMode, sampling: Sampling, coverage: f64) -> EnsembleSpec {
    EnsembleSpec {
        omega0: 4.0e15,
        sigma: 0.5e9,
        n_samples: n,
        coverage,
        phase_mode,
        sampling,
    }
}

fn angle() -> impl Strategy<Value = f64> {
    -4.0 * PI..4.0 * PI
}

fn phase_mode() -> impl Strategy<Value = PhaseMode> {
    prop_oneof![
        Just(PhaseMode::FixedPiOverTwo),
        Just(PhaseMode::Zero),
        any::<u64>().prop_map(|seed| PhaseMode::UniformRandom { seed }),
    ]
}

fn sampling() -> impl Strategy<Value = Sampling> {
    prop_oneof![
        Just(Sampling::DeterministicGrid),
        any::<u64>().prop_map(|seed| Sampling::MonteCarlo { seed }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn elements_and_chains_are_unitary(z in angle(), p in angle(), q in angle()) {
        let chain = compose(&[phase_upper(z), bs_matrix(), phase_lower(p), bs_matrix(), phase_upper(q)]).unwrap();
        for m in [bs_matrix(), phase_upper(z), phase_lower(p), coupled_mzi_matrix(z, p), chain] {
            prop_assert!(m.unitarity_defect() < 1e-12);
            prop_assert!(m.is_finite());
        }
    }

    #[test]
    fn unitary_matrices_conserve_power(
        z in angle(), p in angle(),
        a in -3.0..3.0f64, b in -3.0..3.0f64, c in -3.0..3.0f64, d in -3.0..3.0f64,
    ) {
        let f = FieldPair::new(Complex64::new(a, b), Complex64::new(c, d));
        prop_assume!(f.power() > 1e-6);
        let out = apply(&coupled_mzi_matrix(z, p), &f);
        prop_assert!(((out.power() - f.power()) / f.power()).abs() < 1e-12);
    }

    #[test]
    fn closed_form_equals_chain(z in angle(), p in angle()) {
        let (g, dev) = compose(&coupled_mzi_chain(z, p)).unwrap().global_phase_to(&coupled_mzi_matrix(z, p));
        prop_assert!(dev < 1e-12);
        prop_assert!((g - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn intensity_equations_conserve_power(z in angle(), p in angle()) {
        prop_assert!((mzi1_intensities(z).sum() - 2.0).abs() < 1e-12);
        prop_assert!((mzi2_intensities(z, p).sum() - 2.0).abs() < 1e-12);
        let (ab, big) = coherent_intensities(z, p);
        prop_assert!((ab.sum() - 1.0).abs() < 1e-12);
        prop_assert!((big.sum() - 1.0).abs() < 1e-12);
        prop_assert!(ab.first >= 0.0 && ab.second >= 0.0 && big.first >= 0.0 && big.second >= 0.0);
    }

    /// The coupled-MZI matrix applied to photon-phase inputs: the relative input phase
    /// enters the effective phase with a minus sign.
    #[test]
    fn second_mzi_kernel_matches_matrix_with_pair_phases(
        z in angle(), p in angle(), ts in -PI..PI, ti in -PI..PI,
    ) {
        let (ia, ib) = apply(&coupled_mzi_matrix(z, p), &FieldPair::from_phases(ts, ti)).intensities();
        let k = mzi2_intensities(z - (ts - ti), p);
        prop_assert!((ia - k.first).abs() < 1e-10);
        prop_assert!((ib - k.second).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ensembles_are_sign_symmetric_and_reproducible(
        half in 1usize..200, mode in phase_mode(), sampling in sampling(), coverage in 0.05..=1.0f64,
    ) {
        let spec = small_spec(2 * half + 1, mode, sampling, coverage);
        let e = sample_ensemble(&spec).unwrap();
        prop_assert_eq!(e.len(), spec.n_samples);
        let total: f64 = e.iter().map(|p| p.weight).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        let mut d: Vec<f64> = e.iter().map(|p| p.delta_omega).collect();
        let mut neg: Vec<f64> = d.iter().map(|x| -x).collect();
        d.sort_by(f64::total_cmp);
        neg.sort_by(f64::total_cmp);
        prop_assert_eq!(&d, &neg);
        prop_assert_eq!(sample_ensemble(&spec).unwrap(), e);
    }

    #[test]
    fn grid_ensembles_have_zero_first_moment(half in 1usize..500, coverage in 0.05..=1.0f64) {
        let spec = small_spec(2 * half + 1, PhaseMode::FixedPiOverTwo, Sampling::DeterministicGrid, coverage);
        let e = sample_ensemble(&spec).unwrap();
        let m: f64 = e.iter().map(|p| p.weight * p.delta_omega).sum();
        prop_assert!(m.abs() < 1e-12 * spec.sigma);
    }

    #[test]
    fn global_phase_changes_no_observable(
        shift in -10.0..10.0f64, mode in phase_mode(), tau in -1e-8..1e-8f64, dl1 in -1e-9..1e-9f64,
        carrier in any::<bool>(), phi in angle(),
    ) {
        let spec = small_spec(101, mode, Sampling::DeterministicGrid, 1.0);
        let e = sample_ensemble(&spec).unwrap();
        let shifted: Vec<PhotonPairSample> = e
            .iter()
            .map(|p| PhotonPairSample { theta_s: p.theta_s + shift, theta_i: p.theta_i + shift, ..*p })
            .collect();
        let ctx = PhaseContext { tau, delta_l1: dl1, include_carrier: carrier, ..PhaseContext::default() };
        let g = ensemble_g2(&e, &ctx, spec.omega0).unwrap();
        let gs = ensemble_g2(&shifted, &ctx, spec.omega0).unwrap();
        prop_assert!((g - gs).abs() < 1e-12);
        let m = mean_port_intensities(&e, &ctx, spec.omega0).unwrap();
        let ms = mean_port_intensities(&shifted, &ctx, spec.omega0).unwrap();
        prop_assert!((m.first - ms.first).abs() < 1e-12 && (m.second - ms.second).abs() < 1e-12);
        for (a, b) in e.iter().zip(&shifted) {
            let (za, zb) = (zeta_prime(a, &ctx, spec.omega0), zeta_prime(b, &ctx, spec.omega0));
            let (ia, ib) = (mzi2_intensities(za, phi), mzi2_intensities(zb, phi));
            prop_assert!((ia.first - ib.first).abs() < 1e-12);
        }
    }

    #[test]
    fn relative_phase_sign_is_unobservable_in_g2(tau in -1e-8..1e-8f64, coverage in 0.1..=1.0f64) {
        let spec = small_spec(401, PhaseMode::FixedPiOverTwo, Sampling::DeterministicGrid, coverage);
        let plus = sample_ensemble(&spec).unwrap();
        let minus: Vec<PhotonPairSample> = plus
            .iter()
            .map(|p| PhotonPairSample { theta_s: p.theta_i - FRAC_PI_2, ..*p })
            .collect();
        let ctx = PhaseContext::default().with_tau(tau);
        let a = ensemble_g2(&plus, &ctx, spec.omega0).unwrap();
        let b = ensemble_g2(&minus, &ctx, spec.omega0).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn random_phases_are_unbiased(seed in any::<u64>(), half in 100usize..2000) {
        let n = 2 * half + 1;
        let e = sample_ensemble(&small_spec(n, PhaseMode::UniformRandom { seed }, Sampling::DeterministicGrid, 1.0)).unwrap();
        let mean: Complex64 = e.iter().map(|p| Complex64::from_polar(1.0, p.relative_phase())).sum::<Complex64>() / n as f64;
        prop_assert!(mean.norm() < 3.0 / (n as f64).sqrt());
    }
}

#[test]
fn fixed_pair_phase_is_exact() {
    let e = sample_ensemble(&small_spec(2001, PhaseMode::FixedPiOverTwo, Sampling::DeterministicGrid, 1.0)).unwrap();
    assert!(e.iter().all(|p| p.theta_s - p.theta_i == FRAC_PI_2));
}

#[test]
fn identical_specs_give_identical_results() {
    let mut spec = ScanSpec::hom_dip(small_spec(
        301,
        PhaseMode::UniformRandom { seed: 11 },
        Sampling::MonteCarlo { seed: 5 },
        0.8,
    ));
    spec.abscissa.steps = 41;
    let a = run(&spec).unwrap();
    let b = run(&spec).unwrap();
    assert_eq!(a, b);
    for (x, y) in a.columns.iter().zip(&b.columns) {
        assert!(x.values.iter().zip(&y.values).all(|(p, q)| p.to_bits() == q.to_bits()));
    }
}

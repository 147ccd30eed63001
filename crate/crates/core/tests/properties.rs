use std::f64::consts::FRAC_PI_2;

use dimer_fluorescence::effective::{combined_steady, model2p_steady, EffectiveRates};
use dimer_fluorescence::estimation::{
    fisher_information_with, poisson_count_prob, FisherOptions,
};
use dimer_fluorescence::linalg::{c, CMatrix, C64};
use dimer_fluorescence::lindblad::{build_liouvillian, steady_state, to_bare_basis, to_collective_basis};
use dimer_fluorescence::observables::{g2_operator, g2_zero, intensity_exact, intensity_from_collective};
use dimer_fluorescence::params::{coupling_from_distance, mixing_angle, params_from_beta, rabi_splitting};
use dimer_fluorescence::spectrum::{linspace, rf_spectrum_with};
use dimer_fluorescence::{Basis, DensityMatrix, Exec, GeometryMode, SystemParams};
use proptest::prelude::*;

fn arb_params() -> impl Strategy<Value = SystemParams> {
    (
        0.0..FRAC_PI_2,
        -3.0f64..-1.0,
        0.0..0.99f64,
        0.01..2.0f64,
        -2.0..2.0f64,
    )
        .prop_map(|(beta, lg, frac, omega, delta)| {
            let gamma = 10f64.powf(lg);
            SystemParams::from_mixing(1.0, beta)
                .unwrap()
                .with_gamma(gamma)
                .with_gamma12(frac * gamma)
                .with_omega(omega)
                .with_delta_laser(delta)
        })
}

fn arb_state() -> impl Strategy<Value = DensityMatrix> {
    proptest::collection::vec(-1.0..1.0f64, 32).prop_map(|v| {
        let m = CMatrix::from_fn(4, 4, |i, j| C64::new(v[2 * (4 * i + j)], v[2 * (4 * i + j) + 1]));
        let rho = &m * m.adjoint();
        let tr = rho.trace();
        DensityMatrix::new(rho / tr, Basis::Bare)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn beta_round_trip(j in 1e-3..1e3f64, d in -1e3..1e3f64) {
        let beta = mixing_angle(d, j).unwrap();
        let (j2, d2) = params_from_beta(rabi_splitting(j, d), beta).unwrap();
        prop_assert!((j2 - j).abs() <= 1e-12 * j.abs().max(d.abs()));
        prop_assert!((d2 - d).abs() <= 1e-12 * j.abs().max(d.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn near_field_coupling_decreases(kr in 0.01..5.0f64, dk in 1e-4..1.0f64) {
        let (j1, g1) = coupling_from_distance(kr, 1.0, 1.0, 0.0, GeometryMode::NearField).unwrap();
        let (j2, _) = coupling_from_distance(kr + dk, 1.0, 1.0, 0.0, GeometryMode::NearField).unwrap();
        prop_assert!(j2 < j1);
        prop_assert_eq!(g1, 1.0);
    }

    #[test]
    fn exact_coupling_close_to_near_field(kr in 0.01..0.3f64) {
        let (jn, _) = coupling_from_distance(kr, 1.0, 1.0, 0.0, GeometryMode::NearField).unwrap();
        let (je, _) = coupling_from_distance(kr, 1.0, 1.0, 0.0, GeometryMode::Exact).unwrap();
        prop_assert!((je / jn - 1.0).abs() < 0.05);
    }

    #[test]
    fn steady_state_is_a_physical_state(p in arb_params()) {
        let l = build_liouvillian(&p);
        let rho = steady_state(&l).unwrap();
        prop_assert!(rho.hermiticity_error() < 1e-10);
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-10);
        prop_assert!(rho.min_eigenvalue() >= -1e-9);
        prop_assert!(l.spectral_abscissa().unwrap() <= 1e-9);
    }

    #[test]
    fn stationary_mode_is_isolated(p in arb_params()) {
        let mut moduli: Vec<f64> = build_liouvillian(&p)
            .eigenvalues()
            .unwrap()
            .iter()
            .map(|z| z.norm())
            .collect();
        moduli.sort_by(f64::total_cmp);
        prop_assert!(moduli[0] < 1e-9);
        prop_assert!(moduli[1] > 1e-6 * p.gamma);
    }

    #[test]
    fn intensity_is_basis_independent(p in arb_params()) {
        let rho = steady_state(&build_liouvillian(&p)).unwrap();
        let col = to_collective_basis(&rho, p.beta);
        prop_assert!((intensity_exact(&rho) - intensity_from_collective(&col, p.beta)).abs() < 1e-10);
        let back = to_bare_basis(&col, p.beta);
        prop_assert!((&back.entries - &rho.entries).norm() < 1e-12);
    }

    #[test]
    fn effective_state_invariants(p in arb_params()) {
        let e = combined_steady(&p);
        for v in [e.rho2_ee, e.rho1_ss, e.rho1_aa, e.rho1_ee, e.combined_ee, e.combined_ss, e.combined_aa] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        prop_assert_eq!(e.rho2_ss, e.rho2_ee);
        prop_assert_eq!(e.rho2_aa, e.rho2_ee);
        prop_assert_eq!(e.combined_ee, e.rho1_ee + e.rho2_ee);
        let flipped = model2p_steady(&p.with_delta_laser(-p.delta_laser));
        prop_assert_eq!(flipped.ee, model2p_steady(&p).ee);
        let r = EffectiveRates::new(&p).unwrap();
        prop_assert!((r.gamma_s + r.gamma_a - 2.0 * p.gamma).abs() < 1e-15);
        prop_assert!((r.gamma_c - p.gamma12 * p.beta.sin()).abs() < 1e-15);
        prop_assert!((r.omega_s.powi(2) + r.omega_a.powi(2) - 2.0 * p.omega_drive.powi(2)).abs() < 1e-12);
    }

    #[test]
    fn two_photon_population_grows_to_a_quarter(beta in 0.0..1.5f64, om in 1e-3..0.5f64, k in 1.01..3.0f64) {
        let p = SystemParams::from_mixing(1.0, beta).unwrap().with_gamma(1e-3).with_omega(om);
        let a = model2p_steady(&p).ee;
        let b = model2p_steady(&p.with_omega(k * om)).ee;
        prop_assert!(b > a && b <= 0.25);
    }

    #[test]
    fn g2_formula_equals_operator_form(rho in arb_state()) {
        if let (Ok(a), Ok(b)) = (g2_zero(&rho), g2_operator(&rho)) {
            prop_assert!((a - b).abs() < 1e-10 * a.max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn spectrum_components_and_exchange(p in arb_params(), gd in 0.0..0.05f64) {
        let p = p.with_det_linewidth(gd);
        let grid = linspace(-3.0, 3.0, 61);
        let s = rf_spectrum_with(&p, &grid, Exec::Sequential).unwrap();
        let x = rf_spectrum_with(&p.exchanged(), &grid, Exec::Sequential).unwrap();
        let scale = s.total.iter().chain(&s.s1).map(|v| v.abs()).fold(1.0, f64::max);
        prop_assert!(s.component_residual() < 1e-10 * scale);
        for i in 0..grid.len() {
            prop_assert!((s.total[i] - x.total[i]).abs() < 1e-10 * scale);
            prop_assert!((s.s1[i] - x.s2[i]).abs() < 1e-10 * scale);
            prop_assert!((s.s12[i] - x.s21[i]).abs() < 1e-10 * scale);
            prop_assert!(s.total[i] >= -1e-9 * scale);
        }
    }

    #[test]
    fn poisson_normalization(mean in 0.0..30.0f64) {
        let total: f64 = (0..=200).map(|n| poisson_count_prob(mean, n)).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn fisher_is_linear_in_eta(eta in 0.1..10.0f64, om in 1.0..20.0f64) {
        let p = SystemParams::from_distance(0.17, 50.0, GeometryMode::NearField)
            .unwrap()
            .with_gamma12(0.999)
            .with_det_linewidth(1.0)
            .with_omega(om);
        let grid = linspace(-400.0, 400.0, 801);
        let one = fisher_information_with(&p, 0.17, &grid, &FisherOptions::default(), Exec::Sequential).unwrap();
        let opts = FisherOptions { eta, ..Default::default() };
        let scaled = fisher_information_with(&p, 0.17, &grid, &opts, Exec::Sequential).unwrap();
        prop_assert!(one.fisher >= 0.0);
        prop_assert!((scaled.fisher / (eta * one.fisher) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn collective_rotation_preserves_spectrum_of_state() {
    let rho = DensityMatrix::new(
        CMatrix::from_fn(4, 4, |i, j| if i == j { c([0.4, 0.3, 0.2, 0.1][i]) } else { c(0.0) }),
        Basis::Bare,
    );
    let col = to_collective_basis(&rho, 0.7);
    let mut a = rho.eigenvalues();
    let mut b = col.eigenvalues();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12);
    }
}

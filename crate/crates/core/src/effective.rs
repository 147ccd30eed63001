//! Closed-form effective models valid when the single-excitation splitting
//! `R` dominates every other rate.
//!
//! The two-photon cascade (`|gg> <-> |ee>` coupled at second order, decaying
//! through the single-excitation manifold) and the one-photon Vee system
//! (`|gg>, |A>, |S>` driven directly) are solved separately and their
//! density-matrix elements are added.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lindblad::generic_steady_state;
use crate::linalg::{c, CMatrix, C64};
use crate::params::SystemParams;

/// Ratio `Omega / R` above which second-order perturbation theory is suspect.
pub const STRONG_DRIVE_RATIO: f64 = 0.3;
/// Ratio `gamma / R` above which the two one-photon resonances overlap.
pub const BROAD_LINE_RATIO: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ValidityWarning {
    StrongDrive { omega_over_r: f64 },
    BroadLines { gamma_over_r: f64 },
}

impl std::fmt::Display for ValidityWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValidityWarning::StrongDrive { omega_over_r } => write!(
                f,
                "Omega/R = {omega_over_r:.3} > {STRONG_DRIVE_RATIO}: effective models lose accuracy"
            ),
            ValidityWarning::BroadLines { gamma_over_r } => write!(
                f,
                "gamma/R = {gamma_over_r:.3} > {BROAD_LINE_RATIO}: effective models lose accuracy"
            ),
        }
    }
}

pub fn validity_warnings(p: &SystemParams) -> Vec<ValidityWarning> {
    let mut out = Vec::new();
    let omega_over_r = p.omega_drive.abs() / p.big_r;
    if omega_over_r > STRONG_DRIVE_RATIO {
        out.push(ValidityWarning::StrongDrive { omega_over_r });
    }
    let gamma_over_r = p.gamma / p.big_r;
    if gamma_over_r > BROAD_LINE_RATIO {
        out.push(ValidityWarning::BroadLines { gamma_over_r });
    }
    out
}

fn log_warnings(p: &SystemParams) {
    for w in validity_warnings(p) {
        warn!("{w}");
    }
}

/// Effective two-photon Rabi frequency `-2 Ω² cos β / R`.
pub fn two_photon_rabi(omega: f64, big_r: f64, beta: f64) -> Result<f64> {
    if big_r == 0.0 {
        return Err(Error::DegenerateGeometry);
    }
    Ok(-2.0 * omega * omega * beta.cos() / big_r)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveRates {
    pub omega_2p: f64,
    /// Common light shift of `|gg>` and `|ee>`.
    pub lamb: f64,
    pub omega_s: f64,
    pub omega_a: f64,
    pub gamma_s: f64,
    pub gamma_a: f64,
    /// Incoherent `S`-`A` coupling from collective decay.
    pub gamma_c: f64,
}

impl EffectiveRates {
    pub fn new(p: &SystemParams) -> Result<Self> {
        let omega_2p = two_photon_rabi(p.omega_drive, p.big_r, p.beta)?;
        let (s, co) = p.beta.sin_cos();
        Ok(Self {
            omega_2p,
            lamb: omega_2p,
            omega_s: p.omega_drive * (1.0 + co).sqrt(),
            omega_a: p.omega_drive * (1.0 - co).max(0.0).sqrt(),
            gamma_s: p.gamma + p.gamma12 * co,
            gamma_a: p.gamma - p.gamma12 * co,
            gamma_c: p.gamma12 * s,
        })
    }
}

/// Second-order contributions. The cascade populates `|S>` and `|A>` equally
/// and each equals the `|ee>` population.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoPhotonPart {
    pub ee: f64,
    pub ss: f64,
    pub aa: f64,
}

pub fn model2p_steady(p: &SystemParams) -> TwoPhotonPart {
    if p.omega_drive.abs() / p.big_r > STRONG_DRIVE_RATIO {
        warn!(
            "two-photon cascade evaluated at Omega/R = {:.3}",
            p.omega_drive.abs() / p.big_r
        );
    }
    let om2 = p.omega_drive * p.omega_drive;
    let cos2 = p.beta.cos().powi(2);
    let r2 = p.big_r * p.big_r;
    let num = 4.0 * om2 * om2 * cos2;
    let den = 16.0 * om2 * om2 * cos2
        + r2 * p.gamma * p.gamma
        + 4.0 * r2 * p.delta_laser * p.delta_laser;
    let ee = if num == 0.0 { 0.0 } else { num / den };
    TwoPhotonPart { ee, ss: ee, aa: ee }
}

/// First-order contributions from the Vee model. Populations use the
/// two-level reduction of each branch; `ee` is the product regularization
/// `rho_SS * rho_AA`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OnePhotonPart {
    pub ss: f64,
    pub aa: f64,
    pub sa: C64,
    pub ee: f64,
}

fn branch_population(omega2: f64, weight: f64, gamma_i: f64, detuning: f64) -> f64 {
    let num = 4.0 * omega2 * weight;
    if num == 0.0 {
        return 0.0;
    }
    num / (gamma_i * gamma_i + 4.0 * detuning * detuning + 8.0 * omega2 * weight)
}

pub fn model1p_steady(p: &SystemParams) -> OnePhotonPart {
    let rates = EffectiveRates {
        omega_2p: 0.0,
        lamb: 0.0,
        omega_s: 0.0,
        omega_a: 0.0,
        gamma_s: p.gamma + p.gamma12 * p.beta.cos(),
        gamma_a: p.gamma - p.gamma12 * p.beta.cos(),
        gamma_c: 0.0,
    };
    let (s, co) = p.beta.sin_cos();
    let om2 = p.omega_drive * p.omega_drive;
    let d = p.delta_laser;
    let r = p.big_r;
    let g2 = p.gamma * p.gamma;

    let ss = branch_population(om2, 1.0 + co, rates.gamma_s, d + r);
    let aa = branch_population(om2, 1.0 - co, rates.gamma_a, d - r);

    let num = 2.0 * om2 * s * (d * d - r * r - 2.0 * om2);
    let den = 2.0 * (g2 * d * d + (d * d + 2.0 * om2).powi(2))
        + g2 * r * r * (2.0 * p.beta).cos()
        + r * r * (g2 - 4.0 * d * d + 8.0 * om2)
        + 2.0 * r.powi(4)
        - 4.0 * d * r * co * (g2 + 4.0 * om2);
    let sa = if num == 0.0 { 0.0 } else { num / den };

    OnePhotonPart {
        ss,
        aa,
        sa: c(sa),
        ee: ss * aa,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveSteadyState {
    pub rho2_ee: f64,
    pub rho2_ss: f64,
    pub rho2_aa: f64,
    pub rho1_ss: f64,
    pub rho1_aa: f64,
    pub rho1_sa: C64,
    pub rho1_ee: f64,
    pub combined_ee: f64,
    pub combined_ss: f64,
    pub combined_aa: f64,
    pub combined_sa: C64,
}

pub fn combined_steady(p: &SystemParams) -> EffectiveSteadyState {
    log_warnings(p);
    let two = model2p_steady(p);
    let one = model1p_steady(p);
    EffectiveSteadyState {
        rho2_ee: two.ee,
        rho2_ss: two.ss,
        rho2_aa: two.aa,
        rho1_ss: one.ss,
        rho1_aa: one.aa,
        rho1_sa: one.sa,
        rho1_ee: one.ee,
        combined_ee: one.ee + two.ee,
        combined_ss: one.ss + two.ss,
        combined_aa: one.aa + two.aa,
        combined_sa: one.sa,
    }
}

/// Vee-system indices.
pub mod vee {
    pub const GG: usize = 0;
    pub const A: usize = 1;
    pub const S: usize = 2;
}

/// Full stationary state of the three-level Vee model, solved numerically.
/// Cross-checks the closed-form one-photon populations and coherence.
pub fn vee_steady_numeric(p: &SystemParams) -> Result<CMatrix> {
    let rates = EffectiveRates::new(p)?;
    let mut h = CMatrix::zeros(3, 3);
    h[(vee::S, vee::S)] = c(p.delta_laser + p.big_r);
    h[(vee::A, vee::A)] = c(p.delta_laser - p.big_r);
    h[(vee::S, vee::GG)] = c(rates.omega_s);
    h[(vee::GG, vee::S)] = c(rates.omega_s);
    h[(vee::A, vee::GG)] = c(rates.omega_a);
    h[(vee::GG, vee::A)] = c(rates.omega_a);

    let mut lower_s = CMatrix::zeros(3, 3);
    lower_s[(vee::GG, vee::S)] = c(1.0);
    let mut lower_a = CMatrix::zeros(3, 3);
    lower_a[(vee::GG, vee::A)] = c(1.0);

    let channels = [
        (lower_s.clone(), lower_s.clone(), rates.gamma_s),
        (lower_a.clone(), lower_a.clone(), rates.gamma_a),
        (lower_a.clone(), lower_s.clone(), rates.gamma_c),
        (lower_s, lower_a, rates.gamma_c),
    ];
    generic_steady_state(&h, &channels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn mixing(beta: f64, gamma: f64, omega: f64, delta: f64) -> SystemParams {
        SystemParams::from_mixing(1.0, beta)
            .unwrap()
            .with_gamma(gamma)
            .with_gamma12(0.999 * gamma)
            .with_omega(omega)
            .with_delta_laser(delta)
    }

    #[test]
    fn two_photon_rabi_examples() {
        assert_relative_eq!(two_photon_rabi(0.1, 1.0, 0.0).unwrap(), -0.02, epsilon = 1e-16);
        assert!(two_photon_rabi(0.7, 1.0, FRAC_PI_2).unwrap().abs() < 1e-16);
        let a = two_photon_rabi(0.05, 1.0, 0.4).unwrap();
        let b = two_photon_rabi(0.1, 1.0, 0.4).unwrap();
        assert_relative_eq!(b / a, 4.0, epsilon = 1e-14);
        assert_eq!(two_photon_rabi(0.1, 0.0, 0.0), Err(Error::DegenerateGeometry));
    }

    #[test]
    fn rate_identities() {
        for beta in [0.0, 0.2, FRAC_PI_4, 1.3, FRAC_PI_2] {
            let p = mixing(beta, 1e-2, 0.07, 0.0);
            let r = EffectiveRates::new(&p).unwrap();
            assert_eq!(r.lamb, r.omega_2p);
            assert_relative_eq!(r.gamma_s + r.gamma_a, 2.0 * p.gamma, epsilon = 1e-15);
            assert_relative_eq!(r.gamma_c, p.gamma12 * beta.sin(), epsilon = 1e-15);
            assert_relative_eq!(
                r.omega_s.powi(2) + r.omega_a.powi(2),
                2.0 * 0.07f64.powi(2),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn two_photon_saturates_at_one_quarter() {
        let p = mixing(0.0, 1e-6, 0.2, 0.0);
        assert_relative_eq!(model2p_steady(&p).ee, 0.25, epsilon = 1e-6);
    }

    #[test]
    fn two_photon_vanishes_for_uncoupled_emitters() {
        let p = mixing(FRAC_PI_2, 1e-3, 0.1, 0.0);
        assert!(model2p_steady(&p).ee < 1e-25);
    }

    #[test]
    fn two_photon_reference_value() {
        // 4e-4 * 0.5 / (16e-4 * 0.5 + 1e-6) = 2000 / 8010
        let p = mixing(FRAC_PI_4, 1e-3, 0.1, 0.0);
        let two = model2p_steady(&p);
        assert_relative_eq!(two.ee, 2000.0 / 8010.0, max_relative = 1e-12);
        assert_eq!(two.ss, two.ee);
        assert_eq!(two.aa, two.ee);
    }

    #[test]
    fn one_photon_symmetric_resonance() {
        // beta = 0, gamma12 = gamma, Delta = -R, Omega = gamma:
        // 8 Omega^2 / (4 gamma^2 + 16 Omega^2) = 0.4
        let p = SystemParams::from_mixing(1.0, 0.0)
            .unwrap()
            .with_gamma(1e-3)
            .with_gamma12(1e-3)
            .with_omega(1e-3)
            .with_delta_laser(-1.0);
        let one = model1p_steady(&p);
        assert_relative_eq!(one.ss, 0.4, max_relative = 1e-12);
        assert_eq!(one.aa, 0.0);
        assert_eq!(one.sa, c(0.0));
        assert_eq!(one.ee, 0.0);
    }

    #[test]
    fn antisymmetric_branch_dark_for_identical_emitters() {
        for delta in [-1.0, -0.3, 0.0, 0.5, 1.0] {
            let p = mixing(0.0, 1e-2, 0.1, delta);
            assert_eq!(model1p_steady(&p).aa, 0.0);
        }
    }

    #[test]
    fn everything_vanishes_without_drive() {
        let p = mixing(0.7, 1e-2, 0.0, 0.1);
        let e = combined_steady(&p);
        assert_eq!(e.combined_ee, 0.0);
        assert_eq!(e.combined_ss, 0.0);
        assert_eq!(e.combined_aa, 0.0);
        assert_eq!(e.combined_sa, c(0.0));
    }

    #[test]
    fn combination_adds_branches() {
        let p = mixing(0.9, 1e-3, 0.05, 0.01);
        let e = combined_steady(&p);
        assert_eq!(e.combined_ee, e.rho1_ee + e.rho2_ee);
        assert_eq!(e.combined_ss, e.rho1_ss + e.rho2_ss);
        assert_eq!(e.combined_aa, e.rho1_aa + e.rho2_aa);
        assert_eq!(e.combined_sa, e.rho1_sa);
    }

    #[test]
    fn uncoupled_limit_uses_product_regularization() {
        let p = mixing(FRAC_PI_2, 1e-3, 0.05, 0.0);
        let e = combined_steady(&p);
        assert!(e.rho2_ee < 1e-30);
        assert_eq!(e.combined_ee, e.rho1_ss * e.rho1_aa + e.rho2_ee);
    }

    #[test]
    fn two_photon_branch_dominates_for_identical_emitters() {
        let p = mixing(0.0, 1e-3, 0.05, 0.0);
        let e = combined_steady(&p);
        assert!(e.rho2_ee > 10.0 * e.rho1_ee, "{} vs {}", e.rho2_ee, e.rho1_ee);
    }

    #[test]
    fn warnings_flag_out_of_regime_inputs() {
        assert!(validity_warnings(&mixing(0.3, 1e-3, 0.1, 0.0)).is_empty());
        let w = validity_warnings(&mixing(0.3, 0.2, 0.5, 0.0));
        assert_eq!(w.len(), 2);
    }

    #[test]
    fn vee_numeric_is_a_valid_state() {
        let p = mixing(0.8, 1e-2, 0.1, -0.2);
        let chi = vee_steady_numeric(&p).unwrap();
        assert_relative_eq!(chi.trace().re, 1.0, epsilon = 1e-12);
        assert!((&chi - chi.adjoint()).norm() < 1e-12);
    }
}

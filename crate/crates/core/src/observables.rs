//! Fluorescence intensity, zero-delay photon correlation and the two-photon
//! visibility.
//!
//! The far field is taken as `E⁺ ∝ σ1 + σ2` with the proportionality constant
//! dropped, so a single saturated emitter contributes intensity 1/2 and
//! `|ee>` contributes 2.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::effective::{combined_steady, model1p_steady, model2p_steady, EffectiveSteadyState};
use crate::error::{Error, Result};
use crate::lindblad::{bare, collective, exact_steady_state, field, intensity_operator, Basis, DensityMatrix};
use crate::params::SystemParams;

/// Intensities below this are treated as zero when normalizing `g2`.
pub const INTENSITY_FLOOR: f64 = 1e-12;

/// `Tr[ρ Î]` for a bare-basis state.
pub fn intensity_exact(rho: &DensityMatrix) -> f64 {
    assert_eq!(rho.basis, Basis::Bare, "intensity_exact expects a bare-basis state");
    rho.expect(&intensity_operator()).re
}

/// Intensity from collective-basis matrix elements at mixing angle `beta`.
pub fn intensity_from_collective(rho: &DensityMatrix, beta: f64) -> f64 {
    assert_eq!(rho.basis, Basis::Collective);
    let (s, co) = beta.sin_cos();
    let ss = rho.population(collective::S);
    let aa = rho.population(collective::A);
    let ee = rho.population(collective::EE);
    let sa = rho.get(collective::S, collective::A);
    decomposed_intensity(ee, ss, aa, sa.re, s, co)
}

fn decomposed_intensity(ee: f64, ss: f64, aa: f64, sa_re: f64, sin_b: f64, cos_b: f64) -> f64 {
    2.0 * ee + ss + aa + cos_b * (ss - aa) + 2.0 * sin_b * sa_re
}

/// Effective intensity `(I, I1, I2)`: total, first-order part, second-order part.
pub fn intensity_effective(state: &EffectiveSteadyState, beta: f64) -> (f64, f64, f64) {
    let (s, co) = beta.sin_cos();
    let i1 = decomposed_intensity(state.rho1_ee, state.rho1_ss, state.rho1_aa, state.rho1_sa.re, s, co);
    let i2 = decomposed_intensity(state.rho2_ee, state.rho2_ss, state.rho2_aa, 0.0, s, co);
    (i1 + i2, i1, i2)
}

fn normalized_g2(ee: f64, intensity: f64) -> Result<f64> {
    if intensity.abs() < INTENSITY_FLOOR {
        return Err(Error::UndefinedCorrelation { intensity });
    }
    Ok(4.0 * ee / (intensity * intensity))
}

/// `g2(0) = 4 ρ_ee,ee / I²`.
pub fn g2_zero(rho: &DensityMatrix) -> Result<f64> {
    let ee = match rho.basis {
        Basis::Bare => rho.population(bare::EE),
        Basis::Collective => rho.population(collective::EE),
    };
    let intensity = match rho.basis {
        Basis::Bare => intensity_exact(rho),
        Basis::Collective => {
            return Err(Error::InvalidParams(
                "g2_zero needs a bare-basis state (the intensity depends on beta)".into(),
            ))
        }
    };
    normalized_g2(ee, intensity)
}

/// `<E⁻E⁻E⁺E⁺> / <E⁻E⁺>²` straight from the operators.
pub fn g2_operator(rho: &DensityMatrix) -> Result<f64> {
    let e = field();
    let ed = e.adjoint();
    let num = rho.expect(&(&ed * &ed * &e * &e)).re;
    normalized_g2(num / 4.0, intensity_exact(rho))
}

/// `g2(0)` of the combined effective state.
pub fn g2_effective(state: &EffectiveSteadyState, beta: f64) -> Result<f64> {
    let (i, _, _) = intensity_effective(state, beta);
    normalized_g2(state.combined_ee, i)
}

/// Closed-form drive amplitude where `I2 = I1` at `Δ = 0`:
/// `R sqrt(2 / (tan²β + 8R²/γ²))`, tending to `γ/2` when `γ ≪ R tan β`.
pub fn visibility_threshold(big_r: f64, beta: f64, gamma: f64) -> f64 {
    let t = beta.tan();
    big_r * (2.0 / (t * t + 8.0 * big_r * big_r / (gamma * gamma))).sqrt()
}

/// `V2p = I2 / I1` from the effective models at the given parameters.
pub fn visibility(p: &SystemParams) -> f64 {
    let one = model1p_steady(p);
    let two = model2p_steady(p);
    let (s, co) = p.beta.sin_cos();
    let i1 = decomposed_intensity(one.ee, one.ss, one.aa, one.sa.re, s, co);
    let i2 = decomposed_intensity(two.ee, two.ss, two.aa, 0.0, s, co);
    if i1 == 0.0 {
        if i2 == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        i2 / i1
    }
}

fn require_two_photon_resonance(p: &SystemParams) -> Result<()> {
    if p.delta_laser != 0.0 {
        return Err(Error::InvalidParams(format!(
            "the visibility crossover is defined at Delta = 0 (got {})",
            p.delta_laser
        )));
    }
    if p.beta == 0.0 && p.gamma12 == p.gamma {
        warn!("beta = 0 with gamma12 = gamma: the antisymmetric state is perfectly dark");
    }
    Ok(())
}

/// `(V2p, Ω_v)` at `Δ = 0`.
pub fn visibility_crossover(p: &SystemParams) -> Result<(f64, f64)> {
    require_two_photon_resonance(p)?;
    Ok((visibility(p), visibility_threshold(p.big_r, p.beta, p.gamma)))
}

/// Drive amplitude where `V2p = 1`, bracketed on a geometric scan of
/// `[omega_min, omega_max]` and refined by bisection in `log Ω`.
pub fn visibility_crossing(p: &SystemParams, omega_min: f64, omega_max: f64) -> Result<f64> {
    require_two_photon_resonance(p)?;
    if !(omega_min > 0.0 && omega_max > omega_min) {
        return Err(Error::InvalidParams(format!(
            "bad bracket [{omega_min}, {omega_max}]"
        )));
    }
    let f = |om: f64| visibility(&p.with_omega(om)).ln();
    let steps = 200;
    let ratio = (omega_max / omega_min).ln() / steps as f64;
    let mut lo = omega_min.ln();
    let mut f_lo = f(omega_min);
    for k in 1..=steps {
        let hi = omega_min.ln() + ratio * k as f64;
        let f_hi = f(hi.exp());
        if f_lo < 0.0 && f_hi >= 0.0 {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..100 {
                let m = 0.5 * (a + b);
                if f(m.exp()) < 0.0 {
                    a = m;
                } else {
                    b = m;
                }
                if b - a < 1e-14 {
                    break;
                }
            }
            return Ok((0.5 * (a + b)).exp());
        }
        lo = hi;
        f_lo = f_hi;
    }
    Err(Error::InvalidParams(format!(
        "V2p does not cross 1 in [{omega_min}, {omega_max}]"
    )))
}

/// Local `d ln I / d ln Ω` of the exact intensity, by a symmetric difference
/// with relative step `rel`.
pub fn intensity_loglog_slope(p: &SystemParams, omega: f64, rel: f64) -> Result<f64> {
    let up = intensity_exact(&exact_steady_state(&p.with_omega(omega * (1.0 + rel)))?);
    let down = intensity_exact(&exact_steady_state(&p.with_omega(omega * (1.0 - rel)))?);
    Ok((up / down).ln() / ((1.0 + rel) / (1.0 - rel)).ln())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmissionObservables {
    /// Exact intensity.
    pub intensity: f64,
    /// Exact `g2(0)`; `None` when the intensity vanishes.
    pub g2_zero: Option<f64>,
    pub intensity_effective: f64,
    pub g2_effective: Option<f64>,
    pub i_first: f64,
    pub i_second: f64,
    pub visibility: f64,
    /// Closed-form crossover amplitude (meaningful at `Δ = 0`).
    pub omega_v: f64,
}

impl EmissionObservables {
    pub fn compute(p: &SystemParams) -> Result<Self> {
        let rho = exact_steady_state(p)?;
        let intensity = intensity_exact(&rho);
        let eff = combined_steady(p);
        let (i_eff, i1, i2) = intensity_effective(&eff, p.beta);
        Ok(Self {
            intensity,
            g2_zero: g2_zero(&rho).ok(),
            intensity_effective: i_eff,
            g2_effective: g2_effective(&eff, p.beta).ok(),
            i_first: i1,
            i_second: i2,
            visibility: if i1 > 0.0 { i2 / i1 } else { 0.0 },
            omega_v: visibility_threshold(p.big_r, p.beta, p.gamma),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, CMatrix, CVector};
    use crate::lindblad::{collective_transform, to_collective_basis};
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
    fn intensity_of_basis_states() {
        assert_eq!(intensity_exact(&DensityMatrix::basis_state(bare::GG, Basis::Bare)), 0.0);
        assert_relative_eq!(
            intensity_exact(&DensityMatrix::basis_state(bare::EE, Basis::Bare)),
            2.0,
            epsilon = 1e-15
        );
        let u = collective_transform(0.0);
        let a: CVector = u.row(collective::A).transpose();
        let dark = DensityMatrix::pure(&a.map(|z| z.conj()), Basis::Bare);
        assert!(intensity_exact(&dark).abs() < 1e-15);
    }

    #[test]
    fn g2_of_basis_states() {
        let ee = DensityMatrix::basis_state(bare::EE, Basis::Bare);
        assert_relative_eq!(g2_zero(&ee).unwrap(), 1.0, epsilon = 1e-15);
        let single = DensityMatrix::basis_state(bare::GE, Basis::Bare);
        assert_eq!(g2_zero(&single).unwrap(), 0.0);
        let gg = DensityMatrix::basis_state(bare::GG, Basis::Bare);
        assert!(matches!(g2_zero(&gg), Err(Error::UndefinedCorrelation { .. })));
    }

    #[test]
    fn intensity_decomposition_matches_operator() {
        for beta in [0.0, 0.4, FRAC_PI_4, 1.2, FRAC_PI_2] {
            let p = mixing(beta, 0.05, 0.3, 0.1);
            let rho = exact_steady_state(&p).unwrap();
            let col = to_collective_basis(&rho, beta);
            assert_relative_eq!(
                intensity_exact(&rho),
                intensity_from_collective(&col, beta),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn second_order_intensity_at_beta_zero() {
        let p = mixing(0.0, 1e-3, 0.05, 0.0);
        let e = combined_steady(&p);
        let (i, i1, i2) = intensity_effective(&e, 0.0);
        assert_relative_eq!(i2, 4.0 * e.rho2_ee, max_relative = 1e-14);
        assert_eq!(i, i1 + i2);
    }

    #[test]
    fn threshold_tends_to_half_gamma() {
        let w = visibility_threshold(1.0, FRAC_PI_4, 1e-4);
        assert_relative_eq!(w, 0.5e-4, max_relative = 1e-6);
    }

    #[test]
    fn visibility_scales_quadratically_at_weak_drive() {
        let p = mixing(FRAC_PI_4, 1e-2, 1e-5, 0.0);
        let ratio = visibility(&p.with_omega(2e-5)) / visibility(&p);
        assert_relative_eq!(ratio, 4.0, max_relative = 1e-3);
    }

    #[test]
    fn crossover_requires_resonance() {
        let p = mixing(FRAC_PI_4, 1e-2, 1e-3, 0.1);
        assert!(visibility_crossover(&p).is_err());
    }

    #[test]
    fn crossing_is_near_closed_form() {
        let p = mixing(FRAC_PI_4, 1e-2, 0.0, 0.0);
        let root = visibility_crossing(&p, 1e-4, 1e-1).unwrap();
        let w = visibility_threshold(1.0, FRAC_PI_4, 1e-2);
        assert!((root / w - 1.0).abs() < 0.2, "{root} vs {w}");
    }

    #[test]
    fn g2_formula_matches_operator_on_steady_states() {
        for (beta, delta) in [(0.0, 0.0), (0.9, 0.1), (FRAC_PI_2, -0.4)] {
            let p = mixing(beta, 1e-2, 0.2, delta);
            let rho = exact_steady_state(&p).unwrap();
            assert_relative_eq!(g2_zero(&rho).unwrap(), g2_operator(&rho).unwrap(), max_relative = 1e-10);
        }
        let m = CMatrix::from_diagonal_element(4, 4, c(0.25));
        let rho = DensityMatrix::new(m, Basis::Bare);
        assert_relative_eq!(g2_zero(&rho).unwrap(), g2_operator(&rho).unwrap(), epsilon = 1e-14);
    }

    #[test]
    fn emission_observables_bundle() {
        let p = mixing(FRAC_PI_4, 1e-3, 0.1, 0.0);
        let o = EmissionObservables::compute(&p).unwrap();
        assert!(o.intensity > 0.0 && o.intensity <= 2.0);
        assert!(o.g2_zero.unwrap() >= 1.0);
        assert_relative_eq!(o.intensity_effective, o.i_first + o.i_second, epsilon = 1e-15);
        assert!((o.intensity_effective / o.intensity - 1.0).abs() < 0.1);
    }
}

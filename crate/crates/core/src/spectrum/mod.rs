//! Resonance-fluorescence spectra, their emitter/interference decomposition,
//! peak detection and the dressed-state transition ladder.

mod ladder;
mod peaks;
mod resolvent;

pub use ladder::{
    closed_form_beta0, closed_form_beta_half_pi, dressed_ladder, strong_driving_eigensystem,
    DressedLadder, LadderTransition, SaturationAmplitude, StrongDrivingEigensystem, LADDER_BASIS,
};
pub use peaks::{detect_peaks, find_peaks, Peak, DEFAULT_PROMINENCE, MIN_POINTS_PER_GAMMA};
pub use resolvent::{spectral_function, Channel, ResolventKernel, EIGEN_CONDITION_LIMIT, SINGULAR_TOL};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exec::Exec;
use crate::lindblad::{build_liouvillian, field, sigma1, sigma2, steady_state};
use crate::params::SystemParams;

/// Number of points in the default overview grid.
pub const DEFAULT_GRID_POINTS: usize = 4001;
/// Half-width of the default overview grid in units of `R`.
pub const DEFAULT_GRID_HALF_WIDTH: f64 = 2.5;

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let h = (b - a) / (n - 1) as f64;
            (0..n).map(|k| if k == n - 1 { b } else { a + h * k as f64 }).collect()
        }
    }
}

/// `[-2.5R, 2.5R]` with 4001 points.
pub fn default_grid(big_r: f64) -> Vec<f64> {
    let w = DEFAULT_GRID_HALF_WIDTH * big_r;
    linspace(-w, w, DEFAULT_GRID_POINTS)
}

/// Spectrum on a frequency grid measured from the laser frequency.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralSeries {
    pub omegas: Vec<f64>,
    pub total: Vec<f64>,
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
    pub s12: Vec<f64>,
    pub s21: Vec<f64>,
    pub det_linewidth: f64,
    /// Local decay rate of the emitters, kept for resolution checks.
    pub gamma: f64,
}

impl SpectralSeries {
    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// Largest `|total - (s1 + s2 + s12 + s21)|` over the grid.
    pub fn component_residual(&self) -> f64 {
        (0..self.len())
            .map(|i| (self.total[i] - (self.s1[i] + self.s2[i] + self.s12[i] + self.s21[i])).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_total(&self) -> f64 {
        self.total.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Trapezoid-rule integral of the total spectrum.
    pub fn integral(&self) -> f64 {
        trapezoid(&self.omegas, &self.total)
    }
}

pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xw, yw)| 0.5 * (xw[1] - xw[0]) * (yw[0] + yw[1]))
        .sum()
}

/// Total spectrum and its four components, evaluated in parallel over the grid.
pub fn rf_spectrum(p: &SystemParams, omegas: &[f64]) -> Result<SpectralSeries> {
    rf_spectrum_with(p, omegas, Exec::default())
}

pub fn rf_spectrum_with(p: &SystemParams, omegas: &[f64], exec: Exec) -> Result<SpectralSeries> {
    p.validate()?;
    let l = build_liouvillian(p);
    let rho = steady_state(&l)?;
    let kernel = ResolventKernel::new(&l, &rho)?;
    let s1 = sigma1();
    let s2 = sigma2();
    let e = field();
    let channels = [
        kernel.channel(&e.adjoint(), &e),
        kernel.channel(&s1.adjoint(), &s1),
        kernel.channel(&s2.adjoint(), &s2),
        kernel.channel(&s1.adjoint(), &s2),
        kernel.channel(&s2.adjoint(), &s1),
    ];
    let gd = p.det_linewidth;
    let rows = exec.try_map(omegas.len(), |i| {
        let w = omegas[i];
        let mut out = [0.0; 5];
        for (slot, ch) in out.iter_mut().zip(&channels) {
            *slot = ch.eval(w, gd)?;
        }
        Ok::<_, crate::error::Error>(out)
    })?;
    let column = |k: usize| rows.iter().map(|r| r[k]).collect::<Vec<_>>();
    Ok(SpectralSeries {
        omegas: omegas.to_vec(),
        total: column(0),
        s1: column(1),
        s2: column(2),
        s12: column(3),
        s21: column(4),
        det_linewidth: gd,
        gamma: p.gamma,
    })
}

/// Total spectrum only; cheaper than [`rf_spectrum_with`] when the
/// components are not needed.
pub fn total_spectrum_with(p: &SystemParams, omegas: &[f64], exec: Exec) -> Result<Vec<f64>> {
    p.validate()?;
    let l = build_liouvillian(p);
    let rho = steady_state(&l)?;
    let kernel = ResolventKernel::new(&l, &rho)?;
    let e = field();
    let ch = kernel.channel(&e.adjoint(), &e);
    exec.try_map(omegas.len(), |i| ch.eval(omegas[i], p.det_linewidth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn linspace_endpoints() {
        let g = linspace(-1.0, 1.0, 5);
        assert_eq!(g, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(default_grid(2.0).len(), DEFAULT_GRID_POINTS);
        assert_eq!(default_grid(2.0)[0], -5.0);
        assert!(linspace(0.0, 1.0, 0).is_empty());
    }

    #[test]
    fn components_add_up() {
        let p = SystemParams::from_mixing(1.0, 0.5)
            .unwrap()
            .with_gamma(0.05)
            .with_gamma12(0.04)
            .with_omega(0.4);
        let s = rf_spectrum(&p, &linspace(-3.0, 3.0, 301)).unwrap();
        assert!(s.component_residual() < 1e-10 * s.max_total().max(1.0));
    }

    #[test]
    fn sequential_and_parallel_identical() {
        let p = SystemParams::from_mixing(1.0, 0.9)
            .unwrap()
            .with_gamma(0.02)
            .with_omega(0.2)
            .with_det_linewidth(0.01);
        let g = linspace(-2.0, 2.0, 201);
        let a = rf_spectrum_with(&p, &g, Exec::Sequential).unwrap();
        let b = rf_spectrum_with(&p, &g, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn two_level_mollow_sidebands() {
        // One emitter far detuned and undriven in effect: J = 0, large delta,
        // laser resonant with emitter 1 (Δ - δ = 0).
        let delta = 400.0;
        let om = 5.0;
        let p = SystemParams::from_coupling(0.0, delta)
            .unwrap()
            .with_gamma(1.0)
            .with_omega(om)
            .with_delta_laser(delta);
        let g = linspace(-20.0, 20.0, 8001);
        let s = rf_spectrum(&p, &g).unwrap();
        let peaks = find_peaks(&s.omegas, &s.s1, 1e-3, p.gamma);
        let positions: Vec<f64> = peaks.iter().map(|q| q.omega).collect();
        // Independent expectation: dressed splitting sqrt(Δ_eff² + 4Ω²) = 2Ω.
        let side = (4.0 * om * om).sqrt();
        for target in [-side, 0.0, side] {
            assert!(
                positions.iter().any(|x| (x - target).abs() < 0.2),
                "{target} not in {positions:?}"
            );
        }
        assert_relative_eq!(s.omegas[0], -20.0);
    }
}

//! Classical Fisher information of frequency-resolved photon counting for the
//! inter-emitter distance `k r12`.
//!
//! Each frequency bin is an independent sensor with Poissonian counts of mean
//! `η S(ω)`, so `F = Σ_ω η (∂S/∂kr12)² / S`.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::params::SystemParams;
use crate::spectrum::total_spectrum_with;

/// `mean^n e^{-mean} / n!`.
pub fn poisson_count_prob(mean: f64, n: u64) -> f64 {
    assert!(mean >= 0.0, "Poisson mean must be non-negative");
    if mean == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let nf = n as f64;
    (nf * mean.ln() - mean - ln_gamma(nf + 1.0)).exp()
}

/// What is held fixed while the distance is perturbed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetuningFrame {
    /// Laser detuning fixed in absolute units.
    #[default]
    Absolute,
    /// `Δ / R` fixed: the laser follows the splitting as `R(kr12)` changes.
    SplittingUnits,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FisherOptions {
    /// Finite-difference step relative to `kr12`.
    pub step_rel: f64,
    pub eta: f64,
    /// Points with `S < floor_rel * max(S)` are skipped.
    pub floor_rel: f64,
    pub frame: DetuningFrame,
    /// Largest accepted relative L2 gap between the central difference and
    /// its Richardson extrapolation.
    pub richardson_tol: f64,
}

impl Default for FisherOptions {
    fn default() -> Self {
        Self {
            step_rel: 1e-4,
            eta: 1.0,
            floor_rel: 1e-12,
            frame: DetuningFrame::Absolute,
            richardson_tol: 0.05,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl GridInfo {
    pub fn of(omegas: &[f64]) -> Self {
        Self {
            min: omegas.first().copied().unwrap_or(f64::NAN),
            max: omegas.last().copied().unwrap_or(f64::NAN),
            n: omegas.len(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FisherReport {
    pub fisher: f64,
    /// `1/F`; infinite when `F = 0`.
    pub crlb: f64,
    pub kr12: f64,
    pub delta_laser: f64,
    pub omega_drive: f64,
    pub grid: GridInfo,
    pub n_points_used: usize,
    pub n_points_excluded: usize,
    pub fd_step: f64,
    pub eta: f64,
}

/// Parameters at distance `kr12`, with the detuning adjusted per `frame`.
fn at_distance(p: &SystemParams, kr12: f64, frame: DetuningFrame) -> Result<SystemParams> {
    let q = p.with_distance(kr12)?;
    Ok(match frame {
        DetuningFrame::Absolute => q,
        DetuningFrame::SplittingUnits => q.with_delta_laser(p.delta_laser * q.big_r / p.big_r),
    })
}

/// Central difference of `model` at `x` with step `h`, checked against one
/// Richardson level built from step `2h`.
pub fn checked_derivative<F>(model: F, x: f64, h: f64, tol: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<Vec<f64>>,
{
    if !(h > 0.0) {
        return Err(Error::InvalidParams(format!("step {h} must be positive")));
    }
    let central = |step: f64| -> Result<Vec<f64>> {
        let up = model(x + step)?;
        let down = model(x - step)?;
        Ok(up.iter().zip(&down).map(|(a, b)| (a - b) / (2.0 * step)).collect())
    };
    let d1 = central(h)?;
    let d2 = central(2.0 * h)?;
    let extrapolated: Vec<f64> = d1.iter().zip(&d2).map(|(a, b)| (4.0 * a - b) / 3.0).collect();
    let norm = extrapolated.iter().map(|v| v * v).sum::<f64>().sqrt();
    let gap = d1
        .iter()
        .zip(&extrapolated)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    if norm > 0.0 && gap / norm > tol {
        return Err(Error::StepSize {
            disagreement: gap / norm,
            step: h,
        });
    }
    Ok(d1)
}

/// `∂S(ω)/∂kr12` by central differences, re-deriving `J`, `R` and `β` at
/// each perturbed distance.
pub fn spectrum_sensitivity(
    p: &SystemParams,
    kr12: f64,
    omegas: &[f64],
    step: f64,
) -> Result<Vec<f64>> {
    let opts = FisherOptions::default();
    sensitivity_with(p, kr12, omegas, step, &opts, Exec::default())
}

fn sensitivity_with(
    p: &SystemParams,
    kr12: f64,
    omegas: &[f64],
    step: f64,
    opts: &FisherOptions,
    exec: Exec,
) -> Result<Vec<f64>> {
    let base = at_distance(p, kr12, DetuningFrame::Absolute)?;
    let model = |x: f64| total_spectrum_with(&at_distance(&base, x, opts.frame)?, omegas, exec);
    checked_derivative(model, kr12, step, opts.richardson_tol)
}

/// `Σ η S'² / S` over points above the floor.
pub fn fisher_from_spectra(
    spectrum: &[f64],
    derivative: &[f64],
    eta: f64,
    floor_rel: f64,
) -> Result<(f64, usize)> {
    let max = spectrum.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let floor = floor_rel * max.max(0.0);
    let mut used = 0;
    let mut fisher = 0.0;
    for (&s, &d) in spectrum.iter().zip(derivative) {
        if s > floor && s > 0.0 {
            fisher += eta * d * d / s;
            used += 1;
        }
    }
    if used == 0 {
        return Err(Error::NoSignal { floor });
    }
    Ok((fisher, used))
}

/// Fisher information from any spectrum model `kr12 -> S(ω)`.
pub fn fisher_from_model<F>(
    model: F,
    kr12: f64,
    n_points: usize,
    opts: &FisherOptions,
) -> Result<(f64, usize, f64)>
where
    F: Fn(f64) -> Result<Vec<f64>>,
{
    let h = opts.step_rel * kr12;
    let s = model(kr12)?;
    assert_eq!(s.len(), n_points, "model returned a spectrum of the wrong length");
    let d = checked_derivative(&model, kr12, h, opts.richardson_tol)?;
    let (f, used) = fisher_from_spectra(&s, &d, opts.eta, opts.floor_rel)?;
    Ok((f, used, h))
}

pub fn fisher_information(p: &SystemParams, kr12: f64, omegas: &[f64]) -> Result<FisherReport> {
    fisher_information_with(p, kr12, omegas, &FisherOptions::default(), Exec::default())
}

pub fn fisher_information_with(
    p: &SystemParams,
    kr12: f64,
    omegas: &[f64],
    opts: &FisherOptions,
    exec: Exec,
) -> Result<FisherReport> {
    let base = at_distance(p, kr12, DetuningFrame::Absolute)?;
    if !(base.det_linewidth > 0.0) {
        return Err(Error::InvalidParams(
            "Fisher information needs a positive detector linewidth".into(),
        ));
    }
    let model = |x: f64| total_spectrum_with(&at_distance(&base, x, opts.frame)?, omegas, exec);
    let (fisher, used, h) = fisher_from_model(model, kr12, omegas.len(), opts)?;
    Ok(FisherReport {
        fisher,
        crlb: if fisher > 0.0 { 1.0 / fisher } else { f64::INFINITY },
        kr12,
        delta_laser: base.delta_laser,
        omega_drive: base.omega_drive,
        grid: GridInfo::of(omegas),
        n_points_used: used,
        n_points_excluded: omegas.len() - used,
        fd_step: h,
        eta: opts.eta,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapParameter {
    Omega,
    DeltaLaser,
    Kr12,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapAxis {
    pub parameter: MapParameter,
    pub values: Vec<f64>,
}

impl MapAxis {
    pub fn new(parameter: MapParameter, values: Vec<f64>) -> Self {
        Self { parameter, values }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FisherMap {
    pub axis1: MapAxis,
    pub axis2: MapAxis,
    /// Row-major: `reports[i * axis2.len() + j]`.
    pub reports: Vec<FisherReport>,
}

impl FisherMap {
    pub fn get(&self, i: usize, j: usize) -> &FisherReport {
        &self.reports[i * self.axis2.values.len() + j]
    }

    /// Indices and value of the largest `F`.
    pub fn argmax(&self) -> (usize, usize, f64) {
        let n2 = self.axis2.values.len();
        let (k, r) = self
            .reports
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.fisher.total_cmp(&b.1.fisher))
            .expect("empty map");
        (k / n2, k % n2, r.fisher)
    }
}

fn apply(p: SystemParams, kr: &mut f64, param: MapParameter, v: f64) -> SystemParams {
    match param {
        MapParameter::Omega => p.with_omega(v),
        MapParameter::DeltaLaser => p.with_delta_laser(v),
        MapParameter::Kr12 => {
            *kr = v;
            p
        }
    }
}

/// `F` on the product grid `axis1 × axis2`. Cells run through `exec`; each
/// cell evaluates its spectra sequentially.
pub fn fisher_map(
    template: &SystemParams,
    axis1: MapAxis,
    axis2: MapAxis,
    omegas: &[f64],
    opts: &FisherOptions,
    exec: Exec,
) -> Result<FisherMap> {
    let base_kr = template.kr12().ok_or_else(|| {
        Error::InvalidParams("fisher_map needs parameters built from a distance".into())
    })?;
    for axis in [&axis1, &axis2] {
        if axis.values.is_empty() || axis.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("map axes must be non-empty and finite".into()));
        }
    }
    if axis1.parameter == axis2.parameter {
        return Err(Error::InvalidParams("map axes must differ".into()));
    }
    let n2 = axis2.values.len();
    let inner = if exec.is_parallel() { Exec::Sequential } else { exec };
    let reports = exec.try_map(axis1.values.len() * n2, |k| {
        let mut kr = base_kr;
        let p = apply(*template, &mut kr, axis1.parameter, axis1.values[k / n2]);
        let p = apply(p, &mut kr, axis2.parameter, axis2.values[k % n2]);
        fisher_information_with(&p, kr, omegas, opts, inner)
    })?;
    Ok(FisherMap {
        axis1,
        axis2,
        reports,
    })
}

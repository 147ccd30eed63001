//! Reference figure datasets, each at its fixed parameter set.
//!
//! Every panel is a single table; 2-D panels are written in long format.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use dimer_fluorescence::estimation::{fisher_map, DetuningFrame, FisherOptions, MapAxis, MapParameter};
use dimer_fluorescence::lindblad::exact_steady_state;
use dimer_fluorescence::observables::{
    g2_effective, g2_zero, intensity_effective, intensity_exact, visibility, visibility_threshold,
};
use dimer_fluorescence::spectrum::{
    dressed_ladder, linspace, rf_spectrum_with, strong_driving_eigensystem, total_spectrum_with,
    LADDER_BASIS,
};
use dimer_fluorescence::{combined_steady, EmissionObservables, Exec, GeometryMode, SystemParams};

use crate::args::{geomspace, Figure};
use crate::commands::{fisher_grid, param_meta};
use crate::error::{CliError, CliResult};
use crate::table::{Cell, PlotKind, Table};

pub const GAMMA12_RATIO: f64 = 0.999;

pub fn panels(fig: Figure) -> &'static [&'static str] {
    match fig {
        Figure::Fig3 => &["a", "b", "c", "d", "e", "f"],
        Figure::Fig4 => &["a", "b"],
        Figure::Fig5 => &[
            "a", "b", "c", "a-omega", "b-omega", "c-omega", "a-ladder", "b-ladder", "c-ladder",
            "a-states", "b-states", "c-states",
        ],
        Figure::Fig6 => &["a", "b", "c", "d", "e", "f"],
        Figure::Fig7 => &["a", "a-left", "a-centre", "a-right", "b"],
    }
}

/// `gamma = 1`, `R = 1/gamma_over_r`, `gamma12 = 0.999 gamma`.
fn dimer(gamma_over_r: f64, beta: f64) -> CliResult<SystemParams> {
    Ok(SystemParams::from_mixing(1.0 / gamma_over_r, beta)?.with_gamma12(GAMMA12_RATIO))
}

fn three_betas(panel: char) -> f64 {
    match panel {
        'a' | 'd' => 0.0,
        'b' | 'e' => FRAC_PI_4,
        _ => FRAC_PI_2,
    }
}

pub fn reproduce(fig: Figure, panel: &str) -> CliResult<Table> {
    if !panels(fig).contains(&panel) {
        return Err(CliError::Config(format!(
            "{fig:?} has no panel `{panel}`; choose one of {}",
            panels(fig).join(", ")
        )));
    }
    let mut t = match fig {
        Figure::Fig3 => fig3(panel)?,
        Figure::Fig4 => fig4(panel)?,
        Figure::Fig5 => fig5(panel)?,
        Figure::Fig6 => fig6(panel)?,
        Figure::Fig7 => fig7(panel)?,
    };
    t.name = format!("{}{}", format!("{fig:?}").to_lowercase(), panel);
    Ok(t)
}

fn fig3(panel: &str) -> CliResult<Table> {
    let base = dimer(1e-3, FRAC_PI_4)?;
    let r = base.big_r;
    let row = |p: &SystemParams| -> CliResult<[f64; 4]> {
        let rho = exact_steady_state(p)?;
        let eff = combined_steady(p);
        let (i_eff, _, _) = intensity_effective(&eff, p.beta);
        let g2 = g2_zero(&rho).unwrap_or(f64::NAN);
        let g2e = g2_effective(&eff, p.beta).unwrap_or(f64::NAN);
        Ok([intensity_exact(&rho), i_eff, g2, g2e])
    };
    let base = base.with_omega(0.1 * r);
    match panel {
        "b" | "d" => {
            let betas = linspace(0.0, FRAC_PI_2, 31);
            let deltas = linspace(-1.5, 1.5, 121);
            let n = deltas.len();
            let rows = Exec::Parallel.try_map(betas.len() * n, |k| {
                let (b, d) = (betas[k / n], deltas[k % n]);
                let p = SystemParams::from_mixing(r, b)?
                    .with_gamma12(GAMMA12_RATIO)
                    .with_omega(0.1 * r)
                    .with_delta_laser(d * r);
                row(&p).map(|v| (b, d, v))
            })?;
            let mut t = Table::new("", &["beta", "delta_over_r", "I", "I_eff", "g2", "g2_eff"]);
            for (b, d, v) in rows {
                t.push(vec![b.into(), d.into(), v[0].into(), v[1].into(), v[2].into(), v[3].into()]);
            }
            param_meta(&mut t, &base, 1.0);
            let z = if panel == "b" { 2 } else { 4 };
            Ok(t.with_plot(PlotKind::Heatmap { x: 1, y: 0, z, log_z: true }))
        }
        _ => {
            let deltas = if matches!(panel, "a" | "c") {
                linspace(-1.5, 1.5, 601)
            } else {
                linspace(-0.05, 0.05, 201)
            };
            let rows = Exec::Parallel.try_map(deltas.len(), |k| row(&base.with_delta_laser(deltas[k] * r)))?;
            let mut t = Table::new("", &["delta_over_r", "I", "I_eff", "g2", "g2_eff"]);
            for (d, v) in deltas.iter().zip(rows) {
                t.push(vec![(*d).into(), v[0].into(), v[1].into(), v[2].into(), v[3].into()]);
            }
            param_meta(&mut t, &base, 1.0);
            let ys = if matches!(panel, "a" | "e") { vec![1, 2] } else { vec![3, 4] };
            Ok(t.with_plot(PlotKind::Lines { x: 0, ys, log_x: false, log_y: true }))
        }
    }
}

fn fig4(panel: &str) -> CliResult<Table> {
    let omegas = geomspace(1e-3, 1.0, if panel == "a" { 121 } else { 61 });
    if panel == "a" {
        let base = dimer(1e-2, FRAC_PI_4)?;
        let r = base.big_r;
        let rows = Exec::Parallel.try_map(omegas.len(), |k| {
            EmissionObservables::compute(&base.with_omega(omegas[k] * r))
        })?;
        let mut t = Table::new("", &["omega_over_r", "I", "I1", "I2", "I_eff", "V2p"]);
        for (o, v) in omegas.iter().zip(rows) {
            t.push(vec![
                (*o).into(),
                v.intensity.into(),
                v.i_first.into(),
                v.i_second.into(),
                v.intensity_effective.into(),
                v.visibility.into(),
            ]);
        }
        param_meta(&mut t, &base, 1.0);
        t.meta("omega_v_over_r", visibility_threshold(r, base.beta, base.gamma) / r);
        return Ok(t.with_plot(PlotKind::Lines { x: 0, ys: vec![1, 2, 3], log_x: true, log_y: true }));
    }
    let gammas = geomspace(1e-4, 1e-1, 31);
    let n = omegas.len();
    let rows = Exec::Parallel.try_map(gammas.len() * n, |k| {
        let (g, o) = (gammas[k / n], omegas[k % n]);
        let p = dimer(g, FRAC_PI_4)?.with_omega(o / g);
        let ov = visibility_threshold(p.big_r, p.beta, p.gamma) / p.big_r;
        Ok::<_, CliError>([g, o, visibility(&p), ov])
    })?;
    let mut t = Table::new("", &["gamma_over_r", "omega_over_r", "V2p", "omega_v_over_r"]);
    for v in rows {
        t.push(v.iter().map(|&x| Cell::Num(x)).collect());
    }
    t.meta("beta", FRAC_PI_4);
    t.meta("gamma12", GAMMA12_RATIO);
    Ok(t.with_plot(PlotKind::Heatmap { x: 1, y: 0, z: 2, log_z: true }))
}

/// Total spectrum for each parameter set, in long format against `omega/R`.
fn spectrum_family(
    label: &str,
    outer: &[f64],
    make: impl Fn(f64) -> CliResult<SystemParams> + Sync + Send,
    omega_over_r: &[f64],
) -> CliResult<Table> {
    let spectra = Exec::Parallel.try_map(outer.len(), |k| {
        let p = make(outer[k])?;
        let w: Vec<f64> = omega_over_r.iter().map(|x| x * p.big_r).collect();
        Ok::<_, CliError>(total_spectrum_with(&p, &w, Exec::Sequential)?)
    })?;
    let mut t = Table::new("", &[label, "omega_over_r", "total"]);
    for (v, s) in outer.iter().zip(spectra) {
        for (w, y) in omega_over_r.iter().zip(s) {
            t.push(vec![(*v).into(), (*w).into(), y.into()]);
        }
    }
    Ok(t.with_plot(PlotKind::Heatmap { x: 1, y: 0, z: 2, log_z: true }))
}

fn fig5(panel: &str) -> CliResult<Table> {
    let (letter, kind) = panel.split_once('-').unwrap_or((panel, ""));
    let beta = three_betas(letter.chars().next().unwrap_or('a'));
    match kind {
        "" => {
            let p = dimer(0.1, beta)?;
            let p = p.with_omega(p.big_r);
            let w = linspace(-5.0, 5.0, 10_001);
            let omegas: Vec<f64> = w.iter().map(|x| x * p.big_r).collect();
            let s = rf_spectrum_with(&p, &omegas, Exec::Parallel)?;
            let mut t = Table::new("", &["omega_over_r", "total", "s1", "s2", "s12", "s21"]);
            for k in 0..s.len() {
                t.push(vec![
                    w[k].into(),
                    s.total[k].into(),
                    s.s1[k].into(),
                    s.s2[k].into(),
                    s.s12[k].into(),
                    s.s21[k].into(),
                ]);
            }
            param_meta(&mut t, &p, 1.0);
            Ok(t.with_plot(PlotKind::Lines { x: 0, ys: vec![1, 2], log_x: false, log_y: true }))
        }
        "omega" => {
            let base = dimer(1e-3, beta)?;
            let r = base.big_r;
            let mut t = spectrum_family(
                "omega_drive_over_r",
                &geomspace(0.01, 1.0, 21),
                |o| Ok(base.with_omega(o * r)),
                &linspace(-5.0, 5.0, 10_001),
            )?;
            param_meta(&mut t, &base, 1.0);
            Ok(t)
        }
        "ladder" => {
            let base = dimer(1e-3, beta)?;
            let r = base.big_r;
            let om = linspace(0.0, 1.0, 101);
            let mut t = Table::new("", &["omega_over_r", "E1", "E2", "E3", "E4"]);
            for o in om {
                let e = strong_driving_eigensystem(&base.with_omega(o * r))?;
                let mut row: Vec<Cell> = vec![o.into()];
                row.extend(e.energies.iter().map(|x| Cell::Num(x / r)));
                t.push(row);
            }
            param_meta(&mut t, &base, 1.0);
            if let Ok(l) = dressed_ladder(&base.with_omega(0.05 * r)) {
                t.meta("omega_2ps_over_r", l.omega_2ps.value() / r);
            }
            Ok(t.with_plot(PlotKind::Lines { x: 0, ys: vec![1, 2, 3, 4], log_x: false, log_y: false }))
        }
        _ => {
            let base = dimer(1e-3, beta)?;
            let p = base.with_omega(base.big_r);
            let e = strong_driving_eigensystem(&p)?;
            let mut cols = vec!["level", "energy_over_r"];
            cols.extend(LADDER_BASIS);
            let mut t = Table::new("", &cols);
            for k in 0..4 {
                let mut row: Vec<Cell> = vec![(k + 1).into(), (e.energies[k] / p.big_r).into()];
                row.extend(e.states[k].iter().map(|&c| Cell::Num(c)));
                t.push(row);
            }
            param_meta(&mut t, &p, 1.0);
            Ok(t)
        }
    }
}

fn fig6(panel: &str) -> CliResult<Table> {
    let grid = linspace(-5.0, 5.0, 2001);
    let r = 100.0;
    let with = |beta: f64, delta_over_r: f64| -> CliResult<SystemParams> {
        Ok(dimer(1.0 / r, beta)?.with_omega(r).with_delta_laser(delta_over_r * r))
    };
    let mut t = match panel {
        "a" | "b" | "c" => {
            let d = match panel {
                "a" => -1.0,
                "b" => 0.0,
                _ => 1.0,
            };
            let mut t = spectrum_family("beta", &linspace(0.0, FRAC_PI_2, 46), |b| with(b, d), &grid)?;
            t.meta("delta_over_r", d);
            t
        }
        _ => {
            let b = three_betas(panel.chars().next().unwrap_or('d'));
            let mut t = spectrum_family("delta_over_r", &linspace(-2.0, 2.0, 81), |d| with(b, d), &grid)?;
            t.meta("beta", b);
            t
        }
    };
    t.meta("big_r", r);
    t.meta("omega", r);
    t.meta("gamma12", GAMMA12_RATIO);
    Ok(t)
}

/// Emitters at `kr12 = 0.17` with `delta = 50 gamma`, detector linewidth gamma.
pub fn fig7_dimer() -> CliResult<SystemParams> {
    Ok(SystemParams::from_distance(0.17, 50.0, GeometryMode::NearField)?
        .with_gamma12(GAMMA12_RATIO)
        .with_det_linewidth(1.0))
}

fn fig7(panel: &str) -> CliResult<Table> {
    let p = fig7_dimer()?;
    let r = p.big_r;
    let opts = FisherOptions { frame: DetuningFrame::SplittingUnits, ..Default::default() };
    let omegas = fisher_grid(&p);
    if panel == "b" {
        let krs = linspace(0.1, 0.3, 21);
        let drive = geomspace(0.3, 100.0, 30);
        let map = fisher_map(
            &p,
            MapAxis::new(MapParameter::Kr12, krs.clone()),
            MapAxis::new(MapParameter::Omega, drive.clone()),
            &omegas,
            &opts,
            Exec::Parallel,
        )?;
        let mut t = Table::new("", &["kr12", "omega", "F", "omega_2ps"]);
        for (i, kr) in krs.iter().enumerate() {
            let o2ps = dressed_ladder(&p.with_distance(*kr)?)?.omega_2ps.value();
            for (j, o) in drive.iter().enumerate() {
                t.push(vec![(*kr).into(), (*o).into(), map.get(i, j).fisher.into(), o2ps.into()]);
            }
        }
        param_meta(&mut t, &p, 1.0);
        return Ok(t.with_plot(PlotKind::Heatmap { x: 1, y: 0, z: 2, log_z: true }));
    }
    let deltas = match panel {
        "a" => linspace(-1.2, 1.2, 121),
        "a-left" => linspace(-1.02, -0.98, 17),
        "a-centre" => linspace(-0.02, 0.02, 17),
        _ => linspace(0.98, 1.02, 17),
    };
    let drive = geomspace(0.3, 100.0, 20);
    let map = fisher_map(
        &p,
        MapAxis::new(MapParameter::Omega, drive.clone()),
        MapAxis::new(MapParameter::DeltaLaser, deltas.iter().map(|d| d * r).collect()),
        &omegas,
        &opts,
        Exec::Parallel,
    )?;
    let mut t = Table::new("", &["omega", "delta_over_r", "F"]);
    for (i, o) in drive.iter().enumerate() {
        for (j, d) in deltas.iter().enumerate() {
            t.push(vec![(*o).into(), (*d).into(), map.get(i, j).fisher.into()]);
        }
    }
    param_meta(&mut t, &p, 1.0);
    t.meta("frame", "SplittingUnits");
    Ok(t.with_plot(PlotKind::Heatmap { x: 1, y: 0, z: 2, log_z: true }))
}

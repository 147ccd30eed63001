//! `steady`, `observables`, `spectrum`, `ladder` and `fisher`.

use dimer_fluorescence::estimation::{
    fisher_information_with, fisher_map, DetuningFrame, FisherOptions, FisherReport, MapAxis,
    MapParameter,
};
use dimer_fluorescence::lindblad::{build_liouvillian, exact_steady_state, to_collective_basis};
use dimer_fluorescence::spectrum::{
    detect_peaks, dressed_ladder, linspace, rf_spectrum_with, strong_driving_eigensystem,
    SaturationAmplitude, LADDER_BASIS,
};
use dimer_fluorescence::{EmissionObservables, Exec, SystemParams};
use log::info;

use crate::args::{Frame, GridSpec, Resolved, SweepParam, SweepSpec};
use crate::error::{CliError, CliResult};
use crate::table::{Cell, PlotKind, Table};

/// Largest auto-generated spectrum grid.
const MAX_AUTO_POINTS: usize = 400_001;
/// Spacing of the default Fisher grid, in units of gamma.
pub const FISHER_SPACING: f64 = 0.5;

pub fn param_meta(t: &mut Table, p: &SystemParams, gamma_unit: f64) {
    t.meta("unit_gamma", gamma_unit);
    t.meta("gamma12", p.gamma12);
    t.meta("j", p.j_coupling);
    t.meta("delta_emit", p.delta_emit);
    t.meta("big_r", p.big_r);
    t.meta("beta", p.beta);
    if let Some(kr) = p.kr12() {
        t.meta("kr12", kr);
    }
    t.meta("omega", p.omega_drive);
    t.meta("delta_laser", p.delta_laser);
    t.meta("det_linewidth", p.det_linewidth);
}

pub fn apply_sweep(p: &SystemParams, param: SweepParam, v: f64) -> CliResult<SystemParams> {
    Ok(match param {
        SweepParam::Delta => p.with_delta_laser(v),
        SweepParam::Omega => p.with_omega(v),
        SweepParam::Beta => {
            let r = p.big_r;
            p.with_coupling(r * v.cos(), r * v.sin())?
        }
        SweepParam::Kr12 => p.with_distance(v)?,
    })
}

pub fn steady(r: &Resolved) -> CliResult<Table> {
    let p = r.params;
    let rho = exact_steady_state(&p)?;
    let coll = to_collective_basis(&rho, p.beta);
    let mut t = Table::new("steady", &["basis", "row", "col", "re", "im"]);
    param_meta(&mut t, &p, r.gamma_unit);
    for (name, labels, m) in [
        ("bare", ["gg", "ge", "eg", "ee"], &rho),
        ("collective", ["gg", "A", "S", "ee"], &coll),
    ] {
        for i in 0..4 {
            for j in 0..4 {
                let z = m.get(i, j);
                t.push(vec![name.into(), labels[i].into(), labels[j].into(), z.re.into(), z.im.into()]);
            }
        }
    }
    Ok(t)
}

const OBSERVABLE_COLUMNS: [&str; 11] =
    ["delta", "omega", "beta", "I", "I_eff", "I1", "I2", "g2", "g2_eff", "V2p", "omega_v"];

pub fn observable_row(p: &SystemParams) -> CliResult<Vec<Cell>> {
    let o = EmissionObservables::compute(p)?;
    Ok(vec![
        p.delta_laser.into(),
        p.omega_drive.into(),
        p.beta.into(),
        o.intensity.into(),
        o.intensity_effective.into(),
        o.i_first.into(),
        o.i_second.into(),
        o.g2_zero.into(),
        o.g2_effective.into(),
        o.visibility.into(),
        o.omega_v.into(),
    ])
}

pub fn observables(r: &Resolved, sweep: Option<&SweepSpec>) -> CliResult<Table> {
    let p = r.params;
    let mut t = Table::new("observables", &OBSERVABLE_COLUMNS);
    param_meta(&mut t, &p, r.gamma_unit);
    match sweep {
        None => t.push(observable_row(&p)?),
        Some(s) => {
            let values = s.values(r.gamma_unit, p.big_r)?;
            let points: Vec<SystemParams> =
                values.iter().map(|&v| apply_sweep(&p, s.param, v)).collect::<CliResult<_>>()?;
            let rows = Exec::Parallel.try_map(points.len(), |k| observable_row(&points[k]))?;
            rows.into_iter().for_each(|row| t.push(row));
            t.meta("sweep", s.param.name());
            let x = t.column(s.param.name()).unwrap_or(0);
            let ys = vec![t.column("I").unwrap(), t.column("I_eff").unwrap()];
            t = t.with_plot(PlotKind::Lines { x, ys, log_x: s.log, log_y: true });
        }
    }
    Ok(t)
}

/// Wide enough for every transition of the driven system, fine enough to
/// resolve lines of width `gamma + Gamma`.
pub fn auto_grid(p: &SystemParams) -> CliResult<Vec<f64>> {
    let wmax = build_liouvillian(p)
        .eigenvalues()?
        .iter()
        .map(|z| z.im.abs())
        .fold(0.0, f64::max);
    let width = p.gamma + p.det_linewidth;
    let half = (2.5 * p.big_r).max(1.2 * wmax + 10.0 * width);
    let n = ((2.0 * half / (0.1 * width)).ceil() as usize + 1).min(MAX_AUTO_POINTS);
    Ok(linspace(-half, half, n | 1))
}

pub fn spectrum_grid(r: &Resolved, grid: Option<&str>) -> CliResult<Vec<f64>> {
    match grid {
        Some(g) => GridSpec::parse(g)?.resolve(r.gamma_unit, r.params.big_r),
        None => auto_grid(&r.params),
    }
}

pub fn spectrum(r: &Resolved, grid: Option<&str>, peaks: bool, prominence: f64) -> CliResult<Table> {
    let p = r.params;
    let omegas = spectrum_grid(r, grid)?;
    let s = rf_spectrum_with(&p, &omegas, Exec::Parallel)?;
    let found = detect_peaks(&s, prominence);
    info!("{} peaks above relative prominence {prominence}", found.len());
    let mut t = if peaks {
        let mut t = Table::new("peaks", &["omega", "height", "prominence"]);
        for q in &found {
            t.push(vec![q.omega.into(), q.height.into(), q.prominence.into()]);
        }
        t
    } else {
        let mut t = Table::new("spectrum", &["omega", "total", "s1", "s2", "s12", "s21"]);
        for k in 0..s.len() {
            t.push(vec![
                s.omegas[k].into(),
                s.total[k].into(),
                s.s1[k].into(),
                s.s2[k].into(),
                s.s12[k].into(),
                s.s21[k].into(),
            ]);
        }
        t.with_plot(PlotKind::Lines { x: 0, ys: vec![1, 2], log_x: false, log_y: true })
    };
    param_meta(&mut t, &p, r.gamma_unit);
    t.meta("grid", format!("{}:{}:{}", omegas[0], omegas[omegas.len() - 1], omegas.len()));
    t.meta("prominence", prominence);
    t.meta("n_peaks", found.len());
    Ok(t)
}

fn saturation(a: &SaturationAmplitude) -> String {
    match a {
        SaturationAmplitude::Finite { value } => value.to_string(),
        SaturationAmplitude::Unbounded { .. } => "unbounded".into(),
    }
}

pub fn ladder(r: &Resolved, exact: bool) -> CliResult<Table> {
    let p = r.params;
    let mut t = if exact {
        let e = strong_driving_eigensystem(&p)?;
        let mut cols = vec!["level", "energy", "energy_over_r"];
        cols.extend(LADDER_BASIS);
        let mut t = Table::new("eigensystem", &cols);
        for k in 0..4 {
            let mut row: Vec<Cell> = vec![(k + 1).into(), e.energies[k].into(), (e.energies[k] / p.big_r).into()];
            row.extend(e.states[k].iter().map(|&c| Cell::Num(c)));
            t.push(row);
        }
        if let Some(dev) = e.closed_form_deviation(&p) {
            t.meta("closed_form_deviation", dev);
        }
        t
    } else {
        let l = dressed_ladder(&p)?;
        let mut t = Table::new("ladder", &["label", "from", "to", "omega", "omega_over_r"]);
        for tr in &l.transitions {
            t.push(vec![
                tr.label.as_str().into(),
                tr.from.into(),
                tr.to.into(),
                tr.omega.into(),
                (tr.omega / p.big_r).into(),
            ]);
        }
        t.meta(
            "energies",
            l.energies.iter().map(f64::to_string).collect::<Vec<_>>().join(" "),
        );
        t.meta("omega_2ps", saturation(&l.omega_2ps));
        t
    };
    t.meta("basis", LADDER_BASIS.join(" "));
    param_meta(&mut t, &p, r.gamma_unit);
    Ok(t)
}

pub struct FisherArgs<'a> {
    pub grid: Option<&'a str>,
    pub sweep: Option<SweepSpec>,
    pub sweep2: Option<SweepSpec>,
    pub frame: Frame,
    pub eta: f64,
    pub step_rel: f64,
}

pub fn fisher_grid(p: &SystemParams) -> Vec<f64> {
    let half = 2.5 * p.big_r;
    let n = (2.0 * half / FISHER_SPACING).round() as usize + 1;
    linspace(-half, half, n)
}

fn map_parameter(s: SweepParam) -> CliResult<MapParameter> {
    match s {
        SweepParam::Delta => Ok(MapParameter::DeltaLaser),
        SweepParam::Omega => Ok(MapParameter::Omega),
        SweepParam::Kr12 => Ok(MapParameter::Kr12),
        SweepParam::Beta => Err(CliError::Config("fisher cannot sweep beta; sweep kr12".into())),
    }
}

fn fisher_cells(rep: &FisherReport) -> [Cell; 4] {
    [rep.fisher.into(), rep.crlb.into(), rep.n_points_used.into(), rep.fd_step.into()]
}

pub fn fisher(r: &Resolved, a: &FisherArgs) -> CliResult<Table> {
    let mut p = r.params;
    let kr = p
        .kr12()
        .ok_or_else(|| CliError::Config("fisher needs the distance triple (--kr12)".into()))?;
    if p.det_linewidth == 0.0 {
        info!("no detector linewidth given; using Gamma = gamma");
        p = p.with_det_linewidth(1.0);
    }
    let omegas = match a.grid {
        Some(g) => GridSpec::parse(g)?.resolve(r.gamma_unit, p.big_r)?,
        None => fisher_grid(&p),
    };
    let opts = FisherOptions {
        step_rel: a.step_rel,
        eta: a.eta,
        frame: match a.frame {
            Frame::Absolute => DetuningFrame::Absolute,
            Frame::Splitting => DetuningFrame::SplittingUnits,
        },
        ..Default::default()
    };
    let tail = ["F", "crlb", "n_used", "fd_step"];
    let mut t = match (&a.sweep, &a.sweep2) {
        (None, _) => {
            let rep = fisher_information_with(&p, kr, &omegas, &opts, Exec::Parallel)?;
            let mut t = Table::new("fisher", &[&["kr12", "delta", "omega"][..], &tail].concat());
            let mut row: Vec<Cell> = vec![kr.into(), p.delta_laser.into(), p.omega_drive.into()];
            row.extend(fisher_cells(&rep));
            t.push(row);
            t
        }
        (Some(s), None) => {
            let values = s.values(r.gamma_unit, p.big_r)?;
            let reports = Exec::Parallel.try_map(values.len(), |k| {
                let q = apply_sweep(&p, s.param, values[k])?;
                let kr = q.kr12().unwrap_or(kr);
                Ok::<_, CliError>(fisher_information_with(&q, kr, &omegas, &opts, Exec::Sequential)?)
            })?;
            let mut t = Table::new("fisher", &[&[s.param.name()][..], &tail].concat());
            for (v, rep) in values.iter().zip(&reports) {
                let mut row: Vec<Cell> = vec![(*v).into()];
                row.extend(fisher_cells(rep));
                t.push(row);
            }
            t.meta("sweep", s.param.name());
            t.with_plot(PlotKind::Lines { x: 0, ys: vec![1], log_x: s.log, log_y: true })
        }
        (Some(s1), Some(s2)) => {
            let ax1 = MapAxis::new(map_parameter(s1.param)?, s1.values(r.gamma_unit, p.big_r)?);
            let ax2 = MapAxis::new(map_parameter(s2.param)?, s2.values(r.gamma_unit, p.big_r)?);
            let map = fisher_map(&p, ax1, ax2, &omegas, &opts, Exec::Parallel)?;
            let mut t = Table::new("fisher_map", &[&[s1.param.name(), s2.param.name()][..], &tail].concat());
            for (i, v1) in map.axis1.values.iter().enumerate() {
                for (j, v2) in map.axis2.values.iter().enumerate() {
                    let mut row: Vec<Cell> = vec![(*v1).into(), (*v2).into()];
                    row.extend(fisher_cells(map.get(i, j)));
                    t.push(row);
                }
            }
            let (i, j, f) = map.argmax();
            t.meta("argmax", format!("{}={} {}={} F={f}", s1.param.name(), map.axis1.values[i], s2.param.name(), map.axis2.values[j]));
            t.with_plot(PlotKind::Heatmap { x: 0, y: 1, z: 2, log_z: true })
        }
    };
    param_meta(&mut t, &p, r.gamma_unit);
    t.meta("frame", format!("{:?}", opts.frame));
    t.meta("grid", format!("{}:{}:{}", omegas[0], omegas[omegas.len() - 1], omegas.len()));
    Ok(t)
}

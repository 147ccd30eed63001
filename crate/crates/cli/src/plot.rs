//! Static SVG rendering of result tables.

use std::path::Path;

use plotters::prelude::*;

use crate::error::{CliError, CliResult};
use crate::table::{PlotKind, Table};

const SIZE: (u32, u32) = (900, 600);
const PALETTE: [RGBColor; 6] = [
    RGBColor(31, 119, 180),
    RGBColor(214, 39, 40),
    RGBColor(44, 160, 44),
    RGBColor(148, 103, 189),
    RGBColor(255, 127, 14),
    RGBColor(23, 190, 207),
];

fn plot_err(e: impl std::fmt::Display) -> CliError {
    CliError::Io(std::io::Error::other(format!("plot: {e}")))
}

fn column(t: &Table, k: usize) -> Vec<f64> {
    t.rows.iter().map(|r| r[k].as_f64().unwrap_or(f64::NAN)).collect()
}

fn bounds(v: impl Iterator<Item = f64>, log: bool) -> Option<(f64, f64)> {
    let (lo, hi) = v
        .filter(|x| x.is_finite() && (!log || *x > 0.0))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if !(lo <= hi) {
        return None;
    }
    if lo == hi {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        return Some(if log { (lo / 2.0, hi * 2.0) } else { (lo - pad, hi + pad) });
    }
    Some((lo, hi))
}

/// Writes `path` when the table has a plot layout; returns whether it did.
pub fn render(table: &Table, path: &Path) -> CliResult<bool> {
    match &table.plot {
        PlotKind::None => Ok(false),
        PlotKind::Lines { x, ys, log_x, log_y } => {
            lines(table, path, *x, ys, *log_x, *log_y)?;
            Ok(true)
        }
        PlotKind::Heatmap { x, y, z, log_z } => {
            heatmap(table, path, *x, *y, *z, *log_z)?;
            Ok(true)
        }
    }
}

fn lines(t: &Table, path: &Path, x: usize, ys: &[usize], log_x: bool, log_y: bool) -> CliResult<()> {
    let xs = column(t, x);
    let series: Vec<Vec<f64>> = ys.iter().map(|&k| column(t, k)).collect();
    let xr = bounds(xs.iter().copied(), log_x).ok_or_else(|| plot_err("no finite x values"))?;
    let yr = bounds(series.iter().flatten().copied(), log_y)
        .ok_or_else(|| plot_err("no finite y values"))?;
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;

    macro_rules! draw {
        ($chart:expr) => {{
            let mut chart = $chart;
            chart
                .configure_mesh()
                .x_desc(t.columns[x].as_str())
                .draw()
                .map_err(plot_err)?;
            for (i, (k, s)) in ys.iter().zip(&series).enumerate() {
                let color = PALETTE[i % PALETTE.len()];
                let pts = xs
                    .iter()
                    .zip(s)
                    .filter(|(a, b)| a.is_finite() && b.is_finite() && (!log_y || **b > 0.0))
                    .map(|(a, b)| (*a, *b));
                chart
                    .draw_series(LineSeries::new(pts, &color))
                    .map_err(plot_err)?
                    .label(t.columns[*k].as_str())
                    .legend(move |(px, py)| PathElement::new(vec![(px, py), (px + 20, py)], color));
            }
            chart
                .configure_series_labels()
                .background_style(WHITE.mix(0.8))
                .border_style(BLACK)
                .draw()
                .map_err(plot_err)?;
        }};
    }

    let mut builder = ChartBuilder::on(&root);
    builder.caption(t.name.as_str(), ("sans-serif", 20)).margin(15).x_label_area_size(40).y_label_area_size(70);
    match (log_x, log_y) {
        (false, false) => draw!(builder.build_cartesian_2d(xr.0..xr.1, yr.0..yr.1).map_err(plot_err)?),
        (true, false) => draw!(builder.build_cartesian_2d((xr.0..xr.1).log_scale(), yr.0..yr.1).map_err(plot_err)?),
        (false, true) => draw!(builder.build_cartesian_2d(xr.0..xr.1, (yr.0..yr.1).log_scale()).map_err(plot_err)?),
        (true, true) => draw!(builder
            .build_cartesian_2d((xr.0..xr.1).log_scale(), (yr.0..yr.1).log_scale())
            .map_err(plot_err)?),
    }
    root.present().map_err(plot_err)?;
    Ok(())
}

/// Blue-to-yellow ramp on `u` in `[0, 1]`.
fn ramp(u: f64) -> RGBColor {
    let u = u.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + (b - a) * u).round() as u8;
    RGBColor(lerp(68.0, 253.0), lerp(1.0, 231.0), lerp(84.0, 37.0))
}

fn distinct_sorted(v: &[f64]) -> Vec<f64> {
    let mut u: Vec<f64> = v.iter().copied().filter(|x| x.is_finite()).collect();
    u.sort_by(f64::total_cmp);
    u.dedup();
    u
}

/// Cell edges halfway between neighbouring axis values.
fn edges(centres: &[f64]) -> Vec<f64> {
    let n = centres.len();
    if n == 1 {
        return vec![centres[0] - 0.5, centres[0] + 0.5];
    }
    let mut e = Vec::with_capacity(n + 1);
    e.push(centres[0] - 0.5 * (centres[1] - centres[0]));
    for w in centres.windows(2) {
        e.push(0.5 * (w[0] + w[1]));
    }
    e.push(centres[n - 1] + 0.5 * (centres[n - 1] - centres[n - 2]));
    e
}

fn heatmap(t: &Table, path: &Path, x: usize, y: usize, z: usize, log_z: bool) -> CliResult<()> {
    let (xs, ys, zs) = (column(t, x), column(t, y), column(t, z));
    let (ux, uy) = (distinct_sorted(&xs), distinct_sorted(&ys));
    if ux.is_empty() || uy.is_empty() {
        return Err(plot_err("empty map"));
    }
    let (ex, ey) = (edges(&ux), edges(&uy));
    let tf = |v: f64| if log_z { v.log10() } else { v };
    let zr = bounds(zs.iter().map(|&v| tf(v)), false).ok_or_else(|| plot_err("no finite values"))?;
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let caption = format!("{} ({}{})", t.name, if log_z { "log10 " } else { "" }, t.columns[z]);
    let mut chart = ChartBuilder::on(&root)
        .caption(caption, ("sans-serif", 20))
        .margin(15)
        .x_label_area_size(40)
        .y_label_area_size(70)
        .build_cartesian_2d(ex[0]..ex[ex.len() - 1], ey[0]..ey[ey.len() - 1])
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .disable_mesh()
        .x_desc(t.columns[x].as_str())
        .y_desc(t.columns[y].as_str())
        .draw()
        .map_err(plot_err)?;
    let locate = |axis: &[f64], v: f64| axis.binary_search_by(|a| a.total_cmp(&v)).ok();
    let cells = xs.iter().zip(&ys).zip(&zs).filter_map(|((&a, &b), &v)| {
        let (i, j) = (locate(&ux, a)?, locate(&uy, b)?);
        let w = tf(v);
        let color = if w.is_finite() { ramp((w - zr.0) / (zr.1 - zr.0)) } else { RGBColor(200, 200, 200) };
        Some(Rectangle::new([(ex[i], ey[j]), (ex[i + 1], ey[j + 1])], color.filled()))
    });
    chart.draw_series(cells).map_err(plot_err)?;
    root.present().map_err(plot_err)?;
    Ok(())
}

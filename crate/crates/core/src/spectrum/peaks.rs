//! Local-maximum detection with topographic prominence and parabolic
//! sub-grid refinement.

use log::warn;
use serde::{Deserialize, Serialize};

use super::SpectralSeries;

/// Default relative prominence threshold (fraction of the global maximum).
pub const DEFAULT_PROMINENCE: f64 = 1e-3;
/// Grids coarser than this many points per `gamma` trigger a warning.
pub const MIN_POINTS_PER_GAMMA: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    /// Refined position.
    pub omega: f64,
    /// Refined height.
    pub height: f64,
    /// Absolute prominence.
    pub prominence: f64,
    /// Grid index of the sampled maximum.
    pub index: usize,
}

/// Peaks of the total spectrum.
pub fn detect_peaks(series: &SpectralSeries, prominence: f64) -> Vec<Peak> {
    find_peaks(&series.omegas, &series.total, prominence, series.gamma)
}

/// Local maxima of `values` whose prominence is at least `prominence` times
/// the global maximum.
///
/// Prominence is the height above the higher of the two lowest points
/// reachable on either side before meeting a strictly higher sample (or the
/// grid edge). Flat tops count once, at their midpoint.
pub fn find_peaks(omegas: &[f64], values: &[f64], prominence: f64, gamma: f64) -> Vec<Peak> {
    assert_eq!(omegas.len(), values.len());
    let n = values.len();
    if n < 3 {
        return Vec::new();
    }
    check_resolution(omegas, gamma);

    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(max > min) {
        return Vec::new();
    }
    let threshold = prominence * max.abs();

    let mut peaks = Vec::new();
    let mut i = 1;
    while i < n - 1 {
        if values[i] > values[i - 1] {
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && values[j + 1] < values[i] {
                let top = values[i];
                // cheap rejection: prominence can never exceed top - min
                if top - min >= threshold {
                    let prom = prominence_of(values, i, j);
                    if prom >= threshold {
                        let mid = (i + j) / 2;
                        let (omega, height) = refine(omegas, values, mid);
                        peaks.push(Peak {
                            omega,
                            height,
                            prominence: prom,
                            index: mid,
                        });
                    }
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks
}

fn prominence_of(values: &[f64], left: usize, right: usize) -> f64 {
    let top = values[left];
    let mut left_min = top;
    let mut k = left;
    while k > 0 {
        k -= 1;
        if values[k] > top {
            break;
        }
        left_min = left_min.min(values[k]);
    }
    let mut right_min = top;
    let mut k = right;
    while k + 1 < values.len() {
        k += 1;
        if values[k] > top {
            break;
        }
        right_min = right_min.min(values[k]);
    }
    top - left_min.max(right_min)
}

/// Vertex of the parabola through the sample at `i` and its neighbours.
fn refine(x: &[f64], y: &[f64], i: usize) -> (f64, f64) {
    if i == 0 || i + 1 >= x.len() {
        return (x[i], y[i]);
    }
    let (x0, x1, x2) = (x[i - 1], x[i], x[i + 1]);
    let (y0, y1, y2) = (y[i - 1], y[i], y[i + 1]);
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let a = (d12 - d01) / (x2 - x0);
    if !(a < 0.0) {
        return (x1, y1);
    }
    let b = d01 - a * (x0 + x1);
    let xv = (-b / (2.0 * a)).clamp(x0, x2);
    let yv = y1 + (xv - x1) * (d01 + a * (xv - x0));
    (xv, yv)
}

fn check_resolution(omegas: &[f64], gamma: f64) {
    if omegas.len() < 2 || !(gamma > 0.0) {
        return;
    }
    let spacing = omegas
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max);
    if spacing * MIN_POINTS_PER_GAMMA > gamma {
        warn!(
            "grid spacing {spacing:e} gives fewer than {MIN_POINTS_PER_GAMMA} points per gamma = {gamma:e}; narrow peaks may be missed"
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::linspace;
    use approx::assert_relative_eq;

    fn lorentzian(x: f64, x0: f64, w: f64) -> f64 {
        w * w / ((x - x0).powi(2) + w * w)
    }

    #[test]
    fn single_lorentzian_is_located_sub_grid() {
        let x = linspace(-5.0, 5.0, 1001);
        let h = x[1] - x[0];
        let x0 = 0.3337;
        let y: Vec<f64> = x.iter().map(|&v| lorentzian(v, x0, 0.2)).collect();
        let p = find_peaks(&x, &y, DEFAULT_PROMINENCE, 0.2);
        assert_eq!(p.len(), 1);
        assert!((p[0].omega - x0).abs() < h / 10.0, "{}", p[0].omega);
        assert_relative_eq!(p[0].height, 1.0, max_relative = 1e-3);
    }

    #[test]
    fn flat_series_has_no_peaks() {
        let x = linspace(0.0, 1.0, 50);
        assert!(find_peaks(&x, &vec![0.7; 50], DEFAULT_PROMINENCE, 1.0).is_empty());
    }

    #[test]
    fn prominence_filters_ripples() {
        let x = linspace(-10.0, 10.0, 4001);
        let y: Vec<f64> = x
            .iter()
            .map(|&v| lorentzian(v, -3.0, 0.3) + lorentzian(v, 3.0, 0.3) + 1e-4 * (20.0 * v).sin())
            .collect();
        let p = find_peaks(&x, &y, 1e-3, 0.3);
        assert_eq!(p.len(), 2, "{p:?}");
        let p = find_peaks(&x, &y, 1e-7, 0.3);
        assert!(p.len() > 2);
    }

    #[test]
    fn shoulder_prominence_uses_higher_saddle() {
        // small peak on the flank of a big one
        let x = linspace(-5.0, 5.0, 2001);
        let y: Vec<f64> = x
            .iter()
            .map(|&v| lorentzian(v, 0.0, 1.0) + 0.05 * lorentzian(v, 2.0, 0.05))
            .collect();
        let p = find_peaks(&x, &y, 1e-3, 0.05);
        assert_eq!(p.len(), 2);
        let small = p.iter().find(|q| q.omega > 1.0).unwrap();
        assert!(small.prominence < 0.05 && small.prominence > 0.01, "{}", small.prominence);
    }

    #[test]
    fn plateau_counts_once() {
        let x: Vec<f64> = (0..7).map(|i| i as f64).collect();
        let y = vec![0.0, 1.0, 2.0, 2.0, 2.0, 1.0, 0.0];
        let p = find_peaks(&x, &y, 1e-3, 1.0);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].index, 3);
    }
}

//! Dressed-state energies at the two-photon resonance.
//!
//! The working basis is `{|S>, |A2>, |S2>, |A>}` with
//! `|S2>, |A2> = (|gg> ± |ee>)/√2`, ordered by decreasing perturbative energy.

use log::warn;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::effective::STRONG_DRIVE_RATIO;
use crate::error::{Error, Result};
use crate::lindblad::{bare, build_hamiltonian, collective, collective_transform, DIM};
use crate::params::SystemParams;

pub const LADDER_BASIS: [&str; 4] = ["S", "A2", "S2", "A"];

/// `cos β` below this makes the two-photon saturation amplitude unbounded.
const COS_BETA_ZERO: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderTransition {
    pub label: String,
    /// 1-based level indices; the frequency is `E_from - E_to`.
    pub from: usize,
    pub to: usize,
    pub omega: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum SaturationAmplitude {
    Finite { value: f64 },
    Unbounded { reason: String },
}

impl SaturationAmplitude {
    pub fn value(&self) -> f64 {
        match self {
            SaturationAmplitude::Finite { value } => *value,
            SaturationAmplitude::Unbounded { .. } => f64::INFINITY,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DressedLadder {
    /// `E1 >= E2 >= E3 >= E4`.
    pub energies: [f64; 4],
    /// Level `i` in the ladder basis; perturbatively these are the basis
    /// vectors themselves.
    pub states: [[f64; 4]; 4],
    /// `ω0` (elastic) through `ω6`.
    pub transitions: Vec<LadderTransition>,
    pub omega_2ps: SaturationAmplitude,
}

impl DressedLadder {
    /// `E_i - E_j` for 1-based levels.
    pub fn frequency(&self, from: usize, to: usize) -> f64 {
        self.energies[from - 1] - self.energies[to - 1]
    }

    pub fn transition(&self, label: &str) -> Option<&LadderTransition> {
        self.transitions.iter().find(|t| t.label == label)
    }

    /// Positive transition frequencies `ω1..ω6`.
    pub fn sidebands(&self) -> Vec<f64> {
        self.transitions.iter().skip(1).map(|t| t.omega).collect()
    }
}

fn require_resonance(p: &SystemParams) -> Result<()> {
    if p.delta_laser != 0.0 {
        return Err(Error::InvalidParams(format!(
            "dressed states are defined at Delta = 0 (got {})",
            p.delta_laser
        )));
    }
    Ok(())
}

/// Perturbative ladder for `Ω ≪ R`.
pub fn dressed_ladder(p: &SystemParams) -> Result<DressedLadder> {
    require_resonance(p)?;
    let r = p.big_r;
    if r <= 0.0 {
        return Err(Error::DegenerateGeometry);
    }
    if p.omega_drive.abs() / r > STRONG_DRIVE_RATIO {
        warn!(
            "perturbative ladder evaluated at Omega/R = {:.3}",
            p.omega_drive.abs() / r
        );
    }
    let om2 = p.omega_drive * p.omega_drive;
    let co = p.beta.cos();
    let energies = [
        r + 2.0 * (1.0 + co) * om2 / r,
        0.0,
        -4.0 * om2 * co / r,
        -r - 2.0 * (1.0 - co) * om2 / r,
    ];
    let pairs = [(1, 1), (1, 4), (1, 3), (1, 2), (2, 4), (3, 4), (2, 3)];
    let transitions = pairs
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| LadderTransition {
            label: format!("w{k}"),
            from: i,
            to: j,
            omega: energies[i - 1] - energies[j - 1],
        })
        .collect();
    let omega_2ps = if co.abs() < COS_BETA_ZERO {
        SaturationAmplitude::Unbounded {
            reason: "cos(beta) = 0: no two-photon coupling, so two-photon sidebands never resolve"
                .into(),
        }
    } else {
        SaturationAmplitude::Finite {
            value: 0.5 * (r * p.gamma / co).sqrt(),
        }
    };
    let mut states = [[0.0; 4]; 4];
    for (i, row) in states.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    Ok(DressedLadder {
        energies,
        states,
        transitions,
        omega_2ps,
    })
}

/// Rows are the bare components of `|S>, |A2>, |S2>, |A>`.
fn ladder_transform(beta: f64) -> DMatrix<f64> {
    let u = collective_transform(beta);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut w = DMatrix::zeros(DIM, DIM);
    for k in 0..DIM {
        w[(0, k)] = u[(collective::S, k)].re;
        w[(3, k)] = u[(collective::A, k)].re;
    }
    w[(1, bare::GG)] = h;
    w[(1, bare::EE)] = -h;
    w[(2, bare::GG)] = h;
    w[(2, bare::EE)] = h;
    w
}

/// Exact eigenstates of the driven Hamiltonian in the ladder basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrongDrivingEigensystem {
    /// Decreasing.
    pub energies: [f64; 4],
    /// `states[i]` holds the ladder-basis amplitudes of `|U_{i+1}>`, with the
    /// largest-magnitude amplitude made positive.
    pub states: [[f64; 4]; 4],
    /// Hamiltonian in the ladder basis.
    pub hamiltonian: [[f64; 4]; 4],
}

impl StrongDrivingEigensystem {
    /// Largest deviation from the printed closed forms, when one exists for
    /// this `β` (0 or π/2). Energies are compared relative to
    /// `max(1, |E|)`; states through projectors onto each degenerate group.
    pub fn closed_form_deviation(&self, p: &SystemParams) -> Option<f64> {
        let reference = if p.beta == 0.0 {
            closed_form_beta0(p.big_r, p.omega_drive)?
        } else if (p.beta - std::f64::consts::FRAC_PI_2).abs() < 1e-15 {
            closed_form_beta_half_pi(p.big_r, p.omega_drive)?
        } else {
            return None;
        };
        Some(compare(self, &reference))
    }
}

fn fix_sign(v: &mut [f64; 4]) {
    let big = v
        .iter()
        .cloned()
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap_or(0.0);
    if big < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn normalized(mut v: [f64; 4]) -> [f64; 4] {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= n);
    fix_sign(&mut v);
    v
}

pub fn strong_driving_eigensystem(p: &SystemParams) -> Result<StrongDrivingEigensystem> {
    require_resonance(p)?;
    let h_bare = build_hamiltonian(p).map(|z| z.re);
    let w = ladder_transform(p.beta);
    let h = &w * h_bare * w.transpose();
    let h = (&h + h.transpose()) * 0.5;
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..DIM).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut energies = [0.0; 4];
    let mut states = [[0.0; 4]; 4];
    for (slot, &k) in order.iter().enumerate() {
        energies[slot] = eig.eigenvalues[k];
        let mut v = [0.0; 4];
        for (i, x) in v.iter_mut().enumerate() {
            *x = eig.eigenvectors[(i, k)];
        }
        states[slot] = normalized(v);
    }
    let mut hamiltonian = [[0.0; 4]; 4];
    for (i, row) in hamiltonian.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = h[(i, j)];
        }
    }
    Ok(StrongDrivingEigensystem {
        energies,
        states,
        hamiltonian,
    })
}

fn sorted(mut levels: Vec<(f64, [f64; 4])>) -> StrongDrivingEigensystem {
    levels.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut energies = [0.0; 4];
    let mut states = [[0.0; 4]; 4];
    for (k, (e, v)) in levels.into_iter().enumerate() {
        energies[k] = e;
        states[k] = normalized(v);
    }
    StrongDrivingEigensystem {
        energies,
        states,
        hamiltonian: [[0.0; 4]; 4],
    }
}

/// Identical emitters: only `|S>` and `|S2>` hybridize. `None` at `Ω = 0`.
pub fn closed_form_beta0(big_r: f64, omega: f64) -> Option<StrongDrivingEigensystem> {
    if omega == 0.0 {
        return None;
    }
    let root = (big_r * big_r + 16.0 * omega * omega).sqrt();
    Some(sorted(vec![
        (0.5 * (big_r + root), [(big_r + root) / (4.0 * omega), 0.0, 1.0, 0.0]),
        (0.0, [0.0, 1.0, 0.0, 0.0]),
        (-big_r, [0.0, 0.0, 0.0, 1.0]),
        (0.5 * (big_r - root), [(big_r - root) / (4.0 * omega), 0.0, 1.0, 0.0]),
    ]))
}

/// Uncoupled, detuned emitters. `None` at `Ω = 0`.
pub fn closed_form_beta_half_pi(big_r: f64, omega: f64) -> Option<StrongDrivingEigensystem> {
    if omega == 0.0 {
        return None;
    }
    let root = (big_r * big_r + 4.0 * omega * omega).sqrt();
    let s2 = std::f64::consts::SQRT_2;
    let cp = (big_r + root) / (2.0 * s2 * omega);
    let cm = (big_r - root) / (2.0 * s2 * omega);
    let x = s2 * omega / big_r;
    Some(sorted(vec![
        (root, [cp, 0.0, 1.0, 0.5 / cp]),
        (0.0, [0.0, 1.0, 0.0, 0.0]),
        (0.0, [-x, 0.0, 1.0, x]),
        (-root, [cm, 0.0, 1.0, 0.5 / cm]),
    ]))
}

fn projector(states: &[[f64; 4]], idx: &[usize]) -> [[f64; 4]; 4] {
    // Gram-Schmidt first: closed-form degenerate vectors need not be orthogonal.
    let mut basis: Vec<[f64; 4]> = Vec::new();
    for &k in idx {
        let mut v = states[k];
        for b in &basis {
            let d: f64 = (0..4).map(|i| v[i] * b[i]).sum();
            (0..4).for_each(|i| v[i] -= d * b[i]);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-14 {
            basis.push(v.map(|x| x / n));
        }
    }
    let mut p = [[0.0; 4]; 4];
    for b in &basis {
        for i in 0..4 {
            for j in 0..4 {
                p[i][j] += b[i] * b[j];
            }
        }
    }
    p
}

fn compare(a: &StrongDrivingEigensystem, b: &StrongDrivingEigensystem) -> f64 {
    let scale = a.energies.iter().map(|e| e.abs()).fold(1.0, f64::max);
    let mut dev: f64 = 0.0;
    for k in 0..4 {
        dev = dev.max((a.energies[k] - b.energies[k]).abs() / a.energies[k].abs().max(1.0));
    }
    let mut k = 0;
    while k < 4 {
        let mut end = k + 1;
        while end < 4 && (b.energies[end] - b.energies[k]).abs() < 1e-9 * scale {
            end += 1;
        }
        let idx: Vec<usize> = (k..end).collect();
        let pa = projector(&a.states, &idx);
        let pb = projector(&b.states, &idx);
        for i in 0..4 {
            for j in 0..4 {
                dev = dev.max((pa[i][j] - pb[i][j]).abs());
            }
        }
        k = end;
    }
    dev
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn resonant(beta: f64, omega: f64) -> SystemParams {
        SystemParams::from_mixing(1.0, beta)
            .unwrap()
            .with_gamma(1e-3)
            .with_gamma12(0.999e-3)
            .with_omega(omega)
    }

    #[test]
    fn perturbative_transition_values() {
        let l = dressed_ladder(&resonant(0.0, 0.05)).unwrap();
        assert_relative_eq!(l.transition("w6").unwrap().omega, 0.01, epsilon = 1e-15);
        for beta in [0.0, 0.4, FRAC_PI_4, 1.2] {
            let l = dressed_ladder(&resonant(beta, 0.05)).unwrap();
            assert_relative_eq!(l.transition("w1").unwrap().omega, 2.0 + 4.0 * 0.0025, epsilon = 1e-14);
            let w1 = l.transition("w1").unwrap().omega;
            assert!(l.sidebands().iter().all(|&w| w <= w1));
            assert_eq!(l.transition("w0").unwrap().omega, 0.0);
        }
    }

    #[test]
    fn printed_frequencies_follow_from_energies() {
        let (om, beta) = (0.07, 0.6);
        let l = dressed_ladder(&resonant(beta, om)).unwrap();
        let c = beta.cos();
        let o2 = om * om;
        let expect = [
            2.0 + 4.0 * o2,
            1.0 + 2.0 * o2 * (3.0 * c + 1.0),
            1.0 + 2.0 * o2 * (c + 1.0),
            1.0 - 2.0 * o2 * (c - 1.0),
            1.0 - 2.0 * o2 * (3.0 * c - 1.0),
            4.0 * o2 * c,
        ];
        for (k, w) in expect.iter().enumerate() {
            assert_relative_eq!(l.sidebands()[k], *w, epsilon = 1e-14);
        }
        assert_relative_eq!(l.frequency(1, 3), -l.frequency(3, 1));
        let w2 = l.transition("w2").unwrap().omega;
        let w3 = l.transition("w3").unwrap().omega;
        assert_relative_eq!(w2 - w3, 4.0 * o2 * c, epsilon = 1e-14);
    }

    #[test]
    fn saturation_amplitude() {
        let l = dressed_ladder(&resonant(0.0, 0.01)).unwrap();
        assert_relative_eq!(l.omega_2ps.value(), 0.5 * 1e-3f64.sqrt(), max_relative = 1e-12);
        let l = dressed_ladder(&resonant(FRAC_PI_2, 0.01)).unwrap();
        assert!(matches!(l.omega_2ps, SaturationAmplitude::Unbounded { .. }));
        assert!(l.omega_2ps.value().is_infinite());
    }

    #[test]
    fn ladder_requires_resonance() {
        assert!(dressed_ladder(&resonant(0.3, 0.01).with_delta_laser(0.1)).is_err());
        assert!(strong_driving_eigensystem(&resonant(0.3, 0.01).with_delta_laser(0.1)).is_err());
    }

    #[test]
    fn weak_drive_eigenstates_approach_ladder_basis() {
        let e = strong_driving_eigensystem(&resonant(FRAC_PI_4, 1e-3)).unwrap();
        for k in 0..4 {
            assert!(e.states[k][k].abs() > 0.999, "{:?}", e.states[k]);
        }
        let l = dressed_ladder(&resonant(FRAC_PI_4, 1e-3)).unwrap();
        for k in 0..4 {
            assert!((e.energies[k] - l.energies[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn closed_forms_match_numerics() {
        for om in [0.1, 0.5, 1.0, 3.0] {
            let p = resonant(0.0, om);
            let e = strong_driving_eigensystem(&p).unwrap();
            assert!(e.closed_form_deviation(&p).unwrap() < 1e-9);
            let p = resonant(FRAC_PI_2, om);
            let e = strong_driving_eigensystem(&p).unwrap();
            assert!(e.closed_form_deviation(&p).unwrap() < 1e-9, "{om}");
        }
        assert!(strong_driving_eigensystem(&resonant(FRAC_PI_4, 1.0))
            .unwrap()
            .closed_form_deviation(&resonant(FRAC_PI_4, 1.0))
            .is_none());
    }

    #[test]
    fn a2_is_always_an_eigenstate() {
        for beta in [0.0, 0.3, FRAC_PI_4, FRAC_PI_2] {
            let e = strong_driving_eigensystem(&resonant(beta, 1.0)).unwrap();
            assert!(e.states.iter().any(|v| (v[1] - 1.0).abs() < 1e-12));
        }
    }
}

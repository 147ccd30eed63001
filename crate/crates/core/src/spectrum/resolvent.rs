//! Stationary two-time spectra from the Liouvillian resolvent.
//!
//! `S(ω; A, B) = (1/π) Re Tr[-B (L + i z)⁻¹ ρ(A - <A>)]` with `z = ω + iΓ`.
//! The Liouvillian is diagonalized once; each channel `(A, B)` reduces to 16
//! pole residues, so a grid point costs a 16-term sum. If the eigenvector
//! matrix is too ill-conditioned the kernel solves a deflated linear system
//! per point instead.

use std::f64::consts::PI;

use log::debug;

use crate::error::{Error, Result};
use crate::lindblad::{DensityMatrix, Liouvillian, DIM};
use crate::linalg::{c, trace_functional, vectorize, CMatrix, CVector, Eigendecomposition, C64, I};

/// Eigenvector condition number above which the direct solver is used.
pub const EIGEN_CONDITION_LIMIT: f64 = 1e10;
/// Pole distances below this (relative to `max(1, |L|)`) are singular.
pub const SINGULAR_TOL: f64 = 1e-12;

enum Mode {
    Eigen {
        eig: Eigendecomposition,
        stationary: usize,
    },
    Direct {
        /// Rank-one term `s |ρ><1|` that lifts the stationary zero mode.
        deflation: CMatrix,
    },
}

pub struct ResolventKernel {
    matrix: CMatrix,
    rho: CMatrix,
    scale: f64,
    mode: Mode,
}

impl ResolventKernel {
    pub fn new(l: &Liouvillian, rho_ss: &DensityMatrix) -> Result<Self> {
        let scale = l.scale().max(1.0);
        let mode = match Eigendecomposition::new(&l.matrix) {
            Ok(eig) if eig.condition <= EIGEN_CONDITION_LIMIT => {
                let stationary = eig
                    .values
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                    .map(|(k, _)| k)
                    .unwrap_or(0);
                Mode::Eigen { eig, stationary }
            }
            other => {
                if let Ok(eig) = &other {
                    debug!(
                        "eigenvector condition {:e} too large, using direct solves",
                        eig.condition
                    );
                }
                let shift = scale + 1.0;
                let rho_vec = vectorize(&rho_ss.entries);
                let one = trace_functional(&CMatrix::identity(DIM, DIM));
                Mode::Direct {
                    deflation: &rho_vec * one.transpose() * c(shift),
                }
            }
        };
        Ok(Self {
            matrix: l.matrix.clone(),
            rho: rho_ss.entries.clone(),
            scale,
            mode,
        })
    }

    pub fn uses_eigenbasis(&self) -> bool {
        matches!(self.mode, Mode::Eigen { .. })
    }

    /// Precomputes everything that depends on `(A, B)` only.
    pub fn channel(&self, a: &CMatrix, b: &CMatrix) -> Channel<'_> {
        let mean_a = (&self.rho * a).trace();
        let shifted = a - CMatrix::identity(DIM, DIM) * mean_a;
        let x = vectorize(&(&self.rho * shifted));
        let functional = trace_functional(b);
        let residues = match &self.mode {
            Mode::Eigen { eig, stationary } => {
                let coeff = &eig.inverse * &x;
                let proj = eig.vectors.transpose() * &functional;
                let mut r: Vec<C64> = (0..coeff.len()).map(|k| proj[k] * coeff[k]).collect();
                r[*stationary] = c(0.0);
                Some(r)
            }
            Mode::Direct { .. } => None,
        };
        Channel {
            kernel: self,
            x,
            functional,
            residues,
        }
    }
}

pub struct Channel<'a> {
    kernel: &'a ResolventKernel,
    x: CVector,
    functional: CVector,
    residues: Option<Vec<C64>>,
}

impl Channel<'_> {
    pub fn eval(&self, omega: f64, det_linewidth: f64) -> Result<f64> {
        let k = self.kernel;
        let tol = SINGULAR_TOL * k.scale;
        match (&k.mode, &self.residues) {
            (Mode::Eigen { eig, stationary }, Some(res)) => {
                let mut acc = C64::new(0.0, 0.0);
                for (j, (&lambda, &r)) in eig.values.iter().zip(res).enumerate() {
                    if j == *stationary {
                        continue;
                    }
                    let pole = lambda - det_linewidth + I * omega;
                    if pole.norm() < tol {
                        return Err(Error::SingularResolvent {
                            omega,
                            condition: k.scale / pole.norm().max(f64::MIN_POSITIVE),
                        });
                    }
                    acc -= r / pole;
                }
                Ok(acc.re / PI)
            }
            (Mode::Direct { deflation }, _) => {
                let z = C64::new(omega, det_linewidth);
                let n = k.matrix.nrows();
                let m = &k.matrix + deflation + CMatrix::identity(n, n) * (I * z);
                let y = m.lu().solve(&self.x).ok_or(Error::SingularResolvent {
                    omega,
                    condition: f64::INFINITY,
                })?;
                Ok(-self.functional.dot(&y).re / PI)
            }
            _ => unreachable!("eigen mode always carries residues"),
        }
    }
}

/// `S(ω; A, B)` on a grid.
pub fn spectral_function(
    l: &Liouvillian,
    rho_ss: &DensityMatrix,
    a: &CMatrix,
    b: &CMatrix,
    omegas: &[f64],
    det_linewidth: f64,
) -> Result<Vec<f64>> {
    let kernel = ResolventKernel::new(l, rho_ss)?;
    let ch = kernel.channel(a, b);
    omegas.iter().map(|&w| ch.eval(w, det_linewidth)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::{build_liouvillian, sigma1, steady_state};
    use crate::params::SystemParams;
    use approx::assert_relative_eq;

    fn setup() -> (Liouvillian, DensityMatrix) {
        let p = SystemParams::from_mixing(1.0, 0.6)
            .unwrap()
            .with_gamma(0.05)
            .with_gamma12(0.02)
            .with_omega(0.3)
            .with_delta_laser(0.1);
        let l = build_liouvillian(&p);
        let rho = steady_state(&l).unwrap();
        (l, rho)
    }

    #[test]
    fn eigen_and_direct_routes_agree() {
        let (l, rho) = setup();
        let kernel = ResolventKernel::new(&l, &rho).unwrap();
        assert!(kernel.uses_eigenbasis());
        let s1 = sigma1();
        let ch = kernel.channel(&s1.adjoint(), &s1);
        let shift = l.scale().max(1.0) + 1.0;
        let direct = ResolventKernel {
            matrix: l.matrix.clone(),
            rho: rho.entries.clone(),
            scale: l.scale().max(1.0),
            mode: Mode::Direct {
                deflation: vectorize(&rho.entries)
                    * trace_functional(&CMatrix::identity(DIM, DIM)).transpose()
                    * c(shift),
            },
        };
        let dch = direct.channel(&s1.adjoint(), &s1);
        for w in [-1.3, -0.5, 0.0, 0.05, 0.9, 2.0] {
            for gd in [0.0, 0.05] {
                let a = ch.eval(w, gd).unwrap();
                let b = dch.eval(w, gd).unwrap();
                assert_relative_eq!(a, b, epsilon = 1e-10, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn identity_operators_give_zero() {
        let (l, rho) = setup();
        let id = CMatrix::identity(DIM, DIM);
        let s = spectral_function(&l, &rho, &id, &id, &[-1.0, 0.0, 0.3], 0.0).unwrap();
        assert!(s.iter().all(|v| v.abs() < 1e-12), "{s:?}");
    }

    #[test]
    fn zero_linewidth_pole_on_axis_is_singular() {
        // Undriven, uncoupled, identical emitters with no damping beyond
        // gamma have poles at -gamma/2 ± i(...); with det_linewidth = -gamma/2
        // the pole lands on the real axis.
        let p = SystemParams::from_coupling(0.0, 1.0)
            .unwrap()
            .with_gamma(0.1)
            .with_omega(0.05);
        let l = build_liouvillian(&p);
        let rho = steady_state(&l).unwrap();
        let kernel = ResolventKernel::new(&l, &rho).unwrap();
        let eig = Eigendecomposition::new(&l.matrix).unwrap();
        let target = eig
            .values
            .iter()
            .find(|z| z.norm() > 1e-6)
            .copied()
            .unwrap();
        let s1 = sigma1();
        let ch = kernel.channel(&s1.adjoint(), &s1);
        let r = ch.eval(-target.im, target.re);
        assert!(matches!(r, Err(Error::SingularResolvent { .. })), "{r:?}");
    }
}

//! Exact driven-dimer Hamiltonian, Lindblad Liouvillian and stationary state.
//!
//! Bare basis ordering is `|gg>, |ge>, |eg>, |ee>` with the first letter
//! belonging to emitter 1, so `|ge>` has emitter 2 excited. The Liouvillian
//! acts on column-stacked density matrices (see [`crate::linalg`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, commutator_super, dissipator_super, hermitian_eigen, max_abs, max_abs_vec, smallest_singular,
    unvectorize, vectorize, CMatrix, CVector, Eigendecomposition, C64,
};
use crate::params::SystemParams;

pub const DIM: usize = 4;

/// Bare-basis indices.
pub mod bare {
    pub const GG: usize = 0;
    pub const GE: usize = 1;
    pub const EG: usize = 2;
    pub const EE: usize = 3;
}

/// Collective-basis indices, `|gg>, |A>, |S>, |ee>`.
pub mod collective {
    pub const GG: usize = 0;
    pub const A: usize = 1;
    pub const S: usize = 2;
    pub const EE: usize = 3;
}

/// Lowering operator of emitter 1.
pub fn sigma1() -> CMatrix {
    let mut m = CMatrix::zeros(DIM, DIM);
    m[(bare::GG, bare::EG)] = c(1.0);
    m[(bare::GE, bare::EE)] = c(1.0);
    m
}

/// Lowering operator of emitter 2.
pub fn sigma2() -> CMatrix {
    let mut m = CMatrix::zeros(DIM, DIM);
    m[(bare::GG, bare::GE)] = c(1.0);
    m[(bare::EG, bare::EE)] = c(1.0);
    m
}

/// Positive-frequency field up to constants, `sigma1 + sigma2`.
pub fn field() -> CMatrix {
    sigma1() + sigma2()
}

/// `(sigma1+ + sigma2+)(sigma1 + sigma2)`.
pub fn intensity_operator() -> CMatrix {
    let e = field();
    e.adjoint() * e
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    Bare,
    Collective,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    pub entries: CMatrix,
    pub basis: Basis,
}

impl DensityMatrix {
    pub fn new(entries: CMatrix, basis: Basis) -> Self {
        assert_eq!(entries.shape(), (DIM, DIM), "density matrix must be 4x4");
        Self { entries, basis }
    }

    pub fn pure(state: &CVector, basis: Basis) -> Self {
        let norm = state.norm();
        let psi = state / c(norm);
        Self::new(&psi * psi.adjoint(), basis)
    }

    /// `|k><k|` for a basis index.
    pub fn basis_state(k: usize, basis: Basis) -> Self {
        let mut v = CVector::zeros(DIM);
        v[k] = c(1.0);
        Self::pure(&v, basis)
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[(i, j)]
    }

    pub fn population(&self, k: usize) -> f64 {
        self.entries[(k, k)].re
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    pub fn expect(&self, op: &CMatrix) -> C64 {
        assert_eq!(self.basis, Basis::Bare, "operators are defined in the bare basis");
        (&self.entries * op).trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        max_abs(&(&self.entries - self.entries.adjoint()))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let h = (&self.entries + self.entries.adjoint()) * c(0.5);
        hermitian_eigen(&h).0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Hermitian, unit trace and positive within the given tolerances.
    pub fn check(&self, tol: f64, positivity_tol: f64) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > tol {
            return Err(Error::InvalidParams(format!("not Hermitian: {herm:e}")));
        }
        let tr = (self.trace() - c(1.0)).norm();
        if tr > tol {
            return Err(Error::InvalidParams(format!("trace off by {tr:e}")));
        }
        let min = self.min_eigenvalue();
        if min < -positivity_tol {
            return Err(Error::InvalidParams(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }
}

/// `H = (Δ-δ) n1 + (Δ+δ) n2 + J (σ1⁺σ2 + h.c.) + Ω (σ1 + σ2 + h.c.)` in the
/// laser frame.
pub fn build_hamiltonian(p: &SystemParams) -> CMatrix {
    let s1 = sigma1();
    let s2 = sigma2();
    let n1 = s1.adjoint() * &s1;
    let n2 = s2.adjoint() * &s2;
    let hop = s1.adjoint() * &s2;
    let drive = &s1 + &s2;
    n1 * c(p.delta_laser - p.delta_emit)
        + n2 * c(p.delta_laser + p.delta_emit)
        + (&hop + hop.adjoint()) * c(p.j_coupling)
        + (&drive + drive.adjoint()) * c(p.omega_drive)
}

/// Master-equation generator as a 16x16 matrix on column-stacked states.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    pub matrix: CMatrix,
    pub params: SystemParams,
}

/// `L ρ = -i[H, ρ] + Σ_ij (γ_ij / 2)(2 σ_i ρ σ_j⁺ - {σ_j⁺ σ_i, ρ})` with
/// `γ_11 = γ_22 = γ` and `γ_12 = γ_21`.
pub fn build_liouvillian(p: &SystemParams) -> Liouvillian {
    let h = build_hamiltonian(p);
    let ops = [sigma1(), sigma2()];
    let rates = [[p.gamma, p.gamma12], [p.gamma12, p.gamma]];
    let mut m = commutator_super(&h);
    for (i, oi) in ops.iter().enumerate() {
        for (j, oj) in ops.iter().enumerate() {
            if rates[i][j] != 0.0 {
                m += dissipator_super(oi, oj, rates[i][j]);
            }
        }
    }
    Liouvillian {
        matrix: m,
        params: *p,
    }
}

impl Liouvillian {
    pub fn apply(&self, rho: &DensityMatrix) -> CMatrix {
        unvectorize(&(&self.matrix * vectorize(&rho.entries)), DIM)
    }

    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        Ok(Eigendecomposition::new(&self.matrix)?.values)
    }

    /// Largest real part over the spectrum.
    pub fn spectral_abscissa(&self) -> Result<f64> {
        Ok(self
            .eigenvalues()?
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max))
    }

    pub fn scale(&self) -> f64 {
        max_abs(&self.matrix)
    }
}

/// Relative singular-value tolerance that defines the null space.
pub const NULL_SPACE_TOL: f64 = 1e-9;
/// Steady-state residual tolerance, relative to `max(1, max|L_ij|)`.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Stationary state from the right-singular vector of the smallest singular
/// value, normalized to unit trace.
pub fn steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    let rho = null_state(&l.matrix, DIM)?;
    Ok(DensityMatrix::new(rho, Basis::Bare))
}

/// Stationary state of an arbitrary finite master equation with Hamiltonian
/// `h` and dissipative channels `(O_i, O_j, rate)`.
pub fn generic_steady_state(h: &CMatrix, channels: &[(CMatrix, CMatrix, f64)]) -> Result<CMatrix> {
    let mut m = commutator_super(h);
    for (oi, oj, rate) in channels {
        if *rate != 0.0 {
            m += dissipator_super(oi, oj, *rate);
        }
    }
    null_state(&m, h.nrows())
}

fn null_state(matrix: &CMatrix, n: usize) -> Result<CMatrix> {
    let (sv, null) = smallest_singular(matrix)?;
    let top = sv.last().copied().unwrap_or(0.0).max(1.0);
    let dimension = sv.iter().filter(|&&s| s < NULL_SPACE_TOL * top).count();
    if dimension > 1 {
        return Err(Error::NonUniqueSteadyState { dimension });
    }
    let rho = unvectorize(&null, n);
    let tr = rho.trace();
    let rho = rho / tr;
    let rho = (&rho + rho.adjoint()) * c(0.5);
    let residual = max_abs_vec(&(matrix * vectorize(&rho)));
    let tolerance = RESIDUAL_TOL * max_abs(matrix).max(1.0);
    if residual > tolerance {
        return Err(Error::SteadyStateResidual {
            residual,
            tolerance,
        });
    }
    Ok(rho)
}

/// Validates the parameters, builds the Liouvillian and solves it.
pub fn exact_steady_state(p: &SystemParams) -> Result<DensityMatrix> {
    p.validate()?;
    steady_state(&build_liouvillian(p))
}

/// Rows are the bare-basis components of `|gg>, |A>, |S>, |ee>`.
///
/// `|S> = (sqrt(1+sinβ)|ge> + sqrt(1-sinβ)|eg>)/√2` has energy `Δ + R`,
/// `|A> = (-sqrt(1-sinβ)|ge> + sqrt(1+sinβ)|eg>)/√2` has `Δ - R`.
pub fn collective_transform(beta: f64) -> CMatrix {
    let s = beta.sin();
    let plus = ((1.0 + s) / 2.0).sqrt();
    let minus = ((1.0 - s) / 2.0).max(0.0).sqrt();
    let mut u = CMatrix::zeros(DIM, DIM);
    u[(collective::GG, bare::GG)] = c(1.0);
    u[(collective::A, bare::GE)] = c(-minus);
    u[(collective::A, bare::EG)] = c(plus);
    u[(collective::S, bare::GE)] = c(plus);
    u[(collective::S, bare::EG)] = c(minus);
    u[(collective::EE, bare::EE)] = c(1.0);
    u
}

pub fn to_collective_basis(rho: &DensityMatrix, beta: f64) -> DensityMatrix {
    assert_eq!(rho.basis, Basis::Bare, "expected a bare-basis state");
    let u = collective_transform(beta);
    DensityMatrix::new(&u * &rho.entries * u.adjoint(), Basis::Collective)
}

pub fn to_bare_basis(rho: &DensityMatrix, beta: f64) -> DensityMatrix {
    assert_eq!(rho.basis, Basis::Collective, "expected a collective-basis state");
    let u = collective_transform(beta);
    DensityMatrix::new(u.adjoint() * &rho.entries * &u, Basis::Bare)
}

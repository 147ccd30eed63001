//! Dense complex linear algebra for small open-system problems.
//!
//! Density matrices are vectorized by column stacking, `vec(X)[i + n*j] = X[(i, j)]`,
//! which is nalgebra's native storage order. Under this convention
//! `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn vectorize(x: &CMatrix) -> CVector {
    CVector::from_column_slice(x.as_slice())
}

pub fn unvectorize(v: &CVector, n: usize) -> CMatrix {
    assert_eq!(v.len(), n * n, "vector length is not a square dimension");
    CMatrix::from_column_slice(n, n, v.as_slice())
}

/// Left multiplication `X -> A X` as a superoperator.
pub fn spre(a: &CMatrix) -> CMatrix {
    CMatrix::identity(a.nrows(), a.nrows()).kronecker(a)
}

/// Right multiplication `X -> X A` as a superoperator.
pub fn spost(a: &CMatrix) -> CMatrix {
    a.transpose().kronecker(&CMatrix::identity(a.nrows(), a.nrows()))
}

/// Superoperator of `-i[H, X]`.
pub fn commutator_super(h: &CMatrix) -> CMatrix {
    (spre(h) - spost(h)) * (-I)
}

/// Superoperator of `(rate / 2) (2 Oi X Oj† - {Oj† Oi, X})`.
pub fn dissipator_super(oi: &CMatrix, oj: &CMatrix, rate: f64) -> CMatrix {
    let jump = oj.map(|z| z.conj()).kronecker(oi) * c(2.0);
    let n = oj.adjoint() * oi;
    (jump - spre(&n) - spost(&n)) * c(rate / 2.0)
}

/// Trace of `B X` for `X = unvec(x)`, as a row functional on vectorized states.
pub fn trace_functional(b: &CMatrix) -> CVector {
    // Tr[B X] = sum_ij B_ij X_ji = sum_m vec(Bᵀ)_m x_m
    vectorize(&b.transpose())
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_vec(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Singular values in ascending order together with the right-singular vector
/// of the smallest one.
pub fn smallest_singular(m: &CMatrix) -> Result<(Vec<f64>, CVector)> {
    let svd = m.clone().svd(false, true);
    let v_t = svd
        .v_t
        .as_ref()
        .ok_or_else(|| Error::Eigen("SVD did not return right singular vectors".into()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let k = order[0];
    let null = v_t.row(k).adjoint();
    let values = order.iter().map(|&i| svd.singular_values[i]).collect();
    Ok((values, null))
}

pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(m.nrows(), m.ncols());
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Full eigendecomposition `M = V diag(λ) V⁻¹` of a general complex matrix.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    pub values: Vec<C64>,
    pub vectors: CMatrix,
    pub inverse: CMatrix,
    /// 2-norm condition number of `vectors`.
    pub condition: f64,
}

impl Eigendecomposition {
    /// Complex Schur form `M = Q T Q†`, then eigenvectors of the triangular
    /// factor by back substitution.
    pub fn new(m: &CMatrix) -> Result<Self> {
        let n = m.nrows();
        let scale = max_abs(m).max(f64::MIN_POSITIVE);
        let schur = nalgebra::Schur::try_new(m.clone(), f64::EPSILON, 10_000)
            .ok_or_else(|| Error::Eigen("Schur iteration did not converge".into()))?;
        let (q, t) = schur.unpack();
        let small = f64::EPSILON * scale;

        let mut y = CMatrix::zeros(n, n);
        for k in 0..n {
            let lambda = t[(k, k)];
            y[(k, k)] = c(1.0);
            for i in (0..k).rev() {
                let mut acc = C64::new(0.0, 0.0);
                for j in (i + 1)..=k {
                    acc += t[(i, j)] * y[(j, k)];
                }
                let mut denom = t[(i, i)] - lambda;
                if denom.norm() < small {
                    denom = c(small);
                }
                y[(i, k)] = -acc / denom;
            }
            let norm = y.column(k).norm();
            y.column_mut(k).unscale_mut(norm);
        }

        let vectors = q * y;
        let values = (0..n).map(|k| t[(k, k)]).collect();
        let condition = condition_number(&vectors);
        let inverse = vectors
            .clone()
            .lu()
            .try_inverse()
            .ok_or_else(|| Error::Eigen("eigenvector matrix is singular".into()))?;
        Ok(Self {
            values,
            vectors,
            inverse,
            condition,
        })
    }
}

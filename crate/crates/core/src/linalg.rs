//! Small dense complex linear-algebra helpers built on nalgebra.

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::space::{CMatrix, CVector, C64, ONE, ZERO};

/// Eigenvalues below this are clamped before taking (inverse) square roots.
pub const EIGEN_CLAMP: f64 = 1e-14;
/// Clamping may not move an eigenvalue by more than this.
pub const EIGEN_CLAMP_LIMIT: f64 = 1e-10;

/// Largest singular value; zero for empty matrices.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

pub fn adjoint(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

pub fn lambda_max(m: &CMatrix) -> f64 {
    hermitian_eigen(m).0.last().copied().unwrap_or(0.0)
}

pub fn lambda_min(m: &CMatrix) -> f64 {
    hermitian_eigen(m).0.first().copied().unwrap_or(0.0)
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_map(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let n = values.len();
    let mut scaled = vectors.clone();
    for (j, &lambda) in values.iter().enumerate() {
        let s = f(lambda);
        for i in 0..n {
            scaled[(i, j)] *= s;
        }
    }
    scaled * vectors.adjoint()
}

fn clamp_eigenvalue(lambda: f64) -> Result<f64> {
    if lambda >= EIGEN_CLAMP {
        return Ok(lambda);
    }
    if EIGEN_CLAMP - lambda > EIGEN_CLAMP_LIMIT {
        return Err(Error::Clamp { value: lambda });
    }
    Ok(EIGEN_CLAMP)
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let (values, _) = hermitian_eigen(m);
    for &v in &values {
        if v < -EIGEN_CLAMP_LIMIT {
            return Err(Error::Clamp { value: v });
        }
    }
    Ok(hermitian_map(m, |l| l.max(0.0).sqrt()))
}

/// Inverse principal square root of a positive definite Hermitian matrix.
pub fn pd_inv_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let (values, _) = hermitian_eigen(m);
    for &v in &values {
        clamp_eigenvalue(v)?;
    }
    Ok(hermitian_map(m, |l| 1.0 / l.max(EIGEN_CLAMP).sqrt()))
}

pub fn pd_inverse(m: &CMatrix) -> Result<CMatrix> {
    let (values, _) = hermitian_eigen(m);
    for &v in &values {
        clamp_eigenvalue(v)?;
    }
    Ok(hermitian_map(m, |l| 1.0 / l.max(EIGEN_CLAMP)))
}

/// Thin singular value decomposition with singular values sorted descending.
///
/// Returns `(u, sigma, v)` with `m = sum_k sigma_k u_k v_k^*`; `u` and `v`
/// hold the singular vectors as columns.
pub fn thin_svd(m: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    let (p, q) = m.shape();
    let k = p.min(q);
    if k == 0 {
        return (CMatrix::zeros(p, 0), Vec::new(), CMatrix::zeros(q, 0));
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sigma = order.iter().map(|&i| svd.singular_values[i]).collect();
    let u_sorted = CMatrix::from_fn(p, k, |i, j| u[(i, order[j])]);
    let v_sorted = CMatrix::from_fn(q, k, |i, j| v_t[(order[j], i)].conj());
    (u_sorted, sigma, v_sorted)
}

/// Extends an orthonormal family in `C^n` by further orthonormal vectors until
/// it spans `C^n`. Candidates are the standard basis vectors, tried in order.
pub fn complete_orthonormal(existing: &[CVector], n: usize) -> Vec<CVector> {
    let mut basis: Vec<CVector> = existing.to_vec();
    let mut added = Vec::new();
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = CVector::from_fn(n, |i, _| if i == k { ONE } else { ZERO });
        // two passes of Gram-Schmidt
        for _ in 0..2 {
            for b in &basis {
                let c = b.dotc(&v);
                v -= b * c;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            v /= C64::new(norm, 0.0);
            basis.push(v.clone());
            added.push(v);
        }
    }
    added
}

/// Solves `m x = b`, rejecting the result if the normwise backward error
/// `|m x - b| / (|m| |x| + |b|)` exceeds `max_residual`.
pub fn solve(m: &CMatrix, b: &CVector, max_residual: f64) -> Result<CVector> {
    let lu = m.clone().lu();
    let condition = condition_estimate(m);
    let x = lu.solve(b).ok_or(Error::LinearSolve {
        residual: f64::INFINITY,
        condition,
    })?;
    let scale = m.norm() * x.norm() + b.norm();
    let residual = (m * &x - b).norm() / scale.max(f64::MIN_POSITIVE);
    if residual > max_residual || !residual.is_finite() {
        return Err(Error::LinearSolve {
            residual,
            condition,
        });
    }
    Ok(x)
}

pub fn condition_estimate(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 1.0;
    }
    let sv = m.clone().singular_values();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        sv.max() / min
    }
}

pub fn outer(u: &CVector, v: &CVector) -> CMatrix {
    u * v.adjoint()
}

/// Numerical rank: number of singular values above `threshold`.
pub fn rank(m: &CMatrix, threshold: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    m.clone()
        .singular_values()
        .iter()
        .filter(|&&s| s > threshold)
        .count()
}

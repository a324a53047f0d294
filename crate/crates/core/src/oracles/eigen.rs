use crate::error::{Error, Result};
use crate::kernel::{DegreeVector, KernelMatrix, DEFAULT_DENSE_CAP};
use crate::matrix::Matrix;

pub const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_TOL: f64 = 1e-12;

/// Full eigendecomposition of a symmetric matrix, eigenvalues descending.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    eigenvalues: Vec<f64>,
    /// Column `i` is the unit eigenvector for `eigenvalues[i]`.
    eigenvectors: Matrix,
    sweeps: usize,
}

impl EigenSystem {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Matrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, i: usize) -> Vec<f64> {
        self.eigenvectors.column(i)
    }

    /// Number of Jacobi sweeps used.
    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `Σ λ_i ψ_i ψ_iᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.len();
        let v = &self.eigenvectors;
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let s: f64 = (0..n)
                    .map(|k| self.eigenvalues[k] * v.get(i, k) * v.get(j, k))
                    .sum();
                out.set(i, j, s);
            }
        }
        out
    }

    /// `max_i ‖A ψ_i − λ_i ψ_i‖∞`.
    pub fn max_residual(&self, a: &Matrix) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..self.len() {
            let psi = self.eigenvector(k);
            let a_psi = a.mul_vec(&psi).expect("square matrix of matching size");
            for (x, p) in a_psi.iter().zip(&psi) {
                worst = worst.max((x - self.eigenvalues[k] * p).abs());
            }
        }
        worst
    }

    /// `max |ψ_iᵀ ψ_j − δ_ij|`.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.len();
        let v = &self.eigenvectors;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in a..n {
                let dot: f64 = (0..n).map(|k| v.get(k, a) * v.get(k, b)).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// `max |Σ_i ψ_i (ψ_iᵀ 1) − 1|`: how well the eigenbasis rebuilds the
    /// all-ones vector.
    pub fn ones_expansion_error(&self) -> f64 {
        let n = self.len();
        let mut acc = vec![0.0; n];
        for i in 0..n {
            let psi = self.eigenvector(i);
            let w: f64 = psi.iter().sum();
            for (a, p) in acc.iter_mut().zip(&psi) {
                *a += w * p;
            }
        }
        acc.iter().map(|a| (a - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Sweeps over all upper off-diagonal pairs, zeroing each with a plane
/// rotation, until the off-diagonal Frobenius norm drops to `1e-12 ‖A‖F`.
pub fn jacobi_eigen(a: &Matrix) -> Result<EigenSystem> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: a.cols(),
        });
    }
    let scale = a.as_slice().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut asym = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            asym = asym.max((a.get(i, j) - a.get(j, i)).abs());
        }
    }
    if asym > 1e-12 * scale.max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }

    let mut a = a.clone();
    let mut v = Matrix::identity(n);
    let tol = JACOBI_REL_TOL * a.frobenius_norm();
    let mut sweeps = 0;
    loop {
        if off_diagonal_norm(&a) <= tol {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).total_cmp(&a.get(i, i)).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| a.get(i, i)).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors.set(k, dst, v.get(k, src));
        }
    }
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors: vectors,
        sweeps,
    })
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j) * a.get(i, j);
            }
        }
    }
    s.sqrt()
}

// A ← Jᵀ A J and V ← V J for the rotation J in the (p, q) plane.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = a.rows();
    for k in 0..n {
        let (akp, akq) = (a.get(k, p), a.get(k, q));
        a.set(k, p, c * akp - s * akq);
        a.set(k, q, s * akp + c * akq);
    }
    for k in 0..n {
        let (apk, aqk) = (a.get(p, k), a.get(q, k));
        a.set(p, k, c * apk - s * aqk);
        a.set(q, k, s * apk + c * aqk);
    }
    // the rotation zeroes this pair analytically
    a.set(p, q, 0.0);
    a.set(q, p, 0.0);
    for k in 0..n {
        let (vkp, vkq) = (v.get(k, p), v.get(k, q));
        v.set(k, p, c * vkp - s * vkq);
        v.set(k, q, s * vkp + c * vkq);
    }
}

pub fn symmetric_eigen(k: &KernelMatrix) -> Result<EigenSystem> {
    if k.n() > DEFAULT_DENSE_CAP {
        return Err(Error::DenseCapExceeded {
            n: k.n(),
            cap: DEFAULT_DENSE_CAP,
        });
    }
    jacobi_eigen(k.values())
}

/// `(xᵀ K x) / (xᵀ x)`.
pub fn rayleigh_quotient(k: &KernelMatrix, x: &[f64]) -> Result<f64> {
    let kx = k.values().mul_vec(x)?;
    let xx: f64 = x.iter().map(|v| v * v).sum();
    if xx == 0.0 {
        return Err(Error::ZeroVector);
    }
    let xkx: f64 = x.iter().zip(&kx).map(|(a, b)| a * b).sum();
    Ok(xkx / xx)
}

/// Degree assembled from the eigendecomposition: `Σ λ_i ψ_i (ψ_iᵀ 1)`.
pub fn spectral_degree(k: &KernelMatrix) -> Result<DegreeVector> {
    let eig = symmetric_eigen(k)?;
    let n = eig.len();
    let mut nu = vec![0.0; n];
    for i in 0..n {
        let psi = eig.eigenvector(i);
        let w = eig.eigenvalues()[i] * psi.iter().sum::<f64>();
        for (acc, p) in nu.iter_mut().zip(&psi) {
            *acc += w * p;
        }
    }
    Ok(DegreeVector::new(nu, *k.params()))
}

//! Dimension-normalized RBF kernel and graph degree.
//!
//! `k(f_i, f_j) = exp(-(‖f_i - f_j‖² / d) / (2σ²))`, where `d` is the
//! feature count when normalization is on (the default). The degree of a
//! sample is its kernel row sum, self-similarity included, so every degree
//! lies in `[1, N]`.
//!
//! [`degree`] walks the kernel matrix tile by tile and never stores it.
//! [`kernel_matrix`] builds the explicit matrix for small oracle-sized inputs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::matrix::{squared_distance, Matrix};

pub const DEFAULT_SIGMA: f64 = 0.15;
pub const DEFAULT_BLOCK_SIZE: usize = 1024;
pub const DEFAULT_DENSE_CAP: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    sigma: f64,
    dim_normalize: bool,
}

impl KernelParams {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidSigma(sigma));
        }
        Ok(Self {
            sigma,
            dim_normalize: true,
        })
    }

    /// Turns dividing the squared distance by the feature count on or off.
    pub fn with_dim_normalize(mut self, on: bool) -> Self {
        self.dim_normalize = on;
        self
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn dim_normalize(&self) -> bool {
        self.dim_normalize
    }

    /// Coefficient `γ` with `k = exp(-γ ‖f_i - f_j‖²)` for `dim` features.
    #[inline]
    pub fn gamma(&self, dim: usize) -> f64 {
        let d = if self.dim_normalize { dim as f64 } else { 1.0 };
        1.0 / (2.0 * self.sigma * self.sigma * d)
    }

    pub fn digest(&self) -> String {
        format!("sigma={};dim_normalize={}", self.sigma, self.dim_normalize)
    }
}

impl Default for KernelParams {
    fn default() -> Self {
        Self {
            sigma: DEFAULT_SIGMA,
            dim_normalize: true,
        }
    }
}

/// Kernel value between two feature vectors.
pub fn rbf_entry(a: &[f64], b: &[f64], params: &KernelParams) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::NoFeatures);
    }
    Ok((-params.gamma(a.len()) * squared_distance(a, b)).exp())
}

/// Explicit N×N kernel matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    values: Matrix,
    params: KernelParams,
}

impl KernelMatrix {
    /// Wraps a precomputed matrix. No kernel invariants are checked, which is
    /// what fault-injection tests rely on.
    pub fn from_values(values: Matrix, params: KernelParams) -> Self {
        Self { values, params }
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.values.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values.get(i, j)
    }

    /// Plain row sums; the dense reference for [`degree`].
    pub fn row_sums(&self) -> DegreeVector {
        DegreeVector {
            values: self.values.row_iter().map(|r| r.iter().sum()).collect(),
            params: self.params,
        }
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}

pub fn kernel_matrix(data: &Dataset, params: &KernelParams) -> Result<KernelMatrix> {
    kernel_matrix_with_cap(data, params, DEFAULT_DENSE_CAP)
}

pub fn kernel_matrix_with_cap(
    data: &Dataset,
    params: &KernelParams,
    cap: usize,
) -> Result<KernelMatrix> {
    let n = data.n_samples();
    if n > cap {
        return Err(Error::DenseCapExceeded { n, cap });
    }
    let gamma = params.gamma(data.n_features());
    let x = data.features();
    let mut values = Matrix::zeros(n, n);
    for i in 0..n {
        values.set(i, i, 1.0);
        for j in i + 1..n {
            let k = (-gamma * squared_distance(x.row(i), x.row(j))).exp();
            values.set(i, j, k);
            values.set(j, i, k);
        }
    }
    Ok(KernelMatrix {
        values,
        params: *params,
    })
}

/// Per-sample graph degree (kernel row sum including the self term).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeVector {
    values: Vec<f64>,
    params: KernelParams,
}

impl DegreeVector {
    pub fn new(values: Vec<f64>, params: KernelParams) -> Self {
        Self { values, params }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max_abs_diff(&self, other: &DegreeVector) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    fn total(self) -> f64 {
        self.sum + self.comp
    }
}

/// Graph degree of every sample, computed over `block_size`² tiles without
/// materializing the kernel matrix.
///
/// Row blocks run in parallel and each owns its slice of the output. Within
/// a row every column is added in ascending order with compensated
/// summation, so the result does not depend on `block_size` at all.
pub fn degree(data: &Dataset, params: &KernelParams, block_size: usize) -> Result<DegreeVector> {
    if block_size == 0 {
        return Err(Error::InvalidParameter("block_size must be >= 1".into()));
    }
    let x = data.features();
    let n = x.rows();
    let gamma = params.gamma(x.cols());
    let mut values = vec![0.0; n];
    values
        .par_chunks_mut(block_size)
        .enumerate()
        .for_each(|(b, out)| {
            let row0 = b * block_size;
            let mut acc = vec![CompensatedSum::default(); out.len()];
            for col0 in (0..n).step_by(block_size) {
                let col1 = (col0 + block_size).min(n);
                for (r, a) in acc.iter_mut().enumerate() {
                    let xi = x.row(row0 + r);
                    for j in col0..col1 {
                        a.add((-gamma * squared_distance(xi, x.row(j))).exp());
                    }
                }
            }
            for (o, a) in out.iter_mut().zip(acc) {
                *o = a.total();
            }
        });
    Ok(DegreeVector {
        values,
        params: *params,
    })
}

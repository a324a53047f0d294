use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::{mmd2_empirical, mmd2_single_from_degree, spectral_degree, symmetric_eigen};
use crate::data::Dataset;
use crate::error::Result;
use crate::kernel::{degree, kernel_matrix, KernelMatrix, KernelParams};
use crate::matrix::Matrix;

/// Outcome of one identity over every generated instance.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub error: Option<String>,
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {:<22} max_residual={:.3e} tol={:.0e}",
            self.name, self.max_residual, self.tolerance
        )?;
        if let Some(e) = &self.error {
            write!(f, " error: {e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    pub datasets_per_sigma: usize,
    pub sigmas: Vec<f64>,
    /// Adds 1e-3 to `K[0][1]` of every explicit kernel matrix, breaking
    /// symmetry. Negative control for the suite itself.
    pub inject_asymmetry: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            datasets_per_sigma: 4,
            sigmas: vec![0.05, 0.15, 0.5, 2.0],
            inject_asymmetry: false,
        }
    }
}

struct Tracker {
    name: &'static str,
    tolerance: f64,
    worst: f64,
    error: Option<String>,
}

impl Tracker {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            worst: 0.0,
            error: None,
        }
    }

    fn record(&mut self, r: Result<f64>) {
        match r {
            Ok(v) if v.is_nan() => {
                self.error.get_or_insert_with(|| "NaN residual".into());
            }
            Ok(v) => self.worst = self.worst.max(v),
            Err(e) => {
                self.error.get_or_insert_with(|| e.to_string());
            }
        }
    }

    fn finish(self) -> IdentityCheck {
        IdentityCheck {
            name: self.name,
            max_residual: self.worst,
            tolerance: self.tolerance,
            passed: self.error.is_none() && self.worst <= self.tolerance,
            error: self.error,
        }
    }
}

/// Runs every kernel, spectral and MMD identity on seeded random datasets
/// and reports the worst residual of each.
pub fn identity_suite(opts: &SuiteOptions) -> Vec<IdentityCheck> {
    let mut symmetry = Tracker::new("kernel_symmetry", 0.0);
    let mut diagonal = Tracker::new("kernel_diagonal", 0.0);
    let mut range = Tracker::new("kernel_range", 0.0);
    let mut eig_residual = Tracker::new("eigen_residual", 1e-8);
    let mut orthonormal = Tracker::new("eigen_orthonormality", 1e-8);
    let mut trace = Tracker::new("eigen_trace", 1e-8);
    let mut completeness = Tracker::new("basis_completeness", 1e-8);
    let mut spectral = Tracker::new("spectral_identity", 1e-8);
    let mut first_term = Tracker::new("mmd_first_term", 1e-12);
    let mut third_term = Tracker::new("mmd_third_term", 1e-12);
    let mut reduction = Tracker::new("mmd_reduction", 1e-12);
    let mut duality = Tracker::new("rank_duality", 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for &sigma in &opts.sigmas {
        let params = KernelParams::new(sigma).expect("suite sigmas are positive");
        for _ in 0..opts.datasets_per_sigma {
            let n = rng.gen_range(5..=60);
            let d = rng.gen_range(1..=6);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..d).map(|_| rng.sample(StandardNormal)).collect())
                .collect();
            let data = Dataset::from_rows(&rows).expect("finite rows");
            let nu = degree(&data, &params, 16).expect("positive block size");

            let mut k = kernel_matrix(&data, &params).expect("under dense cap");
            if opts.inject_asymmetry {
                let mut v = k.values().clone();
                v.set(0, 1, v.get(0, 1) + 1e-3);
                k = KernelMatrix::from_values(v, params);
            }
            symmetry.record(Ok(k.max_asymmetry()));
            diagonal.record(Ok((0..n)
                .map(|i| (k.get(i, i) - 1.0).abs())
                .fold(0.0, f64::max)));
            range.record(Ok(range_violation(k.values())));

            match symmetric_eigen(&k) {
                Ok(eig) => {
                    let lmax = eig.eigenvalues()[0].abs().max(f64::MIN_POSITIVE);
                    eig_residual.record(Ok(eig.max_residual(k.values()) / lmax));
                    orthonormal.record(Ok(eig.orthonormality_error()));
                    let sum: f64 = eig.eigenvalues().iter().sum();
                    let over = (eig.eigenvalues()[0] - n as f64).max(0.0);
                    trace.record(Ok(((sum - n as f64).abs()).max(over) / n as f64));
                    completeness.record(Ok(eig.ones_expansion_error()));
                }
                Err(e) => {
                    let msg = e.to_string();
                    for t in [
                        &mut eig_residual,
                        &mut orthonormal,
                        &mut trace,
                        &mut completeness,
                    ] {
                        t.error.get_or_insert_with(|| msg.clone());
                    }
                }
            }
            spectral.record(spectral_degree(&k).map(|s| s.max_abs_diff(&nu)));

            let m = n as f64;
            let mut off = 0.0;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        off += k.get(i, j);
                    }
                }
            }
            first_term.record(Ok(
                (off / (m * (m - 1.0)) - (nu.mean() - 1.0) / (m - 1.0)).abs()
            ));

            let mut single = Vec::with_capacity(n);
            for l in 0..n {
                let col: f64 = (0..n).map(|i| k.get(i, l)).sum();
                third_term.record(Ok((2.0 * col / m - 2.0 * nu.values()[l] / m).abs()));
                let s = mmd2_single_from_degree(&nu, l).unwrap_or(f64::NAN);
                let g = mmd2_empirical(&data, &data.select(&[l]), &params);
                reduction.record(g.map(|g| (s - g).abs()));
                single.push(s);
            }
            duality.record(Ok(order_inversions(nu.values(), &single) as f64));
        }
    }

    [
        symmetry,
        diagonal,
        range,
        eig_residual,
        orthonormal,
        trace,
        completeness,
        spectral,
        first_term,
        third_term,
        reduction,
        duality,
    ]
    .into_iter()
    .map(Tracker::finish)
    .collect()
}

// Pairs ordered strictly one way by degree and strictly the other way by
// MMD², or tied in degree but not in MMD². Rounding of the closed form may
// merge nearly equal degrees into one MMD² value, which is not counted.
fn order_inversions(nu: &[f64], mmd: &[f64]) -> usize {
    let mut bad = 0;
    for a in 0..nu.len() {
        for b in 0..nu.len() {
            let broken = (nu[a] > nu[b] && mmd[a] > mmd[b]) || (nu[a] == nu[b] && mmd[a] != mmd[b]);
            bad += usize::from(broken);
        }
    }
    bad
}

// Entries must lie in [0, 1]; exact zeros only come from exp underflow.
fn range_violation(k: &Matrix) -> f64 {
    k.as_slice()
        .iter()
        .map(|&v| {
            if v < 0.0 {
                -v
            } else if v > 1.0 {
                v - 1.0
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max)
}

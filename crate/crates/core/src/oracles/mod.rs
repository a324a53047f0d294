//! Independent cross-checks of the graph degree.
//!
//! * Spectral: the degree equals `Σ λ_i ψ_i (ψ_iᵀ 1)` over the eigenpairs of
//!   the kernel matrix. [`spectral_degree`] evaluates that sum from a
//!   self-contained cyclic Jacobi decomposition, never from row sums.
//! * Kernel two-sample: the unbiased empirical MMD² between a dataset and one
//!   of its own samples depends on that sample only through its degree.
//!   [`mmd2_empirical`] evaluates the estimator by brute force and
//!   [`mmd2_single`] through the degree closed form.
//!
//! These are meant for oracle-scale inputs (a few hundred samples).

mod eigen;
mod mmd;
mod suite;

pub use eigen::{
    jacobi_eigen, rayleigh_quotient, spectral_degree, symmetric_eigen, EigenSystem,
    JACOBI_MAX_SWEEPS,
};
pub use mmd::{mmd2_empirical, mmd2_single, mmd2_single_from_degree};
pub use suite::{identity_suite, IdentityCheck, SuiteOptions};

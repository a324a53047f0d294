//! Graph-degree based anomaly detection (GDBA).
//!
//! Samples are nodes of a fully connected graph whose edge weights come from
//! a dimension-normalized RBF kernel. A sample's degree (its row sum in the
//! kernel matrix) is its normality score; the anomaly score is the negated
//! degree. The crate also ships the usual distance- and cluster-based
//! baselines, ROC/AUC evaluation, a bandwidth sweep, and oracle routines
//! (a Jacobi eigensolver and brute-force MMD) that cross-check the degree
//! against its spectral and kernel two-sample readings.
//!
//! ```
//! use gdba_core::{data, kernel::KernelParams, scoring, eval};
//!
//! let toy = data::make_toy_fig2(0);
//! let scores = scoring::gdba_score(&toy, &KernelParams::new(0.1).unwrap(), 64).unwrap();
//! let auc = eval::auc(&scores, toy.labels().unwrap()).unwrap();
//! assert_eq!(auc.auc, 1.0);
//! ```

pub mod baselines;
pub mod data;
pub mod detector;
pub mod error;
pub mod eval;
pub mod kernel;
pub mod matrix;
pub mod oracles;
pub mod scoring;

pub use data::{Dataset, RawTable};
pub use detector::DetectorSpec;
pub use error::{Error, Result};
pub use kernel::{DegreeVector, KernelMatrix, KernelParams};
pub use matrix::Matrix;
pub use scoring::ScoreVector;

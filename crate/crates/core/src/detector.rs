use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::baselines;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::kernel::{KernelParams, DEFAULT_BLOCK_SIZE, DEFAULT_SIGMA};
use crate::scoring::{self, ScoreVector};

pub const DEFAULT_K: usize = 10;
pub const DEFAULT_K_CLUSTERS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectorKind {
    Gdba,
    Knn,
    Kthnn,
    Lof,
    Ldcof,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 5] = [
        DetectorKind::Gdba,
        DetectorKind::Knn,
        DetectorKind::Kthnn,
        DetectorKind::Lof,
        DetectorKind::Ldcof,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DetectorKind::Gdba => "gdba",
            DetectorKind::Knn => "knn",
            DetectorKind::Kthnn => "kthnn",
            DetectorKind::Lof => "lof",
            DetectorKind::Ldcof => "ldcof",
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DetectorKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnknownDetector(s.to_owned()))
    }
}

/// Shared numeric settings a detector picks its parameters from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorParams {
    pub sigma: f64,
    pub k: usize,
    pub k_clusters: usize,
    pub seed: u64,
    pub block_size: usize,
}

impl Default for DetectorParams {
    fn default() -> Self {
        Self {
            sigma: DEFAULT_SIGMA,
            k: DEFAULT_K,
            k_clusters: DEFAULT_K_CLUSTERS,
            seed: 0,
            block_size: DEFAULT_BLOCK_SIZE,
        }
    }
}

/// A fully parameterized detector.
#[derive(Debug, Clone, PartialEq)]
pub enum DetectorSpec {
    Gdba {
        kernel: KernelParams,
        block_size: usize,
    },
    Knn {
        k: usize,
    },
    Kthnn {
        k: usize,
    },
    Lof {
        k: usize,
    },
    Ldcof {
        k_clusters: usize,
        seed: u64,
    },
}

impl DetectorSpec {
    pub fn new(kind: DetectorKind, p: &DetectorParams) -> Result<Self> {
        if p.k == 0 || p.k_clusters == 0 || p.block_size == 0 {
            return Err(Error::InvalidParameter(
                "k, k_clusters and block_size must be >= 1".into(),
            ));
        }
        Ok(match kind {
            DetectorKind::Gdba => DetectorSpec::Gdba {
                kernel: KernelParams::new(p.sigma)?,
                block_size: p.block_size,
            },
            DetectorKind::Knn => DetectorSpec::Knn { k: p.k },
            DetectorKind::Kthnn => DetectorSpec::Kthnn { k: p.k },
            DetectorKind::Lof => DetectorSpec::Lof { k: p.k },
            DetectorKind::Ldcof => DetectorSpec::Ldcof {
                k_clusters: p.k_clusters,
                seed: p.seed,
            },
        })
    }

    pub fn gdba(sigma: f64) -> Result<Self> {
        Ok(DetectorSpec::Gdba {
            kernel: KernelParams::new(sigma)?,
            block_size: DEFAULT_BLOCK_SIZE,
        })
    }

    pub fn kind(&self) -> DetectorKind {
        match self {
            DetectorSpec::Gdba { .. } => DetectorKind::Gdba,
            DetectorSpec::Knn { .. } => DetectorKind::Knn,
            DetectorSpec::Kthnn { .. } => DetectorKind::Kthnn,
            DetectorSpec::Lof { .. } => DetectorKind::Lof,
            DetectorSpec::Ldcof { .. } => DetectorKind::Ldcof,
        }
    }

    /// Short label such as `gdba(sigma=0.15)` or `knn(k=10)`.
    pub fn label(&self) -> String {
        match self {
            DetectorSpec::Gdba { kernel, .. } => format!("gdba(sigma={})", kernel.sigma()),
            DetectorSpec::Knn { k } => format!("knn(k={k})"),
            DetectorSpec::Kthnn { k } => format!("kthnn(k={k})"),
            DetectorSpec::Lof { k } => format!("lof(k={k})"),
            DetectorSpec::Ldcof { k_clusters, seed } => {
                format!("ldcof(k_clusters={k_clusters},seed={seed})")
            }
        }
    }

    pub fn score(&self, data: &Dataset) -> Result<ScoreVector> {
        match *self {
            DetectorSpec::Gdba { kernel, block_size } => {
                scoring::gdba_score(data, &kernel, block_size)
            }
            DetectorSpec::Knn { k } => baselines::knn_score(data, k),
            DetectorSpec::Kthnn { k } => baselines::kthnn_score(data, k),
            DetectorSpec::Lof { k } => baselines::lof_score(data, k),
            DetectorSpec::Ldcof { k_clusters, seed } => {
                baselines::ldcof_score(data, k_clusters, seed)
            }
        }
    }
}

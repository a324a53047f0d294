//! Run configuration: command-line flags (and their `GDBA_*` environment
//! variables) override an optional TOML config file, which overrides the
//! built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use gdba_core::data::DEFAULT_LABEL_COLUMN;
use gdba_core::detector::{DetectorKind, DetectorParams, DEFAULT_K, DEFAULT_K_CLUSTERS};
use gdba_core::eval::SweepGrid;
use gdba_core::kernel::{DEFAULT_BLOCK_SIZE, DEFAULT_SIGMA};
use gdba_core::Error;
use serde::Deserialize;

/// Flags shared by the data-driven subcommands.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// CSV file to read, or `toy` for the built-in two-cluster example.
    /// Repeat (or comma-separate) for `compare`.
    #[arg(long, env = "GDBA_DATASET", value_delimiter = ',')]
    pub dataset: Vec<String>,
    /// Name of the 0/1 anomaly label column [default: label, if present]
    #[arg(long, env = "GDBA_LABEL_COLUMN")]
    pub label_column: Option<String>,
    /// Keep all normal rows but only the first N anomalies (file order).
    #[arg(long, env = "GDBA_KEEP_ANOMALIES")]
    pub keep_anomalies: Option<usize>,
    /// Skip z-score standardization of CSV features.
    #[arg(long)]
    pub raw: bool,
    /// Detector: gdba, knn, kthnn, lof or ldcof. Repeatable for `compare`
    /// [default: gdba; all five for `compare`]
    #[arg(long, env = "GDBA_DETECTOR", value_delimiter = ',')]
    pub detector: Vec<DetectorKind>,
    /// RBF bandwidth for gdba [default: 0.15]
    #[arg(long, env = "GDBA_SIGMA")]
    pub sigma: Option<f64>,
    /// Neighbor count for knn, kthnn and lof [default: 10]
    #[arg(long, env = "GDBA_K")]
    pub k: Option<usize>,
    /// Cluster count for ldcof [default: 10]
    #[arg(long, env = "GDBA_K_CLUSTERS")]
    pub k_clusters: Option<usize>,
    /// Seed for k-means and the toy dataset [default: 0]
    #[arg(long, env = "GDBA_SEED")]
    pub seed: Option<u64>,
    /// Tile edge for the blocked degree computation [default: 1024]
    #[arg(long, env = "GDBA_BLOCK_SIZE")]
    pub block_size: Option<usize>,
    /// Output file (CSV); a JSON report is written next to it where applicable.
    #[arg(long, env = "GDBA_OUT")]
    pub out: Option<PathBuf>,
}

/// Same keys as the flags, all optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub dataset: Option<Vec<String>>,
    pub label_column: Option<String>,
    pub keep_anomalies: Option<usize>,
    pub raw: Option<bool>,
    pub detector: Option<Vec<String>>,
    pub sigma: Option<f64>,
    pub k: Option<usize>,
    pub k_clusters: Option<usize>,
    pub seed: Option<u64>,
    pub block_size: Option<usize>,
    pub grid: Option<String>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub datasets: Vec<String>,
    pub label_column: String,
    /// Whether the label column was asked for explicitly (then it must exist).
    pub label_required: bool,
    pub keep_anomalies: Option<usize>,
    pub raw: bool,
    pub detectors: Vec<DetectorKind>,
    pub params: DetectorParams,
    pub grid: SweepGrid,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(
        args: &CommonArgs,
        grid: Option<&str>,
        file: &FileConfig,
        default_detectors: &[DetectorKind],
    ) -> Result<Self, Error> {
        let datasets = if !args.dataset.is_empty() {
            args.dataset.clone()
        } else {
            file.dataset.clone().unwrap_or_default()
        };
        let detectors = if !args.detector.is_empty() {
            args.detector.clone()
        } else if let Some(names) = &file.detector {
            names.iter().map(|n| n.parse()).collect::<Result<_, _>>()?
        } else {
            default_detectors.to_vec()
        };
        let label_required = args.label_column.is_some() || file.label_column.is_some();
        let label_column = args
            .label_column
            .clone()
            .or_else(|| file.label_column.clone())
            .unwrap_or_else(|| DEFAULT_LABEL_COLUMN.to_owned());
        let grid = match grid.map(str::to_owned).or_else(|| file.grid.clone()) {
            Some(g) => g.parse()?,
            None => SweepGrid::default(),
        };
        Ok(Self {
            datasets,
            label_column,
            label_required,
            keep_anomalies: args.keep_anomalies.or(file.keep_anomalies),
            raw: args.raw || file.raw.unwrap_or(false),
            detectors,
            params: DetectorParams {
                sigma: args.sigma.or(file.sigma).unwrap_or(DEFAULT_SIGMA),
                k: args.k.or(file.k).unwrap_or(DEFAULT_K),
                k_clusters: args
                    .k_clusters
                    .or(file.k_clusters)
                    .unwrap_or(DEFAULT_K_CLUSTERS),
                seed: args.seed.or(file.seed).unwrap_or(0),
                block_size: args
                    .block_size
                    .or(file.block_size)
                    .unwrap_or(DEFAULT_BLOCK_SIZE),
            },
            grid,
            out: args.out.clone().or_else(|| file.out.clone()),
        })
    }
}

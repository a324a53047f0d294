//! ROC/AUC evaluation, the σ sweep, and multi-detector comparison tables.
//!
//! AUC is the Mann–Whitney statistic with mid-ranks for tied scores, which
//! equals the trapezoidal area under a ROC curve whose tie groups are single
//! diagonal steps. Anomalies (label `true`) are the positive class and
//! higher scores are more anomalous.

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::data::Dataset;
use crate::detector::DetectorSpec;
use crate::error::{Error, Result};
use crate::kernel::KernelParams;
use crate::scoring::{gdba_score, ScoreVector};

/// σ interval over which sweep reports summarize AUC mean and spread.
pub const ROBUST_SIGMA_RANGE: (f64, f64) = (0.02, 0.2);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AucResult {
    pub auc: f64,
    pub n_pos: usize,
    pub n_neg: usize,
    pub detector: String,
    pub params_digest: String,
}

fn class_counts(scores: &[f64], labels: &[bool]) -> Result<(usize, usize)> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            left: scores.len(),
            right: labels.len(),
        });
    }
    let n_pos = labels.iter().filter(|&&l| l).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass { n_pos, n_neg });
    }
    Ok((n_pos, n_neg))
}

/// Mann–Whitney AUC over raw scores.
pub fn auc_from_scores(scores: &[f64], labels: &[bool]) -> Result<f64> {
    let (n_pos, n_neg) = class_counts(scores, labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // twice the rank sum keeps mid-ranks integral
    let mut pos_rank2: u64 = 0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // ranks start+1 ..= end share their mean
        let mid2 = (start + 1 + end) as u64;
        let pos_in_group = order[start..end].iter().filter(|&&i| labels[i]).count() as u64;
        pos_rank2 += mid2 * pos_in_group;
        start = end;
    }
    let u2 = pos_rank2 - (n_pos as u64) * (n_pos as u64 + 1);
    Ok(u2 as f64 / (2.0 * n_pos as f64 * n_neg as f64))
}

pub fn auc(scores: &ScoreVector, labels: &[bool]) -> Result<AucResult> {
    let value = auc_from_scores(scores.scores(), labels)?;
    let n_pos = labels.iter().filter(|&&l| l).count();
    Ok(AucResult {
        auc: value,
        n_pos,
        n_neg: labels.len() - n_pos,
        detector: scores.detector().to_owned(),
        params_digest: scores.params_digest().to_owned(),
    })
}

/// ROC points from the strictest threshold down; `(fpr, tpr)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    pub points: Vec<(f64, f64)>,
}

impl RocCurve {
    /// Trapezoidal area.
    pub fn area(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0)
            .sum()
    }
}

pub fn roc_from_scores(scores: &[f64], labels: &[bool]) -> Result<RocCurve> {
    let (n_pos, n_neg) = class_counts(scores, labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            if labels[order[end]] {
                tp += 1;
            } else {
                fp += 1;
            }
            end += 1;
        }
        points.push((fp as f64 / n_neg as f64, tp as f64 / n_pos as f64));
        start = end;
    }
    Ok(RocCurve { points })
}

pub fn roc_curve(scores: &ScoreVector, labels: &[bool]) -> Result<RocCurve> {
    roc_from_scores(scores.scores(), labels)
}

/// Inclusive arithmetic σ grid, written `start:step:stop` on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepGrid {
    pub start: f64,
    pub step: f64,
    pub stop: f64,
}

impl SweepGrid {
    pub fn new(start: f64, step: f64, stop: f64) -> Result<Self> {
        if !(start.is_finite() && step.is_finite() && stop.is_finite()) {
            return Err(Error::InvalidGrid("values must be finite".into()));
        }
        if start <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "start must be > 0, got {start}"
            )));
        }
        if step <= 0.0 {
            return Err(Error::InvalidGrid(format!("step must be > 0, got {step}")));
        }
        if stop < start {
            return Err(Error::InvalidGrid(format!(
                "stop {stop} is below start {start}"
            )));
        }
        Ok(Self { start, step, stop })
    }

    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| {
                let v = self.start + i as f64 * self.step;
                // strip accumulation noise such as 0.30000000000000004
                (v * 1e12).round() / 1e12
            })
            .collect()
    }
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            start: 0.005,
            step: 0.005,
            stop: 1.0,
        }
    }
}

impl FromStr for SweepGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let parse = |p: &str| {
            p.parse::<f64>()
                .map_err(|_| Error::InvalidGrid(format!("`{p}` is not a number")))
        };
        match parts.as_slice() {
            [single] if !single.is_empty() => {
                let v = parse(single)?;
                SweepGrid::new(v, 1.0, v)
            }
            [start, step, stop] => SweepGrid::new(parse(start)?, parse(step)?, parse(stop)?),
            _ => Err(Error::InvalidGrid(format!(
                "expected start:step:stop, got `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub sigma: f64,
    pub auc: f64,
}

/// AUC mean and population standard deviation over a σ sub-range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RangeStats {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub grid: SweepGrid,
    pub rows: Vec<SweepRow>,
    pub best_sigma: f64,
    pub best_auc: f64,
    /// Statistics over [`ROBUST_SIGMA_RANGE`]; `None` if no grid point falls in it.
    pub robust: Option<RangeStats>,
}

impl SweepReport {
    pub fn auc_at(&self, sigma: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| (r.sigma - sigma).abs() < 1e-9)
            .map(|r| r.auc)
    }

    pub fn range_stats(&self, lo: f64, hi: f64) -> Option<RangeStats> {
        let v: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.sigma >= lo - 1e-12 && r.sigma <= hi + 1e-12)
            .map(|r| r.auc)
            .collect();
        if v.is_empty() {
            return None;
        }
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n;
        Some(RangeStats {
            lo,
            hi,
            count: v.len(),
            mean,
            std: var.sqrt(),
        })
    }

    /// Two-column `sigma,auc` CSV for plotting.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["sigma", "auc"])?;
        for r in &self.rows {
            w.write_record([r.sigma.to_string(), r.auc.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer_pretty(writer, self)?;
        Ok(())
    }
}

/// GDBA AUC at every σ of `grid`. The best row is the first one reaching
/// the maximum AUC.
pub fn sigma_sweep(data: &Dataset, grid: &SweepGrid, block_size: usize) -> Result<SweepReport> {
    let labels = data.labels().ok_or(Error::MissingLabels)?;
    class_counts(&vec![0.0; labels.len()], labels)?;
    let rows: Vec<SweepRow> = grid
        .values()
        .into_par_iter()
        .map(|sigma| {
            let scores = gdba_score(data, &KernelParams::new(sigma)?, block_size)?;
            Ok(SweepRow {
                sigma,
                auc: auc_from_scores(scores.scores(), labels)?,
            })
        })
        .collect::<Result<_>>()?;
    let best = rows
        .iter()
        .fold(None::<SweepRow>, |best, r| match best {
            Some(b) if b.auc >= r.auc => Some(b),
            _ => Some(*r),
        })
        .expect("grid has at least one value");
    let mut report = SweepReport {
        grid: *grid,
        rows,
        best_sigma: best.sigma,
        best_auc: best.auc,
        robust: None,
    };
    report.robust = report.range_stats(ROBUST_SIGMA_RANGE.0, ROBUST_SIGMA_RANGE.1);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub detector: String,
    pub auc: f64,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetResults {
    pub name: String,
    pub results: Vec<CellResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectorAverage {
    pub detector: String,
    pub auc: f64,
}

/// AUC of every detector on every dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonTable {
    pub detectors: Vec<String>,
    pub datasets: Vec<DatasetResults>,
    pub average: Vec<DetectorAverage>,
}

impl ComparisonTable {
    pub fn auc(&self, dataset: usize, detector: usize) -> f64 {
        self.datasets[dataset].results[detector].auc
    }

    /// One `detector,dataset,auc` row per cell, then one `avg` row per
    /// detector. Wall times are left out so reruns are byte-identical.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["detector", "dataset", "auc"])?;
        for (j, det) in self.detectors.iter().enumerate() {
            for ds in &self.datasets {
                w.write_record([det, &ds.name, &ds.results[j].auc.to_string()])?;
            }
        }
        for avg in &self.average {
            w.write_record([avg.detector.as_str(), "avg", &avg.auc.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// JSON nested by dataset, including per-cell wall time.
    pub fn write_json<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer_pretty(writer, self)?;
        Ok(())
    }
}

pub fn compare(
    datasets: &[(String, Dataset)],
    detectors: &[DetectorSpec],
) -> Result<ComparisonTable> {
    for (_, ds) in datasets {
        let labels = ds.labels().ok_or(Error::MissingLabels)?;
        class_counts(&vec![0.0; labels.len()], labels)?;
    }
    let cells: Vec<(usize, usize)> = (0..datasets.len())
        .flat_map(|i| (0..detectors.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<CellResult> = cells
        .into_par_iter()
        .map(|(i, j)| {
            let data = &datasets[i].1;
            let t0 = Instant::now();
            let scores = detectors[j].score(data)?;
            let wall_seconds = t0.elapsed().as_secs_f64();
            Ok(CellResult {
                detector: detectors[j].label(),
                auc: auc_from_scores(scores.scores(), data.labels().expect("checked"))?,
                wall_seconds,
            })
        })
        .collect::<Result<_>>()?;

    let mut it = results.into_iter();
    let per_dataset: Vec<DatasetResults> = datasets
        .iter()
        .map(|(name, _)| DatasetResults {
            name: name.clone(),
            results: it.by_ref().take(detectors.len()).collect(),
        })
        .collect();
    let labels: Vec<String> = detectors.iter().map(DetectorSpec::label).collect();
    let average = labels
        .iter()
        .enumerate()
        .map(|(j, det)| DetectorAverage {
            detector: det.clone(),
            auc: per_dataset.iter().map(|d| d.results[j].auc).sum::<f64>()
                / per_dataset.len().max(1) as f64,
        })
        .collect();
    Ok(ComparisonTable {
        detectors: labels,
        datasets: per_dataset,
        average,
    })
}

//! GDBA anomaly scores and the score CSV format shared by every detector.
//!
//! All detectors in this crate use one orientation: a higher score means
//! more anomalous. GDBA inverts the degree by negation, which orders samples
//! exactly like the reciprocal would since degrees are at least 1.

use std::cmp::Ordering;
use std::io::Write;

use serde::Serialize;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::kernel::{self, DegreeVector, KernelParams};

pub const GDBA: &str = "gdba";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreVector {
    scores: Vec<f64>,
    detector: String,
    params_digest: String,
}

impl ScoreVector {
    pub fn new(
        scores: Vec<f64>,
        detector: impl Into<String>,
        params_digest: impl Into<String>,
    ) -> Self {
        debug_assert!(scores.iter().all(|s| s.is_finite()));
        Self {
            scores,
            detector: detector.into(),
            params_digest: params_digest.into(),
        }
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn detector(&self) -> &str {
        &self.detector
    }

    pub fn params_digest(&self) -> &str {
        &self.params_digest
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Sample indices from most to least anomalous; ties keep index order.
    pub fn ranking(&self) -> Vec<usize> {
        argsort_desc(&self.scores)
    }
}

/// Anomaly score from an already computed degree vector.
pub fn gdba_from_degree(nu: &DegreeVector) -> ScoreVector {
    ScoreVector::new(
        nu.values().iter().map(|v| -v).collect(),
        GDBA,
        nu.params().digest(),
    )
}

pub fn gdba_score(data: &Dataset, params: &KernelParams, block_size: usize) -> Result<ScoreVector> {
    Ok(gdba_from_degree(&kernel::degree(data, params, block_size)?))
}

/// Indices sorting `values` ascending, ties broken by lower index.
pub fn argsort_asc(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    idx
}

/// Indices sorting `values` descending, ties broken by lower index.
pub fn argsort_desc(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| match values[b].total_cmp(&values[a]) {
        Ordering::Equal => a.cmp(&b),
        o => o,
    });
    idx
}

/// Writes `row_index,score[,label]` rows. Scores use Rust's shortest
/// round-trip formatting, so equal inputs give byte-identical files.
pub fn write_scores_csv<W: Write>(
    scores: &ScoreVector,
    labels: Option<&[bool]>,
    writer: W,
) -> Result<()> {
    if let Some(l) = labels {
        if l.len() != scores.len() {
            return Err(Error::DimensionMismatch {
                left: scores.len(),
                right: l.len(),
            });
        }
    }
    let mut w = csv::Writer::from_writer(writer);
    if labels.is_some() {
        w.write_record(["row_index", "score", "label"])?;
    } else {
        w.write_record(["row_index", "score"])?;
    }
    for (i, s) in scores.scores().iter().enumerate() {
        let mut rec = vec![i.to_string(), s.to_string()];
        if let Some(l) = labels {
            rec.push(if l[i] { "1" } else { "0" }.to_owned());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

//! Tabular input: CSV loading, validation, z-score standardization and the
//! two-cluster toy dataset with one planted local anomaly.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const DEFAULT_LABEL_COLUMN: &str = "label";

/// Validated numeric table as read from disk, before standardization.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    features: Matrix,
    labels: Option<Vec<bool>>,
    column_names: Vec<String>,
}

impl RawTable {
    pub fn new(
        features: Matrix,
        labels: Option<Vec<bool>>,
        column_names: Vec<String>,
    ) -> Result<Self> {
        validate(&features, labels.as_deref())?;
        if column_names.len() != features.cols() {
            return Err(Error::DimensionMismatch {
                left: features.cols(),
                right: column_names.len(),
            });
        }
        Ok(Self {
            features,
            labels,
            column_names,
        })
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    /// Per-row anomaly flags (`true` = anomaly), if the table has a label column.
    pub fn labels(&self) -> Option<&[bool]> {
        self.labels.as_deref()
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn n_samples(&self) -> usize {
        self.features.rows()
    }

    pub fn n_features(&self) -> usize {
        self.features.cols()
    }

    /// Keeps every normal row and only the first `keep` anomalous rows, in
    /// file order. This is how the unsupervised benchmark variants of
    /// classification datasets are derived (e.g. 357 benign + 10 malignant
    /// rows of the Wisconsin diagnostic breast cancer data).
    pub fn keep_first_anomalies(&self, keep: usize) -> Result<RawTable> {
        let labels = self.labels.as_ref().ok_or(Error::MissingLabels)?;
        let mut seen = 0;
        let rows: Vec<usize> = (0..labels.len())
            .filter(|&i| {
                if !labels[i] {
                    return true;
                }
                seen += 1;
                seen <= keep
            })
            .collect();
        Ok(RawTable {
            features: self.features.select_rows(&rows),
            labels: Some(rows.iter().map(|&i| labels[i]).collect()),
            column_names: self.column_names.clone(),
        })
    }
}

/// Mean and scale applied to one feature column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnScaling {
    pub mean: f64,
    /// Population standard deviation before scaling; the divisor is this value,
    /// or 1 for constant columns.
    pub std: f64,
    pub constant: bool,
}

/// Feature matrix ready for scoring, plus optional anomaly labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Matrix,
    labels: Option<Vec<bool>>,
    column_names: Vec<String>,
    scaling: Option<Vec<ColumnScaling>>,
}

impl Dataset {
    /// Wraps raw features without standardizing them.
    pub fn new(features: Matrix, labels: Option<Vec<bool>>) -> Result<Self> {
        validate(&features, labels.as_deref())?;
        let column_names = (0..features.cols()).map(|j| format!("x{j}")).collect();
        Ok(Self {
            features,
            labels,
            column_names,
            scaling: None,
        })
    }

    /// Unlabeled, unstandardized dataset from row vectors.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?, None)
    }

    pub fn with_labels(mut self, labels: Vec<bool>) -> Result<Self> {
        validate(&self.features, Some(&labels))?;
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> Option<&[bool]> {
        self.labels.as_deref()
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    /// Per-column scaling recorded by [`standardize`], `None` for raw datasets.
    pub fn scaling(&self) -> Option<&[ColumnScaling]> {
        self.scaling.as_deref()
    }

    pub fn n_samples(&self) -> usize {
        self.features.rows()
    }

    pub fn n_features(&self) -> usize {
        self.features.cols()
    }

    pub fn sample(&self, i: usize) -> &[f64] {
        self.features.row(i)
    }

    /// Dataset restricted to (and reordered by) the given row indices.
    pub fn select(&self, rows: &[usize]) -> Dataset {
        Dataset {
            features: self.features.select_rows(rows),
            labels: self
                .labels
                .as_ref()
                .map(|l| rows.iter().map(|&i| l[i]).collect()),
            column_names: self.column_names.clone(),
            scaling: self.scaling.clone(),
        }
    }

    /// Standardizes this dataset's features again; labels are kept.
    pub fn standardize(&self) -> Dataset {
        let (features, scaling) = standardize_matrix(&self.features);
        Dataset {
            features,
            labels: self.labels.clone(),
            column_names: self.column_names.clone(),
            scaling: Some(scaling),
        }
    }
}

fn validate(features: &Matrix, labels: Option<&[bool]>) -> Result<()> {
    if features.rows() == 0 {
        return Err(Error::EmptyDataset);
    }
    if features.cols() == 0 {
        return Err(Error::NoFeatures);
    }
    for (i, row) in features.row_iter().enumerate() {
        if let Some(j) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue {
                row: i,
                column: format!("#{j}"),
            });
        }
    }
    if let Some(l) = labels {
        if l.len() != features.rows() {
            return Err(Error::DimensionMismatch {
                left: features.rows(),
                right: l.len(),
            });
        }
    }
    Ok(())
}

/// Reads a CSV file. With `label_column = Some(name)` the named column must
/// exist and hold 0/1 flags (1 = anomaly); every other column is a feature.
pub fn load_csv(path: impl AsRef<Path>, label_column: Option<&str>) -> Result<RawTable> {
    read_csv(File::open(path)?, label_column)
}

/// [`load_csv`] over any reader.
pub fn read_csv<R: Read>(reader: R, label_column: Option<&str>) -> Result<RawTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    let label_idx = match label_column {
        Some(name) => Some(
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::MissingLabelColumn(name.to_owned()))?,
        ),
        None => None,
    };
    let column_names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|(j, _)| Some(*j) != label_idx)
        .map(|(_, h)| h.clone())
        .collect();

    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut n_rows = 0;
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() != header.len() {
            return Err(Error::RaggedRow {
                row,
                expected: header.len(),
                got: record.len(),
            });
        }
        for (j, cell) in record.iter().enumerate() {
            if Some(j) == label_idx {
                labels.push(parse_label(row, cell)?);
            } else {
                values.push(parse_cell(row, &header[j], cell)?);
            }
        }
        n_rows += 1;
    }
    if n_rows == 0 {
        return Err(Error::EmptyDataset);
    }
    let features = Matrix::from_vec(n_rows, column_names.len(), values)?;
    RawTable::new(features, label_idx.map(|_| labels), column_names)
}

fn parse_cell(row: usize, column: &str, text: &str) -> Result<f64> {
    let non_numeric = || Error::NonNumericCell {
        row,
        column: column.to_owned(),
        text: text.to_owned(),
    };
    let v: f64 = text.parse().map_err(|_| non_numeric())?;
    if v.is_finite() {
        return Ok(v);
    }
    // "NaN"/"inf" spelled out is a non-numeric cell; overflow like 1e400 is
    // a number that is not finite
    if text
        .chars()
        .any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E')
    {
        Err(non_numeric())
    } else {
        Err(Error::NonFiniteValue {
            row,
            column: column.to_owned(),
        })
    }
}

fn parse_label(row: usize, text: &str) -> Result<bool> {
    match text.parse::<f64>() {
        Ok(0.0) => Ok(false),
        Ok(1.0) => Ok(true),
        _ => Err(Error::InvalidLabel {
            row,
            text: text.to_owned(),
        }),
    }
}

/// Writes `table` back as CSV with 17 significant digits, which round-trips
/// every finite `f64` exactly. The label column (if any) is written last.
pub fn write_csv<W: Write>(table: &RawTable, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = table.column_names.iter().map(String::as_str).collect();
    if table.labels.is_some() {
        header.push(DEFAULT_LABEL_COLUMN);
    }
    w.write_record(&header)?;
    for (i, row) in table.features.row_iter().enumerate() {
        let mut rec: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        if let Some(l) = &table.labels {
            rec.push(if l[i] { "1" } else { "0" }.to_owned());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Z-scores each column with its population standard deviation.
pub fn standardize(table: &RawTable) -> Dataset {
    let (features, scaling) = standardize_matrix(&table.features);
    Dataset {
        features,
        labels: table.labels.clone(),
        column_names: table.column_names.clone(),
        scaling: Some(scaling),
    }
}

fn standardize_matrix(x: &Matrix) -> (Matrix, Vec<ColumnScaling>) {
    let n = x.rows() as f64;
    let mut out = x.clone();
    let mut scaling = Vec::with_capacity(x.cols());
    for j in 0..x.cols() {
        let col = x.column(j);
        let mean = col.iter().sum::<f64>() / n;
        let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let std = var.sqrt();
        // rounding noise in the mean of a constant column is not spread
        let constant = std <= 1e-12 * mean.abs().max(1.0);
        let divisor = if constant { 1.0 } else { std };
        for (i, v) in col.iter().enumerate() {
            out.set(i, j, (v - mean) / divisor);
        }
        scaling.push(ColumnScaling {
            mean,
            std: if constant { 0.0 } else { std },
            constant,
        });
    }
    (out, scaling)
}

/// Index of the planted anomaly in [`make_toy_fig2`].
pub const TOY_ANOMALY_INDEX: usize = 30;

/// Two 2-D Gaussian clusters plus one local anomaly, in raw Cartesian
/// coordinates (not standardized):
///
/// * rows 0..15: tight cluster, N((0, 0), 0.03² I)
/// * rows 15..30: looser cluster, N((1.5, 0), 0.12² I)
/// * row 30: the anomaly at (0.35, 0), the only row labeled 1
pub fn make_toy_fig2(seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(31);
    for (center, spread) in [((0.0, 0.0), 0.03), ((1.5, 0.0), 0.12)] {
        let noise = Normal::new(0.0, spread).expect("positive spread");
        for _ in 0..15 {
            rows.push([
                center.0 + noise.sample(&mut rng),
                center.1 + noise.sample(&mut rng),
            ]);
        }
    }
    rows.push([0.35, 0.0]);
    let labels = (0..rows.len()).map(|i| i == TOY_ANOMALY_INDEX).collect();
    Dataset::new(Matrix::from_rows(&rows).expect("fixed width"), Some(labels))
        .expect("toy data is finite")
}

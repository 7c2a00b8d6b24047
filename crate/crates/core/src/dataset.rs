//! Labeled feature matrices: CSV ingestion, z-score normalization, and
//! stratified train/test splitting.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary class tag. Malignant is the positive class everywhere in this
/// crate (it fixes tp/fn semantics and tie-breaking).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassLabel {
    Malignant,
    Benign,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 2] = [ClassLabel::Malignant, ClassLabel::Benign];

    pub fn as_str(&self) -> &'static str {
        match self {
            ClassLabel::Malignant => "malignant",
            ClassLabel::Benign => "benign",
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        // Tags are case-insensitive.
        match s.trim().to_ascii_lowercase().as_str() {
            "malignant" => Ok(ClassLabel::Malignant),
            "benign" => Ok(ClassLabel::Benign),
            other => Err(Error::Dataset(format!("unknown class tag '{other}'"))),
        }
    }
}

/// A samples-by-features real matrix with named columns and optional
/// per-sample class labels. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    values: Vec<f64>, // row-major, n_samples x n_features
    n_samples: usize,
    n_features: usize,
    feature_names: Vec<String>,
    labels: Option<Vec<ClassLabel>>,
}

impl FeatureMatrix {
    /// Build a matrix from row vectors, validating every invariant:
    /// distinct names, rectangular shape, finite values, and (when labels
    /// are present) matching length with at least two distinct classes.
    pub fn from_rows(
        rows: Vec<Vec<f64>>,
        feature_names: Vec<String>,
        labels: Option<Vec<ClassLabel>>,
    ) -> Result<FeatureMatrix> {
        let n_features = feature_names.len();
        let mut seen = HashSet::new();
        for name in &feature_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::Dataset(format!("duplicate feature name '{name}'")));
            }
        }
        let n_samples = rows.len();
        let mut values = Vec::with_capacity(n_samples * n_features);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_features {
                return Err(Error::Dataset(format!(
                    "row {i} has {} values, expected {n_features}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::Dataset(format!(
                        "non-finite value at row {i}, feature {j}"
                    )));
                }
                values.push(v);
            }
        }
        if let Some(ref labels) = labels {
            if labels.len() != n_samples {
                return Err(Error::Dataset(format!(
                    "{} labels for {n_samples} samples",
                    labels.len()
                )));
            }
            let distinct: HashSet<_> = labels.iter().collect();
            if distinct.len() < 2 {
                return Err(Error::Dataset(
                    "labels present but fewer than 2 distinct classes".into(),
                ));
            }
        }
        Ok(FeatureMatrix {
            values,
            n_samples,
            n_features,
            feature_names,
            labels,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn labels(&self) -> Option<&[ClassLabel]> {
        self.labels.as_deref()
    }

    pub fn value(&self, sample: usize, feature: usize) -> f64 {
        self.values[sample * self.n_features + feature]
    }

    pub fn row(&self, sample: usize) -> &[f64] {
        &self.values[sample * self.n_features..(sample + 1) * self.n_features]
    }

    pub fn column(&self, feature: usize) -> Vec<f64> {
        (0..self.n_samples).map(|i| self.value(i, feature)).collect()
    }

    /// Sample indices per class, in (malignant, benign) order.
    pub fn class_indices(&self) -> Result<(Vec<usize>, Vec<usize>)> {
        let labels = self
            .labels()
            .ok_or_else(|| Error::Dataset("labels required".into()))?;
        let mut malignant = Vec::new();
        let mut benign = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            match l {
                ClassLabel::Malignant => malignant.push(i),
                ClassLabel::Benign => benign.push(i),
            }
        }
        Ok((malignant, benign))
    }

    /// New matrix keeping only the given feature columns, in the given order.
    pub fn select_features(&self, indices: &[usize]) -> Result<FeatureMatrix> {
        for &j in indices {
            if j >= self.n_features {
                return Err(Error::Dataset(format!("feature index {j} out of range")));
            }
        }
        let names = indices
            .iter()
            .map(|&j| self.feature_names[j].clone())
            .collect();
        let rows = (0..self.n_samples)
            .map(|i| indices.iter().map(|&j| self.value(i, j)).collect())
            .collect();
        FeatureMatrix::from_rows(rows, names, self.labels.clone())
    }

    /// Like `select_features` but by column name.
    pub fn select_features_by_name(&self, names: &[String]) -> Result<FeatureMatrix> {
        let indices = names
            .iter()
            .map(|n| {
                self.feature_names
                    .iter()
                    .position(|f| f == n)
                    .ok_or_else(|| Error::Dataset(format!("unknown feature '{n}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.select_features(&indices)
    }

    /// New matrix keeping only the given sample rows, in the given order.
    pub fn select_samples(&self, indices: &[usize]) -> Result<FeatureMatrix> {
        for &i in indices {
            if i >= self.n_samples {
                return Err(Error::Dataset(format!("sample index {i} out of range")));
            }
        }
        let rows: Vec<Vec<f64>> = indices.iter().map(|&i| self.row(i).to_vec()).collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| indices.iter().map(|&i| l[i]).collect::<Vec<_>>());
        // A subset can legitimately be single-class (e.g. one CV fold's
        // class slice), so attach labels after the structural checks.
        let mut m = FeatureMatrix::from_rows(rows, self.feature_names.clone(), None)?;
        m.labels = labels;
        Ok(m)
    }

    /// Serialize to CSV with shortest round-trip decimal formatting, so a
    /// write/load cycle is bit-exact.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.feature_names.join(","));
        if self.labels.is_some() {
            out.push_str(",label");
        }
        out.push('\n');
        for i in 0..self.n_samples {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v}")).collect();
            out.push_str(&row.join(","));
            if let Some(labels) = &self.labels {
                out.push(',');
                out.push_str(labels[i].as_str());
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Parse a feature matrix from CSV text. The header row is mandatory; a
/// column named exactly `label` holds class tags.
pub fn parse_csv(text: &str) -> Result<FeatureMatrix> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Csv("empty file, header row required".into()))?;
    let columns: Vec<&str> = header.split(',').map(|s| s.trim()).collect();
    let label_col = columns.iter().position(|&c| c == "label");
    let feature_names: Vec<String> = columns
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != label_col)
        .map(|(_, c)| c.to_string())
        .collect();

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<ClassLabel> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(|s| s.trim()).collect();
        if cells.len() != columns.len() {
            return Err(Error::Csv(format!(
                "ragged row {lineno}: {} cells, expected {}",
                cells.len(),
                columns.len()
            )));
        }
        let mut row = Vec::with_capacity(feature_names.len());
        for (c, cell) in cells.iter().enumerate() {
            if Some(c) == label_col {
                labels.push(cell.parse()?);
            } else {
                if cell.is_empty() {
                    return Err(Error::Csv(format!("missing cell at row {lineno}, column {c}")));
                }
                let v: f64 = cell.parse().map_err(|_| {
                    Error::Csv(format!("non-numeric cell '{cell}' at row {lineno}, column {c}"))
                })?;
                row.push(v);
            }
        }
        rows.push(row);
    }
    if rows.len() < 2 {
        return Err(Error::Csv(format!("{} samples, at least 2 required", rows.len())));
    }
    let labels = if label_col.is_some() { Some(labels) } else { None };
    FeatureMatrix::from_rows(rows, feature_names, labels)
}

/// Load a feature matrix from a CSV file.
pub fn load_csv(path: &Path) -> Result<FeatureMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Csv(format!("{}: {e}", path.display())))?;
    parse_csv(&text)
}

/// Per-feature (mean, population std) record fitted by `zscore_normalize`,
/// reapplicable to held-out data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl Normalization {
    /// Fit on a matrix without transforming it.
    pub fn fit(m: &FeatureMatrix) -> Result<Normalization> {
        if m.n_samples() < 2 {
            return Err(Error::Dataset("normalization needs at least 2 samples".into()));
        }
        let n = m.n_samples() as f64;
        let mut means = Vec::with_capacity(m.n_features());
        let mut stds = Vec::with_capacity(m.n_features());
        for j in 0..m.n_features() {
            let col = m.column(j);
            let mean = col.iter().sum::<f64>() / n;
            let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            means.push(mean);
            stds.push(var.sqrt());
        }
        Ok(Normalization { means, stds })
    }

    /// Apply the fitted transform. Constant columns (std 0) map to all-zeros.
    pub fn apply(&self, m: &FeatureMatrix) -> Result<FeatureMatrix> {
        if self.means.len() != m.n_features() {
            return Err(Error::Dataset(format!(
                "normalization fitted on {} features, matrix has {}",
                self.means.len(),
                m.n_features()
            )));
        }
        let rows = (0..m.n_samples())
            .map(|i| {
                (0..m.n_features())
                    .map(|j| {
                        if self.stds[j] == 0.0 {
                            0.0
                        } else {
                            (m.value(i, j) - self.means[j]) / self.stds[j]
                        }
                    })
                    .collect()
            })
            .collect();
        FeatureMatrix::from_rows(rows, m.feature_names().to_vec(), m.labels().map(|l| l.to_vec()))
    }
}

/// Z-score each column to mean 0 and population std 1, returning the
/// transformed matrix and the fitted record.
pub fn zscore_normalize(m: &FeatureMatrix) -> Result<(FeatureMatrix, Normalization)> {
    let norm = Normalization::fit(m)?;
    let transformed = norm.apply(m)?;
    Ok((transformed, norm))
}

/// Disjoint train/test split with identical feature ordering.
#[derive(Debug, Clone)]
pub struct DatasetSplit {
    pub train: FeatureMatrix,
    pub test: FeatureMatrix,
    pub seed: u64,
}

/// Stratified split: per-class test counts equal round(class_count *
/// test_fraction); deterministic for a fixed seed.
pub fn stratified_split(m: &FeatureMatrix, test_fraction: f64, seed: u64) -> Result<DatasetSplit> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::Dataset(format!(
            "test_fraction must be in (0, 1), got {test_fraction}"
        )));
    }
    let (malignant, benign) = m.class_indices()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    for class in [&malignant, &benign] {
        if class.len() < 2 {
            return Err(Error::Dataset(format!(
                "class with {} samples cannot be split",
                class.len()
            )));
        }
        let mut shuffled = class.clone();
        shuffled.shuffle(&mut rng);
        let n_test = (class.len() as f64 * test_fraction).round() as usize;
        test_idx.extend_from_slice(&shuffled[..n_test]);
        train_idx.extend_from_slice(&shuffled[n_test..]);
    }
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    Ok(DatasetSplit {
        train: m.select_samples(&train_idx)?,
        test: m.select_samples(&test_idx)?,
        seed,
    })
}

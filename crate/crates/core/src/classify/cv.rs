//! Stratified k-fold cross-validation over the two classifiers.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{ClassLabel, FeatureMatrix};
use crate::error::{Error, Result};
use crate::metrics::{confusion, evaluate, ConfusionMatrix, Metrics};

use super::nb::{nb_predict, nb_train};
use super::svm::{svm_predict, svm_train, KernelSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CvConfig {
    pub folds: usize,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            folds: 10,
            seed: 0,
            stratified: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassifierSpec {
    NaiveBayes,
    Svm { kernel: KernelSpec, c: f64 },
}

impl ClassifierSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ClassifierSpec::NaiveBayes => "nb",
            ClassifierSpec::Svm { .. } => "svm",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub confusion: ConfusionMatrix,
    pub metrics: Metrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub folds: Vec<FoldResult>,
    pub pooled_confusion: ConfusionMatrix,
    pub pooled_metrics: Metrics,
}

/// Deterministic validation-fold assignment: per-class shuffle under the
/// seed, then round-robin dealing. Folds are pairwise disjoint and cover
/// every sample.
pub fn stratified_folds(
    labels: &[ClassLabel],
    folds: usize,
    seed: u64,
) -> Result<Vec<Vec<usize>>> {
    let mut malignant = Vec::new();
    let mut benign = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        match l {
            ClassLabel::Malignant => malignant.push(i),
            ClassLabel::Benign => benign.push(i),
        }
    }
    let min_class = malignant.len().min(benign.len());
    if folds < 2 || folds > min_class {
        return Err(Error::Classifier(format!(
            "cv: folds = {folds} invalid for min class size {min_class}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![Vec::new(); folds];
    for class in [&mut malignant, &mut benign] {
        class.shuffle(&mut rng);
        for (pos, &idx) in class.iter().enumerate() {
            assignment[pos % folds].push(idx);
        }
    }
    for fold in &mut assignment {
        fold.sort_unstable();
    }
    Ok(assignment)
}

/// Unstratified variant: one global shuffle, round-robin dealing.
pub fn plain_folds(n_samples: usize, folds: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if folds < 2 || folds > n_samples {
        return Err(Error::Classifier(format!(
            "cv: folds = {folds} invalid for {n_samples} samples"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices: Vec<usize> = (0..n_samples).collect();
    indices.shuffle(&mut rng);
    let mut assignment = vec![Vec::new(); folds];
    for (pos, &idx) in indices.iter().enumerate() {
        assignment[pos % folds].push(idx);
    }
    for fold in &mut assignment {
        fold.sort_unstable();
    }
    Ok(assignment)
}

/// Train on k-1 folds, predict the held-out fold, and report per-fold
/// confusions plus pooled metrics. Deterministic under the config seed.
pub fn cross_validate(
    m: &FeatureMatrix,
    classifier: &ClassifierSpec,
    cv: &CvConfig,
) -> Result<CvReport> {
    let labels = m
        .labels()
        .ok_or_else(|| Error::Classifier("cv: labels required".into()))?;
    let assignment = if cv.stratified {
        stratified_folds(labels, cv.folds, cv.seed)?
    } else {
        plain_folds(m.n_samples(), cv.folds, cv.seed)?
    };
    let mut folds = Vec::with_capacity(cv.folds);
    let mut pooled = ConfusionMatrix::default();
    for (fold_idx, validation) in assignment.iter().enumerate() {
        let train_idx: Vec<usize> = (0..m.n_samples())
            .filter(|i| !validation.contains(i))
            .collect();
        let train = m.select_samples(&train_idx)?;
        let truth: Vec<ClassLabel> = validation.iter().map(|&i| labels[i]).collect();
        let predictions = match classifier {
            ClassifierSpec::NaiveBayes => {
                let model = nb_train(&train)?;
                validation
                    .iter()
                    .map(|&i| nb_predict(&model, m.row(i)).map(|(l, _)| l))
                    .collect::<Result<Vec<_>>>()?
            }
            ClassifierSpec::Svm { kernel, c } => {
                // Per-fold seed keeps folds independent yet reproducible.
                let model = svm_train(&train, *kernel, *c, cv.seed.wrapping_add(fold_idx as u64))?;
                validation
                    .iter()
                    .map(|&i| svm_predict(&model, m.row(i)))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        let cm = confusion(&predictions, &truth)?;
        pooled = pooled.add(&cm);
        folds.push(FoldResult {
            confusion: cm,
            metrics: evaluate(&cm),
        });
    }
    Ok(CvReport {
        folds,
        pooled_confusion: pooled,
        pooled_metrics: evaluate(&pooled),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::ClassLabel::{Benign as B, Malignant as M};
    use std::collections::HashSet;

    #[test]
    fn fold_sizes_balanced() {
        let labels: Vec<ClassLabel> = (0..200).map(|i| if i < 100 { M } else { B }).collect();
        let folds = stratified_folds(&labels, 10, 1).unwrap();
        for fold in &folds {
            assert_eq!(fold.len(), 20);
        }
    }

    #[test]
    fn per_fold_minority_counts() {
        // 165 malignant, 35 benign, 10 folds: benign per fold is 3 or 4.
        let labels: Vec<ClassLabel> = (0..200).map(|i| if i < 165 { M } else { B }).collect();
        let folds = stratified_folds(&labels, 10, 5).unwrap();
        for fold in &folds {
            let benign = fold.iter().filter(|&&i| labels[i] == B).count();
            assert!(benign == 3 || benign == 4, "benign = {benign}");
        }
    }

    #[test]
    fn folds_partition_samples() {
        let labels: Vec<ClassLabel> = (0..47).map(|i| if i % 3 == 0 { M } else { B }).collect();
        let folds = stratified_folds(&labels, 5, 11).unwrap();
        let mut seen = HashSet::new();
        for fold in &folds {
            for &i in fold {
                assert!(seen.insert(i), "sample {i} in two folds");
            }
        }
        assert_eq!(seen.len(), 47);
    }

    #[test]
    fn folds_deterministic() {
        let labels: Vec<ClassLabel> = (0..60).map(|i| if i % 2 == 0 { M } else { B }).collect();
        assert_eq!(
            stratified_folds(&labels, 6, 42).unwrap(),
            stratified_folds(&labels, 6, 42).unwrap()
        );
        assert_ne!(
            stratified_folds(&labels, 6, 42).unwrap(),
            stratified_folds(&labels, 6, 43).unwrap()
        );
    }

    #[test]
    fn folds_limit_checks() {
        let labels: Vec<ClassLabel> = (0..10).map(|i| if i < 3 { M } else { B }).collect();
        assert!(stratified_folds(&labels, 4, 0).is_err()); // > min class size
        assert!(stratified_folds(&labels, 1, 0).is_err());
        assert!(stratified_folds(&labels, 3, 0).is_ok());
    }

    #[test]
    fn cross_validate_separable_data() {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..20 {
            rows.push(vec![3.0 + 0.1 * i as f64]);
            labels.push(M);
            rows.push(vec![-3.0 - 0.1 * i as f64]);
            labels.push(B);
        }
        let m = FeatureMatrix::from_rows(rows, vec!["f".into()], Some(labels)).unwrap();
        let cv = CvConfig { folds: 5, seed: 3, stratified: true };
        for spec in [
            ClassifierSpec::NaiveBayes,
            ClassifierSpec::Svm { kernel: KernelSpec::Linear, c: 1.0 },
        ] {
            let report = cross_validate(&m, &spec, &cv).unwrap();
            assert_eq!(report.folds.len(), 5);
            assert_eq!(report.pooled_confusion.total(), 40);
            assert_eq!(report.pooled_metrics.accuracy, Some(1.0));
        }
    }
}

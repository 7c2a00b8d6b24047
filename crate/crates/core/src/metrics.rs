//! Confusion-matrix construction and accuracy / sensitivity / specificity.
//! Malignant is the positive class.

use serde::{Deserialize, Serialize};

use crate::dataset::ClassLabel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }

    pub fn add(&self, other: &ConfusionMatrix) -> ConfusionMatrix {
        ConfusionMatrix {
            tp: self.tp + other.tp,
            tn: self.tn + other.tn,
            fp: self.fp + other.fp,
            fn_: self.fn_ + other.fn_,
        }
    }
}

/// Metric triple; a `None` marks a ratio with an empty denominator
/// (reported as "undefined", never NaN).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: Option<f64>,
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
}

fn fmt_metric(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.5}"),
        None => "undefined".to_string(),
    }
}

impl Metrics {
    /// 5-decimal fixed formatting as (accuracy, sensitivity, specificity).
    pub fn csv_fields(&self) -> (String, String, String) {
        (
            fmt_metric(self.accuracy),
            fmt_metric(self.sensitivity),
            fmt_metric(self.specificity),
        )
    }
}

/// Count the four confusion cells; malignant = positive.
pub fn confusion(predictions: &[ClassLabel], truth: &[ClassLabel]) -> Result<ConfusionMatrix> {
    if predictions.len() != truth.len() {
        return Err(Error::Metrics(format!(
            "{} predictions for {} truths",
            predictions.len(),
            truth.len()
        )));
    }
    let mut cm = ConfusionMatrix::default();
    for (p, t) in predictions.iter().zip(truth) {
        match (p, t) {
            (ClassLabel::Malignant, ClassLabel::Malignant) => cm.tp += 1,
            (ClassLabel::Benign, ClassLabel::Benign) => cm.tn += 1,
            (ClassLabel::Malignant, ClassLabel::Benign) => cm.fp += 1,
            (ClassLabel::Benign, ClassLabel::Malignant) => cm.fn_ += 1,
        }
    }
    Ok(cm)
}

/// Standard metric forms: accuracy = (tp+tn)/total, sensitivity =
/// tp/(tp+fn), specificity = tn/(tn+fp). Ratios with empty denominators
/// come back as None.
pub fn evaluate(cm: &ConfusionMatrix) -> Metrics {
    let ratio = |num: u64, den: u64| {
        if den == 0 {
            None
        } else {
            Some(num as f64 / den as f64)
        }
    };
    Metrics {
        accuracy: ratio(cm.tp + cm.tn, cm.total()),
        sensitivity: ratio(cm.tp, cm.tp + cm.fn_),
        specificity: ratio(cm.tn, cm.tn + cm.fp),
    }
}

//! Gaussian Naive Bayes with log-space posteriors.

use serde::{Deserialize, Serialize};

use crate::dataset::{ClassLabel, FeatureMatrix};
use crate::error::{Error, Result};

/// Class-conditional Gaussian parameters, classes in [malignant, benign]
/// order. Variances carry the smoothing floor and are strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNbModel {
    pub version: u32,
    pub priors: [f64; 2],
    pub means: [Vec<f64>; 2],
    pub variances: [Vec<f64>; 2],
}

/// Maximum-likelihood (population variance) Gaussian parameters per class
/// and feature, with variance smoothing 1e-9 times the largest overall
/// per-feature variance.
pub fn nb_train(m: &FeatureMatrix) -> Result<GaussianNbModel> {
    let (malignant, benign) = m.class_indices()?;
    for class in [&malignant, &benign] {
        if class.len() < 2 {
            return Err(Error::Classifier(format!(
                "naive bayes: class with {} samples, at least 2 required",
                class.len()
            )));
        }
    }
    let n = m.n_samples() as f64;
    let p = m.n_features();

    let mut max_overall_var: f64 = 0.0;
    for j in 0..p {
        let col = m.column(j);
        let mean = col.iter().sum::<f64>() / n;
        let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        max_overall_var = max_overall_var.max(var);
    }
    let floor = if max_overall_var > 0.0 {
        1e-9 * max_overall_var
    } else {
        1e-9
    };

    let mut priors = [0.0; 2];
    let mut means: [Vec<f64>; 2] = [vec![0.0; p], vec![0.0; p]];
    let mut variances: [Vec<f64>; 2] = [vec![0.0; p], vec![0.0; p]];
    for (c, class) in [&malignant, &benign].into_iter().enumerate() {
        let nc = class.len() as f64;
        priors[c] = nc / n;
        for j in 0..p {
            let vals: Vec<f64> = class.iter().map(|&i| m.value(i, j)).collect();
            let mean = vals.iter().sum::<f64>() / nc;
            let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / nc;
            means[c][j] = mean;
            variances[c][j] = var + floor;
        }
    }
    Ok(GaussianNbModel {
        version: 1,
        priors,
        means,
        variances,
    })
}

/// Predict a label and the normalized per-class posteriors (computed in
/// log space). Posterior ties break toward malignant.
pub fn nb_predict(model: &GaussianNbModel, x: &[f64]) -> Result<(ClassLabel, [f64; 2])> {
    let p = model.means[0].len();
    if x.len() != p {
        return Err(Error::Classifier(format!(
            "naive bayes: input has {} features, model expects {p}",
            x.len()
        )));
    }
    let mut log_post = [0.0; 2];
    for c in 0..2 {
        let mut lp = model.priors[c].ln();
        for j in 0..p {
            let var = model.variances[c][j];
            let d = x[j] - model.means[c][j];
            lp += -0.5 * (2.0 * std::f64::consts::PI * var).ln() - d * d / (2.0 * var);
        }
        log_post[c] = lp;
    }
    let max = log_post[0].max(log_post[1]);
    let e0 = (log_post[0] - max).exp();
    let e1 = (log_post[1] - max).exp();
    let z = e0 + e1;
    let posteriors = [e0 / z, e1 / z];
    let label = if posteriors[0] >= posteriors[1] {
        ClassLabel::Malignant
    } else {
        ClassLabel::Benign
    };
    Ok((label, posteriors))
}

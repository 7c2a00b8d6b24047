//! Deterministic synthetic feature matrices with planted informative
//! features, used by the test suites and as runnable demo inputs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dataset::{ClassLabel, FeatureMatrix};
use crate::error::{Error, Result};

/// A generated matrix plus the indices of its informative features.
#[derive(Debug, Clone)]
pub struct PlantedDataset {
    pub matrix: FeatureMatrix,
    pub informative: Vec<usize>,
}

/// Two balanced classes of standard-normal noise; the first
/// `n_informative` features get their class means separated by `effect`
/// standard deviations. Labels alternate malignant/benign so any prefix
/// keeps both classes. Fully determined by the seed.
pub fn planted_two_class(
    n_samples: usize,
    n_features: usize,
    n_informative: usize,
    effect: f64,
    seed: u64,
) -> Result<PlantedDataset> {
    if n_samples < 4 {
        return Err(Error::Dataset("synthetic: at least 4 samples".into()));
    }
    if n_informative > n_features || n_features == 0 {
        return Err(Error::Dataset(format!(
            "synthetic: {n_informative} informative of {n_features} features is invalid"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n_samples);
    let mut labels = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let label = if i % 2 == 0 {
            ClassLabel::Malignant
        } else {
            ClassLabel::Benign
        };
        let shift = match label {
            ClassLabel::Malignant => effect / 2.0,
            ClassLabel::Benign => -effect / 2.0,
        };
        let row: Vec<f64> = (0..n_features)
            .map(|j| {
                let noise: f64 = rng.sample(StandardNormal);
                if j < n_informative {
                    noise + shift
                } else {
                    noise
                }
            })
            .collect();
        rows.push(row);
        labels.push(label);
    }
    let names = (0..n_features).map(|j| format!("feat_{j:03}")).collect();
    let matrix = FeatureMatrix::from_rows(rows, names, Some(labels))?;
    Ok(PlantedDataset {
        matrix,
        informative: (0..n_informative).collect(),
    })
}

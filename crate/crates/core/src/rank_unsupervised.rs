//! Unsupervised feature scorers: Laplacian score, minimum-correlation
//! ranking, and multi-cluster feature selection (MCFS).

use serde::{Deserialize, Serialize};

use crate::dataset::FeatureMatrix;
use crate::error::{Error, Result};
use crate::lars::lars_coefficients;
use crate::linalg::{symmetric_eigen, SquareMatrix};
use crate::rank_supervised::{Direction, FeatureScores};

pub const DEFAULT_GRAPH_K: usize = 5;
pub const DEFAULT_N_CLUSTERS: usize = 2;
pub const DEFAULT_CARDINALITY: usize = 20;

/// Symmetrized kNN graph with heat-kernel weights, shared by the Laplacian
/// score and MCFS.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NeighborGraph {
    pub n: usize,
    pub k: usize,
    /// Row-major n x n symmetric weight matrix, zero diagonal, weights in (0, 1].
    pub weights: Vec<f64>,
}

impl NeighborGraph {
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    pub fn degree(&self, i: usize) -> f64 {
        (0..self.n).map(|j| self.weight(i, j)).sum()
    }
}

/// Build a kNN graph: an edge exists when either endpoint selects the
/// other among its k nearest (ties to the lowest index), weighted by the
/// heat kernel exp(-d^2 / t) with t the mean squared pairwise distance.
/// Duplicate points get weight 1.
pub fn knn_graph(m: &FeatureMatrix, k: usize) -> Result<NeighborGraph> {
    let n = m.n_samples();
    if k == 0 || k >= n {
        return Err(Error::Ranking(format!("knn: k = {k} invalid for {n} samples")));
    }
    let mut d2 = vec![0.0; n * n];
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let dist: f64 = m
                .row(i)
                .iter()
                .zip(m.row(j))
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            d2[i * n + j] = dist;
            d2[j * n + i] = dist;
            total += dist;
        }
    }
    let t = total / (n * (n - 1) / 2) as f64;

    let mut selected = vec![false; n * n];
    for i in 0..n {
        let mut order: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        order.sort_by(|&a, &b| {
            d2[i * n + a]
                .partial_cmp(&d2[i * n + b])
                .unwrap()
                .then(a.cmp(&b))
        });
        for &j in &order[..k] {
            selected[i * n + j] = true;
        }
    }
    let mut weights = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j && (selected[i * n + j] || selected[j * n + i]) {
                let w = if t == 0.0 { 1.0 } else { (-d2[i * n + j] / t).exp() };
                weights[i * n + j] = w;
            }
        }
    }
    Ok(NeighborGraph { n, k, weights })
}

/// Laplacian score per feature (lower is better): with L = D - W and the
/// degree-weighted centering f~ = f - (f'D1 / 1'D1) 1, the score is
/// f~'L f~ / f~'D f~. Constant features get the worst score, one past the
/// largest finite score.
pub fn laplacian_scores(m: &FeatureMatrix, g: &NeighborGraph) -> Result<FeatureScores> {
    let n = m.n_samples();
    if g.n != n {
        return Err(Error::Ranking("laplacian: graph size mismatch".into()));
    }
    let degrees: Vec<f64> = (0..n).map(|i| g.degree(i)).collect();
    let total_degree: f64 = degrees.iter().sum();

    let mut raw = Vec::with_capacity(m.n_features());
    for j in 0..m.n_features() {
        let col = m.column(j);
        let mean = col.iter().sum::<f64>() / n as f64;
        let variance = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
        if variance == 0.0 {
            raw.push(None);
            continue;
        }
        let weighted_mean =
            col.iter().zip(&degrees).map(|(f, d)| f * d).sum::<f64>() / total_degree;
        let centered: Vec<f64> = col.iter().map(|f| f - weighted_mean).collect();
        let d_quad: f64 = centered.iter().zip(&degrees).map(|(f, d)| f * f * d).sum();
        let mut w_quad = 0.0;
        for a in 0..n {
            for b in 0..n {
                w_quad += g.weight(a, b) * centered[a] * centered[b];
            }
        }
        let l_quad = d_quad - w_quad;
        raw.push(Some(l_quad / d_quad));
    }
    let max_finite = raw
        .iter()
        .filter_map(|s| *s)
        .fold(f64::NEG_INFINITY, f64::max);
    let worst = if max_finite.is_finite() { max_finite + 1.0 } else { 1.0 };
    let scores: Vec<f64> = raw.into_iter().map(|s| s.unwrap_or(worst)).collect();
    FeatureScores::new("laplacian", scores, Direction::LowerIsBetter)
}

/// Mean absolute Pearson correlation of each feature against all others
/// (lower is better). Zero-variance features correlate 0 with everything.
pub fn min_correlation_scores(m: &FeatureMatrix) -> Result<FeatureScores> {
    let p = m.n_features();
    let n = m.n_samples();
    if p < 2 {
        return Err(Error::Ranking("min-correlation: at least 2 features required".into()));
    }
    if n < 3 {
        return Err(Error::Ranking("min-correlation: at least 3 samples required".into()));
    }
    let columns: Vec<Vec<f64>> = (0..p).map(|j| m.column(j)).collect();
    let means: Vec<f64> = columns.iter().map(|c| c.iter().sum::<f64>() / n as f64).collect();
    let norms: Vec<f64> = columns
        .iter()
        .zip(&means)
        .map(|(c, mu)| c.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>().sqrt())
        .collect();
    let mut scores = vec![0.0; p];
    for i in 0..p {
        let mut sum = 0.0;
        for j in 0..p {
            if i == j {
                continue;
            }
            let rho = if norms[i] == 0.0 || norms[j] == 0.0 {
                0.0
            } else {
                let dot: f64 = columns[i]
                    .iter()
                    .zip(&columns[j])
                    .map(|(a, b)| (a - means[i]) * (b - means[j]))
                    .sum();
                dot / (norms[i] * norms[j])
            };
            sum += rho.abs();
        }
        scores[i] = sum / (p - 1) as f64;
    }
    FeatureScores::new("min_correlation", scores, Direction::LowerIsBetter)
}

/// Nontrivial generalized eigenpairs of L y = lambda D y, smallest
/// eigenvalues first, solved densely through the symmetric form
/// D^{-1/2} L D^{-1/2}. The trivial constant eigenvector is excluded.
pub fn spectral_embedding(g: &NeighborGraph, count: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = g.n;
    if count >= n {
        return Err(Error::Ranking(format!(
            "spectral embedding: {count} vectors requested from {n} nodes"
        )));
    }
    let degrees: Vec<f64> = (0..n).map(|i| g.degree(i)).collect();
    if degrees.iter().any(|&d| d <= 0.0) {
        return Err(Error::Ranking("spectral embedding: isolated node".into()));
    }
    let inv_sqrt: Vec<f64> = degrees.iter().map(|d| 1.0 / d.sqrt()).collect();
    let mut s = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let l = if i == j { degrees[i] } else { 0.0 } - g.weight(i, j);
            s.set(i, j, inv_sqrt[i] * l * inv_sqrt[j]);
        }
    }
    let (values, vectors) = symmetric_eigen(&s)?;
    // The trivial direction is u0 = D^{1/2} 1 (eigenvalue 0). When the
    // graph is disconnected that eigenvalue is degenerate and the solver
    // returns an arbitrary basis of the null space, so rather than
    // dropping the first vector we project u0 out of every candidate and
    // skip the one that collapses.
    let mut u0: Vec<f64> = degrees.iter().map(|d| d.sqrt()).collect();
    let u0_norm = u0.iter().map(|v| v * v).sum::<f64>().sqrt();
    u0.iter_mut().for_each(|v| *v /= u0_norm);
    let mut pairs = Vec::with_capacity(count);
    for (lambda, u) in values.into_iter().zip(vectors) {
        if pairs.len() == count {
            break;
        }
        let c: f64 = u.iter().zip(&u0).map(|(a, b)| a * b).sum();
        let mut v: Vec<f64> = u.iter().zip(&u0).map(|(a, b)| a - c * b).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue; // the trivial vector itself
        }
        v.iter_mut().for_each(|x| *x /= norm);
        let y: Vec<f64> = v.iter().zip(&inv_sqrt).map(|(vi, s)| vi * s).collect();
        pairs.push((lambda, y));
    }
    Ok(pairs)
}

/// MCFS: embed the graph spectrally, regress each nontrivial eigenvector
/// on the (centered, unit-norm) feature columns with an L1 path capped at
/// `cardinality` active features, and score each feature by its largest
/// absolute coefficient across eigenvectors.
pub fn mcfs_scores(
    m: &FeatureMatrix,
    g: &NeighborGraph,
    n_clusters: usize,
    cardinality: usize,
) -> Result<FeatureScores> {
    let p = m.n_features();
    if n_clusters == 0 || n_clusters >= m.n_samples() {
        return Err(Error::Ranking(format!(
            "mcfs: n_clusters = {n_clusters} invalid for {} samples",
            m.n_samples()
        )));
    }
    if cardinality == 0 || cardinality > p {
        return Err(Error::Ranking(format!(
            "mcfs: cardinality = {cardinality} invalid for {p} features"
        )));
    }
    let n = m.n_samples();
    let columns: Vec<Vec<f64>> = (0..p)
        .map(|j| {
            let mut c = m.column(j);
            let mean = c.iter().sum::<f64>() / n as f64;
            c.iter_mut().for_each(|v| *v -= mean);
            let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 1e-12 {
                c.iter_mut().for_each(|v| *v /= norm);
            }
            c
        })
        .collect();

    let embedding = spectral_embedding(g, n_clusters)?;
    let mut scores = vec![0.0; p];
    for (_, y) in &embedding {
        let mean = y.iter().sum::<f64>() / n as f64;
        let target: Vec<f64> = y.iter().map(|v| v - mean).collect();
        let coeffs = lars_coefficients(&columns, &target, cardinality)?;
        for (s, c) in scores.iter_mut().zip(&coeffs) {
            *s = f64::max(*s, c.abs());
        }
    }
    FeatureScores::new("mcfs", scores, Direction::HigherIsBetter)
}

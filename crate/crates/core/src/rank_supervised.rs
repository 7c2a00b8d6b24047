//! Supervised feature scorers: Fisher score, ReliefF, and per-feature
//! neighborhood component analysis (fNCA).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::FeatureMatrix;
use crate::error::{Error, Result};

/// Whether larger or smaller scores mean more discriminative; consumed by
/// rank fusion when converting scores to rank positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    HigherIsBetter,
    LowerIsBetter,
}

/// Per-feature scores from one ranking algorithm. All stored values are
/// finite; degenerate cases are resolved before storage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScores {
    pub algorithm: String,
    pub scores: Vec<f64>,
    pub direction: Direction,
}

impl FeatureScores {
    pub fn new(algorithm: &str, scores: Vec<f64>, direction: Direction) -> Result<FeatureScores> {
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(Error::Ranking(format!(
                "{algorithm}: non-finite score produced"
            )));
        }
        Ok(FeatureScores {
            algorithm: algorithm.to_string(),
            scores,
            direction,
        })
    }
}

const FISHER_EPS: f64 = 1e-12;

/// Fisher score per feature: weighted between-class scatter over weighted
/// within-class scatter (population variances), with an epsilon guard in
/// the denominator. Constant features score 0.
pub fn fisher_scores(m: &FeatureMatrix) -> Result<FeatureScores> {
    let (malignant, benign) = m.class_indices()?;
    if malignant.len() < 2 || benign.len() < 2 {
        return Err(Error::Ranking(
            "fisher: each class needs at least 2 samples".into(),
        ));
    }
    let n = m.n_samples() as f64;
    let mut scores = Vec::with_capacity(m.n_features());
    for j in 0..m.n_features() {
        let col = m.column(j);
        let grand_mean = col.iter().sum::<f64>() / n;
        let mut numerator = 0.0;
        let mut denominator = 0.0;
        for class in [&malignant, &benign] {
            let nc = class.len() as f64;
            let mean = class.iter().map(|&i| col[i]).sum::<f64>() / nc;
            let var = class
                .iter()
                .map(|&i| (col[i] - mean) * (col[i] - mean))
                .sum::<f64>()
                / nc;
            numerator += nc * (mean - grand_mean) * (mean - grand_mean);
            denominator += nc * var;
        }
        scores.push(numerator / (denominator + FISHER_EPS));
    }
    FeatureScores::new("fisher", scores, Direction::HigherIsBetter)
}

/// Two-class ReliefF. For every evaluated instance the weight of each
/// feature is decreased by the mean range-normalized difference to the k
/// nearest hits and increased by the mean difference to the k nearest
/// misses, then averaged over the evaluated instances. `iterations = None`
/// evaluates every sample (deterministic); `Some(t)` evaluates the first t
/// samples in index order. Neighbor ties break toward the lowest sample
/// index. Weights lie in [-1, 1].
pub fn relieff_weights(
    m: &FeatureMatrix,
    k: usize,
    iterations: Option<usize>,
) -> Result<FeatureScores> {
    let labels = m
        .labels()
        .ok_or_else(|| Error::Ranking("relieff: labels required".into()))?;
    let (malignant, benign) = m.class_indices()?;
    let min_class = malignant.len().min(benign.len());
    if k == 0 || k > min_class.saturating_sub(1) {
        return Err(Error::Ranking(format!(
            "relieff: k = {k} too large for min class size {min_class}"
        )));
    }
    let n = m.n_samples();
    let p = m.n_features();
    let n_eval = iterations.unwrap_or(n).min(n);
    if n_eval == 0 {
        return Err(Error::Ranking("relieff: zero iterations".into()));
    }

    // Per-feature range over the whole matrix; zero-range features have
    // difference 0 everywhere.
    let mut ranges = vec![0.0; p];
    for j in 0..p {
        let col = m.column(j);
        let min = col.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        ranges[j] = max - min;
    }
    let diff = |a: &[f64], b: &[f64], j: usize| -> f64 {
        if ranges[j] == 0.0 {
            0.0
        } else {
            (a[j] - b[j]).abs() / ranges[j]
        }
    };
    let distance = |a: &[f64], b: &[f64]| -> f64 { (0..p).map(|j| diff(a, b, j)).sum() };

    let mut weights = vec![0.0; p];
    for i in 0..n_eval {
        let xi = m.row(i);
        let mut hits: Vec<(f64, usize)> = Vec::new();
        let mut misses: Vec<(f64, usize)> = Vec::new();
        for j in 0..n {
            if j == i {
                continue;
            }
            let d = distance(xi, m.row(j));
            if labels[j] == labels[i] {
                hits.push((d, j));
            } else {
                misses.push((d, j));
            }
        }
        let by_dist_then_index =
            |a: &(f64, usize), b: &(f64, usize)| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1));
        hits.sort_by(by_dist_then_index);
        misses.sort_by(by_dist_then_index);
        for j in 0..p {
            let hit_diff: f64 =
                hits[..k].iter().map(|&(_, h)| diff(xi, m.row(h), j)).sum::<f64>() / k as f64;
            let miss_diff: f64 =
                misses[..k].iter().map(|&(_, h)| diff(xi, m.row(h), j)).sum::<f64>() / k as f64;
            weights[j] += miss_diff - hit_diff;
        }
    }
    for w in &mut weights {
        *w /= n_eval as f64;
    }
    FeatureScores::new("relieff", weights, Direction::HigherIsBetter)
}

/// Diagnostics and scores from the fNCA gradient ascent.
#[derive(Debug, Clone)]
pub struct NcaResult {
    pub scores: FeatureScores,
    pub converged: bool,
    pub iterations: usize,
    pub objective: f64,
    /// Objective value after every accepted step (non-decreasing).
    pub objective_trace: Vec<f64>,
}

const NCA_MAX_ITER: usize = 500;
const NCA_REL_TOL: f64 = 1e-6;
const NCA_INITIAL_STEP: f64 = 0.1;
const NCA_MIN_STEP: f64 = 1e-12;

/// Per-feature NCA weighting: maximize the soft leave-one-out
/// correct-class probability minus lambda * sum(w^2), with neighbor
/// distances d_ij = sum_f w_f^2 |x_if - x_jf|. Gradient ascent with
/// backtracking step halving; only improving steps are accepted. Returns
/// the squared weights (non-negative scores). Convergence is a flag, not
/// an error; the best iterate is always returned.
pub fn nca_weights(m: &FeatureMatrix, lambda: f64) -> Result<NcaResult> {
    let labels = m
        .labels()
        .ok_or_else(|| Error::Ranking("nca: labels required".into()))?;
    if m.n_samples() < 3 {
        return Err(Error::Ranking("nca: at least 3 samples required".into()));
    }
    if lambda < 0.0 {
        return Err(Error::Ranking("nca: lambda must be non-negative".into()));
    }
    let p = m.n_features();

    let mut w = vec![1.0; p];
    let (mut obj, mut grad) = nca_objective_grad(m, labels, &w, lambda, true);
    let mut trace = vec![obj];
    let mut best_obj = obj;
    let mut best_w = w.clone();
    let mut converged = false;
    let mut iterations = 0;
    // The trial step adapts between iterations: a Barzilai-Borwein estimate
    // from the last accepted move when it is positive, otherwise the last
    // accepted step doubled. Backtracking still halves on rejection, so
    // every accepted move improves the objective.
    let mut step = NCA_INITIAL_STEP;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;

    for iter in 0..NCA_MAX_ITER {
        iterations = iter + 1;
        let grad_vec = grad.as_ref().unwrap();
        if let Some((w_prev, g_prev)) = &prev {
            let mut ss = 0.0;
            let mut sy = 0.0;
            for f in 0..p {
                let s = w[f] - w_prev[f];
                let y = g_prev[f] - grad_vec[f];
                ss += s * s;
                sy += s * y;
            }
            if sy > 0.0 && ss > 0.0 {
                step = (ss / sy).clamp(NCA_MIN_STEP, 1e3);
            }
        }
        let mut accepted = None;
        while step > NCA_MIN_STEP {
            let w_new: Vec<f64> =
                w.iter().zip(grad_vec).map(|(wi, gi)| wi + step * gi).collect();
            // Fused objective + gradient: with the adaptive step most trials
            // are accepted first try, and the accepted trial's gradient seeds
            // the next iteration without a second O(n^2 p) pass.
            let (obj_new, grad_new) = nca_objective_grad(m, labels, &w_new, lambda, true);
            if obj_new > obj {
                accepted = Some((w_new, obj_new, grad_new));
                step *= 2.0;
                break;
            }
            step /= 2.0;
        }
        let Some((w_new, obj_new, grad_new)) = accepted else {
            converged = true; // no improving direction left
            break;
        };
        let rel_change = (obj_new - obj) / obj.abs().max(1e-12);
        prev = Some((w.clone(), grad.take().unwrap()));
        w = w_new;
        obj = obj_new;
        grad = grad_new;
        trace.push(obj);
        if obj > best_obj {
            best_obj = obj;
            best_w = w.clone();
        }
        if rel_change < NCA_REL_TOL {
            converged = true;
            break;
        }
    }

    let scores: Vec<f64> = best_w.iter().map(|wi| wi * wi).collect();
    Ok(NcaResult {
        scores: FeatureScores::new("fnca", scores, Direction::HigherIsBetter)?,
        converged,
        iterations,
        objective: best_obj,
        objective_trace: trace,
    })
}

/// Objective (and optionally gradient) of the regularized NCA criterion.
/// Parallel over samples; O(n^2 * p).
fn nca_objective_grad(
    m: &FeatureMatrix,
    labels: &[crate::dataset::ClassLabel],
    w: &[f64],
    lambda: f64,
    want_grad: bool,
) -> (f64, Option<Vec<f64>>) {
    let n = m.n_samples();
    let p = m.n_features();
    let v: Vec<f64> = w.iter().map(|wi| wi * wi).collect();

    let (sum_p, grad_acc) = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = m.row(i);
            let mut d = vec![0.0; n];
            // Row buffer of |x_if - x_lf| so the gradient pass reads it back
            // instead of recomputing the diffs (n * p, reused per sample).
            let mut zbuf = vec![0.0; n * p];
            let mut d_min = f64::INFINITY;
            for l in 0..n {
                if l == i {
                    continue;
                }
                let xl = m.row(l);
                let zrow = &mut zbuf[l * p..(l + 1) * p];
                let mut dist = 0.0;
                for f in 0..p {
                    let zf = (xi[f] - xl[f]).abs();
                    zrow[f] = zf;
                    dist += v[f] * zf;
                }
                d[l] = dist;
                if dist < d_min {
                    d_min = dist;
                }
            }
            // Softmax over l != i, stabilized by the minimum distance.
            // Terms more than 36 nats above the minimum are < 2.4e-16
            // relative to the largest term and are dropped (this keeps the
            // later gradient pass proportional to the effective
            // neighborhood size instead of n).
            let cutoff = d_min + 36.0;
            let mut z = 0.0;
            for l in 0..n {
                if l != i {
                    d[l] = if d[l] > cutoff { 0.0 } else { (-(d[l] - d_min)).exp() };
                    z += d[l];
                }
            }
            let mut p_i = 0.0;
            for l in 0..n {
                if l != i && labels[l] == labels[i] {
                    p_i += d[l] / z;
                }
            }
            if !want_grad {
                return (p_i, None);
            }
            // A_f = sum_l p_il z_ilf, B_f = sum_{l in class} p_il z_ilf.
            // partial_f = sum_l p_il (p_i - [same class]) z_ilf; the scalar
            // coefficient is hoisted so the inner loop is a pure axpy over
            // the cached diff row.
            let mut partial = vec![0.0; p];
            for l in 0..n {
                if l == i || d[l] == 0.0 {
                    continue;
                }
                let same = labels[l] == labels[i];
                let coeff = d[l] / z * (p_i - if same { 1.0 } else { 0.0 });
                let zrow = &zbuf[l * p..(l + 1) * p];
                for f in 0..p {
                    partial[f] += coeff * zrow[f];
                }
            }
            (p_i, Some(partial))
        })
        .reduce(
            || (0.0, None::<Vec<f64>>),
            |(pa, ga), (pb, gb)| {
                let g = match (ga, gb) {
                    (Some(mut a), Some(b)) => {
                        for (ai, bi) in a.iter_mut().zip(&b) {
                            *ai += bi;
                        }
                        Some(a)
                    }
                    (Some(a), None) | (None, Some(a)) => Some(a),
                    (None, None) => None,
                };
                (pa + pb, g)
            },
        );

    let objective = sum_p / n as f64 - lambda * v.iter().sum::<f64>();
    let grad = if want_grad {
        let acc = grad_acc.unwrap_or_else(|| vec![0.0; p]);
        Some(
            (0..p)
                .map(|f| 2.0 * w[f] * (acc[f] / n as f64) - 2.0 * lambda * w[f])
                .collect(),
        )
    } else {
        None
    };
    (objective, grad)
}

//! Binary SVM trained by sequential minimal optimization on the dual.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{ClassLabel, FeatureMatrix};
use crate::error::{Error, Result};
use crate::linalg::solve_linear;

pub const KKT_TOL: f64 = 1e-3;
pub const MAX_PASSES: usize = 10_000;
const ALPHA_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelSpec {
    Linear,
    Rbf { gamma: f64 },
}

impl KernelSpec {
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            KernelSpec::Linear => a.iter().zip(b).map(|(x, y)| x * y).sum(),
            KernelSpec::Rbf { gamma } => {
                let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                (-gamma * d2).exp()
            }
        }
    }
}

/// Trained SVM: support vectors with positive dual variables, their
/// labels, and the bias of the decision function
/// f(x) = sum_i alpha_i y_i K(x_i, x) + b.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub version: u32,
    pub kernel: KernelSpec,
    pub c: f64,
    pub support_vectors: Vec<Vec<f64>>,
    pub alphas: Vec<f64>,
    pub labels: Vec<f64>,
    pub bias: f64,
    pub max_kkt_violation: f64,
}

impl SvmModel {
    pub fn decision(&self, x: &[f64]) -> Result<f64> {
        if let Some(sv) = self.support_vectors.first() {
            if sv.len() != x.len() {
                return Err(Error::Classifier(format!(
                    "svm: input has {} features, model expects {}",
                    x.len(),
                    sv.len()
                )));
            }
        }
        let mut f = self.bias;
        for ((sv, &a), &y) in self
            .support_vectors
            .iter()
            .zip(&self.alphas)
            .zip(&self.labels)
        {
            f += a * y * self.kernel.eval(sv, x);
        }
        Ok(f)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<SvmModel> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Raw SMO output over the full training set, for dual-level checks.
#[derive(Debug, Clone)]
pub struct SmoSolution {
    pub alphas: Vec<f64>,
    pub bias: f64,
    pub max_kkt_violation: f64,
}

struct Smo<'a> {
    y: &'a [f64],
    c: f64,
    alphas: Vec<f64>,
    errors: Vec<f64>,
    bias: f64,
    gram: Vec<f64>,
    n: usize,
    rng: ChaCha8Rng,
}

impl<'a> Smo<'a> {
    fn new(x: &[Vec<f64>], y: &'a [f64], kernel: KernelSpec, c: f64, seed: u64) -> Smo<'a> {
        let n = x.len();
        let mut gram = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let k = kernel.eval(&x[i], &x[j]);
                gram[i * n + j] = k;
                gram[j * n + i] = k;
            }
        }
        // With all alphas zero, f(x_i) = 0 so E_i = -y_i.
        let errors = y.iter().map(|&yi| -yi).collect();
        Smo {
            y,
            c,
            alphas: vec![0.0; n],
            errors,
            bias: 0.0,
            gram,
            n,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn k(&self, i: usize, j: usize) -> f64 {
        self.gram[i * self.n + j]
    }

    fn non_bound(&self, i: usize) -> bool {
        self.alphas[i] > ALPHA_EPS && self.alphas[i] < self.c - ALPHA_EPS
    }

    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let (a1_old, a2_old) = (self.alphas[i1], self.alphas[i2]);
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let (e1, e2) = (self.errors[i1], self.errors[i2]);
        let s = y1 * y2;
        let (low, high) = if s < 0.0 {
            ((a2_old - a1_old).max(0.0), (self.c + a2_old - a1_old).min(self.c))
        } else {
            ((a1_old + a2_old - self.c).max(0.0), (a1_old + a2_old).min(self.c))
        };
        if low >= high {
            return false;
        }
        let k11 = self.k(i1, i1);
        let k12 = self.k(i1, i2);
        let k22 = self.k(i2, i2);
        let eta = k11 + k22 - 2.0 * k12;
        let mut a2 = if eta > 0.0 {
            (a2_old + y2 * (e1 - e2) / eta).clamp(low, high)
        } else {
            // Degenerate curvature: evaluate the objective at both clip ends.
            let f1 = y1 * (e1 + self.bias) - a1_old * k11 - s * a2_old * k12;
            let f2 = y2 * (e2 + self.bias) - s * a1_old * k12 - a2_old * k22;
            let l1 = a1_old + s * (a2_old - low);
            let h1 = a1_old + s * (a2_old - high);
            let obj_low = l1 * f1 + low * f2 + 0.5 * l1 * l1 * k11 + 0.5 * low * low * k22
                + s * low * l1 * k12;
            let obj_high = h1 * f1 + high * f2 + 0.5 * h1 * h1 * k11 + 0.5 * high * high * k22
                + s * high * h1 * k12;
            if obj_low < obj_high - 1e-12 {
                low
            } else if obj_high < obj_low - 1e-12 {
                high
            } else {
                return false;
            }
        };
        if (a2 - a2_old).abs() < ALPHA_EPS * (a2 + a2_old + ALPHA_EPS) {
            return false;
        }
        if a2 < ALPHA_EPS {
            a2 = 0.0;
        } else if a2 > self.c - ALPHA_EPS {
            a2 = self.c;
        }
        let a1 = a1_old + s * (a2_old - a2);
        let a1 = if a1 < ALPHA_EPS {
            0.0
        } else if a1 > self.c - ALPHA_EPS {
            self.c
        } else {
            a1
        };

        let b1 = e1 + y1 * (a1 - a1_old) * k11 + y2 * (a2 - a2_old) * k12 + self.bias;
        let b2 = e2 + y1 * (a1 - a1_old) * k12 + y2 * (a2 - a2_old) * k22 + self.bias;
        let new_bias = if a1 > 0.0 && a1 < self.c {
            b1
        } else if a2 > 0.0 && a2 < self.c {
            b2
        } else {
            (b1 + b2) / 2.0
        };
        let delta_b = new_bias - self.bias;
        self.bias = new_bias;
        self.alphas[i1] = a1;
        self.alphas[i2] = a2;
        for i in 0..self.n {
            self.errors[i] += y1 * (a1 - a1_old) * self.k(i1, i)
                + y2 * (a2 - a2_old) * self.k(i2, i)
                - delta_b;
        }
        self.errors[i1] = self.decision_value(i1) - self.y[i1];
        self.errors[i2] = self.decision_value(i2) - self.y[i2];
        true
    }

    fn decision_value(&self, i: usize) -> f64 {
        let mut f = -self.bias;
        for j in 0..self.n {
            if self.alphas[j] > 0.0 {
                f += self.alphas[j] * self.y[j] * self.k(j, i);
            }
        }
        f
    }

    fn examine(&mut self, i2: usize) -> bool {
        let y2 = self.y[i2];
        let a2 = self.alphas[i2];
        let e2 = self.errors[i2];
        let r2 = e2 * y2;
        let violates = (r2 < -KKT_TOL && a2 < self.c) || (r2 > KKT_TOL && a2 > 0.0);
        if !violates {
            return false;
        }
        // First-order heuristic: the partner maximizing |E1 - E2|.
        let mut best: Option<(f64, usize)> = None;
        for i in 0..self.n {
            if i != i2 && self.non_bound(i) {
                let gap = (self.errors[i] - e2).abs();
                if best.map_or(true, |(g, _)| gap > g) {
                    best = Some((gap, i));
                }
            }
        }
        if let Some((_, i1)) = best {
            if self.take_step(i1, i2) {
                return true;
            }
        }
        // Fallback: non-bound examples from a seeded random start.
        let start = self.rng.gen_range(0..self.n);
        for off in 0..self.n {
            let i1 = (start + off) % self.n;
            if i1 != i2 && self.non_bound(i1) && self.take_step(i1, i2) {
                return true;
            }
        }
        let start = self.rng.gen_range(0..self.n);
        for off in 0..self.n {
            let i1 = (start + off) % self.n;
            if i1 != i2 && self.take_step(i1, i2) {
                return true;
            }
        }
        false
    }

    fn max_kkt_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            // E_i = f(x_i) - y_i, so y_i f(x_i) = y_i E_i + 1.
            let yf = self.y[i] * self.errors[i] + 1.0;
            let v = if self.alphas[i] <= ALPHA_EPS {
                (1.0 - yf).max(0.0)
            } else if self.alphas[i] >= self.c - ALPHA_EPS {
                (yf - 1.0).max(0.0)
            } else {
                (yf - 1.0).abs()
            };
            worst = worst.max(v);
        }
        worst
    }

    /// With no free support vectors the KKT conditions pin the bias only
    /// to an interval, and the pairwise `(b1+b2)/2` updates can leave it
    /// outside. Center it in the interval implied by the bound alphas
    /// (free support vectors pin it from both sides).
    fn recenter_bias(&mut self) {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for i in 0..self.n {
            // E_i = G_i - bias - y_i, so G_i - y_i = E_i + bias.
            let h = self.errors[i] + self.bias;
            let at_zero = self.alphas[i] <= ALPHA_EPS;
            let at_c = self.alphas[i] >= self.c - ALPHA_EPS;
            let positive = self.y[i] > 0.0;
            let free = !at_zero && !at_c;
            if free || (at_zero && positive) || (at_c && !positive) {
                hi = hi.min(h);
            }
            if free || (at_zero && !positive) || (at_c && positive) {
                lo = lo.max(h);
            }
        }
        let new_bias = if lo.is_finite() && hi.is_finite() {
            (lo + hi) / 2.0
        } else if lo.is_finite() {
            lo
        } else if hi.is_finite() {
            hi
        } else {
            return;
        };
        let delta = new_bias - self.bias;
        self.bias = new_bias;
        for e in &mut self.errors {
            *e -= delta;
        }
    }

    /// Once SMO has converged to KKT_TOL, the partition of the alphas into
    /// {0, C, free} is settled but the free values are only tolerance-
    /// accurate. Solve the stationarity system on the free set exactly
    /// (fixing the bound alphas) to pin the dual down to linear-solver
    /// precision; revert if the refined point leaves the box or worsens
    /// the audit.
    fn polish(&mut self) {
        let free: Vec<usize> = (0..self.n).filter(|&i| self.non_bound(i)).collect();
        if free.is_empty() {
            return;
        }
        let nf = free.len();
        let dim = nf + 1;
        let mut a = vec![vec![0.0; dim]; dim];
        let mut rhs = vec![0.0; dim];
        for (r, &i) in free.iter().enumerate() {
            for (cidx, &j) in free.iter().enumerate() {
                a[r][cidx] = self.y[i] * self.y[j] * self.k(i, j);
            }
            a[r][nf] = self.y[i];
            let bound_term: f64 = (0..self.n)
                .filter(|&j| self.alphas[j] >= self.c - ALPHA_EPS)
                .map(|j| self.y[i] * self.y[j] * self.k(i, j) * self.c)
                .sum();
            rhs[r] = 1.0 - bound_term;
        }
        for (cidx, &j) in free.iter().enumerate() {
            a[nf][cidx] = self.y[j];
        }
        rhs[nf] = -(0..self.n)
            .filter(|&j| self.alphas[j] >= self.c - ALPHA_EPS)
            .map(|j| self.y[j] * self.c)
            .sum::<f64>();
        let sol = match solve_linear(a, rhs) {
            Ok(s) => s,
            Err(_) => return,
        };
        if sol[..nf]
            .iter()
            .any(|&v| !(v > -1e-9 && v < self.c + 1e-9))
        {
            return;
        }
        let before = self.max_kkt_violation();
        let saved_alphas = self.alphas.clone();
        let saved_errors = self.errors.clone();
        let saved_bias = self.bias;
        for (r, &i) in free.iter().enumerate() {
            self.alphas[i] = sol[r].clamp(0.0, self.c);
        }
        for i in 0..self.n {
            self.errors[i] = self.decision_value(i) - self.y[i];
        }
        self.recenter_bias();
        if self.max_kkt_violation() > before {
            self.alphas = saved_alphas;
            self.errors = saved_errors;
            self.bias = saved_bias;
        }
    }

    fn solve(mut self) -> Result<SmoSolution> {
        let mut passes = 0;
        // Outer rounds guard against error-cache drift: after the sweep
        // loop settles, errors are recomputed exactly and the KKT audit
        // either passes or triggers another round.
        for _ in 0..3 {
            let mut examine_all = true;
            let mut num_changed = 0;
            while num_changed > 0 || examine_all {
                passes += 1;
                if passes > MAX_PASSES {
                    let violation = self.max_kkt_violation();
                    return Err(Error::SvmNonConvergence { violation, passes });
                }
                num_changed = 0;
                for i in 0..self.n {
                    if (examine_all || self.non_bound(i)) && self.examine(i) {
                        num_changed += 1;
                    }
                }
                if examine_all {
                    examine_all = false;
                } else if num_changed == 0 {
                    examine_all = true;
                }
                // A full sweep with no changes ends the loop: examine_all
                // was just consumed and num_changed is 0.
                if !examine_all && num_changed == 0 {
                    break;
                }
            }
            for i in 0..self.n {
                self.errors[i] = self.decision_value(i) - self.y[i];
            }
            self.recenter_bias();
            if self.max_kkt_violation() <= KKT_TOL {
                self.polish();
                return Ok(SmoSolution {
                    bias: -self.bias,
                    max_kkt_violation: self.max_kkt_violation(),
                    alphas: self.alphas,
                });
            }
        }
        let violation = self.max_kkt_violation();
        Err(Error::SvmNonConvergence { violation, passes })
    }
}

/// Solve the SVM dual with SMO over explicit sample/label slices
/// (labels in {-1, +1}). Returns the full dual vector.
pub fn smo_solve(
    x: &[Vec<f64>],
    y: &[f64],
    kernel: KernelSpec,
    c: f64,
    seed: u64,
) -> Result<SmoSolution> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::Classifier("svm: empty or mismatched training set".into()));
    }
    if y.iter().any(|&v| v != 1.0 && v != -1.0) {
        return Err(Error::Classifier("svm: labels must be -1 or +1".into()));
    }
    if !(c > 0.0) {
        return Err(Error::Classifier(format!("svm: C must be positive, got {c}")));
    }
    Smo::new(x, y, kernel, c, seed).solve()
}

/// Train an SVM on a labeled feature matrix; malignant maps to +1.
pub fn svm_train(
    m: &FeatureMatrix,
    kernel: KernelSpec,
    c: f64,
    seed: u64,
) -> Result<SvmModel> {
    let labels = m
        .labels()
        .ok_or_else(|| Error::Classifier("svm: labels required".into()))?;
    let x: Vec<Vec<f64>> = (0..m.n_samples()).map(|i| m.row(i).to_vec()).collect();
    let y: Vec<f64> = labels
        .iter()
        .map(|l| if *l == ClassLabel::Malignant { 1.0 } else { -1.0 })
        .collect();
    let solution = smo_solve(&x, &y, kernel, c, seed)?;
    let mut support_vectors = Vec::new();
    let mut alphas = Vec::new();
    let mut sv_labels = Vec::new();
    for i in 0..x.len() {
        if solution.alphas[i] > 0.0 {
            support_vectors.push(x[i].clone());
            alphas.push(solution.alphas[i]);
            sv_labels.push(y[i]);
        }
    }
    Ok(SvmModel {
        version: 1,
        kernel,
        c,
        support_vectors,
        alphas,
        labels: sv_labels,
        bias: solution.bias,
        max_kkt_violation: solution.max_kkt_violation,
    })
}

/// Sign of the decision function; f(x) = 0 breaks toward malignant.
pub fn svm_predict(model: &SvmModel, x: &[f64]) -> Result<ClassLabel> {
    let f = model.decision(x)?;
    Ok(if f >= 0.0 {
        ClassLabel::Malignant
    } else {
        ClassLabel::Benign
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::ClassLabel::{Benign as B, Malignant as M};

    fn matrix(rows: Vec<Vec<f64>>, labels: Vec<ClassLabel>) -> FeatureMatrix {
        let p = rows[0].len();
        let names = (0..p).map(|j| format!("f{j}")).collect();
        FeatureMatrix::from_rows(rows, names, Some(labels)).unwrap()
    }

    #[test]
    fn two_point_symmetric_problem() {
        let m = matrix(vec![vec![1.0], vec![-1.0]], vec![M, B]);
        let model = svm_train(&m, KernelSpec::Linear, 100.0, 0).unwrap();
        // Boundary at 0: f(-0.5) < 0 and f(0.7) > 0.
        assert!(model.decision(&[-0.5]).unwrap() < 0.0);
        assert!(model.decision(&[0.7]).unwrap() > 0.0);
        assert_eq!(svm_predict(&model, &[0.7]).unwrap(), M);
        assert!(model.decision(&[0.0]).unwrap().abs() < 1e-6);
    }

    #[test]
    fn xor_linear_fails_rbf_succeeds() {
        let rows = vec![
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
        ];
        let labels = vec![M, M, B, B];
        let m = matrix(rows.clone(), labels.clone());
        let linear = svm_train(&m, KernelSpec::Linear, 1.0, 0).unwrap();
        let mut linear_correct = 0;
        let rbf = svm_train(&m, KernelSpec::Rbf { gamma: 1.0 }, 100.0, 0).unwrap();
        let mut rbf_correct = 0;
        for (row, label) in rows.iter().zip(&labels) {
            if svm_predict(&linear, row).unwrap() == *label {
                linear_correct += 1;
            }
            if svm_predict(&rbf, row).unwrap() == *label {
                rbf_correct += 1;
            }
        }
        assert!(linear_correct < 4, "XOR is not linearly separable");
        assert_eq!(rbf_correct, 4);
    }

    #[test]
    fn dual_feasibility_invariants() {
        let rows = vec![
            vec![1.0, 2.0],
            vec![2.0, 1.5],
            vec![-1.0, -1.0],
            vec![-2.0, -0.5],
            vec![0.3, 0.1],
            vec![-0.3, -0.2],
        ];
        let labels = vec![M, M, B, B, M, B];
        let m = matrix(rows, labels);
        for c in [0.5, 1.0, 10.0] {
            let model = svm_train(&m, KernelSpec::Linear, c, 3).unwrap();
            let alpha_dot_y: f64 = model
                .alphas
                .iter()
                .zip(&model.labels)
                .map(|(a, y)| a * y)
                .sum();
            assert!(alpha_dot_y.abs() <= 1e-8, "sum alpha_i y_i = {alpha_dot_y}");
            for &a in &model.alphas {
                assert!(a > 0.0 && a <= c);
            }
            assert!(model.max_kkt_violation <= KKT_TOL);
        }
    }

    #[test]
    fn separable_data_perfect_training_accuracy() {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..10 {
            rows.push(vec![2.0 + 0.2 * i as f64, 1.0]);
            labels.push(M);
            rows.push(vec![-2.0 - 0.2 * i as f64, -1.0]);
            labels.push(B);
        }
        let m = matrix(rows.clone(), labels.clone());
        let model = svm_train(&m, KernelSpec::Linear, 1e6, 0).unwrap();
        for (row, label) in rows.iter().zip(&labels) {
            assert_eq!(svm_predict(&model, row).unwrap(), *label);
        }
    }

    #[test]
    fn free_support_vectors_sit_on_margin() {
        let rows = vec![
            vec![1.5, 1.0],
            vec![2.0, 2.0],
            vec![-1.5, -1.0],
            vec![-2.0, -2.0],
            vec![1.0, 1.5],
            vec![-1.0, -1.5],
        ];
        let labels = vec![M, M, B, B, M, B];
        let m = matrix(rows, labels);
        let model = svm_train(&m, KernelSpec::Linear, 1.0, 0).unwrap();
        for ((sv, &a), &y) in model
            .support_vectors
            .iter()
            .zip(&model.alphas)
            .zip(&model.labels)
        {
            if a > 1e-6 && a < model.c - 1e-6 {
                let margin = y * model.decision(sv).unwrap();
                assert!((margin - 1.0).abs() < 1e-2, "margin {margin}");
            }
        }
    }

    #[test]
    fn prediction_invariant_to_training_order() {
        let rows = vec![
            vec![1.0, 0.3],
            vec![1.4, -0.2],
            vec![0.9, 0.8],
            vec![-1.2, 0.1],
            vec![-0.8, -0.6],
            vec![-1.5, 0.4],
        ];
        let labels = vec![M, M, M, B, B, B];
        let m1 = matrix(rows.clone(), labels.clone());
        let perm = [4usize, 1, 5, 0, 3, 2];
        let rows2: Vec<Vec<f64>> = perm.iter().map(|&i| rows[i].clone()).collect();
        let labels2: Vec<ClassLabel> = perm.iter().map(|&i| labels[i]).collect();
        let m2 = matrix(rows2, labels2);
        let model1 = svm_train(&m1, KernelSpec::Linear, 1.0, 7).unwrap();
        let model2 = svm_train(&m2, KernelSpec::Linear, 1.0, 99).unwrap();
        for i in -10..=10 {
            for j in -10..=10 {
                let x = [i as f64 / 5.0, j as f64 / 5.0];
                assert_eq!(
                    svm_predict(&model1, &x).unwrap(),
                    svm_predict(&model2, &x).unwrap(),
                    "at {x:?}"
                );
            }
        }
    }

    #[test]
    fn model_json_round_trip() {
        let m = matrix(vec![vec![1.0], vec![-1.0], vec![0.8], vec![-0.7]], vec![M, B, M, B]);
        let model = svm_train(&m, KernelSpec::Rbf { gamma: 0.5 }, 2.0, 0).unwrap();
        let json = model.to_json().unwrap();
        let back = SvmModel::from_json(&json).unwrap();
        assert_eq!(model, back);
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(smo_solve(&[], &[], KernelSpec::Linear, 1.0, 0).is_err());
        assert!(smo_solve(
            &[vec![1.0]],
            &[0.5],
            KernelSpec::Linear,
            1.0,
            0
        )
        .is_err());
        assert!(smo_solve(
            &[vec![1.0], vec![2.0]],
            &[1.0, -1.0],
            KernelSpec::Linear,
            -1.0,
            0
        )
        .is_err());
    }
}

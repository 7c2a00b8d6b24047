//! One-way ANOVA F-test per feature with an upper-tail F p-value; keeps
//! the features significant at a configurable level.

use serde::{Deserialize, Serialize};

use crate::dataset::FeatureMatrix;
use crate::error::{Error, Result};
use crate::special::betainc_regularized;

pub const DEFAULT_ALPHA: f64 = 0.05;

/// Outcome of the per-feature one-way ANOVA test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnovaResult {
    pub feature_index: usize,
    pub f_statistic: f64,
    pub p_value: f64,
    pub significant: bool,
}

/// One-way ANOVA F statistic: MS_between / MS_within with (k-1, N-k)
/// degrees of freedom. Returns +inf when the within-group variance is zero
/// but the between-group effect is not, and 0 when both are zero.
pub fn f_statistic(groups: &[Vec<f64>]) -> Result<f64> {
    let k = groups.len();
    if k < 2 {
        return Err(Error::Anova(format!("{k} groups, at least 2 required")));
    }
    let n: usize = groups.iter().map(|g| g.len()).sum();
    if groups.iter().any(|g| g.is_empty()) {
        return Err(Error::Anova("empty group".into()));
    }
    if n <= k {
        return Err(Error::Anova(format!(
            "degenerate degrees of freedom: {n} samples across {k} groups"
        )));
    }
    let grand_mean = groups.iter().flatten().sum::<f64>() / n as f64;
    let mut ss_between = 0.0;
    let mut ss_within = 0.0;
    for g in groups {
        let m = g.iter().sum::<f64>() / g.len() as f64;
        ss_between += g.len() as f64 * (m - grand_mean) * (m - grand_mean);
        ss_within += g.iter().map(|v| (v - m) * (v - m)).sum::<f64>();
    }
    let ms_between = ss_between / (k - 1) as f64;
    let ms_within = ss_within / (n - k) as f64;
    if ms_within == 0.0 {
        return Ok(if ms_between > 0.0 { f64::INFINITY } else { 0.0 });
    }
    Ok(ms_between / ms_within)
}

/// Upper-tail p-value of the F(df1, df2) distribution, computed as
/// I_x(df2/2, df1/2) with x = df2 / (df2 + df1 * f).
pub fn f_pvalue(f: f64, df1: usize, df2: usize) -> Result<f64> {
    if f.is_nan() || f < 0.0 {
        return Err(Error::Anova(format!("invalid F statistic {f}")));
    }
    if df1 == 0 || df2 == 0 {
        return Err(Error::Anova("degrees of freedom must be positive".into()));
    }
    if f.is_infinite() {
        return Ok(0.0);
    }
    if f == 0.0 {
        return Ok(1.0);
    }
    let (d1, d2) = (df1 as f64, df2 as f64);
    let x = d2 / (d2 + d1 * f);
    Ok(betainc_regularized(d2 / 2.0, d1 / 2.0, x))
}

/// Run the per-feature ANOVA over the label classes and keep the features
/// with p < alpha, original order preserved.
pub fn filter_features(
    m: &FeatureMatrix,
    alpha: f64,
) -> Result<(Vec<AnovaResult>, FeatureMatrix)> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Anova(format!("alpha must be in (0, 1), got {alpha}")));
    }
    let (malignant, benign) = m.class_indices()?;
    let k = 2;
    let n = m.n_samples();
    let mut results = Vec::with_capacity(m.n_features());
    let mut kept = Vec::new();
    for j in 0..m.n_features() {
        let col = m.column(j);
        let groups = vec![
            malignant.iter().map(|&i| col[i]).collect::<Vec<_>>(),
            benign.iter().map(|&i| col[i]).collect::<Vec<_>>(),
        ];
        let f = f_statistic(&groups)?;
        let p = f_pvalue(f, k - 1, n - k)?;
        let significant = p < alpha;
        if significant {
            kept.push(j);
        }
        results.push(AnovaResult {
            feature_index: j,
            f_statistic: f,
            p_value: p,
            significant,
        });
    }
    if kept.is_empty() {
        return Err(Error::Anova(format!(
            "no feature significant at alpha = {alpha}"
        )));
    }
    let reduced = m.select_features(&kept)?;
    Ok((results, reduced))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_statistic_hand_computed() {
        // SSB = 13.5, MSW = 1 -> F = 13.5.
        let f = f_statistic(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        assert!((f - 13.5).abs() < 1e-12);
    }

    #[test]
    fn f_statistic_identical_means() {
        let f = f_statistic(&[vec![1.0, 2.0, 3.0], vec![3.0, 2.0, 1.0]]).unwrap();
        assert_eq!(f, 0.0);
    }

    #[test]
    fn f_statistic_zero_within_variance() {
        let f = f_statistic(&[vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        assert!(f.is_infinite());
        let f0 = f_statistic(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(f0, 0.0);
    }

    #[test]
    fn f_statistic_degenerate_dof() {
        assert!(f_statistic(&[vec![1.0], vec![2.0]]).is_err());
        assert!(f_statistic(&[vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn f_statistic_equals_pooled_t_squared() {
        // Two-class F equals the squared pooled two-sample t statistic.
        let a = vec![0.3, 1.7, -0.5, 2.2, 0.9];
        let b = vec![2.1, 3.3, 2.8, 4.0];
        let (na, nb) = (a.len() as f64, b.len() as f64);
        let ma = a.iter().sum::<f64>() / na;
        let mb = b.iter().sum::<f64>() / nb;
        let ssa = a.iter().map(|v| (v - ma) * (v - ma)).sum::<f64>();
        let ssb = b.iter().map(|v| (v - mb) * (v - mb)).sum::<f64>();
        let sp2 = (ssa + ssb) / (na + nb - 2.0);
        let t = (ma - mb) / (sp2 * (1.0 / na + 1.0 / nb)).sqrt();
        let f = f_statistic(&[a, b]).unwrap();
        assert!((f - t * t).abs() / f < 1e-9);
    }

    #[test]
    fn f_statistic_affine_invariance() {
        let a = vec![1.0, 2.5, 0.3];
        let b = vec![4.2, 3.3, 5.0, 4.4];
        let f1 = f_statistic(&[a.clone(), b.clone()]).unwrap();
        let scale = |g: &[f64]| g.iter().map(|v| -3.7 * v + 11.0).collect::<Vec<_>>();
        let f2 = f_statistic(&[scale(&a), scale(&b)]).unwrap();
        assert!((f1 - f2).abs() / f1 < 1e-9);
    }

    #[test]
    fn f_pvalue_boundaries() {
        assert_eq!(f_pvalue(0.0, 1, 4).unwrap(), 1.0);
        assert_eq!(f_pvalue(f64::INFINITY, 1, 4).unwrap(), 0.0);
        assert!(f_pvalue(f64::NAN, 1, 4).is_err());
        assert!(f_pvalue(-1.0, 1, 4).is_err());
    }

    #[test]
    fn f_pvalue_published_value() {
        // F = 13.5 on (1, 4) dof -> p ~ 0.0213.
        let p = f_pvalue(13.5, 1, 4).unwrap();
        assert!((p - 0.0213).abs() < 1e-3, "p = {p}");
    }

    #[test]
    fn f_pvalue_monotone_in_f() {
        let mut last = 1.0;
        for i in 0..50 {
            let f = i as f64 * 0.5;
            let p = f_pvalue(f, 3, 17).unwrap();
            assert!(p <= last + 1e-15);
            last = p;
        }
    }

    #[test]
    fn filter_keeps_significant_features_in_order() {
        use crate::dataset::{ClassLabel, FeatureMatrix};
        // Feature 0 and 2 separate the classes strongly; feature 1 is noise
        // shared across classes.
        let rows = vec![
            vec![0.0, 5.0, 10.0],
            vec![0.1, 4.0, 10.2],
            vec![0.2, 6.0, 10.1],
            vec![5.0, 5.5, 20.0],
            vec![5.1, 4.5, 20.1],
            vec![5.2, 5.0, 20.2],
        ];
        let labels = vec![
            ClassLabel::Malignant,
            ClassLabel::Malignant,
            ClassLabel::Malignant,
            ClassLabel::Benign,
            ClassLabel::Benign,
            ClassLabel::Benign,
        ];
        let m = FeatureMatrix::from_rows(
            rows,
            vec!["a".into(), "b".into(), "c".into()],
            Some(labels),
        )
        .unwrap();
        let (results, reduced) = filter_features(&m, 0.05).unwrap();
        assert_eq!(results.len(), 3);
        assert!(results[0].significant);
        assert!(!results[1].significant);
        assert!(results[2].significant);
        assert_eq!(reduced.feature_names(), &["a".to_string(), "c".to_string()]);
    }

    #[test]
    fn filter_rejects_bad_alpha_and_empty_result() {
        use crate::dataset::{ClassLabel, FeatureMatrix};
        let rows = vec![vec![1.0], vec![2.0], vec![1.5], vec![1.8]];
        let labels = vec![
            ClassLabel::Malignant,
            ClassLabel::Malignant,
            ClassLabel::Benign,
            ClassLabel::Benign,
        ];
        let m = FeatureMatrix::from_rows(rows, vec!["f".into()], Some(labels)).unwrap();
        assert!(filter_features(&m, 0.0).is_err());
        assert!(filter_features(&m, 1.0).is_err());
        // Single noisy feature: nothing survives at a tiny alpha.
        let err = filter_features(&m, 1e-12).unwrap_err();
        assert!(err.to_string().contains("no feature significant"));
    }
}

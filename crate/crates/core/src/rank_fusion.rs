//! Rank fusion: convert per-algorithm scores to rank positions, average
//! them with equal weight, and take top-k prefixes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rank_supervised::{Direction, FeatureScores};

/// Which group of ranking algorithms produced a fused list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankingFamily {
    Supervised,
    Unsupervised,
}

impl std::fmt::Display for RankingFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RankingFamily::Supervised => f.write_str("supervised"),
            RankingFamily::Unsupervised => f.write_str("unsupervised"),
        }
    }
}

/// One fused ranking row: a feature, its three per-algorithm rank
/// positions, and their arithmetic mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingEntry {
    pub feature_name: String,
    pub algorithm_ranks: [f64; 3],
    pub averaged_score: f64,
}

/// A fused ranking list sorted by ascending averaged score; ties broken
/// lexicographically by feature name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingList {
    pub family: RankingFamily,
    pub entries: Vec<RankingEntry>,
}

/// Convert scores to rank positions: rank 1 is the most discriminative
/// under the algorithm's direction flag; ties get the arithmetic mean of
/// the tied positions (fractional ranks).
pub fn scores_to_ranks(s: &FeatureScores) -> Vec<f64> {
    let n = s.scores.len();
    let mut order: Vec<usize> = (0..n).collect();
    match s.direction {
        Direction::HigherIsBetter => {
            order.sort_by(|&a, &b| s.scores[b].partial_cmp(&s.scores[a]).unwrap())
        }
        Direction::LowerIsBetter => {
            order.sort_by(|&a, &b| s.scores[a].partial_cmp(&s.scores[b]).unwrap())
        }
    }
    let mut ranks = vec![0.0; n];
    let mut pos = 0;
    while pos < n {
        let mut end = pos + 1;
        while end < n && s.scores[order[end]] == s.scores[order[pos]] {
            end += 1;
        }
        // Positions pos+1 ..= end share the mean rank.
        let mean_rank = (pos + 1 + end) as f64 / 2.0;
        for &idx in &order[pos..end] {
            ranks[idx] = mean_rank;
        }
        pos = end;
    }
    ranks
}

/// Average three rank vectors with equal weight into a sorted ranking
/// list.
pub fn average_ranks(
    feature_names: &[String],
    r1: &[f64],
    r2: &[f64],
    r3: &[f64],
    family: RankingFamily,
) -> Result<RankingList> {
    let n = feature_names.len();
    if r1.len() != n || r2.len() != n || r3.len() != n {
        return Err(Error::Ranking(format!(
            "rank vector lengths ({}, {}, {}) do not match {n} features",
            r1.len(),
            r2.len(),
            r3.len()
        )));
    }
    let mut entries: Vec<RankingEntry> = (0..n)
        .map(|j| RankingEntry {
            feature_name: feature_names[j].clone(),
            algorithm_ranks: [r1[j], r2[j], r3[j]],
            averaged_score: (r1[j] + r2[j] + r3[j]) / 3.0,
        })
        .collect();
    entries.sort_by(|a, b| {
        a.averaged_score
            .partial_cmp(&b.averaged_score)
            .unwrap()
            .then_with(|| a.feature_name.cmp(&b.feature_name))
    });
    Ok(RankingList { family, entries })
}

/// The first k feature names of a ranking list.
pub fn top_k(rl: &RankingList, k: usize) -> Result<Vec<String>> {
    if k == 0 || k > rl.entries.len() {
        return Err(Error::Ranking(format!(
            "k = {k} out of range for {} ranked features",
            rl.entries.len()
        )));
    }
    Ok(rl.entries[..k]
        .iter()
        .map(|e| e.feature_name.clone())
        .collect())
}

impl RankingList {
    /// CSV mirroring the fused-table layout: position, name, the three
    /// algorithm ranks, and the average.
    pub fn to_csv(&self, algorithm_names: [&str; 3]) -> String {
        let mut out = format!(
            "rank,feature,{},{},{},average\n",
            algorithm_names[0], algorithm_names[1], algorithm_names[2]
        );
        for (i, e) in self.entries.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{:.5}\n",
                i + 1,
                e.feature_name,
                e.algorithm_ranks[0],
                e.algorithm_ranks[1],
                e.algorithm_ranks[2],
                e.averaged_score
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scores(values: &[f64], dir: Direction) -> FeatureScores {
        FeatureScores::new("test", values.to_vec(), dir).unwrap()
    }

    #[test]
    fn ranks_direct_ordering() {
        let r = scores_to_ranks(&scores(&[0.9, 0.5, 0.7], Direction::HigherIsBetter));
        assert_eq!(r, vec![1.0, 3.0, 2.0]);
    }

    #[test]
    fn ranks_tie_rule() {
        let r = scores_to_ranks(&scores(&[0.5, 0.5], Direction::HigherIsBetter));
        assert_eq!(r, vec![1.5, 1.5]);
    }

    #[test]
    fn ranks_direction_flag() {
        let r = scores_to_ranks(&scores(&[0.1, 0.3], Direction::LowerIsBetter));
        assert_eq!(r, vec![1.0, 2.0]);
    }

    #[test]
    fn rank_sum_invariant_untied() {
        let r = scores_to_ranks(&scores(&[3.0, 1.0, 4.0, 1.5, 9.0], Direction::HigherIsBetter));
        let sum: f64 = r.iter().sum();
        assert_eq!(sum, 15.0); // n(n+1)/2
    }

    #[test]
    fn average_published_rows() {
        let names = vec!["only".to_string()];
        let cases = [
            ([18.0, 4.0, 2.0], 8.0),
            ([40.0, 3.0, 3.0], 15.33333),
            ([3.0, 2.0, 43.0], 16.0),
            ([29.0, 1.0, 19.0], 16.33333),
            ([21.0, 21.0, 21.0], 21.0),
        ];
        for (ranks, expected) in cases {
            let rl = average_ranks(
                &names,
                &[ranks[0]],
                &[ranks[1]],
                &[ranks[2]],
                RankingFamily::Supervised,
            )
            .unwrap();
            assert!(
                (rl.entries[0].averaged_score - expected).abs() < 1e-4,
                "{ranks:?} -> {}",
                rl.entries[0].averaged_score
            );
        }
    }

    #[test]
    fn average_idempotent_on_identical_vectors() {
        let names: Vec<String> = (0..4).map(|i| format!("f{i}")).collect();
        let r = [2.0, 4.0, 1.0, 3.0];
        let rl = average_ranks(&names, &r, &r, &r, RankingFamily::Unsupervised).unwrap();
        for e in &rl.entries {
            assert_eq!(e.averaged_score, e.algorithm_ranks[0]);
        }
    }

    #[test]
    fn average_permutation_invariant_in_arguments() {
        let names: Vec<String> = (0..3).map(|i| format!("f{i}")).collect();
        let (a, b, c) = ([1.0, 2.0, 3.0], [3.0, 1.0, 2.0], [2.0, 3.0, 1.0]);
        let l1 = average_ranks(&names, &a, &b, &c, RankingFamily::Supervised).unwrap();
        let l2 = average_ranks(&names, &c, &a, &b, RankingFamily::Supervised).unwrap();
        for (e1, e2) in l1.entries.iter().zip(&l2.entries) {
            assert_eq!(e1.feature_name, e2.feature_name);
            assert_eq!(e1.averaged_score, e2.averaged_score);
        }
    }

    #[test]
    fn average_tie_breaks_lexicographically() {
        let names = vec!["zeta".to_string(), "alpha".to_string()];
        let rl = average_ranks(
            &names,
            &[1.0, 2.0],
            &[2.0, 1.0],
            &[1.5, 1.5],
            RankingFamily::Supervised,
        )
        .unwrap();
        assert_eq!(rl.entries[0].feature_name, "alpha");
        assert_eq!(rl.entries[1].feature_name, "zeta");
    }

    #[test]
    fn average_rejects_length_mismatch() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert!(average_ranks(
            &names,
            &[1.0, 2.0],
            &[1.0],
            &[1.0, 2.0],
            RankingFamily::Supervised
        )
        .is_err());
    }

    #[test]
    fn top_k_prefix_and_bounds() {
        let names: Vec<String> = (0..4).map(|i| format!("f{i}")).collect();
        let rl = average_ranks(
            &names,
            &[4.0, 3.0, 2.0, 1.0],
            &[4.0, 3.0, 2.0, 1.0],
            &[4.0, 3.0, 2.0, 1.0],
            RankingFamily::Supervised,
        )
        .unwrap();
        assert_eq!(top_k(&rl, 2).unwrap(), vec!["f3".to_string(), "f2".to_string()]);
        assert_eq!(top_k(&rl, 4).unwrap().len(), 4);
        assert!(top_k(&rl, 5).is_err());
        assert!(top_k(&rl, 0).is_err());
    }

    #[test]
    fn table_fixture_ordering_reproduced() {
        // Self-consistent printed rows of the unsupervised fused table:
        // ranks (laplacian, min-corr, mcfs) per feature.
        let names = vec![
            "Small Dependence Low Gray Level Emphasis".to_string(),
            "Zone variance".to_string(),
            "Uniformity".to_string(),
            "LargeAreaHighGrayLevelEmphasis".to_string(),
        ];
        let r1 = [40.0, 3.0, 29.0, 21.0];
        let r2 = [3.0, 2.0, 1.0, 21.0];
        let r3 = [3.0, 43.0, 19.0, 21.0];
        let rl = average_ranks(&names, &r1, &r2, &r3, RankingFamily::Unsupervised).unwrap();
        let order: Vec<&str> = rl.entries.iter().map(|e| e.feature_name.as_str()).collect();
        assert_eq!(
            order,
            vec![
                "Small Dependence Low Gray Level Emphasis",
                "Zone variance",
                "Uniformity",
                "LargeAreaHighGrayLevelEmphasis",
            ]
        );
        assert_eq!(
            top_k(&rl, 2).unwrap(),
            vec![
                "Small Dependence Low Gray Level Emphasis".to_string(),
                "Zone variance".to_string()
            ]
        );
    }
}

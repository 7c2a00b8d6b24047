//! The full benchmark protocol: normalize, ANOVA-filter, rank with all six
//! algorithms, fuse per family, and sweep top-k subsets through both
//! classifiers. Also the flat key=value config format and JSON/CSV report
//! emission.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::anova::{filter_features, AnovaResult, DEFAULT_ALPHA};
use crate::classify::{cross_validate, ClassifierSpec, CvConfig, KernelSpec};
use crate::classify::{nb_predict, nb_train, svm_predict, svm_train};
use crate::dataset::{load_csv, ClassLabel, FeatureMatrix, Normalization};
use crate::error::{Error, Result, StageExt};
use crate::metrics::{confusion, evaluate, ConfusionMatrix, Metrics};
use crate::rank_fusion::{average_ranks, scores_to_ranks, top_k, RankingFamily, RankingList};
use crate::rank_supervised::{fisher_scores, nca_weights, relieff_weights};
use crate::rank_unsupervised::{
    knn_graph, laplacian_scores, mcfs_scores, min_correlation_scores, DEFAULT_CARDINALITY,
    DEFAULT_GRAPH_K, DEFAULT_N_CLUSTERS,
};

pub const REPORT_VERSION: u32 = 1;
pub const DEFAULT_K_LIST: [usize; 6] = [2, 4, 8, 12, 16, 20];
pub const DEFAULT_K_CAP: usize = 20;
pub const DEFAULT_RELIEFF_K: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    Svm,
    Nb,
}

impl ClassifierKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClassifierKind::Svm => "svm",
            ClassifierKind::Nb => "nb",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Linear,
    Rbf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub train_csv: PathBuf,
    pub test_csv: PathBuf,
    pub alpha: f64,
    pub k_list: Vec<usize>,
    pub k_cap: usize,
    pub classifiers: Vec<ClassifierKind>,
    pub ranking_families: Vec<RankingFamily>,
    pub svm_kernel: KernelKind,
    pub svm_c: f64,
    /// RBF bandwidth; `None` means 1 / n_selected_features per grid cell.
    pub svm_gamma: Option<f64>,
    pub relieff_k: usize,
    pub cv_folds: usize,
    pub normalize: bool,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            train_csv: PathBuf::new(),
            test_csv: PathBuf::new(),
            alpha: DEFAULT_ALPHA,
            k_list: DEFAULT_K_LIST.to_vec(),
            k_cap: DEFAULT_K_CAP,
            classifiers: vec![ClassifierKind::Svm, ClassifierKind::Nb],
            ranking_families: vec![RankingFamily::Supervised, RankingFamily::Unsupervised],
            svm_kernel: KernelKind::Linear,
            svm_c: 1.0,
            svm_gamma: None,
            relieff_k: DEFAULT_RELIEFF_K,
            cv_folds: 10,
            normalize: true,
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    /// Parse the flat `key = value` format: one pair per line, lists
    /// comma-separated, blank lines and `#` comments ignored. Unknown keys
    /// are errors. Relative CSV paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::default();
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected 'key = value'", line_no + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| {
                Error::Config(format!("line {}: invalid {what} '{value}'", line_no + 1))
            };
            match key {
                "train_csv" => cfg.train_csv = resolve(base_dir, value),
                "test_csv" => cfg.test_csv = resolve(base_dir, value),
                "alpha" => cfg.alpha = value.parse().map_err(|_| bad("alpha"))?,
                "k_list" => {
                    cfg.k_list = value
                        .split(',')
                        .map(|v| v.trim().parse().map_err(|_| bad("k_list")))
                        .collect::<Result<_>>()?;
                }
                "k_cap" => cfg.k_cap = value.parse().map_err(|_| bad("k_cap"))?,
                "classifiers" => {
                    cfg.classifiers = value
                        .split(',')
                        .map(|v| match v.trim() {
                            "svm" => Ok(ClassifierKind::Svm),
                            "nb" => Ok(ClassifierKind::Nb),
                            _ => Err(bad("classifier")),
                        })
                        .collect::<Result<_>>()?;
                }
                "ranking_families" => {
                    cfg.ranking_families = value
                        .split(',')
                        .map(|v| match v.trim() {
                            "supervised" => Ok(RankingFamily::Supervised),
                            "unsupervised" => Ok(RankingFamily::Unsupervised),
                            _ => Err(bad("ranking family")),
                        })
                        .collect::<Result<_>>()?;
                }
                "svm_kernel" => {
                    cfg.svm_kernel = match value {
                        "linear" => KernelKind::Linear,
                        "rbf" => KernelKind::Rbf,
                        _ => return Err(bad("svm_kernel")),
                    };
                }
                "svm_c" => cfg.svm_c = value.parse().map_err(|_| bad("svm_c"))?,
                "svm_gamma" => cfg.svm_gamma = Some(value.parse().map_err(|_| bad("svm_gamma"))?),
                "relieff_k" => cfg.relieff_k = value.parse().map_err(|_| bad("relieff_k"))?,
                "cv_folds" => cfg.cv_folds = value.parse().map_err(|_| bad("cv_folds"))?,
                "normalize" => cfg.normalize = value.parse().map_err(|_| bad("normalize"))?,
                "seed" => cfg.seed = value.parse().map_err(|_| bad("seed"))?,
                _ => return Err(Error::Config(format!("line {}: unknown key '{key}'", line_no + 1))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        ExperimentConfig::parse(&text, base)
    }

    pub fn validate(&self) -> Result<()> {
        if self.train_csv.as_os_str().is_empty() || self.test_csv.as_os_str().is_empty() {
            return Err(Error::Config("train_csv and test_csv are required".into()));
        }
        if self.k_list.is_empty() {
            return Err(Error::Config("k_list must be non-empty".into()));
        }
        if !self.k_list.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config("k_list must be strictly increasing".into()));
        }
        let max_k = *self.k_list.last().unwrap();
        if max_k == 0 || max_k > self.k_cap {
            return Err(Error::Config(format!(
                "k_list values must lie in 1..={} (k_cap)",
                self.k_cap
            )));
        }
        if self.classifiers.is_empty() || self.ranking_families.is_empty() {
            return Err(Error::Config(
                "classifiers and ranking_families must be non-empty".into(),
            ));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!(
                "alpha must be in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.svm_c <= 0.0 {
            return Err(Error::Config("svm_c must be positive".into()));
        }
        if self.cv_folds < 2 {
            return Err(Error::Config("cv_folds must be at least 2".into()));
        }
        if self.relieff_k == 0 {
            return Err(Error::Config("relieff_k must be positive".into()));
        }
        Ok(())
    }
}

fn resolve(base: &Path, value: &str) -> PathBuf {
    let p = PathBuf::from(value);
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

/// Per-fold and pooled cross-validation metrics for one grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvSummary {
    pub folds: usize,
    /// Means over the folds where the metric is defined.
    pub mean_accuracy: Option<f64>,
    pub mean_sensitivity: Option<f64>,
    pub mean_specificity: Option<f64>,
    pub pooled_confusion: ConfusionMatrix,
    pub pooled_metrics: Metrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EntryResult {
    Evaluated {
        cv: CvSummary,
        test_confusion: ConfusionMatrix,
        test_metrics: Metrics,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub family: RankingFamily,
    pub classifier: ClassifierKind,
    pub k: usize,
    pub selected_features: Vec<String>,
    pub result: EntryResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub version: u32,
    pub config: ExperimentConfig,
    pub anova: Vec<AnovaResult>,
    pub surviving_features: Vec<String>,
    pub rankings: Vec<RankingList>,
    pub entries: Vec<SweepEntry>,
}

/// Score, rank, and fuse one family's three algorithms on a (normalized,
/// filtered) training matrix.
pub fn rank_family(m: &FeatureMatrix, family: RankingFamily, relieff_k: usize) -> Result<RankingList> {
    match family {
        RankingFamily::Supervised => {
            let (malignant, benign) = m.class_indices().stage("rank")?;
            let min_class = malignant.len().min(benign.len());
            let k = relieff_k.min(min_class.saturating_sub(1)).max(1);
            let fisher = fisher_scores(m).stage("rank")?;
            let relieff = relieff_weights(m, k, None).stage("rank")?;
            let lambda = 1.0 / m.n_samples() as f64;
            let nca = nca_weights(m, lambda).stage("rank")?.scores;
            average_ranks(
                m.feature_names(),
                &scores_to_ranks(&fisher),
                &scores_to_ranks(&relieff),
                &scores_to_ranks(&nca),
                family,
            )
            .stage("rank")
        }
        RankingFamily::Unsupervised => {
            let graph_k = DEFAULT_GRAPH_K.min(m.n_samples() - 1).max(1);
            let g = knn_graph(m, graph_k).stage("rank")?;
            let laplacian = laplacian_scores(m, &g).stage("rank")?;
            let min_corr = min_correlation_scores(m).stage("rank")?;
            let cardinality = DEFAULT_CARDINALITY.min(m.n_features());
            let mcfs = mcfs_scores(m, &g, DEFAULT_N_CLUSTERS, cardinality).stage("rank")?;
            average_ranks(
                m.feature_names(),
                &scores_to_ranks(&laplacian),
                &scores_to_ranks(&min_corr),
                &scores_to_ranks(&mcfs),
                family,
            )
            .stage("rank")
        }
    }
}

fn mean_defined(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let defined: Vec<f64> = values.flatten().collect();
    if defined.is_empty() {
        None
    } else {
        Some(defined.iter().sum::<f64>() / defined.len() as f64)
    }
}

fn evaluate_cell(
    cfg: &ExperimentConfig,
    train: &FeatureMatrix,
    test: &FeatureMatrix,
    ranking: &RankingList,
    classifier: ClassifierKind,
    k: usize,
) -> Result<SweepEntry> {
    if k > ranking.entries.len() {
        return Ok(SweepEntry {
            family: ranking.family,
            classifier,
            k,
            selected_features: Vec::new(),
            result: EntryResult::Skipped {
                reason: format!(
                    "k = {k} exceeds the {} features surviving the filter",
                    ranking.entries.len()
                ),
            },
        });
    }
    let selected = top_k(ranking, k)?;
    let train_k = train.select_features_by_name(&selected)?;
    let test_k = test.select_features_by_name(&selected)?;
    let spec = match classifier {
        ClassifierKind::Nb => ClassifierSpec::NaiveBayes,
        ClassifierKind::Svm => {
            let kernel = match cfg.svm_kernel {
                KernelKind::Linear => KernelSpec::Linear,
                KernelKind::Rbf => KernelSpec::Rbf {
                    gamma: cfg.svm_gamma.unwrap_or(1.0 / k as f64),
                },
            };
            ClassifierSpec::Svm {
                kernel,
                c: cfg.svm_c,
            }
        }
    };
    let cv_cfg = CvConfig {
        folds: cfg.cv_folds,
        seed: cfg.seed,
        stratified: true,
    };
    let cv = cross_validate(&train_k, &spec, &cv_cfg).stage("cross-validation")?;
    let cv_summary = CvSummary {
        folds: cv.folds.len(),
        mean_accuracy: mean_defined(cv.folds.iter().map(|f| f.metrics.accuracy)),
        mean_sensitivity: mean_defined(cv.folds.iter().map(|f| f.metrics.sensitivity)),
        mean_specificity: mean_defined(cv.folds.iter().map(|f| f.metrics.specificity)),
        pooled_confusion: cv.pooled_confusion,
        pooled_metrics: cv.pooled_metrics,
    };

    // Final model on the full training set, evaluated on the test set.
    let truth = test_k
        .labels()
        .ok_or_else(|| Error::Report("test matrix has no labels".into()))?
        .to_vec();
    let predictions: Vec<ClassLabel> = match &spec {
        ClassifierSpec::NaiveBayes => {
            let model = nb_train(&train_k).stage("final-train")?;
            (0..test_k.n_samples())
                .map(|i| nb_predict(&model, test_k.row(i)).map(|(l, _)| l))
                .collect::<Result<_>>()
                .stage("test-eval")?
        }
        ClassifierSpec::Svm { kernel, c } => {
            let model = svm_train(&train_k, *kernel, *c, cfg.seed).stage("final-train")?;
            (0..test_k.n_samples())
                .map(|i| svm_predict(&model, test_k.row(i)))
                .collect::<Result<_>>()
                .stage("test-eval")?
        }
    };
    let test_confusion = confusion(&predictions, &truth).stage("test-eval")?;
    Ok(SweepEntry {
        family: ranking.family,
        classifier,
        k,
        selected_features: selected,
        result: EntryResult::Evaluated {
            cv: cv_summary,
            test_confusion,
            test_metrics: evaluate(&test_confusion),
        },
    })
}

/// Run the full protocol. Deterministic under the config seed; grid cells
/// are evaluated independently (in parallel) and assembled in a fixed
/// (family, classifier, k) order.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let train_raw = load_csv(&cfg.train_csv).stage("load-train")?;
    let test_raw = load_csv(&cfg.test_csv).stage("load-test")?;
    if test_raw.labels().is_none() {
        return Err(Error::Report("test matrix has no labels".into()));
    }

    let (train, test) = if cfg.normalize {
        let norm = Normalization::fit(&train_raw).stage("normalize")?;
        (
            norm.apply(&train_raw).stage("normalize")?,
            norm.apply(&test_raw).stage("normalize")?,
        )
    } else {
        (train_raw, test_raw)
    };

    let (anova, train_f) = filter_features(&train, cfg.alpha).stage("anova-filter")?;
    let surviving: Vec<String> = train_f.feature_names().to_vec();
    let test_f = test.select_features_by_name(&surviving).stage("anova-filter")?;

    let rankings: Vec<RankingList> = cfg
        .ranking_families
        .iter()
        .map(|&family| rank_family(&train_f, family, cfg.relieff_k))
        .collect::<Result<_>>()?;

    let cells: Vec<(usize, ClassifierKind, usize)> = rankings
        .iter()
        .enumerate()
        .flat_map(|(fi, _)| {
            cfg.classifiers.iter().flat_map(move |&c| {
                cfg.k_list.iter().map(move |&k| (fi, c, k))
            })
        })
        .collect();
    let entries: Vec<SweepEntry> = cells
        .par_iter()
        .map(|&(fi, classifier, k)| {
            evaluate_cell(cfg, &train_f, &test_f, &rankings[fi], classifier, k)
        })
        .collect::<Result<_>>()?;

    Ok(SweepReport {
        version: REPORT_VERSION,
        config: cfg.clone(),
        anova,
        surviving_features: surviving,
        rankings,
        entries,
    })
}

impl SweepReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<SweepReport> {
        Ok(serde_json::from_str(text)?)
    }

    /// One row per grid cell, metrics to 5 decimals; undefined metrics and
    /// skipped cells are written as literal markers.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "family,classifier,k,status,cv_accuracy,cv_sensitivity,cv_specificity,\
             test_accuracy,test_sensitivity,test_specificity\n",
        );
        let field = |v: Option<f64>| match v {
            Some(x) => format!("{x:.5}"),
            None => "undefined".into(),
        };
        for e in &self.entries {
            match &e.result {
                EntryResult::Evaluated {
                    cv,
                    test_metrics,
                    ..
                } => {
                    let _ = writeln!(
                        out,
                        "{},{},{},evaluated,{},{},{},{},{},{}",
                        e.family,
                        e.classifier.name(),
                        e.k,
                        field(cv.pooled_metrics.accuracy),
                        field(cv.pooled_metrics.sensitivity),
                        field(cv.pooled_metrics.specificity),
                        field(test_metrics.accuracy),
                        field(test_metrics.sensitivity),
                        field(test_metrics.specificity),
                    );
                }
                EntryResult::Skipped { .. } => {
                    let _ = writeln!(
                        out,
                        "{},{},{},skipped,,,,,,",
                        e.family,
                        e.classifier.name(),
                        e.k
                    );
                }
            }
        }
        out
    }

    pub fn write(&self, path: &Path, format: ReportFormat) -> Result<()> {
        let text = match format {
            ReportFormat::Json => self.to_json()?,
            ReportFormat::Csv => self.to_csv(),
        };
        std::fs::write(path, text).map_err(|e| Error::Report(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<ReportFormat> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::Config(format!("unknown report format '{s}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::planted_two_class;

    fn write_dataset(dir: &Path) -> ExperimentConfig {
        let train = planted_two_class(120, 12, 2, 3.0, 1).unwrap();
        let test = planted_two_class(60, 12, 2, 3.0, 2).unwrap();
        let train_csv = dir.join("train.csv");
        let test_csv = dir.join("test.csv");
        train.matrix.write_csv(&train_csv).unwrap();
        test.matrix.write_csv(&test_csv).unwrap();
        ExperimentConfig {
            train_csv,
            test_csv,
            k_list: vec![2, 4, 8],
            cv_folds: 5,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn config_parse_round_trip() {
        let text = "\
# demo config
train_csv = train.csv
test_csv = /abs/test.csv
alpha = 0.01
k_list = 2, 4, 8
classifiers = nb
ranking_families = supervised
svm_kernel = rbf
svm_gamma = 0.5
cv_folds = 5
seed = 9
";
        let cfg = ExperimentConfig::parse(text, Path::new("/base")).unwrap();
        assert_eq!(cfg.train_csv, PathBuf::from("/base/train.csv"));
        assert_eq!(cfg.test_csv, PathBuf::from("/abs/test.csv"));
        assert_eq!(cfg.alpha, 0.01);
        assert_eq!(cfg.k_list, vec![2, 4, 8]);
        assert_eq!(cfg.classifiers, vec![ClassifierKind::Nb]);
        assert_eq!(cfg.ranking_families, vec![RankingFamily::Supervised]);
        assert_eq!(cfg.svm_kernel, KernelKind::Rbf);
        assert_eq!(cfg.svm_gamma, Some(0.5));
        assert_eq!(cfg.cv_folds, 5);
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn config_rejections() {
        let base = Path::new(".");
        let with = |extra: &str| {
            format!("train_csv = a.csv\ntest_csv = b.csv\n{extra}\n")
        };
        assert!(ExperimentConfig::parse(&with("k_list ="), base).is_err());
        assert!(ExperimentConfig::parse(&with("k_list = 4, 2"), base).is_err());
        assert!(ExperimentConfig::parse(&with("k_list = 2, 30"), base).is_err());
        assert!(ExperimentConfig::parse(&with("mystery = 1"), base).is_err());
        assert!(ExperimentConfig::parse(&with("alpha = 1.5"), base).is_err());
        assert!(ExperimentConfig::parse(&with("classifiers = forest"), base).is_err());
        assert!(ExperimentConfig::parse("no equals sign", base).is_err());
        assert!(ExperimentConfig::parse(&with("k_list = 2, 21\nk_cap = 25"), base).is_ok());
    }

    #[test]
    fn sweep_grid_shape_and_skip() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = write_dataset(dir.path());
        // 12 features, effect 3.0: the filter keeps few features, so large
        // k values exercise the skip path.
        cfg.k_list = vec![2, 8, 12];
        let report = run_sweep(&cfg).unwrap();
        assert_eq!(report.entries.len(), 2 * 2 * 3);
        let evaluated = report
            .entries
            .iter()
            .filter(|e| matches!(e.result, EntryResult::Evaluated { .. }))
            .count();
        assert!(evaluated >= 4, "evaluated = {evaluated}");
        for e in &report.entries {
            if let EntryResult::Evaluated { cv, test_metrics, .. } = &e.result {
                for v in [
                    cv.pooled_metrics.accuracy,
                    test_metrics.accuracy,
                    test_metrics.sensitivity,
                    test_metrics.specificity,
                ]
                .into_iter()
                .flatten()
                {
                    assert!((0.0..=1.0).contains(&v));
                }
                assert_eq!(e.selected_features.len(), e.k);
                // Selected names are a prefix of the family ranking.
                let ranking = report
                    .rankings
                    .iter()
                    .find(|r| r.family == e.family)
                    .unwrap();
                for (i, name) in e.selected_features.iter().enumerate() {
                    assert_eq!(name, &ranking.entries[i].feature_name);
                }
            }
        }
    }

    #[test]
    fn sweep_deterministic_and_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write_dataset(dir.path());
        let a = run_sweep(&cfg).unwrap();
        let b = run_sweep(&cfg).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        let back = SweepReport::from_json(&a.to_json().unwrap()).unwrap();
        assert_eq!(back, a);
        let csv = a.to_csv();
        assert_eq!(csv.lines().count(), 1 + a.entries.len());
    }

    #[test]
    fn no_cross_talk_between_cells() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = write_dataset(dir.path());
        let full = run_sweep(&cfg).unwrap();
        cfg.k_list = vec![4];
        cfg.classifiers = vec![ClassifierKind::Nb];
        cfg.ranking_families = vec![RankingFamily::Supervised];
        let solo = run_sweep(&cfg).unwrap();
        let from_full = full
            .entries
            .iter()
            .find(|e| {
                e.family == RankingFamily::Supervised
                    && e.classifier == ClassifierKind::Nb
                    && e.k == 4
            })
            .unwrap();
        assert_eq!(solo.entries.len(), 1);
        assert_eq!(solo.entries[0].result, from_full.result);
    }
}

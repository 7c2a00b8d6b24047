use thiserror::Error;

/// Crate-wide error type; variants are grouped by pipeline stage so CLI
/// failures carry a stage tag.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(String),

    #[error("dataset: {0}")]
    Dataset(String),

    #[error("anova: {0}")]
    Anova(String),

    #[error("ranking: {0}")]
    Ranking(String),

    #[error("classifier: {0}")]
    Classifier(String),

    #[error("svm did not converge: max KKT violation {violation:.3e} after {passes} passes")]
    SvmNonConvergence { violation: f64, passes: usize },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {offdiag:.3e})")]
    EigenNonConvergence { sweeps: usize, offdiag: f64 },

    #[error("metrics: {0}")]
    Metrics(String),

    #[error("volume: {0}")]
    Volume(String),

    #[error("config: {0}")]
    Config(String),

    #[error("report: {0}")]
    Report(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("[{stage}] {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wrap an error with the pipeline stage it occurred in.
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Extension for tagging results with the pipeline stage that produced them.
pub trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.in_stage(stage))
    }
}

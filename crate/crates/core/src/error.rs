use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Pipeline stage of the eigenvector algorithms, used to tag failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Classify,
    Growth,
    LeftSweep,
    Decay,
    RightSweep,
    Glue,
    Normalize,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Stage::Classify => "classify",
            Stage::Growth => "growth",
            Stage::LeftSweep => "left sweep",
            Stage::Decay => "decay",
            Stage::RightSweep => "right sweep",
            Stage::Glue => "glue",
            Stage::Normalize => "normalize",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid diagonal profile: {0}")]
    InvalidProfile(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("bisection did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("singular tridiagonal system (zero pivot at row {row})")]
    SingularSystem { row: usize },

    #[error("numerical breakdown: {0}")]
    Breakdown(String),

    #[error("{stage} stage failed at index {index}: {detail}")]
    Stage {
        stage: Stage,
        index: usize,
        detail: String,
    },

    #[error("{stage} stage overflowed at index {index}")]
    Overflow { stage: Stage, index: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error on line {line}: {detail}")]
    Parse { line: usize, detail: String },
}

impl Error {
    pub(crate) fn stage(stage: Stage, index: usize, detail: impl Into<String>) -> Self {
        Error::Stage {
            stage,
            index,
            detail: detail.into(),
        }
    }
}

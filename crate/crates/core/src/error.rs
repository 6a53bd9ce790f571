use thiserror::Error;

/// Errors raised by model construction, the spectral kernel and the
/// recovery algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("rank {k} out of range 1..={max}")]
    RankOutOfRange { k: usize, max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("could not draw a non-degenerate split of {n} vertices")]
    DegenerateSplit { n: usize },

    #[error("split too small for rank {k}: |Y1| = {y1}, |Z| = {z}")]
    InsufficientSplit { k: usize, y1: usize, z: usize },

    #[error("{uncovered} vertices were not covered by any repetition")]
    CoverageFailure { uncovered: usize },

    #[error("merged runs produced {found} clusters, expected {expected}")]
    MergeConflict { found: usize, expected: usize },

    #[error("essential rank is zero: no singular value clears the noise threshold")]
    NoSignal,

    #[error("singular gap at rank {k} is degenerate ({gap:e})")]
    DegenerateGap { k: usize, gap: f64 },

    #[error("parameters outside the check's valid regime: {0}")]
    RegimeViolation(String),

    #[error("unknown diagnostic check `{0}`")]
    UnknownCheck(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

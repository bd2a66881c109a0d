use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid norm specification: {0}")]
    InvalidSpec(String),

    #[error("vector entries must be finite")]
    NonFinite,

    #[error("the zero vector has no supporting functionals")]
    ZeroVector,

    #[error("line direction must be nonzero")]
    ZeroDirection,

    #[error("operation is not supported for this norm family")]
    UnsupportedFamily,

    #[error("orthogonality tests disagree beyond tolerance: {0}")]
    InternalInconsistency(String),

    #[error("expected a unit vector, got norm {norm}")]
    NotUnitVector { norm: f64 },

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("operator is zero")]
    ZeroOperator,

    #[error("point does not attain the operator norm (|Tx| = {image_norm}, |T| = {norm})")]
    NotAttainment { image_norm: f64, norm: f64 },

    #[error("image of the base point is zero")]
    ZeroImage,

    #[error("rank-one target must be nonzero")]
    ZeroTarget,

    #[error("point is not smooth and no supporting functional was supplied")]
    NotSmooth,

    #[error("supplied functional is not a supporting functional of the anchor")]
    NotSupporting,

    #[error("operator is not smooth: {0}")]
    NotSmoothOperator(String),

    #[error("operator has rank {rank}; at least 2 is required")]
    RankDeficient { rank: usize },

    #[error("degenerate construction step: {0}")]
    DegenerateStep(String),
}

pub type Result<T> = std::result::Result<T, Error>;

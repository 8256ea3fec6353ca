use thiserror::Error;

/// Errors raised by series, transform, residual and catalog routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("truncation orders differ: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("truncation order {have} is below the required {need}")]
    TruncationTooSmall { have: usize, need: usize },

    #[error("index window up to {need} exceeds the last available lattice index {have}")]
    WindowExceeded { need: usize, have: usize },

    #[error("x = 0 is a singular point: leading coefficient a_N(0) vanishes")]
    SingularPoint,

    #[error("expected {expected} initial values, got {got}")]
    InitialDataLength { expected: usize, got: usize },

    #[error("lattices carry different mesh spacings")]
    MeshMismatch,

    #[error("mesh spacing must be positive")]
    NonPositiveSpacing,

    #[error("delta operator constraint violated: {0}")]
    DeltaConstraint(String),

    #[error("coefficients must be constant: a_{index} has a nonzero term of degree {degree}")]
    NonConstantCoefficients { index: usize, degree: usize },

    #[error("Pochhammer symbol ({parameter})_{k} vanishes in a denominator")]
    PochhammerZero { parameter: String, k: usize },

    #[error("candidate solution {index} fails the residual certificate at n = {n}")]
    CertificateFailed { index: usize, n: usize },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("mesh spacing {h} does not divide x* = {x_star}")]
    NonIntegerMeshIndex { h: String, x_star: String },

    #[error("JSON input: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

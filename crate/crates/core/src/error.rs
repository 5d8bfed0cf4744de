//! Error type shared by every module in the crate.
//!
//! Variants are named after the condition they report so that callers (and
//! the command-line frontend) can match on them without parsing message
//! strings. Each message carries the measured quantity alongside the
//! tolerance it violated.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building measures, evolving windows,
/// decomposing operators, or parsing documents.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input vector has (numerically) zero norm and cannot be normalized.
    #[error("vector norm {norm:.3e} is below {min:.3e}; cannot normalize")]
    ZeroVector { norm: f64, min: f64 },

    /// An operator that must be self-adjoint is not.
    #[error("operator is not Hermitian: max |A - A'| = {deviation:.3e} exceeds {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    /// An operator that must be unitary is not.
    #[error("operator is not unitary: max |U'U - 1| = {deviation:.3e} exceeds {tol:.3e}")]
    NotUnitary { deviation: f64, tol: f64 },

    /// An operator that must be a projector (P^2 = P = P') is not.
    #[error("operator is not a projector: {reason}")]
    InvalidProjector { reason: String },

    /// An operator that must be a density operator is not.
    #[error("operator is not a density operator: {reason}")]
    InvalidDensity { reason: String },

    /// Pre- and post-selected states are orthogonal (or numerically so), so
    /// the transition amplitude in the denominator vanishes.
    #[error("pre/post-selected pair is orthogonal: |<phi|psi>| = {overlap:.3e} is at or below the floor {floor:.3e}")]
    OrthogonalPair { overlap: f64, floor: f64 },

    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// Dimension outside the supported range.
    #[error("dimension {dim} is outside the supported range [{min}, {max}]")]
    DimensionOutOfRange { dim: usize, min: usize, max: usize },

    /// A trace-one invariant failed.
    #[error("trace differs from one by {deviation:.3e} (tolerance {tol:.3e})")]
    NotTraceOne { deviation: f64, tol: f64 },

    /// A set of vectors that must form an orthonormal basis does not.
    #[error("basis is not complete and orthonormal: {reason}")]
    IncompleteBasis { reason: String },

    /// Evolution was requested at a time outside the process window.
    #[error("time {t} lies outside the window [{t_i}, {t_f}]")]
    TimeOutOfWindow { t: f64, t_i: f64, t_f: f64 },

    /// A time window with a non-positive span was requested.
    #[error("invalid window: t_i = {t_i} must be strictly below t_f = {t_f}")]
    InvalidWindow { t_i: f64, t_f: f64 },

    /// No basis ordering exposes a nonzero first row, so the expansion that
    /// seeds every term from row one cannot start.
    #[error("every row of the operator is zero in the requested basis; no ordering gives a nonzero first row")]
    DegenerateRow1,

    /// A decomposition plan violates one of its structural constraints.
    #[error("decomposition plan is invalid: {reason}")]
    PlanInvalid { reason: String },

    /// A mixture term has an orthogonal state pair, so its normalized
    /// transition operator is undefined.
    #[error("mixture term {index} has an orthogonal pair: |<phi|psi>| = {overlap:.3e}")]
    OrthogonalTerm { index: usize, overlap: f64 },

    /// A mixture with no terms was supplied.
    #[error("mixture contains no terms")]
    EmptyMixture,

    /// A mixture whose weights are not a probability distribution.
    #[error("mixture is invalid: {reason}")]
    InvalidMixture { reason: String },

    /// Zero samples were requested from the sampler.
    #[error("sample count must be positive")]
    InvalidSampleCount,

    /// A convergence schedule that is empty or not strictly increasing.
    #[error("sample schedule must be non-empty and strictly increasing")]
    InvalidSchedule,

    /// A non-finite number reached a boundary that requires finite input.
    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    /// An iterative numerical routine failed to converge.
    #[error("numerical routine failed: {context}")]
    Numerical { context: String },

    /// A JSON document failed to parse or validate.
    #[error("invalid document {path}: {reason}")]
    InvalidDocument { path: String, reason: String },
}

impl Error {
    /// Stable machine-readable name of the variant, used by the CLI when it
    /// prints structured diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ZeroVector { .. } => "ZeroVector",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotUnitary { .. } => "NotUnitary",
            Error::InvalidProjector { .. } => "InvalidProjector",
            Error::InvalidDensity { .. } => "InvalidDensity",
            Error::OrthogonalPair { .. } => "OrthogonalPair",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::DimensionOutOfRange { .. } => "DimensionOutOfRange",
            Error::NotTraceOne { .. } => "NotTraceOne",
            Error::IncompleteBasis { .. } => "IncompleteBasis",
            Error::TimeOutOfWindow { .. } => "TimeOutOfWindow",
            Error::InvalidWindow { .. } => "InvalidWindow",
            Error::DegenerateRow1 => "DegenerateRow1",
            Error::PlanInvalid { .. } => "PlanInvalid",
            Error::OrthogonalTerm { .. } => "OrthogonalTerm",
            Error::EmptyMixture => "EmptyMixture",
            Error::InvalidMixture { .. } => "InvalidMixture",
            Error::InvalidSampleCount => "InvalidSampleCount",
            Error::InvalidSchedule => "InvalidSchedule",
            Error::NonFinite { .. } => "NonFinite",
            Error::Numerical { .. } => "Numerical",
            Error::InvalidDocument { .. } => "InvalidDocument",
        }
    }
}

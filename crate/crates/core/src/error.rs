//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by correlator evaluation, state construction, channel
/// evolution and the dynamics layer.
#[derive(Debug, Error)]
pub enum Error {
    /// Model kind cannot be handled by the requested operation (e.g. asking
    /// for closed-form correlators of an XXZ point, which must be ingested
    /// from a table instead).
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    /// Spin separation above the supported Toeplitz size.
    #[error("spin separation r = {0} exceeds the supported maximum of {1}")]
    SeparationTooLarge(usize, usize),

    /// Adaptive quadrature hit the subdivision limit before reaching the
    /// requested tolerance.
    #[error("quadrature failed to converge: {0}")]
    QuadratureFailure(String),

    /// A parameter violated its documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The five X-state parameters do not describe a density matrix
    /// (trace or positivity violation).
    #[error("invalid X state: {0}")]
    InvalidState(String),

    /// Malformed correlator-table row.
    #[error("table parse error at line {line}: {msg}")]
    TableParse { line: usize, msg: String },

    /// Correlator-table entry outside [-1, 1].
    #[error("table range error at line {line}: {field} = {value} is outside [-1, 1]")]
    TableRange {
        line: usize,
        field: &'static str,
        value: f64,
    },

    /// Channel evolution produced elements outside the X pattern. All four
    /// channels preserve the pattern, so this signals an implementation bug.
    #[error("X pattern violated after channel evolution: off-pattern magnitude {0:.3e}")]
    PatternViolation(f64),

    /// Operation requires a closed-form coefficient map that the channel
    /// does not have (amplitude damping).
    #[error("unsupported channel: {0}")]
    UnsupportedChannel(String),

    /// A spectrum entry passed to the entropy helper was negative beyond
    /// the clamping tolerance.
    #[error("negative probability: {0}")]
    NegativeProbability(f64),

    /// Not enough data points for the requested analysis.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Trajectory matched none of the three dynamics types.
    #[error("unclassifiable trajectory: {0}")]
    Unclassifiable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Exit-code mapping and the single-line error record.
//!
//! Codes: 0 success, 2 validation/usage, 3 quadrature failure,
//! 4 insufficient data, 5 oracle tolerance violation. Every failure prints
//! exactly one machine-parsable record to stderr.

use qdx_core::Error as CoreError;

#[derive(Debug)]
pub enum CliError {
    Core(CoreError),
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn usage(msg: String) -> Self {
        CliError::Usage(msg)
    }

    pub fn io(msg: String) -> Self {
        CliError::Io(msg)
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::QuadratureFailure(_)) => 3,
            CliError::Core(CoreError::InsufficientData(_)) => 4,
            CliError::Core(_) | CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Core(e) => match e {
                CoreError::UnsupportedModel(_) => "unsupported-model",
                CoreError::SeparationTooLarge(_, _) => "separation-too-large",
                CoreError::QuadratureFailure(_) => "quadrature-failure",
                CoreError::InvalidParameter(_) => "invalid-parameter",
                CoreError::InvalidState(_) => "invalid-state",
                CoreError::TableParse { .. } => "table-parse",
                CoreError::TableRange { .. } => "table-range",
                CoreError::PatternViolation(_) => "pattern-violation",
                CoreError::UnsupportedChannel(_) => "unsupported-channel",
                CoreError::NegativeProbability(_) => "negative-probability",
                CoreError::InsufficientData(_) => "insufficient-data",
                CoreError::Unclassifiable(_) => "unclassifiable",
            },
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Usage(m) | CliError::Io(m) => m.clone(),
        }
    }

    /// One-line record: `error code=<n> kind=<kind> msg="<text>"`.
    pub fn record(&self) -> String {
        format!(
            "error code={} kind={} msg=\"{}\"",
            self.exit_code(),
            self.kind(),
            self.message().replace(['\n', '"'], " ")
        )
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WhmcError {
    /// Model or method parameters violate their invariants.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A root bracket did not show a sign change.
    #[error("no sign change in root bracket {side} #{index}: {detail}")]
    RootBracket {
        side: &'static str,
        index: usize,
        detail: String,
    },

    /// A caller broke an operation's contract (e.g. sampler rate ≠ grid rate).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A functional produced a non-finite value.
    #[error("non-finite functional value {value} in trial {trial}")]
    NonFinite { trial: u64, value: f64 },

    /// Run configuration is incomplete or inconsistent; `field` is a dotted path.
    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl WhmcError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        WhmcError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by user-supplied configuration or parameters
    /// rather than numerical failure.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            WhmcError::Config { .. } | WhmcError::Parameter(_) | WhmcError::Domain(_)
        )
    }
}

impl From<std::io::Error> for WhmcError {
    fn from(e: std::io::Error) -> Self {
        WhmcError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, WhmcError>;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A value violates the contract of the operation it was passed to.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A machine failed validation.
    #[error("fsm `{fsm}`: {rule}")]
    Semantic { fsm: String, rule: String },

    /// A word leaves the defined transitions of a deterministic observer.
    #[error("trace not in language: no transition on `{label}` at step {step}")]
    TraceNotInLanguage { step: usize, label: String },

    /// Exploration exceeded the configured state budget.
    #[error("state budget of {budget} exceeded")]
    ResourceLimit { budget: usize },

    /// Syntax error in a network document.
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A monitor received an event that is not a trace of the network.
    #[error("desync at step {step}: local `{local}` has no transition on `{label}`")]
    Desync {
        step: usize,
        local: String,
        label: String,
    },

    /// The monitor session was poisoned by an earlier desync.
    #[error("monitor session is poisoned by an earlier desync")]
    Poisoned,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

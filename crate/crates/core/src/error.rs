use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A computation would exceed its configured work or memory guard.
    #[error("budget exceeded: {what} (limit {limit}){}", hint.as_ref().map(|h| format!("; {h}")).unwrap_or_default())]
    Budget {
        what: String,
        limit: String,
        hint: Option<String>,
    },

    /// Adaptive quadrature failed to reach its tolerance.
    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub(crate) fn budget(what: impl Into<String>, limit: impl ToString) -> Self {
        Error::Budget {
            what: what.into(),
            limit: limit.to_string(),
            hint: None,
        }
    }
}

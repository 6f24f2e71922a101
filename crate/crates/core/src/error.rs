use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameters: {0}")]
    InvalidParameter(String),

    #[error("could not parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("infeasible move at turn {turn}: {detail}")]
    Infeasible { turn: usize, detail: String },

    #[error("belief in phase {found:?} where {expected:?} was required")]
    Phase {
        expected: crate::belief::Phase,
        found: crate::belief::Phase,
    },

    #[error("{what} too large: {size} exceeds cap {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("strategy `{strategy}` is not applicable: {reason}")]
    NotApplicable { strategy: String, reason: String },

    #[error("trial {trial} did not end within {max_turns} turns")]
    Censored { trial: usize, max_turns: usize },

    #[error("linear program failed: {0}")]
    Solver(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn not_applicable(strategy: &str, reason: impl Into<String>) -> Self {
        Error::NotApplicable {
            strategy: strategy.to_string(),
            reason: reason.into(),
        }
    }
}

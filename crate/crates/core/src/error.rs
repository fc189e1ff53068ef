use thiserror::Error;

use crate::converters::CertifiedValue;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong across estimators, converters, diagnostics and the coder.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("exact-mode budget exceeded: {what} needs {needed} work units (limit {limit}); use the log-domain variant or a smaller instance")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("conditional undefined: prefix {prefix} has zero offline mass")]
    UndefinedConditional { prefix: String },

    #[error("degenerate node: every continuation of {prefix} has zero mass")]
    DegenerateNode { prefix: String },

    #[error("predictor violates normalization at prefix {prefix} (conditionals sum to {sum})")]
    ContractViolation { prefix: String, sum: String },

    #[error("certificate too wide: best interval [{}, {}] at horizon {} misses the requested accuracy", .best.lower, .best.upper, .best.horizon)]
    CertificateTooWide { best: Box<CertifiedValue> },

    #[error("symbol at position {position} has zero predicted probability and cannot be coded")]
    UncodableSymbol { position: usize },

    #[error("bitstream was produced by a different model configuration")]
    WrongModel,

    #[error("corrupt bitstream: {0}")]
    CorruptStream(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for errors caused by running out of exact-mode budget.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::CertificateTooWide { .. }
        )
    }
}

/// Parses JSON, naming the offending field in the error.
pub(crate) fn parse_json<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            Error::config(format!("{what} JSON: {inner}"))
        } else {
            Error::config(format!("field `{path}`: {inner}"))
        }
    })
}

//! Offline-to-online conversion of sequential probability estimators.
//!
//! An *offline* estimator is a family `q_n` of probability mass functions, one
//! per horizon `n`, with no requirement that they cohere across horizons. An
//! *online* predictor is a single process whose conditionals sum to one at every
//! node. This crate provides:
//!
//! * [`numerics`]: exact rationals, log-domain values, multinomials, partition
//!   counts and count statistics;
//! * [`estimators`]: the combinatorial and finite-class offline estimators
//!   (uniform, Laplace, triple-uniform Good-Turing, Ristad, Bayes, NML, crude
//!   MDL, and two pathological families);
//! * [`converters`]: ratio, naive normalization, limit and truncated-mixture
//!   conversions, the `q̄_s` extension and the chain-rule CDF;
//! * [`diagnostics`]: time-consistency checks, exact and bounded worst-case
//!   regret, the Good-Turing regret identity and the staircase/cycle sequence
//!   bounds;
//! * [`coder`]: a bit-exact arithmetic coder driven by any normalized predictor.
//!
//! Everything is exact (arbitrary-precision rationals) unless a function name
//! says `log`.

pub mod coder;
pub mod converters;
pub mod diagnostics;
pub mod error;
pub mod estimators;
pub mod numerics;

pub use coder::{decode, encode, Bitstream};
pub use converters::{
    CertifiedValue, Completion, MixtureConfig, OnlinePredictor, Predictor, Prior, Scheme,
    SchemeConfig, Truncation,
};
pub use diagnostics::{RegretMethod, RegretReport, TcReport};
pub use error::{Error, Result};
pub use estimators::{
    ClassMember, EstimatorConfig, EstimatorKind, MarginalCapability, OfflineEstimator,
};
pub use numerics::{CountOfCounts, CountVector, ExactProb, LogProb, Sequence};

/// Largest number of states an exhaustive exact computation may visit.
pub const EXACT_BUDGET: u128 = 10_000_000;

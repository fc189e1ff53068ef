//! Offline estimator families `(q_n)`: one probability mass function per
//! horizon, with exact mass, log mass, and suffix marginals behind one type.

mod finite_class;
mod log_mass;
mod marginal;
mod mass;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{check_alphabet, ExactProb, Sequence};

pub use finite_class::ClassMember;
pub use marginal::MarginalMethod;

/// Longest sequence the exact mass routines accept.
pub const MAX_EXACT_LENGTH: usize = 20_000;

/// Which estimator family, with any family-specific parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EstimatorKind {
    /// `d^{-n}`.
    Uniform,
    /// Double-uniform over count vectors; its ratio predictor is Laplace's rule.
    Laplace,
    /// Triple-uniform over sequences given counts, counts given count-of-counts,
    /// and count-of-counts.
    GoodTuring,
    /// Ristad's quadruple-uniform construction.
    Ristad,
    /// Prior-weighted mixture over a finite class of i.i.d. measures.
    BayesFinite(Vec<ClassMember>),
    /// Normalized maximum of `w(ν) ν(x)` over a finite class.
    NmlFinite(Vec<ClassMember>),
    /// The single class member maximizing `w(ν) ν(x)`, renormalized over `X^n`.
    CrudeMdlFinite(Vec<ClassMember>),
    /// i.i.d. with `P(1) = 2/3` at even horizons and `1/3` at odd ones (binary only).
    AlternatingBernoulli,
    /// Uniform on positions `1..⌊n/2⌋-1`, Laplace on the rest.
    BadGood,
}

impl EstimatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            EstimatorKind::Uniform => "uniform",
            EstimatorKind::Laplace => "laplace",
            EstimatorKind::GoodTuring => "good_turing",
            EstimatorKind::Ristad => "ristad",
            EstimatorKind::BayesFinite(_) => "bayes_finite",
            EstimatorKind::NmlFinite(_) => "nml_finite",
            EstimatorKind::CrudeMdlFinite(_) => "crude_mdl_finite",
            EstimatorKind::AlternatingBernoulli => "alternating_bernoulli",
            EstimatorKind::BadGood => "bad_good",
        }
    }

    pub const ALL_NAMES: [&'static str; 9] = [
        "uniform",
        "laplace",
        "good_turing",
        "ristad",
        "bayes_finite",
        "nml_finite",
        "crude_mdl_finite",
        "alternating_bernoulli",
        "bad_good",
    ];
}

/// How a suffix marginal `Σ_{suffix} q_s(x·suffix)` can be computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginalCapability {
    ExhaustiveOnly,
    ExchangeableDp,
    ClosedForm,
}

/// JSON form: `{"kind": "...", "d": 2, "class": [{"theta": [...], "weight": ...}]}`.
///
/// Probabilities may be given as decimal numbers (read exactly, so `0.1` is
/// `1/10`) or as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorConfig {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Vec<ClassMember>>,
}

/// An offline estimator `(q_n)` over the alphabet `{1, ..., d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OfflineEstimator {
    d: usize,
    kind: EstimatorKind,
}

impl OfflineEstimator {
    pub fn new(kind: EstimatorKind, d: usize) -> Result<Self> {
        check_alphabet(d)?;
        match &kind {
            EstimatorKind::AlternatingBernoulli if d != 2 => {
                return Err(Error::config("alternating_bernoulli is binary: d must be 2"));
            }
            EstimatorKind::BayesFinite(class)
            | EstimatorKind::NmlFinite(class)
            | EstimatorKind::CrudeMdlFinite(class) => finite_class::validate(class, d)?,
            _ => {}
        }
        Ok(OfflineEstimator { d, kind })
    }

    pub fn uniform(d: usize) -> Result<Self> {
        Self::new(EstimatorKind::Uniform, d)
    }

    pub fn laplace(d: usize) -> Result<Self> {
        Self::new(EstimatorKind::Laplace, d)
    }

    pub fn good_turing(d: usize) -> Result<Self> {
        Self::new(EstimatorKind::GoodTuring, d)
    }

    pub fn ristad(d: usize) -> Result<Self> {
        Self::new(EstimatorKind::Ristad, d)
    }

    pub fn alternating_bernoulli() -> Self {
        OfflineEstimator {
            d: 2,
            kind: EstimatorKind::AlternatingBernoulli,
        }
    }

    pub fn bad_good(d: usize) -> Result<Self> {
        Self::new(EstimatorKind::BadGood, d)
    }

    pub fn from_config(cfg: &EstimatorConfig) -> Result<Self> {
        let d = cfg.d.unwrap_or(2);
        let class = || {
            cfg.class.clone().ok_or_else(|| {
                Error::config(format!("field `class` is required for kind {}", cfg.kind))
            })
        };
        let kind = match cfg.kind.as_str() {
            "uniform" => EstimatorKind::Uniform,
            "laplace" => EstimatorKind::Laplace,
            "good_turing" => EstimatorKind::GoodTuring,
            "ristad" => EstimatorKind::Ristad,
            "bayes_finite" => EstimatorKind::BayesFinite(class()?),
            "nml_finite" => EstimatorKind::NmlFinite(class()?),
            "crude_mdl_finite" => EstimatorKind::CrudeMdlFinite(class()?),
            "alternating_bernoulli" => EstimatorKind::AlternatingBernoulli,
            "bad_good" => EstimatorKind::BadGood,
            other => {
                return Err(Error::config(format!(
                    "field `kind`: unknown estimator kind {other:?} (expected one of {})",
                    EstimatorKind::ALL_NAMES.join(", ")
                )))
            }
        };
        if cfg.class.is_some() && finite_class::members(&kind).is_none() {
            return Err(Error::config(format!(
                "field `class` is not accepted by kind {}",
                cfg.kind
            )));
        }
        Self::new(kind, d)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: EstimatorConfig = crate::error::parse_json("estimator", text)?;
        Self::from_config(&cfg)
    }

    pub fn to_config(&self) -> EstimatorConfig {
        EstimatorConfig {
            kind: self.kind.name().to_string(),
            d: Some(self.d),
            class: finite_class::members(&self.kind).map(|c| c.to_vec()),
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> &EstimatorKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// Whether `q_n(x)` depends on `x` only through its count vector.
    pub fn is_exchangeable(&self) -> bool {
        !matches!(self.kind, EstimatorKind::BadGood)
    }

    /// Families that are time-consistent by construction.
    pub fn is_time_consistent_by_construction(&self) -> bool {
        matches!(
            self.kind,
            EstimatorKind::Uniform | EstimatorKind::Laplace | EstimatorKind::BayesFinite(_)
        )
    }

    pub fn marginal_capability(&self) -> MarginalCapability {
        match self.kind {
            EstimatorKind::Uniform
            | EstimatorKind::Laplace
            | EstimatorKind::BayesFinite(_)
            | EstimatorKind::AlternatingBernoulli
            | EstimatorKind::BadGood => MarginalCapability::ClosedForm,
            EstimatorKind::GoodTuring
            | EstimatorKind::Ristad
            | EstimatorKind::NmlFinite(_)
            | EstimatorKind::CrudeMdlFinite(_) => MarginalCapability::ExchangeableDp,
        }
    }

    pub(crate) fn check_sequence(&self, x: &Sequence) -> Result<()> {
        if x.alphabet_size() != self.d {
            return Err(Error::pre(format!(
                "sequence alphabet {} does not match estimator alphabet {}",
                x.alphabet_size(),
                self.d
            )));
        }
        Ok(())
    }

    /// `q_n(x)` for `n = |x|`, exactly.
    pub fn offline_mass(&self, x: &Sequence) -> Result<ExactProb> {
        self.check_sequence(x)?;
        if x.len() > MAX_EXACT_LENGTH {
            return Err(Error::BudgetExceeded {
                what: "exact offline mass",
                needed: x.len() as u128,
                limit: MAX_EXACT_LENGTH as u128,
            });
        }
        mass::offline_mass(self, x)
    }

    /// Masses `q_{n+1}(x·a)` of every one-symbol extension, in symbol order.
    pub fn child_masses(&self, x: &Sequence) -> Result<Vec<ExactProb>> {
        let mut child = x.clone();
        (1..=self.d)
            .map(|a| {
                child.push(a)?;
                let m = self.offline_mass(&child);
                child.pop();
                m
            })
            .collect()
    }
}

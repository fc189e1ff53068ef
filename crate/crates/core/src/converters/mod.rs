//! Offline-to-online conversion: ratio, naive normalization, limit and
//! truncated mixture, all behind the [`Predictor`] trait.

mod cdf;
mod extension;
mod limit;
mod mixture;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::estimators::{EstimatorConfig, OfflineEstimator};
use crate::numerics::{ExactProb, Sequence};

pub use cdf::cdf;
pub use extension::{extend_qbar, naive_norm_predict, normalizer, ratio_predict};
pub use limit::{limit_probe, LimitReport, LimitVerdict};
pub use mixture::{mixture_mass, mixture_predict, prior_weight, tail_bound, SymbolInterval};

/// How `q̄_s` continues past its horizon.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Completion {
    /// `d^{-(n-s)}` for the symbols beyond `s`.
    #[default]
    Uniform,
    /// Nothing beyond `s`; the mixture is then a semimeasure and gets normalized per node.
    Zero,
}

/// Mixture prior over horizons.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prior {
    /// `w_s = 1/((s+1)(s+2))`.
    #[default]
    Dense,
    /// `w_{2^k} = 1/((k+1)(k+2))`, zero elsewhere.
    Sparse,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Truncation {
    /// Sum horizons `0..=S`.
    Horizon(usize),
    /// Grow the horizon until the certificate has relative width at most `eps`.
    Accuracy(ExactProb),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixtureConfig {
    pub prior: Prior,
    pub completion: Completion,
    pub truncation: Truncation,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scheme {
    /// `q_t(x_{1:t}) / q_{t-1}(x_{<t})`.
    Ratio,
    /// The ratio predictor divided by its per-node normalizer.
    NaiveNorm,
    /// Ratios of `q̄_S` for one large horizon `S`.
    Limit { horizon: usize, completion: Completion },
    Mixture(MixtureConfig),
}

/// JSON form: `{"scheme": "mixture", "prior": "dense", "completion": "uniform", "S": 8}`
/// or `{"scheme": "mixture", "eps": "1/100"}`. `limit` takes `S` and `completion`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub scheme: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<Prior>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completion: Option<Completion>,
    #[serde(default, rename = "S", skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<ExactProb>,
}

/// Default horizon for the limit scheme when none is given.
pub const DEFAULT_LIMIT_HORIZON: usize = 64;

impl Scheme {
    pub const ALL_NAMES: [&'static str; 4] = ["ratio", "naive_norm", "limit", "mixture"];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Ratio => "ratio",
            Scheme::NaiveNorm => "naive_norm",
            Scheme::Limit { .. } => "limit",
            Scheme::Mixture(_) => "mixture",
        }
    }

    pub fn from_config(cfg: &SchemeConfig) -> Result<Self> {
        let reject = |field: &str| {
            Err(Error::config(format!(
                "field `{field}` is not accepted by scheme {}",
                cfg.scheme
            )))
        };
        match cfg.scheme.as_str() {
            "ratio" | "naive_norm" => {
                if cfg.prior.is_some() {
                    return reject("prior");
                }
                if cfg.completion.is_some() {
                    return reject("completion");
                }
                if cfg.horizon.is_some() {
                    return reject("S");
                }
                if cfg.eps.is_some() {
                    return reject("eps");
                }
                Ok(if cfg.scheme == "ratio" {
                    Scheme::Ratio
                } else {
                    Scheme::NaiveNorm
                })
            }
            "limit" => {
                if cfg.prior.is_some() {
                    return reject("prior");
                }
                if cfg.eps.is_some() {
                    return reject("eps");
                }
                Ok(Scheme::Limit {
                    horizon: cfg.horizon.unwrap_or(DEFAULT_LIMIT_HORIZON),
                    completion: cfg.completion.unwrap_or_default(),
                })
            }
            "mixture" => {
                let truncation = match (cfg.horizon, &cfg.eps) {
                    (Some(_), Some(_)) => {
                        return Err(Error::config(
                            "fields `S` and `eps` are mutually exclusive",
                        ))
                    }
                    (Some(s), None) => Truncation::Horizon(s),
                    (None, Some(eps)) => {
                        if eps.is_negative() || eps.is_zero() {
                            return Err(Error::config("field `eps`: must be positive"));
                        }
                        Truncation::Accuracy(eps.clone())
                    }
                    (None, None) => {
                        return Err(Error::config("scheme mixture needs field `S` or `eps`"))
                    }
                };
                Ok(Scheme::Mixture(MixtureConfig {
                    prior: cfg.prior.unwrap_or_default(),
                    completion: cfg.completion.unwrap_or_default(),
                    truncation,
                }))
            }
            other => Err(Error::config(format!(
                "field `scheme`: unknown scheme {other:?} (expected one of {})",
                Self::ALL_NAMES.join(", ")
            ))),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SchemeConfig = crate::error::parse_json("scheme", text)?;
        Self::from_config(&cfg)
    }

    pub fn to_config(&self) -> SchemeConfig {
        let mut cfg = SchemeConfig {
            scheme: self.name().to_string(),
            ..SchemeConfig::default()
        };
        match self {
            Scheme::Ratio | Scheme::NaiveNorm => {}
            Scheme::Limit { horizon, completion } => {
                cfg.horizon = Some(*horizon);
                cfg.completion = Some(*completion);
            }
            Scheme::Mixture(m) => {
                cfg.prior = Some(m.prior);
                cfg.completion = Some(m.completion);
                match &m.truncation {
                    Truncation::Horizon(s) => cfg.horizon = Some(*s),
                    Truncation::Accuracy(eps) => cfg.eps = Some(eps.clone()),
                }
            }
        }
        cfg
    }
}

/// Value bracketed by exact bounds, `lower ≤ true ≤ upper`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifiedValue {
    pub lower: ExactProb,
    pub upper: ExactProb,
    /// Largest mixture horizon included in `lower`.
    pub horizon: usize,
    pub method: String,
}

impl CertifiedValue {
    pub fn width(&self) -> ExactProb {
        &self.upper - &self.lower
    }

    pub fn contains(&self, v: &ExactProb) -> bool {
        &self.lower <= v && v <= &self.upper
    }
}

/// A sequential predictor: a conditional distribution at every prefix.
pub trait Predictor: Sync {
    fn alphabet_size(&self) -> usize;

    /// `q̃(a | prefix)` for `a = 1..=d`.
    fn distribution(&self, prefix: &Sequence) -> Result<Vec<ExactProb>>;

    /// Whether conditionals are guaranteed to sum to one at every node.
    fn guarantees_norm(&self) -> bool;

    /// Eight bytes identifying the configuration; stored in coded streams.
    fn digest(&self) -> [u8; 8];

    fn conditional(&self, prefix: &Sequence, symbol: usize) -> Result<ExactProb> {
        if symbol == 0 || symbol > self.alphabet_size() {
            return Err(Error::config(format!("symbol {symbol} outside alphabet")));
        }
        Ok(self.distribution(prefix)?.swap_remove(symbol - 1))
    }

    /// `q̃(x)` by the chain rule.
    fn joint(&self, x: &Sequence) -> Result<ExactProb> {
        let mut p = ExactProb::one();
        let mut prefix = Sequence::empty(self.alphabet_size())?;
        for &a in x.symbols() {
            p = p * self.conditional(&prefix, a)?;
            if p.is_zero() {
                return Ok(p);
            }
            prefix.push(a)?;
        }
        Ok(p)
    }

    /// `q̃(prefix·a)` for every `a`, given `q̃(prefix)`.
    fn child_joints(&self, prefix: &Sequence, joint: &ExactProb) -> Result<Vec<ExactProb>> {
        Ok(self
            .distribution(prefix)?
            .into_iter()
            .map(|c| c * joint)
            .collect())
    }
}

/// An offline estimator turned online by one of the conversion schemes.
#[derive(Clone, Debug, PartialEq)]
pub struct OnlinePredictor {
    source: OfflineEstimator,
    scheme: Scheme,
}

#[derive(Serialize)]
struct CanonicalConfig {
    estimator: EstimatorConfig,
    scheme: SchemeConfig,
}

impl OnlinePredictor {
    pub fn new(source: OfflineEstimator, scheme: Scheme) -> Self {
        OnlinePredictor { source, scheme }
    }

    pub fn source(&self) -> &OfflineEstimator {
        &self.source
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    /// Stable JSON describing estimator and scheme; the digest is taken over it.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(&CanonicalConfig {
            estimator: self.source.to_config(),
            scheme: self.scheme.to_config(),
        })
        .expect("config serializes")
    }
}

impl Predictor for OnlinePredictor {
    fn alphabet_size(&self) -> usize {
        self.source.alphabet_size()
    }

    fn distribution(&self, prefix: &Sequence) -> Result<Vec<ExactProb>> {
        self.source.check_sequence(prefix)?;
        match &self.scheme {
            Scheme::Ratio => extension::ratio_distribution(&self.source, prefix),
            Scheme::NaiveNorm => extension::naive_norm_distribution(&self.source, prefix),
            Scheme::Limit {
                horizon,
                completion,
            } => extension::limit_distribution(&self.source, prefix, *horizon, *completion),
            Scheme::Mixture(cfg) => mixture::distribution(&self.source, cfg, prefix),
        }
    }

    fn guarantees_norm(&self) -> bool {
        match self.scheme {
            Scheme::Ratio => self.source.is_time_consistent_by_construction(),
            _ => true,
        }
    }

    fn digest(&self) -> [u8; 8] {
        let h = Sha256::digest(self.canonical_json().as_bytes());
        let mut out = [0u8; 8];
        out.copy_from_slice(&h[..8]);
        out
    }
}

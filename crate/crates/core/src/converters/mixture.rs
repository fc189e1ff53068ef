use serde::Serialize;

use super::{extend_qbar, CertifiedValue, Completion, MixtureConfig, Prior, Truncation};
use crate::error::{Error, Result};
use crate::estimators::OfflineEstimator;
use crate::numerics::{ExactProb, Sequence};

/// Largest horizon an accuracy-targeted mixture will sum to.
pub const MAX_MIXTURE_HORIZON: usize = 4096;

/// `w_s` under `prior`.
pub fn prior_weight(prior: Prior, s: usize) -> ExactProb {
    let s = s as u64;
    match prior {
        Prior::Dense => ExactProb::ratio(1, (s + 1) * (s + 2)),
        Prior::Sparse => {
            if s.is_power_of_two() {
                let k = s.trailing_zeros() as u64;
                ExactProb::ratio(1, (k + 1) * (k + 2))
            } else {
                ExactProb::zero()
            }
        }
    }
}

/// `Σ_{s > S} w_s`, which bounds the truncated part since every `q̄_s ≤ 1`.
pub fn tail_bound(prior: Prior, horizon: usize) -> ExactProb {
    match prior {
        Prior::Dense => ExactProb::ratio(1, horizon as u64 + 2),
        Prior::Sparse => {
            // first k with 2^k > S
            let k = (usize::BITS - horizon.leading_zeros()) as u64;
            ExactProb::ratio(1, k + 1)
        }
    }
}

fn term(
    e: &OfflineEstimator,
    prior: Prior,
    completion: Completion,
    x: &Sequence,
    s: usize,
) -> Result<ExactProb> {
    let w = prior_weight(prior, s);
    if w.is_zero() {
        return Ok(w);
    }
    Ok(w * extend_qbar(e, x, s, completion)?)
}

/// `Σ_{s ≤ S} w_s q̄_s(x)`.
fn truncated(
    e: &OfflineEstimator,
    prior: Prior,
    completion: Completion,
    x: &Sequence,
    horizon: usize,
) -> Result<ExactProb> {
    let mut total = ExactProb::zero();
    for s in 0..=horizon {
        total = total + term(e, prior, completion, x, s)?;
    }
    Ok(total)
}

fn certificate(cfg: &MixtureConfig, lower: ExactProb, horizon: usize) -> CertifiedValue {
    let mut upper = &lower + tail_bound(cfg.prior, horizon);
    if upper > ExactProb::one() {
        upper = ExactProb::one();
    }
    let prior = match cfg.prior {
        Prior::Dense => "dense",
        Prior::Sparse => "sparse",
    };
    let completion = match cfg.completion {
        Completion::Uniform => "uniform",
        Completion::Zero => "zero",
    };
    CertifiedValue {
        lower,
        upper,
        horizon,
        method: format!("{prior} prior, {completion} completion, horizons 0..={horizon}"),
    }
}

/// Grow `S` until `tail(S) ≤ eps · lower(S)`, which certifies relative accuracy `eps`.
fn certify_accuracy(
    e: &OfflineEstimator,
    cfg: &MixtureConfig,
    x: &Sequence,
    eps: &ExactProb,
) -> Result<CertifiedValue> {
    let mut lower = ExactProb::zero();
    let mut s = 0;
    loop {
        match term(e, cfg.prior, cfg.completion, x, s) {
            Ok(t) => lower = lower + t,
            Err(err) if err.is_budget() && s > 0 => {
                return Err(Error::CertificateTooWide {
                    best: Box::new(certificate(cfg, lower, s - 1)),
                })
            }
            Err(err) => return Err(err),
        }
        if !lower.is_zero() && tail_bound(cfg.prior, s) <= eps * &lower {
            return Ok(certificate(cfg, lower, s));
        }
        // lower only grows and never passes lower + tail(s), so if even that misses
        // at the largest horizon there is no point summing further.
        let reachable = tail_bound(cfg.prior, MAX_MIXTURE_HORIZON)
            <= eps * (&lower + tail_bound(cfg.prior, s));
        if s == MAX_MIXTURE_HORIZON || !reachable {
            return Err(Error::CertificateTooWide {
                best: Box::new(certificate(cfg, lower, s)),
            });
        }
        s += 1;
    }
}

/// Certified bracket on `q̃^mix(x) = Σ_s w_s q̄_s(x)`.
pub fn mixture_mass(e: &OfflineEstimator, cfg: &MixtureConfig, x: &Sequence) -> Result<CertifiedValue> {
    e.check_sequence(x)?;
    match &cfg.truncation {
        Truncation::Horizon(s) => {
            let lower = truncated(e, cfg.prior, cfg.completion, x, *s)?;
            Ok(certificate(cfg, lower, *s))
        }
        Truncation::Accuracy(eps) => certify_accuracy(e, cfg, x, eps),
    }
}

/// One horizon shared by `prefix` and all its one-symbol extensions.
fn common_horizon(e: &OfflineEstimator, cfg: &MixtureConfig, prefix: &Sequence) -> Result<usize> {
    match &cfg.truncation {
        Truncation::Horizon(s) => Ok(*s),
        Truncation::Accuracy(eps) => {
            let mut s = certify_accuracy(e, cfg, prefix, eps)?.horizon;
            for a in 1..=e.alphabet_size() {
                s = s.max(certify_accuracy(e, cfg, &prefix.extended(a)?, eps)?.horizon);
            }
            Ok(s)
        }
    }
}

fn child_lowers(
    e: &OfflineEstimator,
    cfg: &MixtureConfig,
    prefix: &Sequence,
    horizon: usize,
) -> Result<Vec<ExactProb>> {
    (1..=e.alphabet_size())
        .map(|a| truncated(e, cfg.prior, cfg.completion, &prefix.extended(a)?, horizon))
        .collect()
}

pub(super) fn distribution(
    e: &OfflineEstimator,
    cfg: &MixtureConfig,
    prefix: &Sequence,
) -> Result<Vec<ExactProb>> {
    let horizon = common_horizon(e, cfg, prefix)?;
    let children = child_lowers(e, cfg, prefix, horizon)?;
    // With uniform completion the children sum to the parent exactly; with zero
    // completion this is the per-node normalization of the semimeasure.
    let total: ExactProb = children.iter().sum();
    if total.is_zero() {
        return Err(Error::DegenerateNode {
            prefix: prefix.to_string(),
        });
    }
    Ok(children.into_iter().map(|c| c / &total).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolInterval {
    pub symbol: usize,
    pub lower: ExactProb,
    pub upper: ExactProb,
    /// Conditional of the truncated mixture; these sum to one across symbols.
    pub point: ExactProb,
}

fn clip(v: ExactProb) -> ExactProb {
    if v > ExactProb::one() {
        ExactProb::one()
    } else {
        v
    }
}

/// Per-symbol conditional brackets for the mixture predictor at `prefix`.
pub fn mixture_predict(
    e: &OfflineEstimator,
    cfg: &MixtureConfig,
    prefix: &Sequence,
) -> Result<Vec<SymbolInterval>> {
    e.check_sequence(prefix)?;
    let horizon = common_horizon(e, cfg, prefix)?;
    let tail = tail_bound(cfg.prior, horizon);
    let parent = truncated(e, cfg.prior, cfg.completion, prefix, horizon)?;
    let children = child_lowers(e, cfg, prefix, horizon)?;
    let total: ExactProb = children.iter().sum();
    if parent.is_zero() || total.is_zero() {
        return Err(Error::DegenerateNode {
            prefix: prefix.to_string(),
        });
    }
    let parent_upper = &parent + &tail;
    Ok(children
        .into_iter()
        .enumerate()
        .map(|(i, c)| SymbolInterval {
            symbol: i + 1,
            lower: clip(&c / &parent_upper),
            upper: clip((&c + &tail) / &parent),
            point: c / &total,
        })
        .collect())
}

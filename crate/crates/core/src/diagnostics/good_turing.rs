use serde::Serialize;

use super::regret::{check_budget, regret_exact, Best, Ratio};
use crate::converters::{OnlinePredictor, Scheme};
use crate::error::Result;
use crate::estimators::OfflineEstimator;
use crate::numerics::{partition_count_at_most, CountOfCounts, ExactProb, Sequence};

/// `N_n = (1/(n+1)) Σ_{r: m_r ≠ 0} (r+1)(m_{r+1}+1)` from a count-of-counts table.
pub fn gt_nn_from_counts(n: u64, m: &CountOfCounts) -> ExactProb {
    let mut total: u64 = 0;
    for r in 0..=n {
        if m.get(r) != 0 {
            total += (r + 1) * (m.get(r + 1) + 1);
        }
    }
    ExactProb::ratio(total, n + 1)
}

/// `N_n` of the Good-Turing family at `x`.
///
/// The ratio-predictor normalizer is `N(x) = [P(n)/P(n+1)]·N_n`, with `P` counting
/// the partitions of `n` into at most `d` parts.
pub fn gt_nn(x: &Sequence) -> ExactProb {
    let c = x.counts();
    gt_nn_from_counts(c.total(), &c.count_of_counts())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GtIdentityReport {
    pub d: usize,
    pub n: usize,
    /// `max_x q_n(x)/q̃(x)` from the exhaustive search.
    pub exhaustive_ratio: ExactProb,
    /// `max_x Π_{t=1}^n N_{t-1}(x_{<t}) / P(n)`.
    pub identity_ratio: ExactProb,
    pub regret_nats: f64,
    pub maximizer: Option<Sequence>,
    pub holds: bool,
}

/// Evaluates both sides of `R_n = max_x Σ_t ln N_{t-1} − ln P(n)` for naive-normalized
/// Good-Turing, each exactly and independently.
pub fn gt_regret_identity(d: usize, n: usize) -> Result<GtIdentityReport> {
    let e = OfflineEstimator::good_turing(d)?;
    let p = OnlinePredictor::new(e.clone(), Scheme::NaiveNorm);
    let exhaustive = regret_exact(&e, &p, n)?;

    check_budget("regret identity", d, n.saturating_sub(1))?;
    let mut best = Best::default();
    // The product only depends on x_{1:n-1}.
    for head in Sequence::all_of_length(d, n.saturating_sub(1)) {
        let mut prod = ExactProb::one();
        for t in 0..n {
            prod = prod * gt_nn(&head.prefix(t));
        }
        best.offer(Ratio(Some(prod)), &head);
    }
    let part = ExactProb::from(partition_count_at_most(n, d));
    let identity_ratio = best.ratio.and_then(|r| r.0).unwrap_or_else(ExactProb::one) / part;
    let exhaustive_ratio = exhaustive.ratio.unwrap_or_else(ExactProb::zero);
    Ok(GtIdentityReport {
        d,
        n,
        holds: identity_ratio == exhaustive_ratio,
        regret_nats: exhaustive.value,
        maximizer: exhaustive.maximizer,
        exhaustive_ratio,
        identity_ratio,
    })
}

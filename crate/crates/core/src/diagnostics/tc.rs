use num_bigint::BigUint;
use serde::Serialize;

use crate::error::Result;
use crate::estimators::OfflineEstimator;
use crate::numerics::{ExactProb, Sequence};
use crate::EXACT_BUDGET;

/// A node where the children's masses do not add up to the parent's.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TcWitness {
    pub prefix: Sequence,
    /// `q_{n-1}(prefix)`.
    pub parent: ExactProb,
    /// `Σ_a q_n(prefix·a)`.
    pub children: ExactProb,
    /// `parent - children`.
    pub deficit: ExactProb,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TcReport {
    pub estimator: String,
    pub requested_depth: usize,
    /// Deepest level fully checked.
    pub depth_checked: usize,
    pub witness: Option<TcWitness>,
    /// Set when the budget stopped the check before `requested_depth`.
    pub stopped: Option<String>,
}

impl TcReport {
    /// True when no witness was found and every requested level was checked.
    pub fn holds(&self) -> bool {
        self.witness.is_none() && self.depth_checked == self.requested_depth
    }
}

/// Checks `Σ_a q_n(x·a) = q_{n-1}(x)` level by level, so the witness returned is the
/// shallowest one (and lexicographically first at that level).
pub fn check_tc(e: &OfflineEstimator, max_n: usize) -> Result<TcReport> {
    let d = e.alphabet_size();
    let mut report = TcReport {
        estimator: e.name().to_string(),
        requested_depth: max_n,
        depth_checked: 0,
        witness: None,
        stopped: None,
    };
    let root = Sequence::empty(d)?;
    let q0 = e.offline_mass(&root)?;
    if !q0.is_one() {
        report.witness = Some(TcWitness {
            prefix: root,
            deficit: ExactProb::one() - &q0,
            parent: ExactProb::one(),
            children: q0,
        });
        return Ok(report);
    }
    for t in 1..=max_n {
        let states = BigUint::from(d).pow(t as u32);
        if states > BigUint::from(EXACT_BUDGET) {
            report.stopped = Some(format!(
                "level {t} has {states} nodes, beyond the exact budget of {EXACT_BUDGET}"
            ));
            return Ok(report);
        }
        for x in Sequence::all_of_length(d, t - 1) {
            let parent = e.offline_mass(&x)?;
            let children: ExactProb = e.child_masses(&x)?.into_iter().sum();
            if children != parent {
                report.witness = Some(TcWitness {
                    prefix: x,
                    deficit: &parent - &children,
                    parent,
                    children,
                });
                return Ok(report);
            }
        }
        report.depth_checked = t;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::tests_support;

    #[test]
    fn tc_examples() {
        let r = check_tc(&OfflineEstimator::laplace(2).unwrap(), 5).unwrap();
        assert!(r.holds());
        let r = check_tc(&OfflineEstimator::uniform(3).unwrap(), 4).unwrap();
        assert!(r.holds());
        let r = check_tc(&OfflineEstimator::good_turing(2).unwrap(), 3).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.prefix.to_string(), "1,1");
        assert_eq!(w.parent, ExactProb::ratio(1, 4));
        assert_eq!(w.children, ExactProb::ratio(1, 3));
        assert_eq!(r.depth_checked, 2);
    }

    #[test]
    fn known_families() {
        for name in ["uniform", "laplace", "bayes_finite"] {
            assert!(check_tc(&tests_support::estimator(name, 2), 6).unwrap().holds(), "{name}");
        }
        for name in ["good_turing", "ristad", "alternating_bernoulli", "bad_good"] {
            assert!(check_tc(&tests_support::estimator(name, 2), 6).unwrap().witness.is_some(), "{name}");
        }
    }

    #[test]
    fn budget_stops_early() {
        let r = check_tc(&OfflineEstimator::uniform(400).unwrap(), 4).unwrap();
        assert_eq!(r.depth_checked, 2);
        assert!(r.stopped.is_some());
        assert!(!r.holds());
    }
}

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::mass::{alternating_p1, bad_good_block, laplace, mass_from_counts};
use super::{EstimatorKind, MarginalCapability, OfflineEstimator};
use crate::error::{Error, Result};
use crate::numerics::{composition_count, compositions, multinomial, ExactProb, Sequence};
use crate::EXACT_BUDGET;

/// Which algorithm computes `Σ_{suffix} q_s(x·suffix)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginalMethod {
    /// The cheapest method the estimator supports.
    #[default]
    Auto,
    ClosedForm,
    ExchangeableDp,
    Exhaustive,
}

fn budget(what: &'static str, needed: BigUint) -> Result<()> {
    if needed > BigUint::from(EXACT_BUDGET) {
        return Err(Error::BudgetExceeded {
            what,
            needed: u128::try_from(&needed).unwrap_or(u128::MAX),
            limit: EXACT_BUDGET,
        });
    }
    Ok(())
}

impl OfflineEstimator {
    /// `Σ_{x_{n+1:s}} q_s(x_{1:s})` for `s ≥ n = |x|`.
    pub fn suffix_marginal(&self, x: &Sequence, s: usize) -> Result<ExactProb> {
        self.suffix_marginal_with(x, s, MarginalMethod::Auto)
    }

    pub fn suffix_marginal_with(
        &self,
        x: &Sequence,
        s: usize,
        method: MarginalMethod,
    ) -> Result<ExactProb> {
        self.check_sequence(x)?;
        let n = x.len();
        if s < n {
            return Err(Error::pre(format!(
                "suffix marginal needs s >= n (got s={s}, n={n})"
            )));
        }
        if s == n {
            return self.offline_mass(x);
        }
        let method = match method {
            MarginalMethod::Auto => match self.marginal_capability() {
                MarginalCapability::ClosedForm => MarginalMethod::ClosedForm,
                MarginalCapability::ExchangeableDp => MarginalMethod::ExchangeableDp,
                MarginalCapability::ExhaustiveOnly => MarginalMethod::Exhaustive,
            },
            m => m,
        };
        match method {
            MarginalMethod::ClosedForm => self.closed_form_marginal(x, s),
            MarginalMethod::ExchangeableDp => self.dp_marginal(x, s),
            MarginalMethod::Exhaustive => self.exhaustive_marginal(x, s),
            MarginalMethod::Auto => unreachable!(),
        }
    }

    fn closed_form_marginal(&self, x: &Sequence, s: usize) -> Result<ExactProb> {
        match self.kind {
            EstimatorKind::Uniform | EstimatorKind::Laplace | EstimatorKind::BayesFinite(_) => {
                self.offline_mass(x)
            }
            EstimatorKind::AlternatingBernoulli => {
                let p1 = alternating_p1(s as u64);
                let p2 = ExactProb::one() - &p1;
                let c = x.counts();
                Ok(p1.pow_u(c.get(1)) * p2.pow_u(c.get(2)))
            }
            EstimatorKind::BadGood => {
                let b = bad_good_block(s);
                let d = self.d as u64;
                if x.len() <= b {
                    Ok(ExactProb::ratio(1, d).pow_u(x.len() as u64))
                } else {
                    // Laplace is TC, so summing out the tail leaves the observed block.
                    Ok(ExactProb::ratio(1, d).pow_u(b as u64) * laplace(&x.suffix_from(b).counts()))
                }
            }
            _ => Err(Error::pre(format!(
                "{} has no closed-form suffix marginal",
                self.name()
            ))),
        }
    }

    fn dp_marginal(&self, x: &Sequence, s: usize) -> Result<ExactProb> {
        if !self.is_exchangeable() {
            return Err(Error::pre(format!(
                "{} is not exchangeable; use the exhaustive marginal",
                self.name()
            )));
        }
        let k = (s - x.len()) as u64;
        budget("exchangeable suffix marginal", composition_count(k, self.d))?;
        let c = x.counts();
        let mut total = ExactProb::zero();
        for extra in compositions(k, self.d) {
            let q = mass_from_counts(self, &c.plus(&extra))?;
            if !q.is_zero() {
                total = total + ExactProb::from(multinomial(k, &extra)?) * q;
            }
        }
        Ok(total)
    }

    fn exhaustive_marginal(&self, x: &Sequence, s: usize) -> Result<ExactProb> {
        let n = x.len();
        let k = s - n;
        budget(
            "exhaustive suffix marginal",
            BigUint::from(self.d).pow(n.max(k) as u32),
        )?;
        let mut total = ExactProb::zero();
        for tail in Sequence::all_of_length(self.d, k) {
            let mut full = x.symbols().to_vec();
            full.extend_from_slice(tail.symbols());
            total = total + self.offline_mass(&Sequence::new(self.d, full)?)?;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::tests_support;

    fn seq(d: usize, s: &str) -> Sequence {
        Sequence::parse(d, s).unwrap()
    }

    #[test]
    fn marginal_examples() {
        let gt = OfflineEstimator::good_turing(2).unwrap();
        // q_3(111) + q_3(112) = 1/4 + 1/12 under realizable-partition normalization
        assert_eq!(gt.suffix_marginal(&seq(2, "1,1"), 3).unwrap(), ExactProb::ratio(1, 3));
        assert_eq!(gt.suffix_marginal(&seq(2, "1"), 2).unwrap(), ExactProb::ratio(1, 2));
        let lap = OfflineEstimator::laplace(2).unwrap();
        assert_eq!(lap.suffix_marginal(&seq(2, "1"), 5).unwrap(), ExactProb::ratio(1, 2));
        let ab = OfflineEstimator::alternating_bernoulli();
        assert_eq!(ab.suffix_marginal(&seq(2, "1"), 4).unwrap(), ExactProb::ratio(2, 3));
        assert_eq!(ab.suffix_marginal(&seq(2, "1"), 5).unwrap(), ExactProb::ratio(1, 3));
        assert!(gt.suffix_marginal(&seq(2, "1,1"), 1).is_err());
    }

    #[test]
    fn dp_and_closed_form_agree_with_exhaustive() {
        for d in [2, 3] {
            for e in tests_support::all(d) {
                for n in 0..=3 {
                    let s_max = if d == 2 { 7 } else { 5 };
                    for x in Sequence::all_of_length(d, n) {
                        for s in n..=s_max {
                            let brute = e
                                .suffix_marginal_with(&x, s, MarginalMethod::Exhaustive)
                                .unwrap();
                            let fast = e.suffix_marginal(&x, s).unwrap();
                            assert_eq!(fast, brute, "{} x={x} s={s}", e.name());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tc_kinds_have_constant_marginals() {
        for name in ["uniform", "laplace", "bayes_finite"] {
            let e = tests_support::estimator(name, 2);
            for x in Sequence::all_of_length(2, 3) {
                let q = e.offline_mass(&x).unwrap();
                for s in 3..8 {
                    let m = e.suffix_marginal_with(&x, s, MarginalMethod::Exhaustive).unwrap();
                    assert_eq!(m, q, "{name} {x} {s}");
                }
            }
        }
    }

    #[test]
    fn bad_good_marginal_reaches_uniform() {
        let e = OfflineEstimator::bad_good(2).unwrap();
        for s in [6, 8, 10, 12] {
            assert_eq!(e.suffix_marginal(&seq(2, "1,1"), s).unwrap(), ExactProb::ratio(1, 4));
        }
    }
}

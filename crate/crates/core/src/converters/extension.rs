use super::Completion;
use crate::error::{Error, Result};
use crate::estimators::OfflineEstimator;
use crate::numerics::{ExactProb, Sequence};

/// `q̄_s(x)`: the marginal of `q_s` for `|x| ≤ s`, the completion beyond it.
pub fn extend_qbar(
    e: &OfflineEstimator,
    x: &Sequence,
    s: usize,
    completion: Completion,
) -> Result<ExactProb> {
    let n = x.len();
    if n <= s {
        return e.suffix_marginal(x, s);
    }
    match completion {
        Completion::Zero => {
            e.check_sequence(x)?;
            Ok(ExactProb::zero())
        }
        Completion::Uniform => {
            let head = e.offline_mass(&x.prefix(s))?;
            Ok(head * ExactProb::ratio(1, e.alphabet_size() as u64).pow_u((n - s) as u64))
        }
    }
}

/// `q_{t}(x·a) / q_{t-1}(x)` for every `a`.
fn ratios(e: &OfflineEstimator, prefix: &Sequence) -> Result<Vec<ExactProb>> {
    e.check_sequence(prefix)?;
    if let Some(r) = e.closed_form_ratios(prefix) {
        return Ok(r);
    }
    let parent = e.offline_mass(prefix)?;
    if parent.is_zero() {
        return Err(Error::UndefinedConditional {
            prefix: prefix.to_string(),
        });
    }
    Ok(e.child_masses(prefix)?
        .into_iter()
        .map(|c| c / &parent)
        .collect())
}

pub(super) fn ratio_distribution(e: &OfflineEstimator, prefix: &Sequence) -> Result<Vec<ExactProb>> {
    ratios(e, prefix)
}

pub(super) fn naive_norm_distribution(
    e: &OfflineEstimator,
    prefix: &Sequence,
) -> Result<Vec<ExactProb>> {
    let r = ratios(e, prefix)?;
    let total: ExactProb = r.iter().sum();
    if total.is_zero() {
        return Err(Error::DegenerateNode {
            prefix: prefix.to_string(),
        });
    }
    Ok(r.into_iter().map(|v| v / &total).collect())
}

pub(super) fn limit_distribution(
    e: &OfflineEstimator,
    prefix: &Sequence,
    horizon: usize,
    completion: Completion,
) -> Result<Vec<ExactProb>> {
    let d = e.alphabet_size();
    if prefix.len() >= horizon {
        return match completion {
            Completion::Uniform => {
                if e.offline_mass(&prefix.prefix(horizon))?.is_zero() {
                    return Err(Error::UndefinedConditional {
                        prefix: prefix.to_string(),
                    });
                }
                Ok(vec![ExactProb::ratio(1, d as u64); d])
            }
            Completion::Zero => Err(Error::DegenerateNode {
                prefix: prefix.to_string(),
            }),
        };
    }
    let parent = extend_qbar(e, prefix, horizon, completion)?;
    if parent.is_zero() {
        return Err(Error::UndefinedConditional {
            prefix: prefix.to_string(),
        });
    }
    (1..=d)
        .map(|a| Ok(extend_qbar(e, &prefix.extended(a)?, horizon, completion)? / &parent))
        .collect()
}

fn check_symbol(e: &OfflineEstimator, symbol: usize) -> Result<()> {
    if symbol == 0 || symbol > e.alphabet_size() {
        return Err(Error::config(format!(
            "symbol {symbol} outside alphabet 1..={}",
            e.alphabet_size()
        )));
    }
    Ok(())
}

/// `q_t(x_{<t}·a) / q_{t-1}(x_{<t})`; may exceed one for sources that are not time-consistent.
pub fn ratio_predict(e: &OfflineEstimator, prefix: &Sequence, symbol: usize) -> Result<ExactProb> {
    check_symbol(e, symbol)?;
    Ok(ratios(e, prefix)?.swap_remove(symbol - 1))
}

/// `N(x_{<t}) = Σ_a q_t(x_{<t}·a) / q_{t-1}(x_{<t})`; equals one exactly where the source is consistent.
pub fn normalizer(e: &OfflineEstimator, prefix: &Sequence) -> Result<ExactProb> {
    Ok(ratios(e, prefix)?.iter().sum())
}

pub fn naive_norm_predict(
    e: &OfflineEstimator,
    prefix: &Sequence,
    symbol: usize,
) -> Result<ExactProb> {
    check_symbol(e, symbol)?;
    Ok(naive_norm_distribution(e, prefix)?.swap_remove(symbol - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::converters::{OnlinePredictor, Predictor, Scheme};
    use crate::estimators::tests_support;
    use proptest::prelude::*;

    fn seq(d: usize, s: &str) -> Sequence {
        Sequence::parse(d, s).unwrap()
    }

    #[test]
    fn qbar_examples() {
        let gt = OfflineEstimator::good_turing(2).unwrap();
        let v = extend_qbar(&gt, &seq(2, "1,1"), 1, Completion::Uniform).unwrap();
        assert_eq!(v, ExactProb::ratio(1, 4));
        assert!(extend_qbar(&gt, &seq(2, "1,1"), 1, Completion::Zero).unwrap().is_zero());
        assert_eq!(extend_qbar(&gt, &seq(2, "1"), 2, Completion::Uniform).unwrap(), ExactProb::ratio(1, 2));
        for x in Sequence::all_of_length(2, 3) {
            assert_eq!(
                extend_qbar(&gt, &x, 3, Completion::Uniform).unwrap(),
                gt.offline_mass(&x).unwrap()
            );
        }
    }

    #[test]
    fn ratio_examples() {
        let ab = OfflineEstimator::alternating_bernoulli();
        assert_eq!(ratio_predict(&ab, &seq(2, "1"), 1).unwrap(), ExactProb::ratio(4, 3));
        let lap = OfflineEstimator::laplace(2).unwrap();
        assert_eq!(ratio_predict(&lap, &seq(2, "1"), 1).unwrap(), ExactProb::ratio(2, 3));
        let u = OfflineEstimator::uniform(3).unwrap();
        assert_eq!(ratio_predict(&u, &seq(3, "2,3"), 2).unwrap(), ExactProb::ratio(1, 3));
        assert!(ratio_predict(&u, &seq(3, "2,3"), 4).is_err());
    }

    #[test]
    fn normalizer_examples() {
        let gt = OfflineEstimator::good_turing(2).unwrap();
        assert_eq!(normalizer(&gt, &seq(2, "1,1")).unwrap(), ExactProb::ratio(4, 3));
        let ri = OfflineEstimator::ristad(2).unwrap();
        assert_eq!(normalizer(&ri, &seq(2, "1,2")).unwrap(), ExactProb::ratio(2, 3));
        let lap = OfflineEstimator::laplace(2).unwrap();
        for x in Sequence::all_of_length(2, 4) {
            assert!(normalizer(&lap, &x).unwrap().is_one());
        }
    }

    #[test]
    fn naive_norm_examples() {
        let gt = OfflineEstimator::good_turing(3).unwrap();
        assert_eq!(naive_norm_predict(&gt, &seq(3, "1,2"), 3).unwrap(), ExactProb::ratio(3, 5));
        assert_eq!(naive_norm_predict(&gt, &seq(3, "1,2"), 1).unwrap(), ExactProb::ratio(1, 5));
        let ri = OfflineEstimator::ristad(2).unwrap();
        assert_eq!(naive_norm_predict(&ri, &seq(2, "1"), 2).unwrap(), ExactProb::ratio(1, 2));
    }

    #[test]
    fn closed_form_ratios_match_mass_ratios() {
        for d in [2, 3, 5] {
            for name in ["uniform", "laplace", "good_turing", "ristad", "bayes_finite"] {
                let e = tests_support::estimator(name, d);
                for n in 0..=4 {
                    for x in Sequence::all_of_length(d, n) {
                        let closed = e.closed_form_ratios(&x).unwrap();
                        let parent = e.offline_mass(&x).unwrap();
                        let direct: Vec<ExactProb> = e
                            .child_masses(&x)
                            .unwrap()
                            .into_iter()
                            .map(|c| c / &parent)
                            .collect();
                        assert_eq!(closed, direct, "{name} d={d} x={x}");
                    }
                }
            }
        }
    }

    #[test]
    fn tc_sources_agree_across_schemes() {
        for name in ["uniform", "laplace", "bayes_finite"] {
            let e = tests_support::estimator(name, 2);
            let schemes = [
                Scheme::Ratio,
                Scheme::NaiveNorm,
                Scheme::Limit {
                    horizon: 9,
                    completion: Completion::Uniform,
                },
            ];
            for n in 0..=4 {
                for x in Sequence::all_of_length(2, n) {
                    let dists: Vec<_> = schemes
                        .iter()
                        .map(|s| OnlinePredictor::new(e.clone(), s.clone()).distribution(&x).unwrap())
                        .collect();
                    assert_eq!(dists[0], dists[1], "{name} {x}");
                    assert_eq!(dists[0], dists[2], "{name} {x}");
                }
            }
        }
    }

    #[test]
    fn ratio_norm_iff_normalizer_one() {
        for d in [2, 3] {
            for e in tests_support::all(d) {
                for n in 0..=3 {
                    for x in Sequence::all_of_length(d, n) {
                        let Ok(n_x) = normalizer(&e, &x) else { continue };
                        let p = OnlinePredictor::new(e.clone(), Scheme::Ratio);
                        let sum: ExactProb = p.distribution(&x).unwrap().iter().sum();
                        assert_eq!(sum, n_x);
                        let nn = OnlinePredictor::new(e.clone(), Scheme::NaiveNorm);
                        let s2: ExactProb = nn.distribution(&x).unwrap().iter().sum();
                        assert!(s2.is_one());
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn limit_predictor_is_normalized(
            raw in prop::collection::vec(0usize..100, 0..=5),
            horizon in 0usize..8,
            kind in 0usize..9,
        ) {
            let e = tests_support::estimator(crate::EstimatorKind::ALL_NAMES[kind], 2);
            let x = Sequence::new(2, raw.iter().map(|v| v % 2 + 1).collect()).unwrap();
            let p = OnlinePredictor::new(e, Scheme::Limit { horizon, completion: Completion::Uniform });
            if let Ok(dist) = p.distribution(&x) {
                let sum: ExactProb = dist.iter().sum();
                prop_assert!(sum.is_one());
            }
        }
    }
}

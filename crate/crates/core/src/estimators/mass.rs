use num_bigint::BigUint;

use super::{finite_class, EstimatorKind, OfflineEstimator};
use crate::error::{Error, Result};
use crate::numerics::{
    binomial, count_of_counts, multinomial, partition_count_at_most, CountVector, ExactProb,
    Sequence,
};

pub(super) fn offline_mass(e: &OfflineEstimator, x: &Sequence) -> Result<ExactProb> {
    match e.kind {
        EstimatorKind::BadGood => Ok(bad_good(e.d, x)),
        _ => mass_from_counts(e, &x.counts()),
    }
}

/// `P(1)` at horizon `n` for the alternating Bernoulli family.
pub(super) fn alternating_p1(n: u64) -> ExactProb {
    if n % 2 == 0 {
        ExactProb::ratio(2, 3)
    } else {
        ExactProb::ratio(1, 3)
    }
}

/// `q_n` for exchangeable kinds, from the count vector alone (`n = Σ counts`).
pub(super) fn mass_from_counts(e: &OfflineEstimator, c: &CountVector) -> Result<ExactProb> {
    let d = e.d as u64;
    let n = c.total();
    Ok(match &e.kind {
        EstimatorKind::Uniform => ExactProb::from(d).pow_u(n).recip()?,
        EstimatorKind::Laplace => laplace(c),
        EstimatorKind::GoodTuring => {
            let m = count_of_counts(c);
            let denom = multinomial(n, c.counts())?
                * multinomial(d, m.as_slice())?
                * partition_count_at_most(n as usize, e.d);
            ExactProb::recip_of(&denom)
        }
        EstimatorKind::Ristad => ristad(c, d)?,
        EstimatorKind::BayesFinite(class) => finite_class::bayes(class, c),
        EstimatorKind::NmlFinite(class) => {
            finite_class::weighted_max(class, c) / finite_class::nml_normalizer(class, n, e.d)?
        }
        EstimatorKind::CrudeMdlFinite(class) => {
            finite_class::mdl_raw(class, c) / finite_class::mdl_normalizer(class, n, e.d)?
        }
        EstimatorKind::AlternatingBernoulli => {
            let p1 = alternating_p1(n);
            let p2 = ExactProb::one() - &p1;
            p1.pow_u(c.get(1)) * p2.pow_u(c.get(2))
        }
        EstimatorKind::BadGood => {
            return Err(Error::pre("bad_good mass depends on order, not only counts"))
        }
    })
}

/// `C(n + d - 1; n_1, ..., n_d, d - 1)^{-1}`.
pub(super) fn laplace(c: &CountVector) -> ExactProb {
    let n = c.total();
    let d = c.alphabet_size() as u64;
    let denom = multinomial(n, c.counts()).expect("counts sum to total") * binomial(n + d - 1, d - 1);
    ExactProb::recip_of(&denom)
}

fn ristad(c: &CountVector, d: u64) -> Result<ExactProb> {
    let n = c.total();
    if n == 0 {
        return Ok(ExactProb::one());
    }
    let m = c.distinct() as u64;
    let denom: BigUint = multinomial(n, c.counts())?
        * binomial(n - 1, m - 1)
        * binomial(d, m)
        * BigUint::from(n.min(d));
    Ok(ExactProb::recip_of(&denom))
}

/// Length of the uniform block for a bad_good horizon `n`: positions `1..⌊n/2⌋-1`.
pub(super) fn bad_good_block(n: usize) -> usize {
    (n / 2).saturating_sub(1)
}

fn bad_good(d: usize, x: &Sequence) -> ExactProb {
    let b = bad_good_block(x.len());
    let uniform = ExactProb::ratio(1, d as u64).pow_u(b as u64);
    uniform * laplace(&x.suffix_from(b).counts())
}

impl OfflineEstimator {
    /// `Σ_{x ∈ X^n} max_ν w(ν) ν(x)`, by summing over count vectors.
    pub fn nml_normalizer(&self, n: usize) -> Result<ExactProb> {
        match &self.kind {
            EstimatorKind::NmlFinite(class) => finite_class::nml_normalizer(class, n as u64, self.d),
            _ => Err(Error::pre("nml_normalizer needs an nml_finite estimator")),
        }
    }

    /// Index of the class member crude MDL selects for `x` (lowest index on ties).
    pub fn mdl_selection(&self, x: &Sequence) -> Result<usize> {
        self.check_sequence(x)?;
        match &self.kind {
            EstimatorKind::CrudeMdlFinite(class) | EstimatorKind::NmlFinite(class) => {
                Ok(finite_class::mdl_selection(class, &x.counts()))
            }
            _ => Err(Error::pre("mdl_selection needs a finite-class estimator")),
        }
    }

    /// Exact `q_n` from a count vector, for exchangeable kinds.
    pub fn mass_from_counts(&self, c: &CountVector) -> Result<ExactProb> {
        if c.alphabet_size() != self.d {
            return Err(Error::pre("count vector alphabet mismatch"));
        }
        mass_from_counts(self, c)
    }

    /// Closed-form `q_{n+1}(x·a) / q_n(x)` for every symbol `a`, where one exists.
    ///
    /// Available for uniform, Laplace, Good-Turing, Ristad and finite Bayes
    /// mixtures; these forms avoid big factorials and are what long-sequence
    /// coding runs on.
    pub fn closed_form_ratios(&self, x: &Sequence) -> Option<Vec<ExactProb>> {
        let d = self.d as u64;
        let c = x.counts();
        let n = c.total();
        match self.kind {
            EstimatorKind::Uniform => Some(vec![ExactProb::ratio(1, d); self.d]),
            EstimatorKind::Laplace => Some(
                c.counts()
                    .iter()
                    .map(|&k| ExactProb::ratio(k + 1, n + d))
                    .collect(),
            ),
            EstimatorKind::GoodTuring => {
                let m = count_of_counts(&c);
                let part = ExactProb::from(partition_count_at_most(n as usize, self.d))
                    / ExactProb::from(partition_count_at_most(n as usize + 1, self.d));
                Some(
                    c.counts()
                        .iter()
                        .map(|&r| {
                            ExactProb::ratio(r + 1, n + 1)
                                * ExactProb::ratio(m.get(r + 1) + 1, m.get(r))
                                * &part
                        })
                        .collect(),
                )
            }
            EstimatorKind::Ristad => {
                if n == 0 {
                    return Some(vec![ExactProb::ratio(1, d); self.d]);
                }
                let m = c.distinct() as u64;
                let lead = ExactProb::ratio(n.min(d), (n + 1).min(d));
                Some(
                    c.counts()
                        .iter()
                        .map(|&k| {
                            let tail = if k > 0 {
                                ExactProb::ratio((k + 1) * (n - m + 1), n * (n + 1))
                            } else {
                                ExactProb::ratio(m * (m + 1), n * (n + 1) * (d - m))
                            };
                            &lead * tail
                        })
                        .collect(),
                )
            }
            EstimatorKind::BayesFinite(ref class) => {
                // posterior-weighted θ_a
                let post: Vec<ExactProb> =
                    class.iter().map(|m| &m.weight * m.likelihood(&c)).collect();
                let total: ExactProb = post.iter().sum();
                if total.is_zero() {
                    return None;
                }
                Some(
                    (0..self.d)
                        .map(|a| {
                            let num: ExactProb =
                                class.iter().zip(&post).map(|(m, w)| w * &m.theta[a]).sum();
                            num / &total
                        })
                        .collect(),
                )
            }
            _ => None,
        }
    }
}

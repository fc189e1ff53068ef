use serde::{Deserialize, Serialize};

use super::EstimatorKind;
use crate::error::{Error, Result};
use crate::numerics::{
    composition_count, compositions, ln_multinomial, log_sum_exp, multinomial, CountVector,
    ExactProb,
};
use crate::EXACT_BUDGET;

/// One i.i.d. member `θ` of a finite class, with its prior weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassMember {
    pub theta: Vec<ExactProb>,
    pub weight: ExactProb,
}

impl ClassMember {
    pub fn new(theta: Vec<ExactProb>, weight: ExactProb) -> Self {
        ClassMember { theta, weight }
    }

    /// `ν_θ(x) = Π θ_i^{n_i}`.
    pub fn likelihood(&self, c: &CountVector) -> ExactProb {
        self.theta
            .iter()
            .zip(c.counts())
            .map(|(t, &k)| t.pow_u(k))
            .product()
    }

    pub fn ln_likelihood(&self, c: &CountVector) -> f64 {
        self.theta
            .iter()
            .zip(c.counts())
            .map(|(t, &k)| {
                if k == 0 {
                    0.0
                } else {
                    k as f64 * t.ln()
                }
            })
            .sum()
    }
}

pub(super) fn members(kind: &EstimatorKind) -> Option<&[ClassMember]> {
    match kind {
        EstimatorKind::BayesFinite(c)
        | EstimatorKind::NmlFinite(c)
        | EstimatorKind::CrudeMdlFinite(c) => Some(c),
        _ => None,
    }
}

pub(super) fn validate(class: &[ClassMember], d: usize) -> Result<()> {
    if class.is_empty() {
        return Err(Error::config("field `class`: finite class must not be empty"));
    }
    let mut total_weight = ExactProb::zero();
    for (j, m) in class.iter().enumerate() {
        if m.theta.len() != d {
            return Err(Error::config(format!(
                "field `class[{j}].theta`: has {} entries, alphabet size is {d}",
                m.theta.len()
            )));
        }
        if m.theta.iter().any(|t| t.is_negative()) {
            return Err(Error::config(format!("field `class[{j}].theta`: negative entry")));
        }
        let s: ExactProb = m.theta.iter().sum();
        if !s.is_one() {
            return Err(Error::config(format!(
                "field `class[{j}].theta`: entries sum to {s}, not 1"
            )));
        }
        if m.weight.is_negative() || m.weight.is_zero() {
            return Err(Error::config(format!(
                "field `class[{j}].weight`: prior weights must be positive"
            )));
        }
        total_weight = total_weight + &m.weight;
    }
    if !total_weight.is_one() {
        return Err(Error::config(format!(
            "field `class`: weights sum to {total_weight}, not 1"
        )));
    }
    Ok(())
}

pub(super) fn bayes(class: &[ClassMember], c: &CountVector) -> ExactProb {
    class.iter().map(|m| &m.weight * m.likelihood(c)).sum()
}

pub(super) fn ln_bayes(class: &[ClassMember], c: &CountVector) -> f64 {
    let terms: Vec<f64> = class
        .iter()
        .map(|m| m.weight.ln() + m.ln_likelihood(c))
        .collect();
    log_sum_exp(&terms)
}

/// `max_ν w(ν) ν(x)`.
pub(super) fn weighted_max(class: &[ClassMember], c: &CountVector) -> ExactProb {
    class
        .iter()
        .map(|m| &m.weight * m.likelihood(c))
        .max()
        .expect("class is non-empty")
}

fn ln_weighted_max(class: &[ClassMember], c: &CountVector) -> f64 {
    class
        .iter()
        .map(|m| m.weight.ln() + m.ln_likelihood(c))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Index of the member maximizing `w(ν) ν(x)`; ties go to the lowest index.
pub fn mdl_selection(class: &[ClassMember], c: &CountVector) -> usize {
    let mut best = 0;
    let mut best_val = &class[0].weight * class[0].likelihood(c);
    for (j, m) in class.iter().enumerate().skip(1) {
        let v = &m.weight * m.likelihood(c);
        if v > best_val {
            best = j;
            best_val = v;
        }
    }
    best
}

fn ln_mdl_selection(class: &[ClassMember], c: &CountVector) -> usize {
    let vals: Vec<f64> = class
        .iter()
        .map(|m| m.weight.ln() + m.ln_likelihood(c))
        .collect();
    let mut best = 0;
    for j in 1..vals.len() {
        let tol = 1e-12 * vals[best].abs().max(1.0);
        if vals[j] > vals[best] + tol {
            best = j;
        }
    }
    best
}

/// Unnormalized crude-MDL mass: likelihood of the selected member.
pub(super) fn mdl_raw(class: &[ClassMember], c: &CountVector) -> ExactProb {
    class[mdl_selection(class, c)].likelihood(c)
}

fn ln_mdl_raw(class: &[ClassMember], c: &CountVector) -> f64 {
    class[ln_mdl_selection(class, c)].ln_likelihood(c)
}

fn check_dp_budget(n: u64, d: usize) -> Result<()> {
    let needed = composition_count(n, d);
    let limit = num_bigint::BigUint::from(EXACT_BUDGET);
    if needed > limit {
        return Err(Error::BudgetExceeded {
            what: "count-vector normalizer",
            needed: u128::try_from(&needed).unwrap_or(u128::MAX),
            limit: EXACT_BUDGET,
        });
    }
    Ok(())
}

/// `Σ_{x ∈ X^n} f(counts(x))`, summed over count vectors with multinomial multiplicity.
fn exchangeable_total(
    n: u64,
    d: usize,
    f: impl Fn(&CountVector) -> ExactProb,
) -> Result<ExactProb> {
    check_dp_budget(n, d)?;
    let mut total = ExactProb::zero();
    for c in compositions(n, d) {
        let mult = multinomial(n, &c)?;
        let cv = CountVector::from_counts(c);
        let v = f(&cv);
        if !v.is_zero() {
            total = total + ExactProb::from(mult) * v;
        }
    }
    Ok(total)
}

fn ln_exchangeable_total(n: u64, d: usize, f: impl Fn(&CountVector) -> f64) -> Result<f64> {
    check_dp_budget(n, d)?;
    let terms: Vec<f64> = compositions(n, d)
        .map(|c| {
            let lm = ln_multinomial(n, &c);
            lm + f(&CountVector::from_counts(c))
        })
        .collect();
    Ok(log_sum_exp(&terms))
}

pub(super) fn nml_normalizer(class: &[ClassMember], n: u64, d: usize) -> Result<ExactProb> {
    exchangeable_total(n, d, |c| weighted_max(class, c))
}

pub(super) fn ln_nml_normalizer(class: &[ClassMember], n: u64, d: usize) -> Result<f64> {
    ln_exchangeable_total(n, d, |c| ln_weighted_max(class, c))
}

pub(super) fn mdl_normalizer(class: &[ClassMember], n: u64, d: usize) -> Result<ExactProb> {
    exchangeable_total(n, d, |c| mdl_raw(class, c))
}

pub(super) fn ln_nml(class: &[ClassMember], c: &CountVector, d: usize) -> Result<f64> {
    Ok(ln_weighted_max(class, c) - ln_nml_normalizer(class, c.total(), d)?)
}

pub(super) fn ln_mdl(class: &[ClassMember], c: &CountVector, d: usize) -> Result<f64> {
    let z = ln_exchangeable_total(c.total(), d, |cv| ln_mdl_raw(class, cv))?;
    Ok(ln_mdl_raw(class, c) - z)
}

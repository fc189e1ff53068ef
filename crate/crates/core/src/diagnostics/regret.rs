use std::cmp::Ordering;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::converters::{normalizer, Predictor};
use crate::error::{Error, Result};
use crate::estimators::OfflineEstimator;
use crate::numerics::{ExactProb, Sequence};
use crate::EXACT_BUDGET;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegretMethod {
    ExactExhaustive,
    PerStepBound,
    CertifiedInterval,
}

impl RegretMethod {
    pub fn name(self) -> &'static str {
        match self {
            RegretMethod::ExactExhaustive => "exact_exhaustive",
            RegretMethod::PerStepBound => "per_step_bound",
            RegretMethod::CertifiedInterval => "certified_interval",
        }
    }
}

/// Worst-case log-loss regret `max_x ln(q_n(x) / q̃(x))` or a bound on it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegretReport {
    pub n: usize,
    /// Regret in nats; `+inf` when some sequence has `q̃(x) = 0 < q_n(x)`.
    pub value: f64,
    pub method: RegretMethod,
    /// Lexicographically smallest maximizer, for exhaustive reports.
    pub maximizer: Option<Sequence>,
    /// `exp(value)` as an exact rational, when finite.
    pub ratio: Option<ExactProb>,
}

impl RegretReport {
    pub fn is_infinite(&self) -> bool {
        self.value == f64::INFINITY
    }
}

/// `q_n(x) / q̃(x)`, with `None` standing for `+inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Ratio(pub(crate) Option<ExactProb>);

impl Ratio {
    pub(crate) fn of(num: &ExactProb, den: &ExactProb) -> Option<Ratio> {
        if num.is_zero() {
            return None;
        }
        if den.is_zero() {
            return Some(Ratio(None));
        }
        Some(Ratio(Some(num / den)))
    }

    fn cmp(&self, other: &Ratio) -> Ordering {
        match (&self.0, &other.0) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(a), Some(b)) => a.cmp(b),
        }
    }

    pub(crate) fn ln(&self) -> f64 {
        self.0.as_ref().map_or(f64::INFINITY, |r| r.ln())
    }
}

/// Running maximum that keeps the first maximizer seen.
#[derive(Clone, Debug, Default)]
pub(crate) struct Best {
    pub(crate) ratio: Option<Ratio>,
    pub(crate) at: Option<Sequence>,
}

impl Best {
    pub(crate) fn offer(&mut self, r: Ratio, x: &Sequence) {
        let better = match &self.ratio {
            None => true,
            Some(cur) => r.cmp(cur) == Ordering::Greater,
        };
        if better {
            self.ratio = Some(r);
            self.at = Some(x.clone());
        }
    }

    /// Merge a later (lexicographically larger) subtree.
    pub(crate) fn merge(mut self, later: Best) -> Best {
        if let (Some(r), Some(x)) = (later.ratio, later.at) {
            self.offer(r, &x);
        }
        self
    }
}

pub(crate) fn check_budget(what: &'static str, d: usize, n: usize) -> Result<()> {
    let states = BigUint::from(d).pow(n as u32);
    if states > BigUint::from(EXACT_BUDGET) {
        return Err(Error::BudgetExceeded {
            what,
            needed: u128::try_from(&states).unwrap_or(u128::MAX),
            limit: EXACT_BUDGET,
        });
    }
    Ok(())
}

fn children_or_zero(p: &dyn Predictor, prefix: &Sequence, joint: &ExactProb) -> Result<Vec<ExactProb>> {
    if joint.is_zero() {
        return Ok(vec![ExactProb::zero(); p.alphabet_size()]);
    }
    match p.child_joints(prefix, joint) {
        // No conditional exists here, so the predictor puts no mass below.
        Err(Error::UndefinedConditional { .. }) | Err(Error::DegenerateNode { .. }) => {
            Ok(vec![ExactProb::zero(); p.alphabet_size()])
        }
        other => other,
    }
}

fn walk<A>(
    p: &dyn Predictor,
    n: usize,
    prefix: &mut Sequence,
    joint: &ExactProb,
    acc: &mut A,
    visit: &(dyn Fn(&mut A, &Sequence, &ExactProb) -> Result<()> + Sync),
) -> Result<()> {
    if prefix.len() == n {
        return visit(acc, prefix, joint);
    }
    let kids = children_or_zero(p, prefix, joint)?;
    for (i, j) in kids.iter().enumerate() {
        prefix.push(i + 1)?;
        walk(p, n, prefix, j, acc, visit)?;
        prefix.pop();
    }
    Ok(())
}

/// Visits every `x ∈ X^n` with `q̃(x)`, in lexicographic order within each
/// first-symbol subtree. Subtrees run in parallel; their accumulators come back
/// in symbol order.
pub(crate) fn for_each_leaf<A: Send>(
    p: &dyn Predictor,
    n: usize,
    make: impl Fn() -> A + Sync,
    visit: &(dyn Fn(&mut A, &Sequence, &ExactProb) -> Result<()> + Sync),
) -> Result<Vec<A>> {
    let d = p.alphabet_size();
    let root = Sequence::empty(d)?;
    if n == 0 {
        let mut acc = make();
        visit(&mut acc, &root, &ExactProb::one())?;
        return Ok(vec![acc]);
    }
    let first = children_or_zero(p, &root, &ExactProb::one())?;
    first
        .into_par_iter()
        .enumerate()
        .map(|(i, j)| {
            let mut acc = make();
            let mut prefix = root.extended(i + 1)?;
            walk(p, n, &mut prefix, &j, &mut acc, visit)?;
            Ok(acc)
        })
        .collect()
}

/// Exhaustive `max_{x ∈ X^n} ln(q_n(x) / q̃(x))` in exact arithmetic.
///
/// Sequences with `q_n(x) = 0` are skipped. If `q̃(x) = 0 < q_n(x)` anywhere the
/// report is infinite and names the first such `x`.
pub fn regret_exact(e: &OfflineEstimator, p: &dyn Predictor, n: usize) -> Result<RegretReport> {
    if e.alphabet_size() != p.alphabet_size() {
        return Err(Error::pre("estimator and predictor alphabets differ"));
    }
    check_budget("exhaustive regret", e.alphabet_size(), n)?;
    let parts = for_each_leaf(p, n, Best::default, &|best: &mut Best, x, joint| {
        let q = e.offline_mass(x)?;
        if let Some(r) = Ratio::of(&q, joint) {
            best.offer(r, x);
        }
        Ok(())
    })?;
    let best = parts.into_iter().fold(Best::default(), Best::merge);
    let ratio = best.ratio.unwrap_or(Ratio(Some(ExactProb::one())));
    Ok(RegretReport {
        n,
        value: ratio.ln(),
        method: RegretMethod::ExactExhaustive,
        maximizer: best.at,
        ratio: ratio.0,
    })
}

/// `Σ_{t=1}^n ln max_{x_{<t}} N(x_{<t})`, an upper bound on the naive-normalization regret.
///
/// Prefixes with zero offline mass have no normalizer and are skipped.
pub fn regret_per_step_bound(e: &OfflineEstimator, n: usize) -> Result<RegretReport> {
    check_budget("per-step regret bound", e.alphabet_size(), n.saturating_sub(1))?;
    let mut product = ExactProb::one();
    for t in 1..=n {
        let level: Vec<Sequence> = Sequence::all_of_length(e.alphabet_size(), t - 1).collect();
        let maxima = level
            .par_iter()
            .map(|x| match normalizer(e, x) {
                Ok(v) => Ok(Some(v)),
                Err(Error::UndefinedConditional { .. }) => Ok(None),
                Err(err) => Err(err),
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(m) = maxima.into_iter().flatten().max() {
            product = product * m;
        }
    }
    Ok(RegretReport {
        n,
        value: product.ln(),
        method: RegretMethod::PerStepBound,
        maximizer: None,
        ratio: Some(product),
    })
}

/// The three regrets in `R_n(q̃‖μ) − R_n(q_n‖μ) ≤ R_n(q̃‖q_n)` and whether it holds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtraRegretReport {
    pub n: usize,
    /// `max_x ln μ(x)/q̃(x)`.
    pub predictor_vs_truth: f64,
    /// `max_x ln μ(x)/q_n(x)`.
    pub offline_vs_truth: f64,
    /// `max_x ln q_n(x)/q̃(x)`.
    pub predictor_vs_offline: f64,
    pub holds: bool,
}

#[derive(Default)]
struct Triple {
    pred_truth: Best,
    off_truth: Best,
    pred_off: Best,
}

/// Checks the extra-regret inequality exhaustively, comparing exact ratios.
pub fn extra_regret_check(
    e: &OfflineEstimator,
    p: &dyn Predictor,
    truth: &OfflineEstimator,
    n: usize,
) -> Result<ExtraRegretReport> {
    let d = e.alphabet_size();
    if p.alphabet_size() != d || truth.alphabet_size() != d {
        return Err(Error::pre("estimator, predictor and truth alphabets differ"));
    }
    check_budget("extra-regret check", d, n)?;
    let parts = for_each_leaf(p, n, Triple::default, &|acc: &mut Triple, x, joint| {
        let q = e.offline_mass(x)?;
        let mu = truth.offline_mass(x)?;
        if let Some(r) = Ratio::of(&mu, joint) {
            acc.pred_truth.offer(r, x);
        }
        if let Some(r) = Ratio::of(&mu, &q) {
            acc.off_truth.offer(r, x);
        }
        if let Some(r) = Ratio::of(&q, joint) {
            acc.pred_off.offer(r, x);
        }
        Ok(())
    })?;
    let mut all = Triple::default();
    for t in parts {
        all.pred_truth = all.pred_truth.merge(t.pred_truth);
        all.off_truth = all.off_truth.merge(t.off_truth);
        all.pred_off = all.pred_off.merge(t.pred_off);
    }
    let one = || Ratio(Some(ExactProb::one()));
    let a = all.pred_truth.ratio.unwrap_or_else(one);
    let b = all.off_truth.ratio.unwrap_or_else(one);
    let c = all.pred_off.ratio.unwrap_or_else(one);
    // a ≤ b·c, with +inf absorbing
    let holds = match (&a.0, &b.0, &c.0) {
        (None, _, _) => b.0.is_none() || c.0.is_none(),
        (Some(_), None, _) | (Some(_), _, None) => true,
        (Some(a), Some(b), Some(c)) => a <= &(b * c),
    };
    Ok(ExtraRegretReport {
        n,
        predictor_vs_truth: a.ln(),
        offline_vs_truth: b.ln(),
        predictor_vs_offline: c.ln(),
        holds,
    })
}

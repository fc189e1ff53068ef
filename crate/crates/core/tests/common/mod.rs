#![allow(dead_code)]

use onlinify::{
    ClassMember, Completion, EstimatorKind, ExactProb, MixtureConfig, OfflineEstimator,
    OnlinePredictor, Prior, Scheme, Sequence, Truncation,
};

pub fn r(n: u64, d: u64) -> ExactProb {
    ExactProb::ratio(n, d)
}

pub fn seq(d: usize, s: &str) -> Sequence {
    Sequence::parse(d, s).unwrap()
}

/// Uniform member (weight 1/3) and one leaning on symbol 1 (weight 2/3).
pub fn class(d: usize) -> Vec<ClassMember> {
    let uniform = vec![r(1, d as u64); d];
    let mut lean = vec![r(1, 4 * (d as u64 - 1)); d];
    lean[0] = r(3, 4);
    vec![ClassMember::new(uniform, r(1, 3)), ClassMember::new(lean, r(2, 3))]
}

pub fn every_kind(d: usize) -> Vec<OfflineEstimator> {
    let mut kinds = vec![
        EstimatorKind::Uniform,
        EstimatorKind::Laplace,
        EstimatorKind::GoodTuring,
        EstimatorKind::Ristad,
        EstimatorKind::BayesFinite(class(d)),
        EstimatorKind::NmlFinite(class(d)),
        EstimatorKind::CrudeMdlFinite(class(d)),
        EstimatorKind::BadGood,
    ];
    if d == 2 {
        kinds.push(EstimatorKind::AlternatingBernoulli);
    }
    kinds
        .into_iter()
        .map(|k| OfflineEstimator::new(k, d).unwrap())
        .collect()
}

pub fn online(e: &OfflineEstimator, scheme: Scheme) -> OnlinePredictor {
    OnlinePredictor::new(e.clone(), scheme)
}

pub fn mixture_config(horizon: usize) -> MixtureConfig {
    MixtureConfig {
        prior: Prior::Dense,
        completion: Completion::Uniform,
        truncation: Truncation::Horizon(horizon),
    }
}

pub fn dense_mixture(horizon: usize) -> Scheme {
    Scheme::Mixture(mixture_config(horizon))
}

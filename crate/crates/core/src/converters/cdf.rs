use super::Predictor;
use crate::error::{Error, Result};
use crate::numerics::{ExactProb, Sequence};

/// `Σ_{y ≤ x} q̃(y)` over `X^n` in lexicographic order (`1 < 2 < … < d`), inclusive.
///
/// One distribution per prefix of `x`, so `n` predictor calls. Each node's
/// conditionals must sum to one.
pub fn cdf(p: &dyn Predictor, x: &Sequence) -> Result<ExactProb> {
    if x.alphabet_size() != p.alphabet_size() {
        return Err(Error::pre("sequence alphabet does not match predictor"));
    }
    let mut below = ExactProb::zero();
    let mut joint = ExactProb::one();
    let mut prefix = Sequence::empty(p.alphabet_size())?;
    for &a in x.symbols() {
        let dist = p.distribution(&prefix)?;
        let sum: ExactProb = dist.iter().sum();
        if !sum.is_one() {
            return Err(Error::ContractViolation {
                prefix: prefix.to_string(),
                sum: sum.to_string(),
            });
        }
        let smaller: ExactProb = dist[..a - 1].iter().sum();
        below = below + &joint * smaller;
        joint = joint * &dist[a - 1];
        prefix.push(a)?;
    }
    Ok(below + joint)
}

use super::mass::{alternating_p1, bad_good_block};
use super::{finite_class, EstimatorKind, OfflineEstimator};
use crate::error::Result;
use crate::numerics::{
    count_of_counts, ln_big, ln_binomial, ln_multinomial, partition_count_at_most, CountVector,
    LogProb, Sequence,
};

fn ln_laplace(c: &CountVector) -> f64 {
    let n = c.total();
    let d = c.alphabet_size() as u64;
    -(ln_multinomial(n, c.counts()) + ln_binomial(n + d - 1, d - 1))
}

fn ln_from_counts(e: &OfflineEstimator, c: &CountVector) -> Result<f64> {
    let d = e.d as u64;
    let n = c.total();
    Ok(match &e.kind {
        EstimatorKind::Uniform => -(n as f64) * (d as f64).ln(),
        EstimatorKind::Laplace => ln_laplace(c),
        EstimatorKind::GoodTuring => {
            let m = count_of_counts(c);
            -(ln_multinomial(n, c.counts())
                + ln_multinomial(d, m.as_slice())
                + ln_big(&partition_count_at_most(n as usize, e.d)))
        }
        EstimatorKind::Ristad => {
            if n == 0 {
                return Ok(0.0);
            }
            let m = c.distinct() as u64;
            -(ln_multinomial(n, c.counts())
                + ln_binomial(n - 1, m - 1)
                + ln_binomial(d, m)
                + (n.min(d) as f64).ln())
        }
        EstimatorKind::BayesFinite(class) => finite_class::ln_bayes(class, c),
        EstimatorKind::NmlFinite(class) => finite_class::ln_nml(class, c, e.d)?,
        EstimatorKind::CrudeMdlFinite(class) => finite_class::ln_mdl(class, c, e.d)?,
        EstimatorKind::AlternatingBernoulli => {
            let p1 = alternating_p1(n).to_f64();
            let (k1, k2) = (c.get(1) as f64, c.get(2) as f64);
            let mut v = 0.0;
            if k1 > 0.0 {
                v += k1 * p1.ln();
            }
            if k2 > 0.0 {
                v += k2 * (1.0 - p1).ln();
            }
            v
        }
        EstimatorKind::BadGood => unreachable!("bad_good is handled by position"),
    })
}

impl OfflineEstimator {
    /// `ln q_n(x)` in floating point; works beyond the exact-mode length limit.
    pub fn offline_log_mass(&self, x: &Sequence) -> Result<LogProb> {
        self.check_sequence(x)?;
        let v = match self.kind {
            EstimatorKind::BadGood => {
                let b = bad_good_block(x.len());
                -(b as f64) * (self.d as f64).ln() + ln_laplace(&x.suffix_from(b).counts())
            }
            _ => ln_from_counts(self, &x.counts())?,
        };
        Ok(LogProb::new_unchecked(v.min(0.0)))
    }
}

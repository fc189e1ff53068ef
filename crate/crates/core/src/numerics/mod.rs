//! Exact and log-domain arithmetic plus the combinatorial quantities the
//! estimators are built from.

mod combinatorics;
mod exact;
mod sequence;

pub use combinatorics::{
    binomial, composition_count, compositions, factorial, ln_binomial, ln_factorial,
    ln_multinomial, multinomial, partition_count, partition_count_at_most, Compositions,
};
pub use exact::{ln_big, log_sum_exp, ExactProb, LogProb};
pub use sequence::{count_of_counts, counts, CountOfCounts, CountVector, Sequence};
pub(crate) use sequence::check_alphabet;

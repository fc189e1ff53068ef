//! Shared inputs for the benchmarks.

use onlinify::Sequence;

/// Deterministic skewed sequence: symbol `k` turns up roughly in proportion to `1/k`.
pub fn skewed(d: usize, n: usize) -> Sequence {
    let weights: Vec<f64> = (1..=d).map(|k| 1.0 / k as f64).collect();
    let total: f64 = weights.iter().sum();
    let mut state: u64 = 0x2545_f491_4f6c_dd1d;
    let symbols = (0..n)
        .map(|_| {
            // xorshift64
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let mut u = (state >> 11) as f64 / (1u64 << 53) as f64 * total;
            for (i, w) in weights.iter().enumerate() {
                if u < *w {
                    return i + 1;
                }
                u -= w;
            }
            d
        })
        .collect();
    Sequence::new(d, symbols).expect("symbols in range")
}

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `n! / prod(parts_i!)`. Fails unless the parts sum to `n`.
pub fn multinomial(n: u64, parts: &[u64]) -> Result<BigUint> {
    let total: u64 = parts.iter().sum();
    if total != n {
        return Err(Error::pre(format!(
            "multinomial parts sum to {total}, expected {n}"
        )));
    }
    // product of binomials C(n_1 + .. + n_i, n_i)
    let mut acc = BigUint::one();
    let mut running = 0u64;
    for &p in parts {
        running += p;
        acc *= binomial(running, p);
    }
    Ok(acc)
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `ln n!`.
pub fn ln_factorial(n: u64) -> f64 {
    statrs::function::factorial::ln_factorial(n)
}

/// `ln(n! / prod(parts_i!))`, assuming the parts sum to `n`.
pub fn ln_multinomial(n: u64, parts: &[u64]) -> f64 {
    ln_factorial(n) - parts.iter().map(|&p| ln_factorial(p)).sum::<f64>()
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

fn partition_cache() -> &'static Mutex<Vec<BigUint>> {
    static CACHE: OnceLock<Mutex<Vec<BigUint>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![BigUint::one()]))
}

/// Number of partitions of `n` into unordered positive parts; `Part(0) = 1`.
///
/// Uses Euler's pentagonal-number recurrence over a process-wide table.
pub fn partition_count(n: usize) -> BigUint {
    let mut table = partition_cache().lock().expect("partition cache poisoned");
    if table.len() <= n {
        extend_partitions(&mut table, n);
    }
    table[n].clone()
}

fn extend_partitions(table: &mut Vec<BigUint>, n: usize) {
    let mut signed: Vec<BigInt> = table.iter().map(|v| BigInt::from(v.clone())).collect();
    for m in signed.len()..=n {
        let mut acc = BigInt::zero();
        for k in 1usize.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            let mut term = signed[m - g1].clone();
            if g2 <= m {
                term += &signed[m - g2];
            }
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        debug_assert!(!acc.is_negative());
        signed.push(acc);
    }
    *table = signed
        .into_iter()
        .map(|v| v.to_biguint().expect("partition counts are non-negative"))
        .collect();
}

fn restricted_cache() -> &'static Mutex<HashMap<usize, Vec<BigUint>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<BigUint>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Number of partitions of `n` into at most `k` parts.
///
/// Equals [`partition_count`] when `k >= n`. These are exactly the count-of-counts
/// vectors realizable by a length-`n` sequence over `k` symbols.
pub fn partition_count_at_most(n: usize, k: usize) -> BigUint {
    if k >= n {
        return partition_count(n);
    }
    let mut cache = restricted_cache().lock().expect("partition cache poisoned");
    let row = cache.entry(k).or_default();
    if row.len() <= n {
        let target = (2 * row.len()).max(n + 1);
        // parts of size <= k, which by conjugation is at most k parts
        let mut table = vec![BigUint::zero(); target];
        table[0] = BigUint::one();
        for part in 1..=k {
            for m in part..target {
                let add = table[m - part].clone();
                table[m] += add;
            }
        }
        *row = table;
    }
    row[n].clone()
}

/// All vectors of `d` non-negative integers summing to `n`, in lexicographic order.
pub fn compositions(n: u64, d: usize) -> Compositions {
    Compositions {
        current: None,
        n,
        d,
        done: d == 0 && n > 0,
    }
}

/// Number of weak compositions of `n` into `d` parts, `C(n + d - 1, d - 1)`.
pub fn composition_count(n: u64, d: usize) -> BigUint {
    if d == 0 {
        return if n == 0 { BigUint::one() } else { BigUint::zero() };
    }
    binomial(n + d as u64 - 1, d as u64 - 1)
}

pub struct Compositions {
    current: Option<Vec<u64>>,
    n: u64,
    d: usize,
    done: bool,
}

impl Iterator for Compositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let d = self.d;
        let Some(c) = &mut self.current else {
            let mut first = vec![0; d];
            if d > 0 {
                first[d - 1] = self.n;
            }
            self.current = Some(first.clone());
            return Some(first);
        };
        // rightmost i < d-1 with positive mass to its right
        let mut tail = 0u64;
        let mut pivot = None;
        for i in (0..d.saturating_sub(1)).rev() {
            tail += c[i + 1];
            if tail > 0 {
                pivot = Some(i);
                break;
            }
        }
        let Some(i) = pivot else {
            self.done = true;
            return None;
        };
        c[i] += 1;
        for v in c[i + 1..].iter_mut() {
            *v = 0;
        }
        c[d - 1] = tail - 1;
        Some(c.clone())
    }
}

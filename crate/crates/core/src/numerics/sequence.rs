use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite string over the alphabet `{1, ..., d}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence {
    d: usize,
    symbols: Vec<usize>,
}

impl Sequence {
    pub fn new(d: usize, symbols: Vec<usize>) -> Result<Self> {
        check_alphabet(d)?;
        if let Some(bad) = symbols.iter().find(|&&s| s == 0 || s > d) {
            return Err(Error::config(format!(
                "symbol {bad} outside alphabet 1..={d}"
            )));
        }
        Ok(Sequence { d, symbols })
    }

    pub fn empty(d: usize) -> Result<Self> {
        Self::new(d, Vec::new())
    }

    /// Comma-separated 1-based symbols; the empty string is the empty sequence.
    pub fn parse(d: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Self::empty(d);
        }
        let symbols = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::config(format!("bad symbol {t:?} in sequence")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, symbols)
    }

    /// One byte per symbol, values `1..=d`.
    pub fn from_bytes(d: usize, bytes: &[u8]) -> Result<Self> {
        Self::new(d, bytes.iter().map(|&b| b as usize).collect())
    }

    pub fn alphabet_size(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn prefix(&self, len: usize) -> Sequence {
        Sequence {
            d: self.d,
            symbols: self.symbols[..len].to_vec(),
        }
    }

    pub fn suffix_from(&self, start: usize) -> Sequence {
        Sequence {
            d: self.d,
            symbols: self.symbols[start.min(self.len())..].to_vec(),
        }
    }

    /// This sequence followed by `symbol`.
    pub fn extended(&self, symbol: usize) -> Result<Sequence> {
        let mut next = self.clone();
        next.push(symbol)?;
        Ok(next)
    }

    pub fn push(&mut self, symbol: usize) -> Result<()> {
        if symbol == 0 || symbol > self.d {
            return Err(Error::config(format!(
                "symbol {symbol} outside alphabet 1..={}",
                self.d
            )));
        }
        self.symbols.push(symbol);
        Ok(())
    }

    pub fn pop(&mut self) -> Option<usize> {
        self.symbols.pop()
    }

    pub fn counts(&self) -> CountVector {
        counts(self)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.symbols.iter().map(|&s| s as u8).collect()
    }

    /// Every sequence of length `n` in lexicographic order.
    pub fn all_of_length(d: usize, n: usize) -> impl Iterator<Item = Sequence> {
        let total = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        (0..total).map(move |mut idx| {
            let mut symbols = vec![1; n];
            for slot in symbols.iter_mut().rev() {
                *slot = (idx % d as u128) as usize + 1;
                idx /= d as u128;
            }
            Sequence { d, symbols }
        })
    }
}

pub(crate) fn check_alphabet(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::config(format!("alphabet size must be >= 2, got {d}")));
    }
    if d > u16::MAX as usize {
        return Err(Error::config(format!(
            "alphabet size {d} exceeds {}",
            u16::MAX
        )));
    }
    Ok(())
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return f.write_str("ε");
        }
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl Serialize for Sequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Occurrence counts `n_i` of each symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CountVector {
    counts: Vec<u64>,
    total: u64,
}

impl CountVector {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        let total = counts.iter().sum();
        CountVector { counts, total }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Count of `symbol` (1-based).
    pub fn get(&self, symbol: usize) -> u64 {
        self.counts[symbol - 1]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn alphabet_size(&self) -> usize {
        self.counts.len()
    }

    /// Number of distinct symbols that occur.
    pub fn distinct(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    pub fn add(&mut self, symbol: usize) {
        self.counts[symbol - 1] += 1;
        self.total += 1;
    }

    pub fn plus(&self, other: &[u64]) -> CountVector {
        CountVector::from_counts(
            self.counts
                .iter()
                .zip(other)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn count_of_counts(&self) -> CountOfCounts {
        count_of_counts(self)
    }
}

/// `m_r`: how many symbols occur exactly `r` times, for `r = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CountOfCounts {
    m: Vec<u64>,
}

impl CountOfCounts {
    /// `m_r`, zero beyond `n`.
    pub fn get(&self, r: u64) -> u64 {
        self.m.get(r as usize).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.m
    }

    /// `|{r : m_r != 0}|`.
    pub fn support(&self) -> usize {
        self.m.iter().filter(|&&v| v > 0).count()
    }
}

pub fn counts(x: &Sequence) -> CountVector {
    let mut c = vec![0u64; x.d];
    for &s in &x.symbols {
        c[s - 1] += 1;
    }
    CountVector::from_counts(c)
}

pub fn count_of_counts(c: &CountVector) -> CountOfCounts {
    let mut m = vec![0u64; c.total as usize + 1];
    for &v in &c.counts {
        m[v as usize] += 1;
    }
    CountOfCounts { m }
}

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ExactProb, Sequence};

/// The two infinite sequences used to probe `N_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AppendixKind {
    /// `1 2 2 3 3 3 4 4 4 4 …`: symbol `k` repeated `k` times.
    Staircase,
    /// `1 2 (1 3 2)^∞`.
    Cycle,
}

impl AppendixKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "staircase" => Ok(AppendixKind::Staircase),
            "cycle" => Ok(AppendixKind::Cycle),
            other => Err(Error::config(format!(
                "field `kind`: unknown sequence {other:?} (expected staircase or cycle)"
            ))),
        }
    }
}

fn symbol_at(kind: AppendixKind, i: usize) -> usize {
    match kind {
        AppendixKind::Staircase => {
            // position i (0-based) sits in block k where k(k-1)/2 <= i < k(k+1)/2
            let mut k = ((((8 * i + 1) as f64).sqrt() - 1.0) / 2.0) as usize + 1;
            while k * (k - 1) / 2 > i {
                k -= 1;
            }
            while k * (k + 1) / 2 <= i {
                k += 1;
            }
            k
        }
        AppendixKind::Cycle => match i {
            0 => 1,
            1 => 2,
            _ => [1, 3, 2][(i - 2) % 3],
        },
    }
}

/// The length-`n` prefix of the named sequence over `d` symbols.
pub fn appendix_sequence(kind: AppendixKind, n: usize, d: usize) -> Result<Sequence> {
    let symbols: Vec<usize> = (0..n).map(|i| symbol_at(kind, i)).collect();
    let needed = symbols.iter().copied().max().unwrap_or(1);
    let needed = match kind {
        AppendixKind::Cycle => needed.max(3),
        AppendixKind::Staircase => needed,
    };
    if d < needed {
        return Err(Error::config(format!(
            "field `d`: the {kind:?} prefix of length {n} uses symbol {needed}, alphabet has {d}"
        )));
    }
    Sequence::new(d, symbols)
}

/// Count and count-of-counts of a growing prefix, updated one symbol at a time.
struct Tally {
    counts: Vec<u64>,
    /// `r → m_r` for `r ≥ 1`; `m_0` is derived.
    m: BTreeMap<u64, u64>,
    distinct: u64,
    d: u64,
    n: u64,
}

impl Tally {
    fn new(d: usize) -> Self {
        Tally {
            counts: vec![0; d],
            m: BTreeMap::new(),
            distinct: 0,
            d: d as u64,
            n: 0,
        }
    }

    fn push(&mut self, symbol: usize) {
        let r = self.counts[symbol - 1];
        if r == 0 {
            self.distinct += 1;
        } else {
            let e = self.m.get_mut(&r).expect("tracked count");
            *e -= 1;
            if *e == 0 {
                self.m.remove(&r);
            }
        }
        *self.m.entry(r + 1).or_insert(0) += 1;
        self.counts[symbol - 1] = r + 1;
        self.n += 1;
    }

    fn m(&self, r: u64) -> u64 {
        if r == 0 {
            self.d - self.distinct
        } else {
            self.m.get(&r).copied().unwrap_or(0)
        }
    }

    /// `(n+1)·N_n = Σ_{r: m_r ≠ 0} (r+1)(m_{r+1}+1)`.
    fn scaled_nn(&self) -> u64 {
        let mut total = 0;
        if self.m(0) != 0 {
            total += self.m(1) + 1;
        }
        for &r in self.m.keys() {
            total += (r + 1) * (self.m(r + 1) + 1);
        }
        total
    }

    fn nn(&self) -> ExactProb {
        ExactProb::ratio(self.scaled_nn(), self.n + 1)
    }

    /// `|{r : m_r ≠ 0}|`.
    fn support(&self) -> u64 {
        self.m.len() as u64 + u64::from(self.m(0) != 0)
    }
}

/// First failure of one check, with the values involved.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Finding {
    pub n: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub probed: usize,
    pub failed: usize,
    pub first_failure: Option<Finding>,
}

impl CheckSummary {
    fn new(name: &str) -> Self {
        CheckSummary {
            name: name.to_string(),
            probed: 0,
            failed: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, n: usize, ok: bool, detail: impl FnOnce() -> String) {
        self.probed += 1;
        if !ok {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(Finding { n, detail: detail() });
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AppendixReport {
    pub kind: AppendixKind,
    pub d: usize,
    pub max_n: usize,
    pub checks: Vec<CheckSummary>,
    /// Values reported without a pass/fail judgement.
    pub notes: Vec<String>,
}

impl AppendixReport {
    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckSummary::passed)
    }
}

/// `a ≤ √b` for non-negative integer `b`, exactly.
fn le_sqrt(a: i128, b: i128) -> bool {
    a <= 0 || a * a <= b
}

pub const STAIRCASE_UPPER: &str = "staircase_upper";
pub const STAIRCASE_LOWER: &str = "staircase_lower";
pub const SUPPORT: &str = "support";
pub const CYCLE_NN: &str = "cycle_nn";
pub const CYCLE_NN1: &str = "cycle_nn_plus_1";
pub const CYCLE_NN2: &str = "cycle_nn_plus_2";
pub const CYCLE_PRODUCT: &str = "cycle_product";

/// Checks the `N_n` bounds along the staircase or cycle sequence for `n ≤ max_n`.
///
/// Staircase: `2n − 3√(2n) ≤ (n+1)N_n ≤ 2n + √(2n) + 1`. Cycle, at `n = 3, 6, …`:
/// `N_n = 5/3 + (7/3)/(n+1)`, `N_{n+1} = 5/3 + (5/3)/(n+2)`, `N_{n+2} = 4/3 + 1/(n+3)`
/// and `N_n N_{n+1} N_{n+2} ≥ 100/27`. Both: `|{r : m_r ≠ 0}| ≤ √(2n) + 1`.
/// Violations are reported, not raised.
pub fn appendix_bounds_check(kind: AppendixKind, max_n: usize, d: usize) -> Result<AppendixReport> {
    let horizon = match kind {
        AppendixKind::Staircase => max_n,
        AppendixKind::Cycle => max_n + 2,
    };
    let x = appendix_sequence(kind, horizon, d)?;
    let mut tally = Tally::new(d);
    // nn[n] for n = 0..=horizon
    let mut nn = Vec::with_capacity(horizon + 1);
    let mut support = CheckSummary::new(SUPPORT);
    let mut upper = CheckSummary::new(STAIRCASE_UPPER);
    let mut lower = CheckSummary::new(STAIRCASE_LOWER);
    for n in 0..=horizon {
        if n > 0 {
            tally.push(x.symbols()[n - 1]);
        }
        let scaled = tally.scaled_nn() as i128;
        nn.push(tally.nn());
        if n == 0 || n > max_n {
            continue;
        }
        let two_n = 2 * n as i128;
        let c = tally.support() as i128;
        support.record(n, le_sqrt(c - 1, two_n), || {
            format!("support {c} exceeds sqrt(2n)+1")
        });
        if kind == AppendixKind::Staircase {
            upper.record(n, le_sqrt(scaled - two_n - 1, two_n), || {
                format!("(n+1)N_n = {scaled} above 2n+sqrt(2n)+1")
            });
            lower.record(n, le_sqrt(two_n - scaled, 9 * two_n), || {
                format!("(n+1)N_n = {scaled} below 2n-3sqrt(2n)")
            });
        }
    }
    let mut checks = vec![support];
    let mut notes = Vec::new();
    match kind {
        AppendixKind::Staircase => {
            checks.push(upper);
            checks.push(lower);
        }
        AppendixKind::Cycle => {
            let mut c0 = CheckSummary::new(CYCLE_NN);
            let mut c1 = CheckSummary::new(CYCLE_NN1);
            let mut c2 = CheckSummary::new(CYCLE_NN2);
            let mut prod = CheckSummary::new(CYCLE_PRODUCT);
            let bound = ExactProb::ratio(100, 27);
            if horizon >= 2 {
                notes.push(format!(
                    "N_0 N_1 N_2 = {} (first block, not checked)",
                    &nn[0] * &nn[1] * &nn[2]
                ));
            }
            for n in (3..=max_n).step_by(3) {
                let k = n as u64;
                let e0 = ExactProb::ratio(5, 3) + ExactProb::ratio(7, 3 * (k + 1));
                let e1 = ExactProb::ratio(5, 3) + ExactProb::ratio(5, 3 * (k + 2));
                let e2 = ExactProb::ratio(4, 3) + ExactProb::ratio(1, k + 3);
                c0.record(n, nn[n] == e0, || format!("N_n = {}, expected {e0}", nn[n]));
                c1.record(n, nn[n + 1] == e1, || {
                    format!("N_(n+1) = {}, expected {e1}", nn[n + 1])
                });
                c2.record(n, nn[n + 2] == e2, || {
                    format!("N_(n+2) = {}, expected {e2}", nn[n + 2])
                });
                let p = &nn[n] * &nn[n + 1] * &nn[n + 2];
                prod.record(n, p >= bound, || format!("product = {p} < 100/27"));
            }
            checks.extend([c0, c1, c2, prod]);
        }
    }
    Ok(AppendixReport {
        kind,
        d,
        max_n,
        checks,
        notes,
    })
}

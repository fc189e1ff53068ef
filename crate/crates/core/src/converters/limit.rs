use serde::Serialize;

use super::{extend_qbar, Completion};
use crate::error::{Error, Result};
use crate::estimators::OfflineEstimator;
use crate::numerics::{ExactProb, Sequence};

/// How many trailing schedule points the verdict looks at.
const WINDOW: usize = 6;
const TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitVerdict {
    Converged,
    Oscillating,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitPoint {
    pub horizon: usize,
    pub value: ExactProb,
    pub value_f64: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitReport {
    pub sequence: Sequence,
    pub points: Vec<LimitPoint>,
    pub verdict: LimitVerdict,
    /// Last probed value, when the verdict is `converged`.
    pub limit: Option<ExactProb>,
    /// Why the probe stopped early, if it did.
    pub stopped: Option<String>,
}

/// `q̄_s(x)` along `schedule`, with a convergence verdict over the last few points.
///
/// A budget error partway through keeps the points computed so far and
/// forces an inconclusive verdict.
pub fn limit_probe(e: &OfflineEstimator, x: &Sequence, schedule: &[usize]) -> Result<LimitReport> {
    e.check_sequence(x)?;
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::pre("limit schedule must be strictly increasing"));
    }
    let mut points = Vec::with_capacity(schedule.len());
    let mut stopped = None;
    for &s in schedule {
        match extend_qbar(e, x, s, Completion::Uniform) {
            Ok(value) => points.push(LimitPoint {
                horizon: s,
                value_f64: value.to_f64(),
                value,
            }),
            Err(err) if err.is_budget() => {
                stopped = Some(err.to_string());
                break;
            }
            Err(err) => return Err(err),
        }
    }
    let verdict = if stopped.is_some() {
        LimitVerdict::Inconclusive
    } else {
        verdict(&points)
    };
    let limit = (verdict == LimitVerdict::Converged).then(|| points.last().unwrap().value.clone());
    Ok(LimitReport {
        sequence: x.clone(),
        points,
        verdict,
        limit,
        stopped,
    })
}

fn verdict(points: &[LimitPoint]) -> LimitVerdict {
    let tail: Vec<f64> = points[points.len().saturating_sub(WINDOW)..]
        .iter()
        .map(|p| p.value_f64)
        .collect();
    if tail.len() < 2 {
        return LimitVerdict::Inconclusive;
    }
    let scale = tail.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= TOLERANCE * scale {
        return LimitVerdict::Converged;
    }
    let diffs: Vec<f64> = tail.windows(2).map(|w| w[1] - w[0]).collect();
    let alternating = diffs.len() >= 2
        && diffs.iter().all(|d| d.abs() > TOLERANCE * scale)
        && diffs.windows(2).all(|w| w[0] * w[1] < 0.0);
    if alternating {
        LimitVerdict::Oscillating
    } else {
        LimitVerdict::Inconclusive
    }
}

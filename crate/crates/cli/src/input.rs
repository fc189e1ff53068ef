use std::fs;
use std::path::Path;

use onlinify::estimators::EstimatorConfig;
use onlinify::converters::SchemeConfig;
use onlinify::{OfflineEstimator, Scheme, Sequence};
use serde_json::Value;

use crate::Failure;

fn json_object(what: &str, text: &str) -> Result<serde_json::Map<String, Value>, Failure> {
    match serde_json::from_str::<Value>(text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(Failure::validation(format!("field `{what}`: expected a JSON object"))),
        Err(e) => Err(Failure::validation(format!("field `{what}`: {e}"))),
    }
}

/// `--estimator` is either JSON or a bare kind name; `--d` fills in a missing alphabet size.
pub fn estimator(spec: &str, d: Option<usize>) -> Result<OfflineEstimator, Failure> {
    let spec = spec.trim();
    if !spec.starts_with('{') {
        let cfg = EstimatorConfig {
            kind: spec.to_string(),
            d,
            class: None,
        };
        return Ok(OfflineEstimator::from_config(&cfg)?);
    }
    let mut map = json_object("estimator", spec)?;
    if let Some(d) = d {
        match map.get("d").and_then(Value::as_u64) {
            Some(given) if given != d as u64 => {
                return Err(Failure::validation(format!(
                    "field `d`: --d {d} disagrees with the estimator's d = {given}"
                )))
            }
            _ => {
                map.insert("d".into(), d.into());
            }
        }
    }
    Ok(OfflineEstimator::from_json(&Value::Object(map).to_string())?)
}

/// `--scheme` is either JSON or a bare scheme name; `-S` fills in a missing horizon.
pub fn scheme(spec: &str, horizon: Option<usize>) -> Result<Scheme, Failure> {
    let spec = spec.trim();
    if !spec.starts_with('{') {
        let cfg = SchemeConfig {
            scheme: spec.to_string(),
            horizon,
            ..SchemeConfig::default()
        };
        return Ok(Scheme::from_config(&cfg)?);
    }
    let mut map = json_object("scheme", spec)?;
    if let Some(s) = horizon {
        map.entry("S").or_insert(s.into());
    }
    Ok(Scheme::from_json(&Value::Object(map).to_string())?)
}

/// A sequence from `--seq 1,2,1` or from a file holding one byte per symbol.
pub fn sequence(d: usize, seq: Option<&str>, file: Option<&Path>) -> Result<Sequence, Failure> {
    match (seq, file) {
        (Some(text), None) => Ok(Sequence::parse(d, text)?),
        (None, Some(path)) => {
            let bytes = fs::read(path).map_err(|e| {
                Failure::validation(format!("field `in`: cannot read {}: {e}", path.display()))
            })?;
            Ok(Sequence::from_bytes(d, &bytes)?)
        }
        (None, None) => Err(Failure::validation("one of --seq or --in is required")),
        (Some(_), Some(_)) => Err(Failure::validation("--seq and --in are mutually exclusive")),
    }
}

/// Comma-separated horizons such as `10,12,14`.
pub fn schedule(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|t| {
            t.trim().parse().map_err(|_| {
                Failure::validation(format!("field `schedule`: {t:?} is not a horizon"))
            })
        })
        .collect()
}

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use onlinify::converters::{self, mixture_predict};
use onlinify::diagnostics::{
    appendix_bounds_check, check_tc, format_nats, regret_curve_csv, regret_exact,
    regret_per_step_bound, AppendixKind, RegretReport,
};
use onlinify::{
    Bitstream, ExactProb, OfflineEstimator, OnlinePredictor, Predictor, Scheme, Sequence,
};
use serde::Serialize;
use serde_json::json;

use crate::{input, Conversion, Data, Failure, Format, RegretMode, Source};

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => to_json(value),
        Format::Text => text(),
    }
}

fn shown(x: &Sequence) -> String {
    if x.is_empty() {
        "(empty)".into()
    } else {
        x.to_string()
    }
}

fn predictor(source: &Source, conversion: &Conversion) -> Result<OnlinePredictor, Failure> {
    let e = input::estimator(&source.estimator, source.d)?;
    let s = input::scheme(&conversion.scheme, conversion.horizon)?;
    Ok(OnlinePredictor::new(e, s))
}

fn data(e: &OfflineEstimator, data: &Data) -> Result<Sequence, Failure> {
    input::sequence(e.alphabet_size(), data.seq.as_deref(), data.input.as_deref())
}

pub fn mass(format: Format, source: &Source, d: &Data) -> Result<String, Failure> {
    let e = input::estimator(&source.estimator, source.d)?;
    let x = data(&e, d)?;
    let exact = match e.offline_mass(&x) {
        Ok(q) => Some(q),
        Err(err) if err.is_budget() => None,
        Err(err) => return Err(err.into()),
    };
    let ln = match &exact {
        Some(q) => q.ln(),
        None => e.offline_log_mass(&x)?.ln(),
    };
    let float = exact.as_ref().map_or(ln.exp(), ExactProb::to_f64);
    let report = json!({
        "estimator": e.to_config(),
        "sequence": x,
        "mass": exact,
        "mass_f64": float,
        "ln_mass": ln,
    });
    Ok(emit(format, &report, || {
        let mut out = String::new();
        match &exact {
            Some(q) => writeln!(out, "{q}").unwrap(),
            None => writeln!(out, "exact mass over budget; log domain only").unwrap(),
        }
        writeln!(out, "float {}", format_nats(float)).unwrap();
        writeln!(out, "ln {}", format_nats(ln)).unwrap();
        out
    }))
}

#[derive(Serialize)]
struct Cell {
    symbol: usize,
    p: ExactProb,
    p_f64: f64,
}

pub fn predict(format: Format, source: &Source, c: &Conversion, d: &Data) -> Result<String, Failure> {
    let p = predictor(source, c)?;
    let x = data(p.source(), d)?;
    let dist = p.distribution(&x)?;
    let sum: ExactProb = dist.iter().sum();
    let cells: Vec<Cell> = dist
        .into_iter()
        .enumerate()
        .map(|(i, q)| Cell {
            symbol: i + 1,
            p_f64: q.to_f64(),
            p: q,
        })
        .collect();
    let intervals = match p.scheme() {
        Scheme::Mixture(cfg) => Some(mixture_predict(p.source(), cfg, &x)?),
        _ => None,
    };
    let report = json!({
        "prefix": x,
        "scheme": p.scheme().to_config(),
        "distribution": cells,
        "sum": sum,
        "intervals": intervals,
    });
    Ok(emit(format, &report, || {
        let mut out = String::new();
        for (i, cell) in cells.iter().enumerate() {
            write!(out, "{}\t{}\t{}", cell.symbol, cell.p, format_nats(cell.p_f64)).unwrap();
            if let Some(iv) = &intervals {
                write!(out, "\t[{}, {}]", iv[i].lower, iv[i].upper).unwrap();
            }
            out.push('\n');
        }
        writeln!(out, "sum {sum}").unwrap();
        out
    }))
}

pub fn tc_check(format: Format, source: &Source, max_n: usize) -> Result<String, Failure> {
    let e = input::estimator(&source.estimator, source.d)?;
    let report = check_tc(&e, max_n)?;
    let out = emit(format, &report, || match (&report.witness, &report.stopped) {
        (Some(w), _) => format!(
            "TC fails at depth {}: children of {} sum to {}, parent mass {} (deficit {})\n",
            w.prefix.len() + 1,
            shown(&w.prefix),
            w.children,
            w.parent,
            w.deficit
        ),
        (None, Some(why)) => format!(
            "TC holds to depth {} of {}; stopped: {why}\n",
            report.depth_checked, report.requested_depth
        ),
        (None, None) => format!("TC holds to depth {}\n", report.depth_checked),
    });
    match &report.stopped {
        Some(why) if report.witness.is_none() => Err(Failure::budget(why.clone()).with_partial(out)),
        _ => Ok(out),
    }
}

fn one_regret(p: &OnlinePredictor, n: usize, mode: RegretMode) -> Result<RegretReport, Failure> {
    Ok(match mode {
        RegretMode::Exact => regret_exact(p.source(), p, n)?,
        RegretMode::Bound => regret_per_step_bound(p.source(), n)?,
    })
}

pub fn regret(
    format: Format,
    source: &Source,
    c: &Conversion,
    n: usize,
    mode: RegretMode,
) -> Result<String, Failure> {
    let p = predictor(source, c)?;
    let report = one_regret(&p, n, mode)?;
    Ok(emit(format, &report, || {
        let mut out = format!("{}\n", format_nats(report.value));
        writeln!(out, "method {}", report.method.name()).unwrap();
        if let Some(r) = &report.ratio {
            writeln!(out, "ratio {r}").unwrap();
        }
        if let Some(x) = &report.maximizer {
            writeln!(out, "maximizer {}", shown(x)).unwrap();
        }
        out
    }))
}

pub fn regret_curve(
    format: Format,
    source: &Source,
    c: &Conversion,
    n_min: usize,
    n_max: usize,
    mode: RegretMode,
) -> Result<String, Failure> {
    if n_min > n_max {
        return Err(Failure::validation("field `n-min`: larger than --n-max"));
    }
    let p = predictor(source, c)?;
    let mut reports = Vec::new();
    for n in n_min..=n_max {
        match one_regret(&p, n, mode) {
            Ok(r) => reports.push(r),
            Err(f) => {
                let partial = emit(format, &reports, || regret_curve_csv(&reports));
                return Err(f.with_partial(partial));
            }
        }
    }
    Ok(emit(format, &reports, || regret_curve_csv(&reports)))
}

pub fn mix(
    format: Format,
    source: &Source,
    d: &Data,
    prior: Option<String>,
    completion: Option<String>,
    horizon: Option<usize>,
    eps: Option<String>,
) -> Result<String, Failure> {
    let e = input::estimator(&source.estimator, source.d)?;
    let x = data(&e, d)?;
    let mut cfg = json!({ "scheme": "mixture" });
    for (key, value) in [("prior", prior), ("completion", completion), ("eps", eps)] {
        if let Some(v) = value {
            cfg[key] = v.into();
        }
    }
    if let Some(s) = horizon {
        cfg["S"] = s.into();
    }
    let Scheme::Mixture(cfg) = Scheme::from_json(&cfg.to_string())? else {
        unreachable!("scheme is mixture")
    };
    let value = converters::mixture_mass(&e, &cfg, &x)?;
    Ok(emit(format, &value, || {
        format!(
            "lower {}\nupper {}\nhorizon {}\nmethod {}\nlower_f64 {}\nupper_f64 {}\n",
            value.lower,
            value.upper,
            value.horizon,
            value.method,
            format_nats(value.lower.to_f64()),
            format_nats(value.upper.to_f64())
        )
    }))
}

pub fn limit_probe(
    format: Format,
    source: &Source,
    d: &Data,
    schedule: Option<&str>,
) -> Result<String, Failure> {
    let e = input::estimator(&source.estimator, source.d)?;
    let x = data(&e, d)?;
    let schedule = match schedule {
        Some(text) => input::schedule(text)?,
        None => (2 * x.len() + 2..2 * x.len() + 14).collect(),
    };
    let report = converters::limit_probe(&e, &x, &schedule)?;
    let out = emit(format, &report, || {
        let mut out = String::new();
        for p in &report.points {
            writeln!(out, "{}\t{}\t{}", p.horizon, p.value, format_nats(p.value_f64)).unwrap();
        }
        writeln!(out, "verdict {}", serde_json::to_value(report.verdict).unwrap().as_str().unwrap())
            .unwrap();
        if let Some(l) = &report.limit {
            writeln!(out, "limit {l}").unwrap();
        }
        out
    });
    match &report.stopped {
        Some(why) => Err(Failure::budget(why.clone()).with_partial(out)),
        None => Ok(out),
    }
}

pub fn cdf(format: Format, source: &Source, c: &Conversion, d: &Data) -> Result<String, Failure> {
    let p = predictor(source, c)?;
    let x = data(p.source(), d)?;
    let f = converters::cdf(&p, &x)?;
    let report = json!({ "sequence": x, "cdf": f, "cdf_f64": f.to_f64() });
    Ok(emit(format, &report, || format!("{f}\nfloat {}\n", format_nats(f.to_f64()))))
}

pub fn appendix_a(format: Format, kind: &str, max_n: usize, d: Option<usize>) -> Result<String, Failure> {
    let kind = AppendixKind::parse(kind)?;
    let d = match (d, kind) {
        (Some(d), _) => d,
        (None, AppendixKind::Cycle) => 3,
        // the staircase reaches symbol k after k(k+1)/2 symbols
        (None, AppendixKind::Staircase) => (1..).find(|k| k * (k + 1) / 2 >= max_n).unwrap().max(2),
    };
    let report = appendix_bounds_check(kind, max_n, d)?;
    Ok(emit(format, &report, || {
        let mut out = String::new();
        for c in &report.checks {
            let status = if c.passed() { "ok" } else { "FAILED" };
            writeln!(out, "{}: {}/{} {status}", c.name, c.probed - c.failed, c.probed).unwrap();
            if let Some(f) = &c.first_failure {
                writeln!(out, "  first failure at n={}: {}", f.n, f.detail).unwrap();
            }
        }
        for note in &report.notes {
            writeln!(out, "note: {note}").unwrap();
        }
        out
    }))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn encode(
    format: Format,
    source: &Source,
    c: &Conversion,
    d: &Data,
    out: &Path,
) -> Result<String, Failure> {
    let p = predictor(source, c)?;
    let x = data(p.source(), d)?;
    let b = onlinify::encode(&p, &x)?;
    let bytes = b.to_bytes();
    fs::write(out, &bytes)
        .map_err(|e| Failure::validation(format!("field `out`: cannot write {}: {e}", out.display())))?;
    let report = json!({
        "symbols": x.len(),
        "bytes": bytes.len(),
        "payload_bits": b.payload_bits(),
        "digest": hex(&b.digest()),
    });
    Ok(emit(format, &report, || {
        format!(
            "encoded {} symbols into {} bytes ({} payload bits)\n",
            x.len(),
            bytes.len(),
            b.payload_bits()
        )
    }))
}

pub fn decode(
    format: Format,
    source: &Source,
    c: &Conversion,
    input: &Path,
    out: Option<&Path>,
) -> Result<String, Failure> {
    let p = predictor(source, c)?;
    let bytes = fs::read(input)
        .map_err(|e| Failure::validation(format!("field `in`: cannot read {}: {e}", input.display())))?;
    let b = Bitstream::from_bytes(&bytes)?;
    let x = onlinify::decode(&p, &b)?;
    if let Some(path) = out {
        fs::write(path, x.to_bytes()).map_err(|e| {
            Failure::validation(format!("field `out`: cannot write {}: {e}", path.display()))
        })?;
    }
    let report = json!({ "symbols": x.len(), "sequence": x });
    Ok(emit(format, &report, || match out {
        Some(path) => format!("decoded {} symbols to {}\n", x.len(), path.display()),
        None => format!("{x}\n"),
    }))
}

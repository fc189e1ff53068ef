use std::path::Path;
use std::process::{Command, Output};

fn onlinify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_onlinify"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = onlinify(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn documented_examples() {
    let mass = stdout(&["mass", "--estimator", r#"{"kind":"good_turing","d":2}"#, "--seq", "1,1"]);
    assert_eq!(mass.lines().next(), Some("1/4"));
    let regret = stdout(&[
        "regret",
        "--estimator",
        "alternating_bernoulli",
        "--scheme",
        "naive_norm",
        "--n",
        "6",
    ]);
    assert_eq!(regret.lines().next(), Some("2.07944154"));
    let tc = stdout(&["tc-check", "--estimator", "laplace", "--d", "3", "--max-n", "4"]);
    assert_eq!(tc.trim(), "TC holds to depth 4");
}

#[test]
fn outputs_are_deterministic() {
    let runs: [&[&str]; 6] = [
        &["--format", "json", "regret", "--estimator", "good_turing", "--d", "3", "--n", "5"],
        &["regret-curve", "--estimator", "ristad", "--d", "3", "--n-max", "5"],
        &["--format", "json", "tc-check", "--estimator", "ristad", "--d", "2", "--max-n", "5"],
        &["--format", "json", "mix", "--estimator", "good_turing", "--seq", "1,2,2", "-S", "6"],
        &["--format", "json", "limit-probe", "--estimator", "bad_good", "--seq", "1,2"],
        &["--format", "json", "appendix-a", "--kind", "staircase", "--max-n", "200"],
    ];
    for args in runs {
        let first = onlinify(args);
        let second = onlinify(args);
        assert!(first.status.success(), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn ristad_curve_stays_under_two_ln_n() {
    let csv = stdout(&[
        "regret-curve",
        "--estimator",
        "ristad",
        "--d",
        "2",
        "--scheme",
        "naive_norm",
        "--n-min",
        "2",
        "--n-max",
        "8",
    ]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,regret_nats,method"));
    let mut rows = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        let n: f64 = fields[0].parse().unwrap();
        let regret: f64 = fields[1].parse().unwrap();
        assert!(regret <= 2.0 * n.ln(), "{line}");
        assert_eq!(fields[2], "exact_exhaustive");
        rows += 1;
    }
    assert_eq!(rows, 7);
}

#[test]
fn exit_codes() {
    let out = onlinify(&["mass", "--estimator", "nope", "--seq", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kind"));
    let out = onlinify(&["predict", "--estimator", "laplace", "--scheme", "bogus", "--seq", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("scheme"));
    let out = onlinify(&["mass", "--estimator", r#"{"kind":"laplace","d":2}"#, "--d", "3", "--seq", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = onlinify(&["regret", "--estimator", "uniform", "--d", "10", "--scheme", "ratio", "--n", "8"]);
    assert_eq!(out.status.code(), Some(3));
    let out = onlinify(&["regret", "--estimator", "laplace", "--n"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn encode_decode_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("symbols.bin");
    let stream = dir.path().join("symbols.sqlw");
    let restored = dir.path().join("restored.bin");
    let symbols: Vec<u8> = (0..500u32).map(|i| (1 + (i * i + i / 7) % 4) as u8).collect();
    std::fs::write(&input, &symbols).unwrap();
    let model = ["--estimator", "good_turing", "--d", "4", "--scheme", "naive_norm"];

    let mut args = vec!["encode"];
    args.extend(model);
    args.extend(["--in", path(&input), "--out", path(&stream)]);
    let report = stdout(&args);
    assert!(report.starts_with("encoded 500 symbols"), "{report}");

    let mut args = vec!["decode"];
    args.extend(model);
    args.extend(["--in", path(&stream), "--out", path(&restored)]);
    stdout(&args);
    assert_eq!(std::fs::read(&restored).unwrap(), symbols);

    let out = onlinify(&[
        "decode",
        "--estimator",
        "laplace",
        "--d",
        "4",
        "--scheme",
        "ratio",
        "--in",
        path(&stream),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("different model"));
}

#[test]
fn printed_decode_and_mixture_prediction() {
    let dir = tempfile::tempdir().unwrap();
    let stream = dir.path().join("s.sqlw");
    stdout(&[
        "encode", "--estimator", "ristad", "--d", "3", "--seq", "3,1,1,2", "--out", path(&stream),
    ]);
    let back = stdout(&["decode", "--estimator", "ristad", "--d", "3", "--in", path(&stream)]);
    assert_eq!(back.trim(), "3,1,1,2");

    let json = stdout(&[
        "--format", "json", "predict", "--estimator", "good_turing", "--d", "2", "--scheme",
        r#"{"scheme":"mixture","S":5}"#, "--seq", "1",
    ]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["sum"], "1/1");
    assert_eq!(v["intervals"].as_array().unwrap().len(), 2);
}

#[test]
fn limit_probe_verdicts() {
    let osc = stdout(&[
        "limit-probe", "--estimator", "alternating_bernoulli", "--seq", "1", "--schedule", "10,11,12,13,14,15",
    ]);
    assert!(osc.contains("verdict oscillating"), "{osc}");
    let conv = stdout(&["limit-probe", "--estimator", "bad_good", "--seq", "1,2,2"]);
    assert!(conv.contains("verdict converged") && conv.contains("limit 1/8"), "{conv}");
}

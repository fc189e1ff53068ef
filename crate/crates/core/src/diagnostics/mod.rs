//! Time-consistency checks, worst-case regret (exact and bounded), the
//! Good-Turing regret identity and the staircase/cycle bound checks.

mod appendix;
mod good_turing;
mod regret;
mod tc;

pub use appendix::{
    appendix_bounds_check, appendix_sequence, AppendixKind, AppendixReport, CheckSummary, Finding,
    CYCLE_NN, CYCLE_NN1, CYCLE_NN2, CYCLE_PRODUCT, STAIRCASE_LOWER, STAIRCASE_UPPER, SUPPORT,
};
pub use good_turing::{gt_nn, gt_nn_from_counts, gt_regret_identity, GtIdentityReport};
pub use regret::{
    extra_regret_check, regret_exact, regret_per_step_bound, ExtraRegretReport, RegretMethod,
    RegretReport,
};
pub use tc::{check_tc, TcReport, TcWitness};

/// `v` with 9 significant digits; `inf` for infinity.
pub fn format_nats(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let magnitude = v.abs().log10().floor() as i32;
    if !(-5..=15).contains(&magnitude) {
        return format!("{v:.8e}");
    }
    let decimals = (8 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

pub const REGRET_CSV_HEADER: &str = "n,regret_nats,method";

/// Regret curve as CSV with a header row.
pub fn regret_curve_csv(reports: &[RegretReport]) -> String {
    let mut out = String::from(REGRET_CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&format!("{},{},{}\n", r.n, format_nats(r.value), r.method.name()));
    }
    out
}

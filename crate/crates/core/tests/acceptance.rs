//! Acceptance suite. Every test writes one `acceptance N <name>: PASS|FAIL`
//! line to stderr (bypassing output capture) before asserting.

use std::io::Write;
use std::time::Instant;

use parrondoq::cli::verify::{self, Status};
use parrondoq::cli::{figures, sweep};
use parrondoq::coins::parse_sequence;
use parrondoq::engine::{calibrate_convention, final_state, payoff, Layout, PayoffConvention};
use parrondoq::noise::{ChannelKind, NoiseSpec};
use parrondoq::Error;

fn report(n: u32, name: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "acceptance {n} {name}: {verdict} {detail}");
    assert!(ok, "acceptance {n} {name} failed: {detail}");
}

fn summarize(checks: &[verify::Check]) -> String {
    checks
        .iter()
        .map(|c| format!("{}={:.2e}/{}", c.id, c.residual, c.status))
        .collect::<Vec<_>>()
        .join(" ")
}

/// A check is acceptable when it passed, or when its only disagreement is a
/// classified printed factor.
fn acceptable(c: &verify::Check) -> bool {
    matches!(c.status, Status::Pass | Status::Typo)
}

#[test]
fn c1_zero_noise_reduction() {
    let start = Instant::now();
    let checks = verify::p0_reduction().unwrap();
    let secs = start.elapsed().as_secs_f64();
    let exact = checks
        .iter()
        .filter(|c| c.id == "p0.channels_agree" || c.id == "p0.eq15")
        .all(|c| c.status == Status::Pass);
    let ok = exact && checks.iter().all(acceptable) && secs < 1.0;
    report(
        1,
        "zero_noise_reduction",
        ok,
        &format!("{} time={secs:.3}s", summarize(&checks)),
    );
}

#[test]
fn c2_oracle_tracking() {
    let start = Instant::now();
    let checks = verify::oracle_tracking().unwrap();
    let secs = start.elapsed().as_secs_f64();
    let ad = checks.iter().find(|c| c.id == "track.eq15.ad").unwrap();
    let ok = ad.status == Status::Pass && checks.iter().all(acceptable) && secs < 1.0;
    report(
        2,
        "oracle_tracking",
        ok,
        &format!("{} time={secs:.3}s", summarize(&checks)),
    );
}

#[test]
fn c3_channel_correctness() {
    let checks = verify::channel_checks().unwrap();
    let ok = checks.iter().all(|c| c.status == Status::Pass);
    report(3, "channel_correctness", ok, &summarize(&checks));
}

#[test]
fn c4_compiler_equivalence() {
    let checks = verify::compiler_checks().unwrap();
    let ok = checks.iter().all(|c| c.status == Status::Pass);
    report(4, "compiler_equivalence", ok, &summarize(&checks));
}

/// Either a candidate convention reproduces every closed form, or the failure
/// is reported together with the complete residual table.
#[test]
fn c5_convention_calibration() {
    match calibrate_convention() {
        Ok(c) => report(
            5,
            "convention_calibration",
            true,
            &format!("convention={} phases={}", c.convention, c.phase_set.name()),
        ),
        Err(Error::Calibration(table)) => {
            // 2 phase sets × 4 conventions × 3 sequences × 2 ε × 3 channels × 3 p
            let complete = table.rows.len() == 2 * 4 * 3 * 2 * 3 * 3;
            let (check, reported, _) = verify::calibration_check().unwrap();
            let listed = reported.map_or(0, |t| t.to_string().lines().count()) == table.rows.len() + 1;
            let best = table.summary().into_iter().map(|s| s.2).fold(f64::INFINITY, f64::min);
            report(
                5,
                "convention_calibration",
                complete && listed && check.status == Status::Fail,
                &format!(
                    "no candidate matches (best max residual {best:.3e}); failure reported with full residual table"
                ),
            );
        }
        Err(e) => report(5, "convention_calibration", false, &e.to_string()),
    }
}

#[test]
fn c6_a_series() {
    let conv = calibrate_convention().map(|c| c.convention).unwrap_or_default();
    let checks = verify::a_series_checks(&conv).unwrap();
    let zeros: Vec<_> = checks.iter().filter(|c| c.id.ends_with(".zero")).collect();
    let matching = checks.iter().find(|c| c.id == "aseries.ad.matching_n").unwrap();
    let ok = zeros.len() == 2 && zeros.iter().all(|c| c.status == Status::Pass);
    report(
        6,
        "a_series",
        ok,
        &format!(
            "{} ad_matching_n={} notes: {}",
            summarize(&checks),
            matching.note,
            zeros.iter().map(|c| c.note.as_str()).collect::<Vec<_>>().join("; ")
        ),
    );
}

#[test]
fn c7_phase_independence() {
    let check = verify::phase_invariance().unwrap();
    report(
        7,
        "phase_independence",
        check.status == Status::Pass,
        &check.to_string(),
    );
}

#[test]
fn c8_performance() {
    let plan = parse_sequence("(AAB)^3").unwrap();
    assert_eq!(plan.total_qubits(), 9);
    let cfg = verify::figure1_config();
    let start = Instant::now();
    let rho = final_state(&plan, &cfg, &NoiseSpec::new(ChannelKind::Depolarizing, 0.5).unwrap()).unwrap();
    let value = payoff(&rho, &PayoffConvention::default(), Layout::from(&plan))
        .unwrap()
        .payoff;
    let secs = start.elapsed().as_secs_f64();
    assert_eq!(rho.matrix().dim(), 512);
    let guard = parrondoq::noise::lift_enumerated(&NoiseSpec::new(ChannelKind::Depolarizing, 0.5).unwrap(), 5);
    report(
        8,
        "performance",
        secs < verify::PERFORMANCE_BUDGET_SECS && value.is_finite() && guard.is_err(),
        &format!("time={secs:.3}s payoff={value:.6}"),
    );
}

#[test]
fn c9_figure_presets() {
    let mut deterministic = true;
    for n in figures::FIGURES {
        let a = sweep::to_csv(&figures::figure_rows(n, 1).unwrap());
        let b = sweep::to_csv(&figures::figure_rows(n, 4).unwrap());
        deterministic &= a == b && a.starts_with(sweep::CSV_HEADER);
    }
    let asymmetry = verify::figure2_pd_asymmetry(4).unwrap();
    let symmetric = asymmetry <= verify::SYMMETRY_TOLERANCE;
    report(
        9,
        "figure_presets",
        deterministic && symmetric,
        &format!("deterministic={deterministic} fig2_pd_mirror_residual={asymmetry:.3e} tol=1e-9"),
    );
}

//! Public-API round trips across modules.

use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use bellab_core::bounds::{g_statistic, scan_violation};
use bellab_core::lhv::{btcc_check, BtccVerdict};
use bellab_core::montecarlo::{chsh_from_counts, g_statistic_from_counts};
use bellab_core::*;

fn qm_quad_counts(eta: f64, n: u64, seed: u64) -> (SettingsQuad, CountsTable) {
    let src = QmSource::new(CorrelationSign::Parallel, 1.0, eta).unwrap();
    let quad = quad_from_phi(FRAC_PI_4).unwrap();
    let counts = run_experiment(&ExperimentConfig::for_quad(Source::Qm(src), &quad, n, seed)).unwrap();
    (quad, counts)
}

#[test]
fn counts_survive_csv_round_trip() {
    let (quad, counts) = qm_quad_counts(0.3, 50_000, 1);
    let mut buf = Vec::new();
    counts.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("pair_index,a_rad,b_rad,r,q,count,n_emitted\n"));
    assert!(!text.contains('\r'));
    let back = CountsTable::read_csv(&buf[..]).unwrap();
    assert_eq!(back, counts);
    assert_eq!(
        ratio_statistic(&back, &quad, Sign::Plus, Sign::Plus).unwrap(),
        ratio_statistic(&counts, &quad, Sign::Plus, Sign::Plus).unwrap()
    );
}

#[test]
fn simulated_and_exact_g_agree() {
    let src = QmSource::new(CorrelationSign::Parallel, 1.0, 0.5).unwrap();
    let quad = quad_from_phi(FRAC_PI_4).unwrap();
    let exact: JointDistribution = quad
        .extended_ch_pairs()
        .iter()
        .map(|p| (*p, qm_full_distribution(&src, p.a, p.b)))
        .collect();
    let want = g_statistic(&exact, &quad, Sign::Plus, Sign::Plus).unwrap().value;
    let (_, counts) = qm_quad_counts(0.5, 400_000, 2);
    let got = g_statistic_from_counts(&counts, &quad, Sign::Plus, Sign::Plus).unwrap();
    assert!(
        (got.report.value - want).abs() < 4.0 * got.stderr,
        "{} vs {want}",
        got.report.value
    );
    assert!(got.report.bound_violated);
}

#[test]
fn low_efficiency_chsh_stays_quantum_after_post_selection() {
    let (quad, counts) = qm_quad_counts(0.1, 300_000, 3);
    let s = chsh_from_counts(&counts, &quad).unwrap();
    assert!(s.value > 2.0 + 5.0 * s.stderr, "{s:?}");
}

#[test]
fn violation_scan_brackets_the_simulated_point() {
    let src = QmSource::new(CorrelationSign::Parallel, 1.0, 1.0).unwrap();
    let scan = scan_violation(&src, 256).unwrap();
    assert!(scan.intervals.iter().any(|&(lo, hi)| lo < FRAC_PI_4 && FRAC_PI_4 < hi));
}

#[test]
fn custom_models_plug_into_the_simulator() {
    let model = builtin_model("det_sign_lossy(0.5)").unwrap();
    let quad = quad_from_phi(0.9).unwrap();
    let src = Source::Lhv(Arc::new(model));
    let counts = run_experiment(&ExperimentConfig::for_quad(src, &quad, 100_000, 4)).unwrap();
    let r = ratio_statistic(&counts, &quad, Sign::Minus, Sign::Plus).unwrap();
    assert!(!r.violated, "{r:?}");
    assert!(assumption_a_test(&counts).unwrap().pass);
    let rep = btcc_check(&model, AnalyzerAngle::ZERO, 100_000, 1e-5, 5).unwrap();
    assert_ne!(rep.verdict, BtccVerdict::PerfectCorrelationAchieved);
}

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI, SQRT_2};

use proptest::prelude::*;

use super::*;
use crate::angle::AnalyzerAngle;
use crate::error::Error;
use crate::lhv::{joint_table_quadrature, BuiltinModel};
use crate::qm::{qm_full_distribution, CorrelationSign};
use crate::settings::{quad_from_phi, triple_from_theta};
use crate::types::{JointTable, Outcome};

const P: Sign = Sign::Plus;

fn qm_dist(src: &QmSource, pairs: &[SettingPair]) -> JointDistribution {
    pairs
        .iter()
        .map(|&p| (p, qm_full_distribution(src, p.a, p.b)))
        .collect()
}

/// `(ηF/4)(3cos φ − cos 3φ − 2)` written out directly, independent of `g_closed_form`.
fn g_oracle(eta: f64, f: f64, phi: f64) -> f64 {
    eta * f / 4.0 * (3.0 * phi.cos() - (3.0 * phi).cos() - 2.0)
}

/// Product table for independent wings.
fn product(w1: ProbTriple, w2: ProbTriple) -> JointTable {
    let mut cells = [[0.0; 3]; 3];
    for r in Outcome::ALL {
        for q in Outcome::ALL {
            cells[r.index()][q.index()] = w1.get(r) * w2.get(q);
        }
    }
    JointTable::new(cells).unwrap()
}

#[test]
fn g_function_examples() {
    assert_eq!(g_from_slots([0.0; 6]), 0.0);
    assert!((g_from_slots([0.0, 0.0, 0.7, 0.0, 0.6, 0.0]) + 0.42).abs() < 1e-15);
    assert_eq!(g_from_slots([1.0; 6]), 0.0);
    let t = |p: f64| ProbTriple::with_detection(p, 1.0);
    let profile = SinglesProfile {
        p1_a: t(1.0),
        p1_ap: t(1.0),
        p1_b: t(1.0),
        p2_b: t(1.0),
        p2_bp: t(1.0),
        p2_ap: t(1.0),
    };
    assert_eq!(g_function(&profile, P, P), 0.0);
    // r = q = −1 reads the p₋ components, all zero here
    assert_eq!(g_function(&profile, Sign::Minus, Sign::Minus), 0.0);
}

#[test]
fn f_function_examples() {
    let zero = FSlots {
        p1_a: 0.0,
        p1_ap: 0.0,
        p2_b: 0.0,
        p2_a: 0.0,
        p2_ap: 0.0,
    };
    assert_eq!(f_function(&zero), 0.0);
    assert_eq!(
        f_function(&FSlots {
            p1_a: 1.0,
            p2_b: 1.0,
            ..zero
        }),
        -1.0
    );
    let ones = FSlots {
        p1_a: 1.0,
        p1_ap: 1.0,
        p2_b: 1.0,
        p2_a: 1.0,
        p2_ap: 1.0,
    };
    assert_eq!(f_function(&ones), 0.0);
}

#[test]
fn ideal_extremes_stay_in_ch_range() {
    let rows = enumerate_extremes(&Inefficiencies::IDEAL).unwrap();
    assert_eq!(rows.len(), 16);
    let max = rows.iter().map(|r| r.g).fold(f64::MIN, f64::max);
    let min = rows.iter().map(|r| r.g).fold(f64::MAX, f64::min);
    assert_eq!(max, 0.0);
    assert!(min >= -1.0);
    assert_eq!(max_discrepancy(&rows), 0.0);
}

#[test]
fn row_six_exceeds_zero_for_unequal_efficiencies() {
    let ineff = Inefficiencies::from_slots([1.0, 0.5, 1.0, 1.0, 0.5, 0.5]);
    let rows = enumerate_extremes(&ineff).unwrap();
    assert!((rows[5].g - 0.5).abs() < 1e-15);
    assert_eq!(rows[5].symbolic, "α1'·(β2'-α2')");
}

#[test]
fn row_eleven_cancels_for_equal_wing1_efficiency() {
    let ineff = Inefficiencies {
        alpha1: 0.37,
        beta1: 0.37,
        ..Inefficiencies::uniform(0.8)
    };
    let rows = enumerate_extremes(&ineff).unwrap();
    assert_eq!(rows[10].g, 0.0);
    assert_eq!(rows[10].limit, 0.0);
}

#[test]
fn rejects_out_of_range_inefficiency() {
    assert!(enumerate_extremes(&Inefficiencies::uniform(1.2)).is_err());
}

#[test]
fn table_is_the_coupled_hypercube() {
    // the 16 rows are exactly the 2⁴ settings of (a on 1, b on 2, a′ on 1, b′ on 2)
    // with a′ and b mirrored onto the other wing
    let mut generated: Vec<[bool; 6]> = (0..16u8)
        .map(|m| {
            let bit = |k: u8| m & (1 << k) != 0;
            [bit(0), bit(1), bit(2), bit(3), bit(2), bit(1)]
        })
        .collect();
    let mut table = TABLE_ROWS.to_vec();
    generated.sort();
    table.sort();
    assert_eq!(generated, table);
    for row in enumerate_extremes(&Inefficiencies::uniform(0.5)).unwrap() {
        assert!(row.is_coupled());
    }
}

#[test]
fn rows_that_can_exceed_zero() {
    // Besides 6, 11, 12, 15 and 16, rows 9, 13 and 14 also turn positive once
    // the six efficiencies differ enough; all eight are ≤ 0 at equal efficiencies.
    let mut can_exceed = [false; 16];
    let grid = [0.0, 0.3, 0.7, 1.0];
    for &a in &grid {
        for &b in &grid {
            for &c in &grid {
                let ineff = Inefficiencies::from_slots([a, b, c, 1.0 - a, 1.0 - c, 1.0 - b]);
                for row in enumerate_extremes(&ineff).unwrap() {
                    can_exceed[row.index - 1] |= row.g > 1e-12;
                }
            }
        }
    }
    let rows: Vec<usize> = (1..=16).filter(|&k| can_exceed[k - 1]).collect();
    assert_eq!(rows, vec![6, 9, 11, 12, 13, 14, 15, 16]);
    for eta in [0.1, 0.5, 0.9, 1.0] {
        for row in enumerate_extremes(&Inefficiencies::uniform(eta)).unwrap() {
            assert!(row.g <= 0.0);
        }
    }
}

#[test]
fn coupled_interior_point_exceeds_vertex_maximum() {
    // Both a′ slots at 1/3 and both b slots at 2/3: allowed for a stochastic
    // model with parallel response, yet g > 0 = max over the ideal rows.
    let g = g_from_slots([1.0, 2.0 / 3.0, 1.0 / 3.0, 0.0, 1.0 / 3.0, 2.0 / 3.0]);
    assert!((g - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn qm_g_statistic_matches_closed_form() {
    for (eta, f) in [(1.0, 1.0), (0.5, 0.9), (0.01, 1.0)] {
        let src = QmSource::parallel(f, eta).unwrap();
        for i in 0..=256 {
            let phi = 2.0 * FRAC_PI_3 * i as f64 / 256.0;
            let quad = quad_from_phi(phi).unwrap();
            let report = g_statistic(&qm_dist(&src, &quad.extended_ch_pairs()), &quad, P, P).unwrap();
            assert!((report.value - g_oracle(eta, f, phi)).abs() <= 1e-12);
            assert!((report.value - g_closed_form(&src, phi, P, P)).abs() <= 1e-12);
        }
    }
}

#[test]
fn general_sign_closed_form_matches_composition() {
    for sign in [CorrelationSign::Parallel, CorrelationSign::Anti] {
        let src = QmSource::new(sign, 0.8, 0.3).unwrap();
        for phi in [0.1, 0.7, 1.5, 2.0] {
            let quad = quad_from_phi(phi).unwrap();
            let dist = qm_dist(&src, &quad.extended_ch_pairs());
            for r in Sign::BOTH {
                for q in Sign::BOTH {
                    let g = g_statistic(&dist, &quad, r, q).unwrap().value;
                    assert!(
                        (g - g_closed_form(&src, phi, r, q)).abs() < 1e-12,
                        "{sign:?} {r:?}{q:?} φ={phi}"
                    );
                }
            }
        }
    }
}

#[test]
fn maximum_violation_at_quarter_turn() {
    let src = QmSource::parallel(1.0, 1.0).unwrap();
    let quad = quad_from_phi(FRAC_PI_4).unwrap();
    let report = g_statistic(&qm_dist(&src, &quad.extended_ch_pairs()), &quad, P, P).unwrap();
    assert!((report.value - (2.0 * SQRT_2 - 2.0) / 4.0).abs() < 1e-12);
    assert!(report.bound_violated);
    assert_eq!(report.components.len(), 6);
    assert_eq!(report.components[4].label, "P++(a',a')");

    let quad = quad_from_phi(FRAC_PI_2).unwrap();
    let report = g_statistic(&qm_dist(&src, &quad.extended_ch_pairs()), &quad, P, P).unwrap();
    assert!((report.value + 0.5).abs() < 1e-12);
    assert!(!report.bound_violated);
}

#[test]
fn g_statistic_reports_missing_pair() {
    let src = QmSource::parallel(1.0, 1.0).unwrap();
    let quad = quad_from_phi(0.5).unwrap();
    let pairs = quad.extended_ch_pairs();
    let dist = qm_dist(&src, &pairs[..5]);
    assert!(matches!(
        g_statistic(&dist, &quad, P, P),
        Err(Error::MissingPair { .. })
    ));
}

#[test]
fn f_statistic_examples() {
    let src = QmSource::parallel(1.0, 1.0).unwrap();
    let eval = |theta: f64| {
        let t = triple_from_theta(theta).unwrap();
        f_statistic(&qm_dist(&src, &t.pairs()), &t, P, P).unwrap()
    };
    let r = eval(PI / 3.0);
    assert!((r.value - 0.125).abs() < 1e-12);
    assert!(r.bound_violated);
    assert!(eval(0.0).value.abs() < 1e-15);
    assert!(eval(FRAC_PI_2).value.abs() < 1e-15);
    let lossy = QmSource::parallel(0.9, 0.2).unwrap();
    let t = triple_from_theta(PI / 3.0).unwrap();
    let v = f_statistic(&qm_dist(&lossy, &t.pairs()), &t, P, P).unwrap().value;
    assert!((v - 0.2 * 0.9 / 8.0).abs() < 1e-12);
    assert!((v - f_closed_form(&lossy, PI / 3.0, P, P)).abs() < 1e-12);
}

#[test]
fn averaged_rows_examples() {
    let quad = quad_from_phi(0.6).unwrap();
    let [_, _, _, _, apap, bb] = quad.extended_ch_pairs();
    // wing-1 non-detection per direction; wing 2 fixed
    let build = |p0_1a: f64, p0_1b: f64, p0_2b: f64| -> JointDistribution {
        let w = |p0: f64| ProbTriple::with_detection(0.5, 1.0 - p0);
        let w1 = |d: AnalyzerAngle| {
            if d == quad.a {
                w(p0_1a)
            } else if d == quad.b {
                w(p0_1b)
            } else {
                w(0.1)
            }
        };
        let w2 = |d: AnalyzerAngle| if d == quad.b { w(p0_2b) } else { w(0.1) };
        let _ = (apap, bb);
        quad.extended_ch_pairs()
            .iter()
            .map(|&p| (p, product(w1(p.a), w2(p.b))))
            .collect()
    };
    let rows = averaged_rows_under_assumption_a(&build(0.1, 0.1, 0.1), &quad).unwrap();
    for (k, v) in rows.as_array() {
        assert!(v.abs() < 1e-15, "row {k}: {v}");
    }
    let rows = averaged_rows_under_assumption_a(&build(0.1, 0.2, 0.1), &quad).unwrap();
    assert!((rows.row11 - 0.09).abs() < 1e-15);
    assert!((row11_closed_form(0.1, 0.2, 0.1) - 0.09).abs() < 1e-15);
    let rows = averaged_rows_under_assumption_a(&build(0.1, 0.3, 1.0), &quad).unwrap();
    assert_eq!(rows.row11, 0.0);

    let src = QmSource::parallel(0.7, 0.2).unwrap();
    let rows = averaged_rows_under_assumption_a(&qm_dist(&src, &quad.extended_ch_pairs()), &quad).unwrap();
    for (k, v) in rows.as_array() {
        assert!(v.abs() < 1e-15, "row {k}: {v}");
    }
    let partial = qm_dist(&src, &quad.extended_ch_pairs()[..3]);
    assert!(averaged_rows_under_assumption_a(&partial, &quad).is_err());
}

#[test]
fn scan_finds_analytic_interval_and_maximizer() {
    let boundary = ((3f64.sqrt() - 1.0) / 2.0).acos();
    for eta in [1.0, 0.1, 1e-3] {
        let scan = scan_violation(&QmSource::parallel(1.0, eta).unwrap(), 256).unwrap();
        assert_eq!(scan.intervals.len(), 1);
        let (lo, hi) = scan.intervals[0];
        assert_eq!(lo, 0.0);
        assert!((hi - boundary).abs() < 1e-9, "{hi} vs {boundary}");
        let (phi, g) = scan.maximizer.unwrap();
        assert!((phi - FRAC_PI_4).abs() < 1e-6);
        assert!((g - eta * (2.0 * SQRT_2 - 2.0) / 4.0).abs() < 1e-12);
    }
}

#[test]
fn scan_without_visibility_has_no_violation() {
    let scan = scan_violation(&QmSource::parallel(0.0, 0.5).unwrap(), 128).unwrap();
    assert!(scan.intervals.is_empty());
    assert!(scan.maximizer.is_none());
    assert!(scan.points.iter().all(|p| !p.violated));
}

#[test]
fn scan_grid_is_validated() {
    assert!(scan_violation(&QmSource::parallel(1.0, 1.0).unwrap(), 63).is_err());
}

#[test]
fn anti_family_violates_above_the_boundary() {
    let boundary = ((3f64.sqrt() - 1.0) / 2.0).acos();
    let src = QmSource::new(CorrelationSign::Anti, 1.0, 1.0).unwrap();
    let scan = scan_violation(&src, 300).unwrap();
    assert_eq!(scan.intervals.len(), 1);
    assert!((scan.intervals[0].0 - boundary).abs() < 1e-9);
    assert_eq!(scan.intervals[0].1, 2.0 * FRAC_PI_3);
}

#[test]
fn deterministic_local_models_respect_extended_ch() {
    for model in [BuiltinModel::DetSign, BuiltinModel::DetSignLossy { efficiency: 0.3 }] {
        for i in 0..=40 {
            let quad = quad_from_phi(2.0 * FRAC_PI_3 * i as f64 / 40.0).unwrap();
            let dist: JointDistribution = quad
                .extended_ch_pairs()
                .iter()
                .map(|&p| (p, joint_table_quadrature(&model, p, 40_001).unwrap()))
                .collect();
            let g = g_statistic(&dist, &quad, P, P).unwrap().value;
            assert!((-1.0 - 1e-9..=1e-4).contains(&g), "{model:?} {i}: {g}");
        }
    }
}

#[test]
fn malus_model_is_a_local_counterexample() {
    // P_rq(x,y) = ¼[1 + ½·r·q·cos 2(x−y)] for the Malus model, so its G is
    // the quantum G at F = ½ and turns positive on the same φ range.
    let quad = quad_from_phi(FRAC_PI_4).unwrap();
    let dist: JointDistribution = quad
        .extended_ch_pairs()
        .iter()
        .map(|&p| {
            (
                p,
                joint_table_quadrature(&BuiltinModel::MalusStochastic, p, 2048).unwrap(),
            )
        })
        .collect();
    let g = g_statistic(&dist, &quad, P, P).unwrap().value;
    assert!((g - (2.0 * SQRT_2 - 2.0) / 8.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn rows_match_table_forms(s in proptest::array::uniform6(0.0f64..=1.0)) {
        let rows = enumerate_extremes(&Inefficiencies::from_slots(s)).unwrap();
        prop_assert!(max_discrepancy(&rows) <= 1e-12);
    }

    #[test]
    fn multilinear_g_has_no_interior_extremum(s in proptest::array::uniform6(0.0f64..=1.0)) {
        let vertices = (0..64u32).map(|m| g_from_slots(std::array::from_fn(|k| f64::from((m >> k) & 1))));
        let (lo, hi) = vertices.fold((f64::MAX, f64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)));
        let g = g_from_slots(s);
        prop_assert!(g <= hi + 1e-15 && g >= lo - 1e-15);
    }

    #[test]
    fn violation_sign_is_efficiency_independent(phi in 0.0f64..2.0 * FRAC_PI_3, f in 0.0f64..=1.0) {
        let signs: Vec<bool> = [1e-3, 1e-1, 1.0]
            .iter()
            .map(|&eta| g_closed_form(&QmSource::parallel(f, eta).unwrap(), phi, P, P) > 0.0)
            .collect();
        prop_assert!(signs.iter().all(|&s| s == signs[0]));
    }
}

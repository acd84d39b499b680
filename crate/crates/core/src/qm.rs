//! Quantum predictions for a polarization-entangled photon pair seen through
//! lossy detectors.

use serde::{Deserialize, Serialize};

use crate::angle::AnalyzerAngle;
use crate::error::{Error, Result};
use crate::types::{JointTable, Outcome, Sign};

/// Which correlated family the source belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorrelationSign {
    /// `(|HH⟩ + |VV⟩)/√2`: same-direction outcomes agree.
    Parallel,
    /// Sign-flipped cosine term: same-direction outcomes disagree.
    Anti,
}

impl CorrelationSign {
    pub fn value(self) -> f64 {
        match self {
            CorrelationSign::Parallel => 1.0,
            CorrelationSign::Anti => -1.0,
        }
    }

    pub fn from_value(v: i32) -> Option<Self> {
        match v {
            1 => Some(CorrelationSign::Parallel),
            -1 => Some(CorrelationSign::Anti),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QmSource {
    pub sign: CorrelationSign,
    /// Correlation visibility `F ∈ [0, 1]`.
    pub visibility: f64,
    /// Overall pair-detection efficiency `η ∈ (0, 1]`.
    pub efficiency: f64,
}

impl QmSource {
    pub fn new(sign: CorrelationSign, visibility: f64, efficiency: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&visibility) {
            return Err(Error::out_of_range("F", visibility, "[0, 1]"));
        }
        if !(efficiency > 0.0 && efficiency <= 1.0) {
            return Err(Error::out_of_range("eta", efficiency, "(0, 1]"));
        }
        Ok(QmSource {
            sign,
            visibility,
            efficiency,
        })
    }

    pub fn parallel(visibility: f64, efficiency: f64) -> Result<Self> {
        Self::new(CorrelationSign::Parallel, visibility, efficiency)
    }

    /// Per-wing detection efficiency `√η`.
    pub fn wing_efficiency(&self) -> f64 {
        self.efficiency.sqrt()
    }

    /// Correlation among double detections, `s·F·cos 2(a−b)`.
    pub fn detected_correlation(&self, a: AnalyzerAngle, b: AnalyzerAngle) -> f64 {
        self.sign.value() * self.visibility * a.cos2_diff(b)
    }

    /// Signed-outcome form of [`qm_joint_probability`].
    pub fn joint(&self, r: Sign, q: Sign, a: AnalyzerAngle, b: AnalyzerAngle) -> f64 {
        0.25 * self.efficiency * (1.0 + r.value() * q.value() * self.detected_correlation(a, b))
    }
}

/// `P_rq(a, b) = (η/4)[1 + s·r·q·F·cos 2(a−b)]` for detected outcomes.
pub fn qm_joint_probability(src: &QmSource, r: Outcome, q: Outcome, a: AnalyzerAngle, b: AnalyzerAngle) -> Result<f64> {
    Ok(src.joint(Sign::try_from(r)?, Sign::try_from(q)?, a, b))
}

/// Full 3×3 table: the detected block from [`qm_joint_probability`], completed
/// with independent per-wing loss of efficiency `√η` on each side.
pub fn qm_full_distribution(src: &QmSource, a: AnalyzerAngle, b: AnalyzerAngle) -> JointTable {
    let e = src.wing_efficiency();
    let single = 0.5 * e * (1.0 - e);
    let mut cells = [[0.0; 3]; 3];
    for r in Sign::BOTH {
        for q in Sign::BOTH {
            cells[Outcome::from(r).index()][Outcome::from(q).index()] = src.joint(r, q, a, b);
        }
        let i = Outcome::from(r).index();
        cells[i][2] = single;
        cells[2][i] = single;
    }
    cells[2][2] = (1.0 - e) * (1.0 - e);
    JointTable { cells }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn ang(v: f64) -> AnalyzerAngle {
        AnalyzerAngle::from_radians(v)
    }

    #[test]
    fn ideal_same_direction() {
        let src = QmSource::parallel(1.0, 1.0).unwrap();
        let p = |r, q| qm_joint_probability(&src, r, q, ang(0.3), ang(0.3)).unwrap();
        assert!((p(Outcome::Pass, Outcome::Pass) - 0.5).abs() < 1e-15);
        assert!(p(Outcome::Pass, Outcome::Block).abs() < 1e-15);
    }

    #[test]
    fn low_efficiency_at_quarter_turn() {
        let src = QmSource::parallel(1.0, 0.1).unwrap();
        let p = qm_joint_probability(&src, Outcome::Pass, Outcome::Pass, ang(FRAC_PI_4), ang(0.0)).unwrap();
        assert!((p - 0.025).abs() < 1e-15);
    }

    #[test]
    fn undetected_cells_rejected() {
        let src = QmSource::parallel(1.0, 1.0).unwrap();
        let err = qm_joint_probability(&src, Outcome::Undetected, Outcome::Pass, ang(0.0), ang(0.0));
        assert_eq!(err, Err(Error::UndetectedOutcome));
    }

    #[test]
    fn source_validation() {
        assert!(QmSource::parallel(1.1, 0.5).is_err());
        assert!(QmSource::parallel(1.0, 0.0).is_err());
        assert!(QmSource::parallel(0.0, 1.0).is_ok());
    }

    #[test]
    fn perfect_detection_has_no_loss_cells() {
        let t = qm_full_distribution(&QmSource::parallel(1.0, 1.0).unwrap(), ang(1.0), ang(1.0));
        for o in Outcome::ALL {
            assert_eq!(t.get(o, Outcome::Undetected), 0.0);
            assert_eq!(t.get(Outcome::Undetected, o), 0.0);
        }
    }

    #[test]
    fn lossy_completion_is_factorized() {
        let src = QmSource::parallel(1.0, 0.81).unwrap();
        let t = qm_full_distribution(&src, ang(0.0), ang(PI / 8.0));
        assert!((t.get(Outcome::Undetected, Outcome::Undetected) - 0.01).abs() < 1e-15);
        let t = qm_full_distribution(&src, ang(0.4), ang(0.4));
        assert!((t.wing1_marginal().zero - 0.1).abs() < 1e-15);
        assert!((t.detected_mass() - 0.81).abs() < 1e-15);
    }

    #[test]
    fn anti_family_flips_concordance() {
        let src = QmSource::new(CorrelationSign::Anti, 1.0, 1.0).unwrap();
        assert!(src.joint(Sign::Plus, Sign::Plus, ang(0.2), ang(0.2)).abs() < 1e-15);
        assert!((src.joint(Sign::Plus, Sign::Minus, ang(0.2), ang(0.2)) - 0.5).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn full_table_normalizes(
            f in 0.0f64..=1.0, eta in 1e-6f64..=1.0, a in -10.0f64..10.0, b in -10.0f64..10.0,
            anti in any::<bool>(),
        ) {
            let sign = if anti { CorrelationSign::Anti } else { CorrelationSign::Parallel };
            let src = QmSource::new(sign, f, eta).unwrap();
            let t = qm_full_distribution(&src, ang(a), ang(b));
            prop_assert!(t.is_normalized());
            // wing detection is √η whatever the settings
            prop_assert!((1.0 - t.wing1_marginal().zero - eta.sqrt()).abs() < 1e-12);
            prop_assert!((1.0 - t.wing2_marginal().zero - eta.sqrt()).abs() < 1e-12);
        }

        #[test]
        fn depends_only_on_difference(a in -10.0f64..10.0, b in -10.0f64..10.0, c in -10.0f64..10.0) {
            let src = QmSource::parallel(0.9, 0.7).unwrap();
            let base = src.joint(Sign::Plus, Sign::Minus, ang(a), ang(b));
            prop_assert!((base - src.joint(Sign::Plus, Sign::Minus, ang(a + PI), ang(b))).abs() < 1e-12);
            prop_assert!((base - src.joint(Sign::Plus, Sign::Minus, ang(a + c), ang(b + c))).abs() < 1e-12);
        }
    }
}

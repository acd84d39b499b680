use crate::error::{Error, Result};
use crate::types::{CountsTable, PairCounts, SettingPair, Sign};

/// Post-selected correlation `(N₊₊ + N₋₋ − N₊₋ − N₋₊)/(N₊₊ + N₋₋ + N₊₋ + N₋₊)`.
/// Events with a missing detection on either wing are ignored.
pub fn correlation_from_counts(counts: &CountsTable, pair: SettingPair) -> Result<f64> {
    pair_correlation(counts.get(pair)?)
}

pub fn pair_correlation(c: &PairCounts) -> Result<f64> {
    let n = |r, q| c.signed(r, q) as f64;
    let concordant = n(Sign::Plus, Sign::Plus) + n(Sign::Minus, Sign::Minus);
    let discordant = n(Sign::Plus, Sign::Minus) + n(Sign::Minus, Sign::Plus);
    let total = concordant + discordant;
    if total == 0.0 {
        return Err(Error::NoCoincidences {
            a: c.pair.a,
            b: c.pair.b,
        });
    }
    Ok((concordant - discordant) / total)
}

/// `|C(a,b) + C(a′,b) + C(a′,b′) − C(a,b′)|`.
pub fn chsh_statistic(c_ab: f64, c_apb: f64, c_apbp: f64, c_abp: f64) -> f64 {
    (c_ab + c_apb + c_apbp - c_abp).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::AnalyzerAngle;
    use crate::settings::quad_from_phi;
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    fn counts(pp: u64, pm: u64, mp: u64, mm: u64) -> CountsTable {
        let mut c = PairCounts::empty(SettingPair::new(AnalyzerAngle::ZERO, AnalyzerAngle::ZERO));
        c.cells[0][0] = pp;
        c.cells[0][1] = pm;
        c.cells[1][0] = mp;
        c.cells[1][1] = mm;
        c.cells[2][2] = 11;
        c.n_emitted = c.cell_sum();
        CountsTable::new(vec![c])
    }

    fn pair0() -> SettingPair {
        SettingPair::new(AnalyzerAngle::ZERO, AnalyzerAngle::ZERO)
    }

    #[test]
    fn all_concordant() {
        assert_eq!(correlation_from_counts(&counts(10, 0, 0, 10), pair0()).unwrap(), 1.0);
    }

    #[test]
    fn symmetric_counts_cancel() {
        assert_eq!(correlation_from_counts(&counts(5, 5, 5, 5), pair0()).unwrap(), 0.0);
    }

    #[test]
    fn no_coincidences_is_an_error() {
        let err = correlation_from_counts(&counts(0, 0, 0, 0), pair0()).unwrap_err();
        assert!(matches!(err, Error::NoCoincidences { .. }));
    }

    #[test]
    fn chsh_examples() {
        assert_eq!(chsh_statistic(1.0, 1.0, 1.0, -1.0), 4.0);
        assert_eq!(chsh_statistic(0.0, 0.0, 0.0, 0.0), 0.0);
        let q = quad_from_phi(FRAC_PI_4).unwrap();
        let c = |x: AnalyzerAngle, y: AnalyzerAngle| x.cos2_diff(y);
        let s = chsh_statistic(
            c(q.a, q.b),
            c(q.a_prime, q.b),
            c(q.a_prime, q.b_prime),
            c(q.a, q.b_prime),
        );
        assert!((s - 2.0 * SQRT_2).abs() < 1e-12);
    }
}

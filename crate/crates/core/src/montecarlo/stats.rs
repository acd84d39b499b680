//! Count-based statistics: recorded-event probabilities, the count ratio,
//! CHSH from coincidences and the direction-independence test.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::angle::AnalyzerAngle;
use crate::bounds::{g_statistic, GReport};
use crate::correlation::{chsh_statistic, pair_correlation};
use crate::error::{Error, Result};
use crate::settings::SettingsQuad;
use crate::types::{CountsTable, Estimate, JointDistribution, JointTable, PairCounts, Sign, ANGLE_TOL};

/// Standard errors a ratio must clear above 1 to count as a violation.
pub const RATIO_SIGMAS: f64 = 3.0;

/// Significance level of the direction-independence test.
pub const ASSUMPTION_A_SIGNIFICANCE: f64 = 0.01;

/// Divides every cell by its pair's emission count.
pub fn probabilities_from_counts(counts: &CountsTable) -> Result<JointDistribution> {
    counts
        .entries
        .iter()
        .map(|c| {
            if c.n_emitted == 0 {
                return Err(Error::ZeroEmissions {
                    a: c.pair.a,
                    b: c.pair.b,
                });
            }
            let n = c.n_emitted as f64;
            let mut cells = [[0.0; 3]; 3];
            for (row, src) in cells.iter_mut().zip(c.cells.iter()) {
                for (p, &k) in row.iter_mut().zip(src.iter()) {
                    *p = k as f64 / n;
                }
            }
            Ok((c.pair, JointTable { cells }))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub r: i8,
    pub q: i8,
    pub numerator: i64,
    pub denominator: u64,
    pub ratio: f64,
    pub stderr: f64,
    pub sigmas: f64,
    pub violated: bool,
}

fn binomial_var(k: u64, n: u64) -> f64 {
    let k = k as f64;
    k * (1.0 - k / n as f64)
}

fn six_counts<'a>(counts: &'a CountsTable, quad: &SettingsQuad) -> Result<[&'a PairCounts; 6]> {
    let out: Vec<&PairCounts> = quad
        .extended_ch_pairs()
        .iter()
        .map(|p| counts.get(*p))
        .collect::<Result<_>>()?;
    let out: [&PairCounts; 6] = out.try_into().expect("six pairs");
    let first = out[0].n_emitted;
    for c in &out {
        if c.n_emitted == 0 {
            return Err(Error::ZeroEmissions {
                a: c.pair.a,
                b: c.pair.b,
            });
        }
        if c.n_emitted != first {
            return Err(Error::UnequalEmissions {
                first,
                other: c.n_emitted,
            });
        }
    }
    Ok(out)
}

/// `[N_rq(a,b) − N_rq(a,b′) + N_rq(a′,b) + N_rq(a′,b′)] / [N_rr(a′,a′) + N_qq(b,b)]`
/// from raw recorded counts. Classical models keep it at or below 1.
pub fn ratio_statistic(counts: &CountsTable, quad: &SettingsQuad, r: Sign, q: Sign) -> Result<RatioReport> {
    let [ab, abp, apb, apbp, apap, bb] = six_counts(counts, quad)?;
    let n = ab.n_emitted;
    let plus = [ab.signed(r, q), apb.signed(r, q), apbp.signed(r, q)];
    let minus = abp.signed(r, q);
    let den = [apap.signed(r, r), bb.signed(q, q)];

    let numerator = plus.iter().sum::<u64>() as i64 - minus as i64;
    let denominator = den[0] + den[1];
    if denominator == 0 {
        return Err(Error::ZeroDenominator);
    }
    let (x, y) = (numerator as f64, denominator as f64);
    let var_x: f64 = plus
        .iter()
        .chain(std::iter::once(&minus))
        .map(|&k| binomial_var(k, n))
        .sum();
    let var_y: f64 = den.iter().map(|&k| binomial_var(k, n)).sum();
    let ratio = x / y;
    let stderr = (var_x / (y * y) + x * x * var_y / y.powi(4)).sqrt();
    Ok(RatioReport {
        r: r.value() as i8,
        q: q.value() as i8,
        numerator,
        denominator,
        ratio,
        stderr,
        sigmas: RATIO_SIGMAS,
        violated: ratio > 1.0 + RATIO_SIGMAS * stderr,
    })
}

/// `G_rq` evaluated on recorded-event probabilities, with its binomial standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountedG {
    #[serde(flatten)]
    pub report: GReport,
    pub stderr: f64,
}

impl CountedG {
    pub fn estimate(&self) -> Estimate {
        Estimate {
            value: self.report.value,
            stderr: self.stderr,
        }
    }
}

pub fn g_statistic_from_counts(counts: &CountsTable, quad: &SettingsQuad, r: Sign, q: Sign) -> Result<CountedG> {
    let six = six_counts(counts, quad)?;
    let dist = probabilities_from_counts(&CountsTable::new(six.iter().map(|c| **c).collect()))?;
    let report = g_statistic(&dist, quad, r, q)?;
    let var: f64 = report
        .components
        .iter()
        .zip(six.iter())
        .map(|(t, c)| t.probability * (1.0 - t.probability) / c.n_emitted as f64)
        .sum();
    Ok(CountedG {
        report,
        stderr: var.sqrt(),
    })
}

/// `|C(a,b) + C(a′,b) + C(a′,b′) − C(a,b′)|` from coincidences, with stderr
/// from `Var C ≈ (1 − C²)/n_coincidences` per pair.
pub fn chsh_from_counts(counts: &CountsTable, quad: &SettingsQuad) -> Result<Estimate> {
    let mut c = [0.0; 4];
    let mut var = 0.0;
    for (slot, pair) in c.iter_mut().zip(quad.chsh_pairs().iter()) {
        let pc = counts.get(*pair)?;
        *slot = pair_correlation(pc)?;
        var += (1.0 - *slot * *slot) / pc.coincidences() as f64;
    }
    Ok(Estimate {
        value: chsh_statistic(c[0], c[1], c[2], c[3]),
        stderr: var.sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectionCount {
    pub direction: AnalyzerAngle,
    pub detected: u64,
    pub emitted: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WingHomogeneity {
    pub wing: u8,
    pub cells: Vec<DirectionCount>,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionAReport {
    pub wings: Vec<WingHomogeneity>,
    /// Bonferroni combination of the two wing p-values.
    pub p_value: f64,
    pub significance: f64,
    pub pass: bool,
}

fn pool_directions(counts: &CountsTable, wing: u8) -> Vec<DirectionCount> {
    let mut cells: Vec<DirectionCount> = Vec::new();
    for c in &counts.entries {
        let direction = if wing == 1 { c.pair.a } else { c.pair.b };
        let detected = c.detected_on_wing(wing);
        match cells.iter_mut().find(|d| d.direction.approx_eq(direction, ANGLE_TOL)) {
            Some(d) => {
                d.detected += detected;
                d.emitted += c.n_emitted;
            }
            None => cells.push(DirectionCount {
                direction,
                detected,
                emitted: c.n_emitted,
            }),
        }
    }
    cells
}

/// Pearson chi-square on the k×2 (detected, missed) table.
fn homogeneity(wing: u8, cells: Vec<DirectionCount>) -> WingHomogeneity {
    let emitted: u64 = cells.iter().map(|d| d.emitted).sum();
    let detected: u64 = cells.iter().map(|d| d.detected).sum();
    let rate = if emitted == 0 {
        0.0
    } else {
        detected as f64 / emitted as f64
    };
    let mut statistic = 0.0;
    for d in &cells {
        let expected = [d.emitted as f64 * rate, d.emitted as f64 * (1.0 - rate)];
        let observed = [d.detected as f64, (d.emitted - d.detected) as f64];
        for (o, e) in observed.iter().zip(expected.iter()) {
            if *e > 0.0 {
                statistic += (o - e) * (o - e) / e;
            }
        }
    }
    let dof = cells.len() - 1;
    let p_value = ChiSquared::new(dof as f64).map(|d| d.sf(statistic)).unwrap_or(1.0);
    WingHomogeneity {
        wing,
        cells,
        statistic,
        dof,
        p_value,
    }
}

/// Checks, per wing, that the detected fraction does not depend on the
/// analyzer direction.
pub fn assumption_a_test(counts: &CountsTable) -> Result<AssumptionAReport> {
    let mut wings = Vec::with_capacity(2);
    for wing in [1u8, 2] {
        let cells = pool_directions(counts, wing);
        if cells.len() < 2 {
            return Err(Error::InsufficientDirections {
                wing,
                found: cells.len(),
            });
        }
        wings.push(homogeneity(wing, cells));
    }
    let min_p = wings.iter().map(|w| w.p_value).fold(1.0, f64::min);
    let p_value = (2.0 * min_p).min(1.0);
    Ok(AssumptionAReport {
        wings,
        p_value,
        significance: ASSUMPTION_A_SIGNIFICANCE,
        pass: p_value >= ASSUMPTION_A_SIGNIFICANCE,
    })
}

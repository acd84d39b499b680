//! The extended Clauser-Horne function `g_rq`, its three-setting cousin
//! `f_rq`, and their experimental counterparts `G_rq` and the f-statistic.
//!
//! `g_rq` is multilinear in six single-photon probabilities:
//!
//! ```text
//! g = p¹_r(a)[p²_q(b) − p²_q(b′)] + p¹_r(a′)[p²_q(b) + p²_q(b′)]
//!     − p¹_r(a′)p²_r(a′) − p¹_q(b)p²_q(b)
//! ```
//!
//! Averaged over `λ` under locality, each product becomes a joint probability
//! and `G_rq` follows.

mod scan;
mod table;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::qm::QmSource;
use crate::settings::{SettingsQuad, SettingsTriple};
use crate::types::{JointDistribution, ProbTriple, SettingPair, Sign};

pub use scan::{scan_violation, ScanPoint, ViolationScan, MIN_SCAN_GRID, ROOT_TOL};
pub use table::{
    enumerate_extremes, max_discrepancy, table_limit, ExtremeRow, Inefficiencies, Slot, TABLE_LIMIT_FORMS, TABLE_ROWS,
};

/// Default slack when flagging `−1 ≤ value ≤ 0` on exact probabilities.
pub const BOUND_TOL: f64 = 1e-12;

/// Single-photon probabilities at the six direction/wing slots of `g_rq`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinglesProfile {
    pub p1_a: ProbTriple,
    pub p1_ap: ProbTriple,
    pub p1_b: ProbTriple,
    pub p2_b: ProbTriple,
    pub p2_bp: ProbTriple,
    pub p2_ap: ProbTriple,
}

impl SinglesProfile {
    /// Slot values in column order `p¹_r(a), p²_q(b), p¹_r(a′), p²_q(b′), p²_r(a′), p¹_q(b)`.
    pub fn slots(&self, r: Sign, q: Sign) -> [f64; 6] {
        [
            self.p1_a.sign(r),
            self.p2_b.sign(q),
            self.p1_ap.sign(r),
            self.p2_bp.sign(q),
            self.p2_ap.sign(r),
            self.p1_b.sign(q),
        ]
    }
}

/// `g` on raw slot values (see [`SinglesProfile::slots`] for the order).
pub fn g_from_slots(s: [f64; 6]) -> f64 {
    let [p1a, p2b, p1ap, p2bp, p2ap, p1b] = s;
    p1a * (p2b - p2bp) + p1ap * (p2b + p2bp) - p1ap * p2ap - p1b * p2b
}

pub fn g_function(profile: &SinglesProfile, r: Sign, q: Sign) -> f64 {
    g_from_slots(profile.slots(r, q))
}

/// Slots of `f_rq`: `p¹_r(a), p¹_r(a′), p²_q(b), p²_r(a), p²_r(a′)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FSlots {
    pub p1_a: f64,
    pub p1_ap: f64,
    pub p2_b: f64,
    pub p2_a: f64,
    pub p2_ap: f64,
}

/// `f = −p¹_r(a)p²_q(b) + p¹_r(a′)[p²_q(b) + p²_r(a) − p²_r(a′)]`.
pub fn f_function(s: &FSlots) -> f64 {
    -s.p1_a * s.p2_b + s.p1_ap * (s.p2_b + s.p2_a - s.p2_ap)
}

/// One weighted joint probability inside a statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub coefficient: f64,
    pub probability: f64,
}

/// A bound-checked linear combination of joint probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GReport {
    pub value: f64,
    pub components: Vec<Term>,
    pub lower: f64,
    pub upper: f64,
    pub tol: f64,
    pub bound_violated: bool,
}

impl GReport {
    fn from_terms(components: Vec<Term>, tol: f64) -> Self {
        let value = components.iter().map(|t| t.coefficient * t.probability).sum();
        GReport {
            value,
            components,
            lower: -1.0,
            upper: 0.0,
            tol,
            bound_violated: value > tol || value < -1.0 - tol,
        }
    }
}

fn sign_label(s: Sign) -> char {
    match s {
        Sign::Plus => '+',
        Sign::Minus => '-',
    }
}

fn term(dist: &JointDistribution, name: &str, pair: SettingPair, r: Sign, q: Sign, coefficient: f64) -> Result<Term> {
    Ok(Term {
        label: format!("P{}{}{}", sign_label(r), sign_label(q), name),
        coefficient,
        probability: dist.get(pair)?.signed(r, q),
    })
}

/// `G_rq = P_rq(a,b) − P_rq(a,b′) + P_rq(a′,b) + P_rq(a′,b′) − P_rr(a′,a′) − P_qq(b,b)`.
pub fn g_statistic(dist: &JointDistribution, quad: &SettingsQuad, r: Sign, q: Sign) -> Result<GReport> {
    let [ab, abp, apb, apbp, apap, bb] = quad.extended_ch_pairs();
    let terms = vec![
        term(dist, "(a,b)", ab, r, q, 1.0)?,
        term(dist, "(a,b')", abp, r, q, -1.0)?,
        term(dist, "(a',b)", apb, r, q, 1.0)?,
        term(dist, "(a',b')", apbp, r, q, 1.0)?,
        term(dist, "(a',a')", apap, r, r, -1.0)?,
        term(dist, "(b,b)", bb, q, q, -1.0)?,
    ];
    Ok(GReport::from_terms(terms, BOUND_TOL))
}

/// `−P_rq(a,b) + P_rq(a′,b) + P_rr(a′,a) − P_rr(a′,a′)`.
pub fn f_statistic(dist: &JointDistribution, triple: &SettingsTriple, r: Sign, q: Sign) -> Result<GReport> {
    let [ab, apb, apa, apap] = triple.pairs();
    let terms = vec![
        term(dist, "(a,b)", ab, r, q, -1.0)?,
        term(dist, "(a',b)", apb, r, q, 1.0)?,
        term(dist, "(a',a)", apa, r, r, 1.0)?,
        term(dist, "(a',a')", apap, r, r, -1.0)?,
    ];
    Ok(GReport::from_terms(terms, BOUND_TOL))
}

/// Closed form of `G_rq` for a quantum source on [`quad_from_phi`](crate::quad_from_phi) settings:
/// `(η·F·s/4)·(r·q·(3cos φ − cos 3φ) − 2)`.
pub fn g_closed_form(src: &QmSource, phi: f64, r: Sign, q: Sign) -> f64 {
    let scale = 0.25 * src.efficiency * src.visibility * src.sign.value();
    scale * (r.value() * q.value() * (3.0 * phi.cos() - (3.0 * phi).cos()) - 2.0)
}

/// Closed form of the f-statistic for a quantum source on
/// [`triple_from_theta`](crate::triple_from_theta) settings:
/// `(η·F·s/4)·(r·q·(cos θ − cos 2θ) + cos θ − 1)`.
pub fn f_closed_form(src: &QmSource, theta: f64, r: Sign, q: Sign) -> f64 {
    let scale = 0.25 * src.efficiency * src.visibility * src.sign.value();
    scale * (r.value() * q.value() * (theta.cos() - (2.0 * theta).cos()) + theta.cos() - 1.0)
}

/// λ-averages of the extreme-point rows that can exceed zero pointwise, expressed
/// through double-detection masses `D(x, y) = Σ_{r,q=±1} P_rq(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AveragedRows {
    /// `D(a′,b′) − D(a′,a′)`
    pub row6: f64,
    /// `D(a,b) − D(b,b)`
    pub row11: f64,
    /// `row6 + D(a′,b) − D(b,b)`
    pub row12: f64,
    /// `row11 + D(a′,b) − D(a′,a′)`
    pub row15: f64,
    /// `row11 + D(a′,b′) − D(a,b′) + D(a′,b) − D(a′,a′)`
    pub row16: f64,
}

impl AveragedRows {
    pub fn as_array(&self) -> [(usize, f64); 5] {
        [
            (6, self.row6),
            (11, self.row11),
            (12, self.row12),
            (15, self.row15),
            (16, self.row16),
        ]
    }
}

/// Averages rows 6, 11, 12, 15 and 16 of the extreme-point table over `λ`.
/// All five vanish when the non-detection marginals do not depend on the
/// analyzer direction.
pub fn averaged_rows_under_assumption_a(dist: &JointDistribution, quad: &SettingsQuad) -> Result<AveragedRows> {
    let [ab, abp, apb, apbp, apap, bb] = quad.extended_ch_pairs();
    let d = |p: SettingPair| dist.get(p).map(|t| t.detected_mass());
    let (ab, abp, apb, apbp, apap, bb) = (d(ab)?, d(abp)?, d(apb)?, d(apbp)?, d(apap)?, d(bb)?);
    let row6 = apbp - apap;
    let row11 = ab - bb;
    Ok(AveragedRows {
        row6,
        row11,
        row12: row6 + apb - bb,
        row15: row11 + apb - apap,
        row16: row11 + apbp - abp + apb - apap,
    })
}

/// `(1 − P₀²(b))·(P₀¹(b) − P₀¹(a))`: row 11 averaged, for factorizable non-detection.
pub fn row11_closed_form(p0_1a: f64, p0_1b: f64, p0_2b: f64) -> f64 {
    (1.0 - p0_2b) * (p0_1b - p0_1a)
}

#[cfg(test)]
mod tests;

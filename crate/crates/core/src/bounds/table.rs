use serde::{Deserialize, Serialize};

use super::g_from_slots;
use crate::error::{Error, Result};

/// Detection masses `α = 1 − p₀` at the six slots of `g_rq`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inefficiencies {
    /// wing 1 along `a`
    pub alpha1: f64,
    /// wing 2 along `b`
    pub beta2: f64,
    /// wing 1 along `a′`
    pub alpha1p: f64,
    /// wing 2 along `b′`
    pub beta2p: f64,
    /// wing 2 along `a′`
    pub alpha2p: f64,
    /// wing 1 along `b`
    pub beta1: f64,
}

impl Inefficiencies {
    pub const IDEAL: Inefficiencies = Inefficiencies::uniform(1.0);

    pub const fn uniform(v: f64) -> Self {
        Inefficiencies {
            alpha1: v,
            beta2: v,
            alpha1p: v,
            beta2p: v,
            alpha2p: v,
            beta1: v,
        }
    }

    pub fn from_slots(s: [f64; 6]) -> Self {
        Inefficiencies {
            alpha1: s[0],
            beta2: s[1],
            alpha1p: s[2],
            beta2p: s[3],
            alpha2p: s[4],
            beta1: s[5],
        }
    }

    pub fn slots(&self) -> [f64; 6] {
        [
            self.alpha1,
            self.beta2,
            self.alpha1p,
            self.beta2p,
            self.alpha2p,
            self.beta1,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Slot {
    Alpha1,
    Beta2,
    Alpha1p,
    Beta2p,
    Alpha2p,
    Beta1,
}

impl Slot {
    pub const ALL: [Slot; 6] = [
        Slot::Alpha1,
        Slot::Beta2,
        Slot::Alpha1p,
        Slot::Beta2p,
        Slot::Alpha2p,
        Slot::Beta1,
    ];
}

/// Extreme assignments of the six slots (`true` = slot at its detection
/// mass, `false` = 0). Slots 3/5 (`a′` on both wings) and 2/6 (`b` on both
/// wings) move together: parallel polarizations forbid one photon of the pair
/// passing a direction its mate cannot.
#[rustfmt::skip]
pub const TABLE_ROWS: [[bool; 6]; 16] = {
    const O: bool = false;
    const I: bool = true;
    [
        [O, O, O, O, O, O],
        [I, O, O, O, O, O],
        [O, I, O, O, O, I],
        [O, O, I, O, I, O],
        [O, O, O, I, O, O],
        [O, O, I, I, I, O],
        [O, I, O, I, O, I],
        [I, O, O, I, O, O],
        [O, I, I, O, I, I],
        [I, O, I, O, I, O],
        [I, I, O, O, O, I],
        [O, I, I, I, I, I],
        [I, O, I, I, I, O],
        [I, I, O, I, O, I],
        [I, I, I, O, I, I],
        [I, I, I, I, I, I],
    ]
};

pub const TABLE_LIMIT_FORMS: [&str; 16] = [
    "0",
    "0",
    "-β2·β1",
    "-α1'·α2'",
    "0",
    "α1'·(β2'-α2')",
    "-β2·β1",
    "-α1·β2'",
    "α1'·(β2-α2')-β2·β1",
    "-α1'·α2'",
    "(α1-β1)·β2",
    "α1'·(β2'-α2')+(α1'-β1)·β2",
    "(α1'-α1)·β2'-α1'·α2'",
    "α1·(β2-β2')-β2·β1",
    "(α1-β1)·β2+α1'·(β2-α2')",
    "(α1-β1)·β2+(α1'-α1)·β2'+α1'·(β2-α2')",
];

/// Closed-form limit of `g_rq` on extreme row `row` (1-based).
pub fn table_limit(row: usize, i: &Inefficiencies) -> f64 {
    let Inefficiencies {
        alpha1: a1,
        beta2: b2,
        alpha1p: a1p,
        beta2p: b2p,
        alpha2p: a2p,
        beta1: b1,
    } = *i;
    match row {
        1 | 2 | 5 => 0.0,
        3 | 7 => -b2 * b1,
        4 | 10 => -a1p * a2p,
        6 => a1p * (b2p - a2p),
        8 => -a1 * b2p,
        9 => a1p * (b2 - a2p) - b2 * b1,
        11 => (a1 - b1) * b2,
        12 => a1p * (b2p - a2p) + (a1p - b1) * b2,
        13 => (a1p - a1) * b2p - a1p * a2p,
        14 => a1 * (b2 - b2p) - b2 * b1,
        15 => (a1 - b1) * b2 + a1p * (b2 - a2p),
        16 => (a1 - b1) * b2 + (a1p - a1) * b2p + a1p * (b2 - a2p),
        _ => panic!("extreme rows are numbered 1..=16, got {row}"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremeRow {
    pub index: usize,
    pub assignment: [Option<Slot>; 6],
    pub values: [f64; 6],
    /// `g` evaluated on `values`.
    pub g: f64,
    /// Table form evaluated at the same inefficiencies.
    pub limit: f64,
    pub symbolic: &'static str,
}

impl ExtremeRow {
    pub fn discrepancy(&self) -> f64 {
        (self.g - self.limit).abs()
    }

    /// The `a′` slots on both wings are both zero or both set, and likewise the `b` slots.
    pub fn is_coupled(&self) -> bool {
        let set = |k: usize| self.assignment[k].is_some();
        set(2) == set(4) && set(1) == set(5)
    }
}

/// Evaluates `g` on all sixteen extreme rows at the given inefficiencies,
/// alongside the closed-form limit of each row.
pub fn enumerate_extremes(ineff: &Inefficiencies) -> Result<Vec<ExtremeRow>> {
    for v in ineff.slots() {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::out_of_range("inefficiency", v, "[0, 1]"));
        }
    }
    let caps = ineff.slots();
    Ok(TABLE_ROWS
        .iter()
        .enumerate()
        .map(|(k, mask)| {
            let mut assignment = [None; 6];
            let mut values = [0.0; 6];
            for s in 0..6 {
                if mask[s] {
                    assignment[s] = Some(Slot::ALL[s]);
                    values[s] = caps[s];
                }
            }
            ExtremeRow {
                index: k + 1,
                assignment,
                values,
                g: g_from_slots(values),
                limit: table_limit(k + 1, ineff),
                symbolic: TABLE_LIMIT_FORMS[k],
            }
        })
        .collect())
}

pub fn max_discrepancy(rows: &[ExtremeRow]) -> f64 {
    rows.iter().map(ExtremeRow::discrepancy).fold(0.0, f64::max)
}

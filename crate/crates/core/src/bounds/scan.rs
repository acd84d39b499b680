use std::f64::consts::FRAC_PI_3;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::g_closed_form;
use crate::error::{Error, Result};
use crate::qm::QmSource;
use crate::types::Sign;

pub const MIN_SCAN_GRID: usize = 64;
/// Bracket width at which boundary and maximizer searches stop.
pub const ROOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub phi: f64,
    pub g: f64,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationScan {
    pub points: Vec<ScanPoint>,
    /// Maximal open intervals of `φ` where `G₊₊ > 0`, endpoints refined by bisection.
    pub intervals: Vec<(f64, f64)>,
    /// `(φ*, G(φ*))` for the largest `G₊₊` found, if any point violates.
    pub maximizer: Option<(f64, f64)>,
}

fn bisect<F: Fn(f64) -> bool>(inside: F, mut lo: f64, mut hi: f64) -> f64 {
    // inside(lo) != inside(hi)
    let lo_in = inside(lo);
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if inside(mid) == lo_in {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > ROOT_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Scans `G₊₊(φ)` on `grid` equally spaced points of `(0, 2π/3]` and locates
/// where it exceeds the local bound 0.
pub fn scan_violation(src: &QmSource, grid: usize) -> Result<ViolationScan> {
    if grid < MIN_SCAN_GRID {
        return Err(Error::out_of_range("grid", grid as f64, "[64, ∞)"));
    }
    let upper = 2.0 * FRAC_PI_3;
    let g = |phi: f64| g_closed_form(src, phi, Sign::Plus, Sign::Plus);
    let positive = |phi: f64| g(phi) > 0.0;
    let points: Vec<ScanPoint> = (1..=grid)
        .into_par_iter()
        .map(|i| {
            let phi = upper * i as f64 / grid as f64;
            let value = g(phi);
            ScanPoint {
                phi,
                g: value,
                violated: value > 0.0,
            }
        })
        .collect();

    let mut intervals = Vec::new();
    let mut open: Option<f64> = None;
    let mut prev_phi = 0.0;
    let mut prev_in = false;
    for p in &points {
        match (prev_in, p.violated) {
            (false, true) => {
                // G(0) = 0 is not a violation, so a run starting at the
                // first grid point opens at the domain edge.
                let start = if prev_phi == 0.0 {
                    0.0
                } else {
                    bisect(positive, prev_phi, p.phi)
                };
                open = Some(start);
            }
            (true, false) => {
                intervals.push((open.take().unwrap_or(0.0), bisect(positive, prev_phi, p.phi)));
            }
            _ => {}
        }
        prev_phi = p.phi;
        prev_in = p.violated;
    }
    if let Some(start) = open {
        intervals.push((start, upper));
    }

    let maximizer = points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.violated)
        .max_by(|(_, x), (_, y)| x.g.total_cmp(&y.g))
        .map(|(k, _)| {
            let lo = if k == 0 { 0.0 } else { points[k - 1].phi };
            let hi = points.get(k + 1).map_or(upper, |p| p.phi);
            let phi = golden_max(g, lo, hi);
            (phi, g(phi))
        });

    Ok(ViolationScan {
        points,
        intervals,
        maximizer,
    })
}

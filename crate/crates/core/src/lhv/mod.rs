//! Local hidden-variable models.
//!
//! A model assigns each photon, given the shared hidden variable `λ`, a
//! probability triple over `{+1, −1, 0}` that depends only on its own analyzer.
//! Joint expectations are products of single-wing expectations; locality is
//! not a property a model can opt out of.

mod models;

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::AnalyzerAngle;
use crate::error::{Error, Result};
use crate::rng::{CounterRng, Draws};
use crate::settings::SettingsQuad;
use crate::types::{Estimate, JointTable, Outcome, ProbTriple, SettingPair};

pub use models::{builtin_model, BuiltinModel, BUILTIN_NAMES};

/// Events per parallel work unit. Fixed so that results do not depend on the
/// number of workers.
pub(crate) const CHUNK: u64 = 1 << 14;

const STREAM_CORRELATION: u32 = 0x11;
const STREAM_BTCC: u32 = 0x12;
const STREAM_CHSH: u32 = 0x13;

/// Default tolerance on `|ε| = 1` used by [`btcc_check`].
pub const DEFAULT_BTCC_TOL: f64 = 1e-5;
/// Standard errors allowed between `|C(â,â)|` and 1 before the checker calls it imperfect.
pub const BTCC_SIGMAS: f64 = 3.0;
pub const DEFAULT_QUADRATURE_NODES: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Wing {
    First,
    Second,
}

impl Wing {
    pub const BOTH: [Wing; 2] = [Wing::First, Wing::Second];

    pub fn number(self) -> u8 {
        match self {
            Wing::First => 1,
            Wing::Second => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Stochastic,
    Deterministic,
}

/// Point in the hidden-variable space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HiddenVar {
    coords: [f64; HiddenVar::MAX_DIM],
    len: u8,
}

impl HiddenVar {
    pub const MAX_DIM: usize = 4;

    pub fn new(values: &[f64]) -> Self {
        assert!(
            values.len() <= Self::MAX_DIM,
            "hidden variable dimension {} exceeds {}",
            values.len(),
            Self::MAX_DIM
        );
        let mut coords = [0.0; Self::MAX_DIM];
        coords[..values.len()].copy_from_slice(values);
        HiddenVar {
            coords,
            len: values.len() as u8,
        }
    }

    pub fn scalar(value: f64) -> Self {
        Self::new(&[value])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords[..self.len as usize]
    }

    pub fn dimension(&self) -> usize {
        self.len as usize
    }
}

pub trait LhvModel: Send + Sync + fmt::Debug {
    fn name(&self) -> String;

    fn kind(&self) -> ModelKind;

    fn dimension(&self) -> usize {
        1
    }

    /// Draws `λ ~ ρ`. Must consume a fixed number of uniforms per call.
    fn sample_hidden(&self, draws: &mut Draws) -> HiddenVar;

    fn probabilities(&self, wing: Wing, direction: AnalyzerAngle, hidden: &HiddenVar) -> ProbTriple;

    /// Whether the detection mass is the same for every analyzer direction.
    fn respects_assumption_a(&self) -> bool;

    /// For one-dimensional models with `ρ` uniform on an interval, that interval.
    fn uniform_support(&self) -> Option<(f64, f64)> {
        None
    }
}

/// `ε⁽ᵏ⁾(u, λ) = p₊ − p₋`.
pub fn epsilon(model: &dyn LhvModel, wing: Wing, u: AnalyzerAngle, hidden: &HiddenVar) -> f64 {
    model.probabilities(wing, u, hidden).expectation()
}

/// `ε⁽¹²⁾(a, b, λ) = ε⁽¹⁾(a, λ)·ε⁽²⁾(b, λ)`.
pub fn joint_epsilon(model: &dyn LhvModel, a: AnalyzerAngle, b: AnalyzerAngle, hidden: &HiddenVar) -> f64 {
    epsilon(model, Wing::First, a, hidden) * epsilon(model, Wing::Second, b, hidden)
}

#[derive(Default, Clone, Copy)]
struct Moments {
    n: u64,
    sum: f64,
    sum_sq: f64,
    flagged: u64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(mut self, other: Moments) -> Moments {
        self.n += other.n;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.flagged += other.flagged;
        self
    }

    fn estimate(&self) -> Estimate {
        let n = self.n as f64;
        let mean = self.sum / n;
        let var = if self.n > 1 {
            ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        Estimate {
            value: mean,
            stderr: (var / n).sqrt(),
        }
    }
}

/// Runs `per_event` for `n` events, chunked in fixed blocks and merged in
/// chunk order.
fn sample_moments<F>(n: u64, rng: CounterRng, stream: u32, per_event: F) -> Moments
where
    F: Fn(&mut Draws, &mut Moments) + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let partial: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut m = Moments::default();
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                per_event(&mut rng.event(stream, i), &mut m);
            }
            m
        })
        .collect();
    partial.into_iter().fold(Moments::default(), Moments::merge)
}

/// Monte Carlo estimate of `C(a, b) = ∫ ε⁽¹²⁾(a, b, λ) ρ(λ) dλ`.
pub fn correlation(
    model: &dyn LhvModel,
    a: AnalyzerAngle,
    b: AnalyzerAngle,
    n_samples: u64,
    seed: u64,
) -> Result<Estimate> {
    const MIN: u64 = 1000;
    if n_samples < MIN {
        return Err(Error::TooFewSamples {
            got: n_samples,
            min: MIN,
        });
    }
    let m = sample_moments(n_samples, CounterRng::new(seed), STREAM_CORRELATION, |draws, m| {
        let hidden = model.sample_hidden(draws);
        m.push(joint_epsilon(model, a, b, &hidden));
    });
    Ok(m.estimate())
}

/// CHSH combination `C(a,b) + C(a′,b) + C(a′,b′) − C(a,b′)` estimated with
/// common `λ` draws, so the standard error accounts for the covariance
/// between the four terms.
pub fn chsh_estimate(model: &dyn LhvModel, quad: &SettingsQuad, n_samples: u64, seed: u64) -> Result<Estimate> {
    const MIN: u64 = 1000;
    if n_samples < MIN {
        return Err(Error::TooFewSamples {
            got: n_samples,
            min: MIN,
        });
    }
    let m = sample_moments(n_samples, CounterRng::new(seed), STREAM_CHSH, |draws, m| {
        let h = model.sample_hidden(draws);
        let e1 = |u| epsilon(model, Wing::First, u, &h);
        let e2 = |u| epsilon(model, Wing::Second, u, &h);
        let (b, bp) = (e2(quad.b), e2(quad.b_prime));
        m.push(e1(quad.a) * (b - bp) + e1(quad.a_prime) * (b + bp));
    });
    Ok(m.estimate())
}

/// Composite trapezoid rule on `[lo, hi]` with `nodes` equally spaced points.
pub fn trapezoid<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, nodes: usize) -> f64 {
    assert!(nodes >= 2);
    let h = (hi - lo) / (nodes - 1) as f64;
    let inner: f64 = (1..nodes - 1).map(|i| f(lo + h * i as f64)).sum();
    h * (inner + 0.5 * (f(lo) + f(hi)))
}

/// Deterministic quadrature of `C(a, b)` for one-dimensional models with a
/// uniform density. `None` when the model does not declare one.
pub fn correlation_quadrature(model: &dyn LhvModel, a: AnalyzerAngle, b: AnalyzerAngle, nodes: usize) -> Option<f64> {
    if model.dimension() != 1 {
        return None;
    }
    let (lo, hi) = model.uniform_support()?;
    let f = |x: f64| joint_epsilon(model, a, b, &HiddenVar::scalar(x));
    Some(trapezoid(f, lo, hi, nodes) / (hi - lo))
}

/// Joint outcome table `P_rq(x, y) = ∫ p¹_r(x, λ) p²_q(y, λ) ρ(λ) dλ` by
/// quadrature, for one-dimensional models with a uniform density.
pub fn joint_table_quadrature(model: &dyn LhvModel, pair: SettingPair, nodes: usize) -> Option<JointTable> {
    if model.dimension() != 1 {
        return None;
    }
    let (lo, hi) = model.uniform_support()?;
    let mut cells = [[0.0; 3]; 3];
    for r in Outcome::ALL {
        for q in Outcome::ALL {
            let f = |x: f64| {
                let h = HiddenVar::scalar(x);
                model.probabilities(Wing::First, pair.a, &h).get(r)
                    * model.probabilities(Wing::Second, pair.b, &h).get(q)
            };
            cells[r.index()][q.index()] = trapezoid(f, lo, hi, nodes) / (hi - lo);
        }
    }
    Some(JointTable { cells })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BtccVerdict {
    PerfectCorrelationAchieved,
    #[serde(rename = "PerfectCorrelationFailed_Stochastic")]
    PerfectCorrelationFailedStochastic,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BtccReport {
    pub model: String,
    pub direction: AnalyzerAngle,
    pub n_samples: u64,
    pub seed: u64,
    pub c_same: f64,
    pub c_same_stderr: f64,
    /// ρ-mass of `λ` where either wing has `|ε| < 1 − tol`.
    pub nondeterministic_mass: f64,
    pub tol: f64,
    pub sigmas: f64,
    pub verdict: BtccVerdict,
}

/// Checks whether `model` reaches perfect same-direction correlation along
/// `a`, and whether it does so with outcomes that are sharp (`|ε| = 1`) almost
/// everywhere.
pub fn btcc_check(model: &dyn LhvModel, a: AnalyzerAngle, n_samples: u64, tol: f64, seed: u64) -> Result<BtccReport> {
    const MIN: u64 = 10_000;
    if n_samples < MIN {
        return Err(Error::TooFewSamples {
            got: n_samples,
            min: MIN,
        });
    }
    if !(tol > 0.0 && tol <= 0.1) {
        return Err(Error::out_of_range("tol", tol, "(0, 0.1]"));
    }
    let m = sample_moments(n_samples, CounterRng::new(seed), STREAM_BTCC, |draws, m| {
        let h = model.sample_hidden(draws);
        let e1 = epsilon(model, Wing::First, a, &h);
        let e2 = epsilon(model, Wing::Second, a, &h);
        m.push(e1 * e2);
        if e1.abs() < 1.0 - tol || e2.abs() < 1.0 - tol {
            m.flagged += 1;
        }
    });
    let est = m.estimate();
    let mass = m.flagged as f64 / m.n as f64;
    let gap = 1.0 - est.value.abs();
    let threshold = (BTCC_SIGMAS * est.stderr).max(tol);
    let verdict = if gap <= threshold && mass <= tol {
        BtccVerdict::PerfectCorrelationAchieved
    } else if gap > threshold && mass > tol {
        BtccVerdict::PerfectCorrelationFailedStochastic
    } else {
        BtccVerdict::Inconclusive
    };
    Ok(BtccReport {
        model: model.name(),
        direction: a,
        n_samples,
        seed,
        c_same: est.value,
        c_same_stderr: est.stderr,
        nondeterministic_mass: mass,
        tol,
        sigmas: BTCC_SIGMAS,
        verdict,
    })
}

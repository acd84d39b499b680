//! Event-level simulation of photonic Bell runs.
//!
//! Each emitted pair is an independent event whose random draws are addressed
//! by `(seed, setting index, event index)`. Events are grouped into fixed-size
//! chunks for the worker pool, and chunk counts are merged by integer
//! addition, so a run is reproducible bit for bit whatever the worker count.

mod stats;

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::AnalyzerAngle;
use crate::error::{Error, Result};
use crate::lhv::{HiddenVar, LhvModel, Wing, CHUNK};
use crate::qm::{qm_full_distribution, QmSource};
use crate::rng::{CounterRng, Draws};
use crate::settings::SettingsQuad;
use crate::types::{CountsTable, Outcome, PairCounts, SettingPair};

pub use stats::{
    assumption_a_test, chsh_from_counts, g_statistic_from_counts, probabilities_from_counts, ratio_statistic,
    AssumptionAReport, CountedG, DirectionCount, RatioReport, WingHomogeneity, ASSUMPTION_A_SIGNIFICANCE, RATIO_SIGMAS,
};

const EXPERIMENT_TAG: u64 = 0x4d43;

#[derive(Clone)]
pub enum Source {
    Qm(QmSource),
    Lhv(Arc<dyn LhvModel>),
}

impl Source {
    pub fn lhv<M: LhvModel + 'static>(model: M) -> Self {
        Source::Lhv(Arc::new(model))
    }

    pub fn describe(&self) -> String {
        match self {
            Source::Qm(q) => format!("qm(sign={},F={},eta={})", q.sign.value(), q.visibility, q.efficiency),
            Source::Lhv(m) => m.name(),
        }
    }
}

impl fmt::Debug for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Detector efficiency of one wing, applied after the source's own outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Efficiency {
    Constant(f64),
    /// `base + amplitude·cos 2u` along analyzer direction `u`.
    Cosine {
        base: f64,
        amplitude: f64,
    },
}

impl Default for Efficiency {
    fn default() -> Self {
        Efficiency::Constant(1.0)
    }
}

impl Efficiency {
    #[inline]
    pub fn at(&self, u: AnalyzerAngle) -> f64 {
        match *self {
            Efficiency::Constant(e) => e,
            Efficiency::Cosine { base, amplitude } => base + amplitude * (2.0 * u.radians()).cos(),
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = match *self {
            Efficiency::Constant(e) => (e, e),
            Efficiency::Cosine { base, amplitude } => (base - amplitude.abs(), base + amplitude.abs()),
        };
        if lo >= 0.0 && hi <= 1.0 {
            Ok(())
        } else {
            Err(Error::out_of_range(
                "efficiency",
                if lo < 0.0 { lo } else { hi },
                "[0, 1]",
            ))
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub source: Source,
    pub setting_pairs: Vec<SettingPair>,
    pub pairs_per_setting: u64,
    /// Wing 1 and wing 2 detectors.
    pub efficiency: [Efficiency; 2],
    pub seed: u64,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    /// The six extended-CH setting pairs of `quad`, ideal detectors.
    pub fn for_quad(source: Source, quad: &SettingsQuad, pairs_per_setting: u64, seed: u64) -> Self {
        ExperimentConfig {
            source,
            setting_pairs: quad.extended_ch_pairs().to_vec(),
            pairs_per_setting,
            efficiency: [Efficiency::default(); 2],
            seed,
            workers: None,
        }
    }
}

#[inline]
fn apply_detector(outcome: Outcome, eff: f64, draws: &mut Draws) -> Outcome {
    if eff < 1.0 && outcome.is_detected() && draws.next_f64() >= eff {
        Outcome::Undetected
    } else {
        outcome
    }
}

/// Samples both wings for a fixed `λ`. Each wing's outcome depends only on
/// its own analyzer direction.
#[inline]
pub(crate) fn sample_lhv_wings(
    model: &dyn LhvModel,
    pair: SettingPair,
    hidden: &HiddenVar,
    draws: &mut Draws,
) -> (Outcome, Outcome) {
    let r = model
        .probabilities(Wing::First, pair.a, hidden)
        .sample(draws.next_f64());
    let q = model
        .probabilities(Wing::Second, pair.b, hidden)
        .sample(draws.next_f64());
    (r, q)
}

struct PairSampler<'a> {
    source: &'a Source,
    pair: SettingPair,
    /// Cumulative probabilities over the nine cells, row-major.
    qm_cdf: [f64; 9],
    eff: [f64; 2],
}

impl<'a> PairSampler<'a> {
    fn new(cfg: &'a ExperimentConfig, pair: SettingPair) -> Self {
        let mut qm_cdf = [0.0; 9];
        if let Source::Qm(src) = &cfg.source {
            let table = qm_full_distribution(src, pair.a, pair.b);
            let mut acc = 0.0;
            for (k, p) in table.cells.iter().flatten().enumerate() {
                acc += p;
                qm_cdf[k] = acc;
            }
            qm_cdf[8] = f64::INFINITY;
        }
        PairSampler {
            source: &cfg.source,
            pair,
            qm_cdf,
            eff: [cfg.efficiency[0].at(pair.a), cfg.efficiency[1].at(pair.b)],
        }
    }

    #[inline]
    fn sample(&self, draws: &mut Draws) -> (Outcome, Outcome) {
        let (r, q) = match self.source {
            Source::Qm(_) => {
                let u = draws.next_f64();
                let k = self.qm_cdf.iter().position(|&c| u < c).unwrap_or(8);
                (Outcome::ALL[k / 3], Outcome::ALL[k % 3])
            }
            Source::Lhv(model) => {
                let hidden = model.sample_hidden(draws);
                sample_lhv_wings(model.as_ref(), self.pair, &hidden, draws)
            }
        };
        (
            apply_detector(r, self.eff[0], draws),
            apply_detector(q, self.eff[1], draws),
        )
    }
}

/// Simulates `pairs_per_setting` emissions for every setting pair.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<CountsTable> {
    if cfg.pairs_per_setting == 0 {
        return Err(Error::TooFewSamples { got: 0, min: 1 });
    }
    for e in &cfg.efficiency {
        e.validate()?;
    }
    match cfg.workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .expect("failed to build worker pool");
            Ok(pool.install(|| simulate(cfg)))
        }
        None => Ok(simulate(cfg)),
    }
}

fn simulate(cfg: &ExperimentConfig) -> CountsTable {
    let rng = CounterRng::new(cfg.seed).split(EXPERIMENT_TAG);
    let n = cfg.pairs_per_setting;
    let chunks = n.div_ceil(CHUNK);
    let samplers: Vec<PairSampler> = cfg.setting_pairs.iter().map(|&p| PairSampler::new(cfg, p)).collect();

    let partial: Vec<(usize, [[u64; 3]; 3])> = (0..samplers.len())
        .flat_map(|j| (0..chunks).map(move |c| (j, c)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(j, c)| {
            let sampler = &samplers[j];
            let mut cells = [[0u64; 3]; 3];
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                let (r, q) = sampler.sample(&mut rng.event(j as u32, i));
                cells[r.index()][q.index()] += 1;
            }
            (j, cells)
        })
        .collect();

    let mut entries: Vec<PairCounts> = cfg.setting_pairs.iter().map(|&p| PairCounts::empty(p)).collect();
    for (j, cells) in partial {
        let e = &mut entries[j];
        for (row, add) in e.cells.iter_mut().zip(cells.iter()) {
            for (c, a) in row.iter_mut().zip(add.iter()) {
                *c += a;
            }
        }
    }
    for e in &mut entries {
        e.n_emitted = n;
    }
    CountsTable::new(entries)
}

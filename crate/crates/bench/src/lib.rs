//! Shared fixtures for the criterion benches in `benches/`.

use std::f64::consts::FRAC_PI_4;

use bellab_core::lhv::BuiltinModel;
use bellab_core::{quad_from_phi, CorrelationSign, ExperimentConfig, QmSource, Source};

/// Six-pair run on the φ = π/4 quad.
pub fn quad_config(source: Source, pairs_per_setting: u64) -> ExperimentConfig {
    let quad = quad_from_phi(FRAC_PI_4).expect("valid phi");
    ExperimentConfig::for_quad(source, &quad, pairs_per_setting, 1)
}

pub fn qm_source(eta: f64) -> Source {
    Source::Qm(QmSource::new(CorrelationSign::Parallel, 1.0, eta).expect("valid source"))
}

pub fn malus_lossy(eta: f64) -> Source {
    Source::lhv(BuiltinModel::MalusLossy { efficiency: eta })
}

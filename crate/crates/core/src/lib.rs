//! Numerical laboratory for Bell-type experiments with inefficient detectors.
//!
//! * [`qm`]: quantum predictions for polarization-entangled photon pairs.
//! * [`lhv`]: local hidden-variable models and the perfect-correlation check.
//! * [`bounds`]: the extended Clauser-Horne function, its extreme-point table,
//!   and violation scans.
//! * [`montecarlo`]: event-level simulation of photonic Bell runs and the
//!   count-based test statistics.

pub mod angle;
pub mod bounds;
pub mod correlation;
pub mod error;
pub mod lhv;
pub mod montecarlo;
pub mod qm;
pub mod rng;
pub mod settings;
pub mod types;

pub use angle::AnalyzerAngle;
pub use correlation::{chsh_statistic, correlation_from_counts};
pub use error::{Error, Result};
pub use lhv::{builtin_model, BuiltinModel, LhvModel};
pub use montecarlo::{
    assumption_a_test, probabilities_from_counts, ratio_statistic, run_experiment, AssumptionAReport, Efficiency,
    ExperimentConfig, RatioReport, Source,
};
pub use qm::{qm_full_distribution, qm_joint_probability, CorrelationSign, QmSource};
pub use settings::{quad_from_phi, triple_from_theta, SettingsQuad, SettingsTriple};
pub use types::{
    CountsTable, Estimate, JointDistribution, JointTable, Outcome, PairCounts, ProbTriple, SettingPair, Sign,
};

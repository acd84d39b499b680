use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{HiddenVar, LhvModel, ModelKind, Wing};
use crate::angle::AnalyzerAngle;
use crate::error::{Error, Result};
use crate::rng::Draws;
use crate::types::ProbTriple;

pub const BUILTIN_NAMES: &str =
    "det_sign, malus_stochastic, det_sign_lossy(eta), malus_lossy(eta), direction_biased_loss(base,amplitude)";

/// The built-in models. All use a single hidden polarization angle
/// `λ ~ Uniform[0, π)` and treat both wings identically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum BuiltinModel {
    /// `p₊ = 1` if `cos 2(u−λ) ≥ 0`, else `p₋ = 1`.
    DetSign,
    /// `p₊ = cos²(u−λ)`, `p₋ = sin²(u−λ)`.
    MalusStochastic,
    /// `DetSign` with constant detection mass.
    DetSignLossy { efficiency: f64 },
    /// `MalusStochastic` with constant detection mass.
    MalusLossy { efficiency: f64 },
    /// Malus response with detection mass `base + amplitude·cos 2u`.
    DirectionBiasedLoss { base: f64, amplitude: f64 },
}

impl BuiltinModel {
    fn sign_response(&self) -> bool {
        matches!(self, BuiltinModel::DetSign | BuiltinModel::DetSignLossy { .. })
    }

    fn pass_probability(&self, u: AnalyzerAngle, lambda: f64) -> f64 {
        if self.sign_response() {
            if (2.0 * (u.radians() - lambda)).cos() >= 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            (u.radians() - lambda).cos().powi(2)
        }
    }

    /// Detection mass along direction `u`.
    pub fn detection(&self, u: AnalyzerAngle) -> f64 {
        match *self {
            BuiltinModel::DetSign | BuiltinModel::MalusStochastic => 1.0,
            BuiltinModel::DetSignLossy { efficiency } | BuiltinModel::MalusLossy { efficiency } => efficiency,
            BuiltinModel::DirectionBiasedLoss { base, amplitude } => base + amplitude * (2.0 * u.radians()).cos(),
        }
    }

    fn validate(self) -> Result<Self> {
        match self {
            BuiltinModel::DetSignLossy { efficiency } | BuiltinModel::MalusLossy { efficiency } => {
                if !(0.0..=1.0).contains(&efficiency) {
                    return Err(Error::out_of_range("eta", efficiency, "[0, 1]"));
                }
            }
            BuiltinModel::DirectionBiasedLoss { base, amplitude }
                if !(base - amplitude.abs() >= 0.0 && base + amplitude.abs() <= 1.0) =>
            {
                return Err(Error::out_of_range("base ± |amplitude|", base, "[0, 1]"));
            }
            _ => {}
        }
        Ok(self)
    }
}

impl LhvModel for BuiltinModel {
    fn name(&self) -> String {
        match *self {
            BuiltinModel::DetSign => "det_sign".into(),
            BuiltinModel::MalusStochastic => "malus_stochastic".into(),
            BuiltinModel::DetSignLossy { efficiency } => format!("det_sign_lossy({efficiency})"),
            BuiltinModel::MalusLossy { efficiency } => format!("malus_lossy({efficiency})"),
            BuiltinModel::DirectionBiasedLoss { base, amplitude } => {
                format!("direction_biased_loss({base},{amplitude})")
            }
        }
    }

    fn kind(&self) -> ModelKind {
        match *self {
            BuiltinModel::DetSign => ModelKind::Deterministic,
            BuiltinModel::DetSignLossy { efficiency } if efficiency == 1.0 || efficiency == 0.0 => {
                ModelKind::Deterministic
            }
            _ => ModelKind::Stochastic,
        }
    }

    fn sample_hidden(&self, draws: &mut Draws) -> HiddenVar {
        HiddenVar::scalar(PI * draws.next_f64())
    }

    fn probabilities(&self, _wing: Wing, direction: AnalyzerAngle, hidden: &HiddenVar) -> ProbTriple {
        let pass = self.pass_probability(direction, hidden.as_slice()[0]);
        ProbTriple::with_detection(pass, self.detection(direction))
    }

    fn respects_assumption_a(&self) -> bool {
        !matches!(self, BuiltinModel::DirectionBiasedLoss { amplitude, .. } if *amplitude != 0.0)
    }

    fn uniform_support(&self) -> Option<(f64, f64)> {
        Some((0.0, PI))
    }
}

/// Parses `name` or `name(p1,p2,…)` into a built-in model.
pub fn builtin_model(spec: &str) -> Result<BuiltinModel> {
    let spec = spec.trim();
    let (name, args) = match spec.find('(') {
        Some(open) => {
            let close = spec
                .strip_suffix(')')
                .ok_or_else(|| Error::MalformedModel(spec.to_string()))?;
            let args = close[open + 1..]
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::MalformedModel(spec.to_string()))?;
            (spec[..open].trim(), args)
        }
        None => (spec, Vec::new()),
    };
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::MalformedModel(spec.to_string()))
        }
    };
    let model = match name {
        "det_sign" => arity(0).map(|_| BuiltinModel::DetSign),
        "malus_stochastic" => arity(0).map(|_| BuiltinModel::MalusStochastic),
        "det_sign_lossy" => arity(1).map(|_| BuiltinModel::DetSignLossy { efficiency: args[0] }),
        "malus_lossy" => arity(1).map(|_| BuiltinModel::MalusLossy { efficiency: args[0] }),
        "direction_biased_loss" => arity(2).map(|_| BuiltinModel::DirectionBiasedLoss {
            base: args[0],
            amplitude: args[1],
        }),
        _ => Err(Error::UnknownModel {
            name: name.to_string(),
            builtins: BUILTIN_NAMES,
        }),
    }?;
    model.validate()
}

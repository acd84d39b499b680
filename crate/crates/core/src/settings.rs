use std::f64::consts::{FRAC_PI_3, PI};

use serde::{Deserialize, Serialize};

use crate::angle::AnalyzerAngle;
use crate::error::{Error, Result};
use crate::types::SettingPair;

/// The four analyzer directions `(â, b̂, â′, b̂′)` of a CHSH/CH-type run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SettingsQuad {
    pub a: AnalyzerAngle,
    pub b: AnalyzerAngle,
    pub a_prime: AnalyzerAngle,
    pub b_prime: AnalyzerAngle,
}

impl SettingsQuad {
    pub fn new(a: AnalyzerAngle, b: AnalyzerAngle, a_prime: AnalyzerAngle, b_prime: AnalyzerAngle) -> Self {
        SettingsQuad { a, b, a_prime, b_prime }
    }

    /// The six pairs entering the extended CH combination, in the order
    /// `(a,b), (a,b′), (a′,b), (a′,b′), (a′,a′), (b,b)`.
    pub fn extended_ch_pairs(&self) -> [SettingPair; 6] {
        let p = SettingPair::new;
        [
            p(self.a, self.b),
            p(self.a, self.b_prime),
            p(self.a_prime, self.b),
            p(self.a_prime, self.b_prime),
            p(self.a_prime, self.a_prime),
            p(self.b, self.b),
        ]
    }

    /// The four CHSH pairs `(a,b), (a′,b), (a′,b′), (a,b′)`.
    pub fn chsh_pairs(&self) -> [SettingPair; 4] {
        let p = SettingPair::new;
        [
            p(self.a, self.b),
            p(self.a_prime, self.b),
            p(self.a_prime, self.b_prime),
            p(self.a, self.b_prime),
        ]
    }
}

/// Builds the symmetric quad with `|â−b̂| = |â′−b̂| = |â′−b̂′| = φ/2` and
/// `|â−b̂′| = 3φ/2`, using `(â, b̂, â′, b̂′) = (φ/2, 0, −φ/2, −φ)`.
pub fn quad_from_phi(phi: f64) -> Result<SettingsQuad> {
    if !(0.0..=2.0 * FRAC_PI_3).contains(&phi) {
        return Err(Error::out_of_range("phi", phi, "[0, 2π/3]"));
    }
    let r = AnalyzerAngle::from_radians;
    Ok(SettingsQuad::new(r(phi / 2.0), r(0.0), r(-phi / 2.0), r(-phi)))
}

/// The three directions of the f-type inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SettingsTriple {
    pub a: AnalyzerAngle,
    pub b: AnalyzerAngle,
    pub a_prime: AnalyzerAngle,
}

impl SettingsTriple {
    /// Pairs `(a,b), (a′,b), (a′,a), (a′,a′)`.
    pub fn pairs(&self) -> [SettingPair; 4] {
        let p = SettingPair::new;
        [
            p(self.a, self.b),
            p(self.a_prime, self.b),
            p(self.a_prime, self.a),
            p(self.a_prime, self.a_prime),
        ]
    }
}

/// Collinear layout `a = θ, a′ = θ/2, b = 0`, so `|a′−b| = |a−a′| = θ/2`, `|a−b| = θ`.
pub fn triple_from_theta(theta: f64) -> Result<SettingsTriple> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::out_of_range("theta", theta, "[0, π]"));
    }
    let r = AnalyzerAngle::from_radians;
    Ok(SettingsTriple {
        a: r(theta),
        b: r(0.0),
        a_prime: r(theta / 2.0),
    })
}

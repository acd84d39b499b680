use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

/// A linear-polarization direction.
///
/// Polarizers do not distinguish `θ` from `θ + π`, so the stored value is
/// canonicalized into `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(into = "f64", from = "f64")]
pub struct AnalyzerAngle(f64);

impl AnalyzerAngle {
    pub const ZERO: AnalyzerAngle = AnalyzerAngle(0.0);

    pub fn from_radians(value: f64) -> Self {
        let mut v = value.rem_euclid(PI);
        // rem_euclid can round up to exactly π for tiny negative inputs.
        if v >= PI {
            v = 0.0;
        }
        AnalyzerAngle(v)
    }

    pub fn from_degrees(value: f64) -> Self {
        Self::from_radians(value.to_radians())
    }

    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }

    /// Orientation difference `self − other`, reduced mod π into `[0, π)`.
    pub fn difference(self, other: AnalyzerAngle) -> f64 {
        AnalyzerAngle::from_radians(self.0 - other.0).0
    }

    /// Unsigned separation folded into `[0, π/2]`.
    pub fn separation(self, other: AnalyzerAngle) -> f64 {
        let d = self.difference(other);
        if d > FRAC_PI_2 {
            PI - d
        } else {
            d
        }
    }

    /// `cos 2(self − other)`, the only combination polarization correlations see.
    #[inline]
    pub fn cos2_diff(self, other: AnalyzerAngle) -> f64 {
        (2.0 * (self.0 - other.0)).cos()
    }

    /// Equality up to `tol` on the circle of directions.
    pub fn approx_eq(self, other: AnalyzerAngle, tol: f64) -> bool {
        self.separation(other) <= tol
    }
}

impl From<AnalyzerAngle> for f64 {
    fn from(angle: AnalyzerAngle) -> f64 {
        angle.0
    }
}

impl From<f64> for AnalyzerAngle {
    fn from(value: f64) -> Self {
        AnalyzerAngle::from_radians(value)
    }
}

impl fmt::Display for AnalyzerAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}rad", self.0)
    }
}

//! Value types parsed from flags and config entries.

use std::fmt;
use std::str::FromStr;

use bellab_core::lhv::BuiltinModel;
use bellab_core::montecarlo::Efficiency;
use bellab_core::{builtin_model, AnalyzerAngle, CorrelationSign, LhvModel};

/// An angle with a mandatory `deg` or `rad` suffix, e.g. `22.5deg`, `0.785rad`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleArg {
    pub radians: f64,
    text: String,
}

impl AngleArg {
    pub fn angle(&self) -> AnalyzerAngle {
        AnalyzerAngle::from_radians(self.radians)
    }
}

impl FromStr for AngleArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        let (num, to_rad) = if let Some(n) = t.strip_suffix("deg") {
            (n, std::f64::consts::PI / 180.0)
        } else if let Some(n) = t.strip_suffix("rad") {
            (n, 1.0)
        } else {
            return Err(format!("angle `{s}` needs a `deg` or `rad` suffix"));
        };
        let v: f64 = num
            .trim()
            .parse()
            .map_err(|_| format!("angle `{s}`: `{num}` is not a number"))?;
        if !v.is_finite() {
            return Err(format!("angle `{s}` is not finite"));
        }
        Ok(AngleArg {
            radians: v * to_rad,
            text: format!("{}{}", v, &t[t.len() - 3..]),
        })
    }
}

impl fmt::Display for AngleArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// A built-in model given by name, e.g. `det_sign_lossy(0.5)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelArg(pub BuiltinModel);

impl FromStr for ModelArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        builtin_model(s).map(ModelArg).map_err(|e| e.to_string())
    }
}

impl fmt::Display for ModelArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.name())
    }
}

/// `qm` or a built-in model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceArg {
    Qm,
    Model(BuiltinModel),
}

impl FromStr for SourceArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim() == "qm" {
            Ok(SourceArg::Qm)
        } else {
            s.parse::<ModelArg>().map(|m| SourceArg::Model(m.0))
        }
    }
}

impl fmt::Display for SourceArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceArg::Qm => f.write_str("qm"),
            SourceArg::Model(m) => f.write_str(&m.name()),
        }
    }
}

/// A constant efficiency `0.9`, or `cos(base,amplitude)` for `base + amplitude·cos 2u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyArg(pub Efficiency);

impl FromStr for EfficiencyArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || format!("efficiency `{s}`: expected a number or cos(base,amplitude)");
        if let Some(inner) = t.strip_prefix("cos(").and_then(|r| r.strip_suffix(')')) {
            let (b, a) = inner.split_once(',').ok_or_else(bad)?;
            let base = b.parse().map_err(|_| bad())?;
            let amplitude = a.parse().map_err(|_| bad())?;
            Ok(EfficiencyArg(Efficiency::Cosine { base, amplitude }))
        } else {
            t.parse()
                .map(|v| EfficiencyArg(Efficiency::Constant(v)))
                .map_err(|_| bad())
        }
    }
}

impl fmt::Display for EfficiencyArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Efficiency::Constant(v) => write!(f, "{v}"),
            Efficiency::Cosine { base, amplitude } => write!(f, "cos({base},{amplitude})"),
        }
    }
}

/// `parallel` (+1) or `anti` (−1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignArg(pub CorrelationSign);

impl FromStr for SignArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "parallel" | "+1" | "1" => Ok(SignArg(CorrelationSign::Parallel)),
            "anti" | "-1" => Ok(SignArg(CorrelationSign::Anti)),
            _ => Err(format!("sign `{s}`: expected parallel or anti")),
        }
    }
}

impl fmt::Display for SignArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            CorrelationSign::Parallel => "parallel",
            CorrelationSign::Anti => "anti",
        })
    }
}

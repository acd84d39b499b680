use thiserror::Error;

use crate::angle::AnalyzerAngle;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("non-detection cells have no closed-form joint probability; use the full distribution")]
    UndetectedOutcome,

    #[error("probabilities ({0}, {1}, {2}) do not form a normalized triple")]
    NotNormalized(f64, f64, f64),

    #[error("no coincidences recorded for setting pair ({a}, {b})")]
    NoCoincidences { a: AnalyzerAngle, b: AnalyzerAngle },

    #[error("setting pair ({a}, {b}) is missing")]
    MissingPair { a: AnalyzerAngle, b: AnalyzerAngle },

    #[error("setting pair ({a}, {b}) has no emitted pairs")]
    ZeroEmissions { a: AnalyzerAngle, b: AnalyzerAngle },

    #[error("emission counts differ across setting pairs ({first} vs {other}); N_tot would not cancel")]
    UnequalEmissions { first: u64, other: u64 },

    #[error("ratio denominator is zero")]
    ZeroDenominator,

    #[error("wing {wing} probes {found} distinct direction(s); at least 2 are required")]
    InsufficientDirections { wing: u8, found: usize },

    #[error("{got} samples requested, at least {min} required")]
    TooFewSamples { got: u64, min: u64 },

    #[error("unknown model `{name}`; built-ins are: {builtins}")]
    UnknownModel { name: String, builtins: &'static str },

    #[error("malformed model spec `{0}`")]
    MalformedModel(String),

    #[error("csv: {0}")]
    Csv(String),
}

impl Error {
    pub(crate) fn out_of_range(name: &'static str, value: f64, range: &'static str) -> Self {
        Error::OutOfRange { name, value, range }
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Csv(err.to_string())
    }
}

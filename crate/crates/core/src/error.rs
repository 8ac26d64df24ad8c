use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("asymmetry too strong to compensate: arcsine argument {ratio} outside [-1, 1]")]
    AsymmetryTooStrong { ratio: f64 },

    #[error("degenerate equilibria: two roots coincide near x = {at}")]
    DegenerateEquilibria { at: f64 },

    #[error("trajectory diverged at t = {time}")]
    Divergence { time: f64 },

    #[error("step size underflow at t = {time} (h = {step})")]
    StepUnderflow { time: f64, step: f64 },

    #[error("sweep diverged at parameter value {value}: {source}")]
    SweepDivergence {
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("series too short: {len} observations, need at least {min}")]
    SeriesTooShort { len: usize, min: usize },

    #[error("non-finite observation at index {index}")]
    NonFinite { index: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// Short machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Invalid(_) => "invalid",
            Error::AsymmetryTooStrong { .. } => "asymmetry-too-strong",
            Error::DegenerateEquilibria { .. } => "degenerate-equilibria",
            Error::Divergence { .. } => "divergence",
            Error::StepUnderflow { .. } => "step-underflow",
            Error::SweepDivergence { .. } => "sweep-divergence",
            Error::SeriesTooShort { .. } => "series-too-short",
            Error::NonFinite { .. } => "non-finite",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

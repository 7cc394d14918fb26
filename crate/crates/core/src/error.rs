use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("measure has no atom of positive weight")]
    EmptyMeasure,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("cube holds mass {available}, below the requested {requested}")]
    InsufficientMass { available: f64, requested: f64 },

    #[error("total mass {mass} is below 1/n = {required}")]
    InsufficientTotalMass { mass: f64, required: f64 },

    #[error("invalid radius {0}")]
    InvalidRadius(f64),

    #[error("format error: {0}")]
    Format(String),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("zeta series diverges for s = {0}")]
    DivergentSeries(f64),

    #[error("moment order q = {q} must exceed p = {p}")]
    InvalidOrder { p: f64, q: f64 },

    #[error("invalid order p = {0}, expected p >= 1")]
    InvalidExponent(f64),

    #[error("{count} points cannot be split into {classes} equal classes")]
    IndivisibleCount { count: usize, classes: usize },

    #[error("measures carry different masses ({0} vs {1})")]
    UnbalancedMasses(f64, f64),

    #[error("problem too large: {0}")]
    ProblemTooLarge(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than by a computation going wrong.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Format(_)
                | Error::InvalidSpec(_)
                | Error::Config(_)
                | Error::InvalidOrder { .. }
                | Error::InvalidExponent(_)
                | Error::InvalidRadius(_)
                | Error::IndivisibleCount { .. }
                | Error::DimensionMismatch { .. }
                | Error::InvalidMeasure(_)
                | Error::EmptyMeasure
                | Error::Io(_)
        )
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

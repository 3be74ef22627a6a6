use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An analytic function was evaluated at (or numerically on top of) one
    /// of its singularities or branch cuts.
    #[error("{func} is singular at {at}")]
    Singular { func: &'static str, at: Complex64 },

    /// A field evaluation hit a singular curve of the solution.
    #[error("singular point at (x = {x}, t = {t}): {reason}")]
    SingularPoint { x: f64, t: f64, reason: String },

    #[error("generator count mismatch: {left} vs {right}")]
    GeneratorMismatch { left: usize, right: usize },

    #[error("generator index {index} out of range for {n_gen} generators")]
    GeneratorIndex { index: usize, n_gen: usize },

    #[error("at most {max} generators are supported, got {got}")]
    TooManyGenerators { got: usize, max: usize },

    #[error("expected {expected} parity, found {found}")]
    Parity {
        expected: &'static str,
        found: &'static str,
    },

    /// A superderivative needed a second derivative in the same variable,
    /// which the jets do not carry.
    #[error("no {var}-derivative order left for a second {var}-differentiation")]
    OrderExhausted { var: char },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("no usable sample points: {accepted} accepted, {rejected} rejected as singular")]
    SamplingExhausted { accepted: usize, rejected: usize },
}

impl Error {
    /// True for errors that mark a point as singular rather than a misuse of
    /// the API.
    pub fn is_singular(&self) -> bool {
        matches!(self, Error::Singular { .. } | Error::SingularPoint { .. })
    }

    pub(crate) fn at_point(self, x: f64, t: f64) -> Error {
        match self {
            Error::Singular { func, at } => Error::SingularPoint {
                x,
                t,
                reason: format!("{func} singular at {at}"),
            },
            other => other,
        }
    }
}

use thiserror::Error;

/// Errors raised by evaluation, quadrature and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow evaluating I_{nu}({z}); use the exponentially scaled form")]
    Overflow { nu: f64, z: f64 },

    #[error("quadrature did not converge: estimate {value:e}, error {error:e} after {subdivisions} subdivisions")]
    Convergence {
        value: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("degenerate datum: P_t phi({z}) = {value:e} is too small to take logarithms")]
    DegenerateDatum { z: f64, value: f64 },

    #[error("frequency undefined: height H = {0:e}")]
    UndefinedFrequency(f64),

    #[error("unsupported homogeneity degree {0} (expected 0, 2 or 4)")]
    UnsupportedKappa(u32),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A failure inside one case of a verification suite.
    #[error("{case}: {source}")]
    InCase { case: String, source: Box<Error> },
}

impl Error {
    /// The underlying error with case context removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::InCase { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

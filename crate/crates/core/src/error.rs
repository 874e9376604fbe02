use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("eigenvalue {eigenvalue} outside the domain of the spectral function")]
    Domain { eigenvalue: f64 },

    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not unitary (defect {defect:e}) at p = {momentum:?}")]
    NotUnitary { defect: f64, momentum: [f64; 3] },

    #[error("normal product overflows position degree 2 at monomial {monomial}")]
    DegreeOverflow { monomial: String },

    #[error("unsupported operator form: {0}")]
    UnsupportedForm(String),

    #[error("invalid mass {0}: must be positive")]
    InvalidMass(f64),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

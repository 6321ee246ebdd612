use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical kernels and region constructors.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: relative deviation {deviation:.3e} exceeds {tolerance:.1e}")]
    NotHermitian { deviation: f64, tolerance: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{lambda} lies within {tolerance:.1e} of the spectrum (eigenvalue {eigenvalue})")]
    Pole {
        lambda: Complex64,
        eigenvalue: f64,
        tolerance: f64,
    },
    #[error("weight function is not positive at spectral point {point} (value {value})")]
    NonPositiveWeight { point: f64, value: f64 },
    #[error("0 lies in the spectrum of the {0} block; the inverse-abs weight is undefined")]
    ZeroInSpectrum(&'static str),
    #[error("certificates are only defined off the real axis (got {0})")]
    RealLambda(Complex64),
    #[error("vector is not a unit vector (norm {0})")]
    NotUnit(f64),
    #[error("eigenvalue iteration failed: {0}")]
    EigenFailure(String),
    #[error("distance to an empty region is undefined")]
    EmptyRegion,
    #[error("point {0} lies inside the region")]
    InsideRegion(Complex64),
    #[error("point {0} lies outside the target region")]
    OutsideRegion(Complex64),
    #[error("region is unbounded; a clip rectangle is required")]
    Unbounded,
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

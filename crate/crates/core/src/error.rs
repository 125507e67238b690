use thiserror::Error;

/// Crate-wide error type shared by all modules.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected d = {expected}, got d = {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("sphere dimension must be >= {min}, got {got}")]
    InvalidDimension { min: usize, got: usize },

    #[error("point norm {norm} deviates from 1 by more than 1e-6; input rejected as malformed")]
    BadNorm { norm: f64 },

    #[error("coordinates must be finite")]
    NonFiniteCoords,

    #[error("point set must be non-empty")]
    EmptyPointSet,

    #[error("measure must have at least one atom")]
    EmptyMeasure,

    #[error("atom weights sum to {sum}, not 1 (tolerance 1e-12)")]
    BadTotalMass { sum: f64 },

    #[error("parameter {name} = {value} outside valid range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("kernel exponent delta must be > 0, got {0}")]
    InvalidDelta(f64),

    #[error("inner-product power must be >= 1, got {0}")]
    InvalidPower(u32),

    #[error("kernel {kernel} is not supported by {operation}")]
    UnsupportedKernel {
        kernel: &'static str,
        operation: &'static str,
    },

    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error(
        "quadrature did not converge on [{a}, {b}]: residual {residual:.3e} after {subdivisions} subdivisions (tolerance {tol:.3e})"
    )]
    QuadratureNonConvergence {
        a: f64,
        b: f64,
        residual: f64,
        subdivisions: usize,
        tol: f64,
    },

    #[error(
        "expansion coefficients did not stabilize under order doubling: coefficient {n} moved by {delta:.3e} (threshold {threshold:.3e})"
    )]
    ExpansionNonConvergence { n: usize, delta: f64, threshold: f64 },

    #[error("kernel is not positive definite: coefficient a_{n} = {value:.6e} below -{tol:.1e}")]
    NotPositiveDefinite { n: usize, value: f64, tol: f64 },

    #[error("expansion machinery requires sphere dimension d >= 2 (lambda > 0), got d = {0}")]
    ExpansionDimensionTooSmall(usize),

    #[error("coefficient index {n} exceeds expansion order n_max = {n_max}")]
    CoefficientIndexOutOfRange { n: usize, n_max: usize },

    #[error("configuration size must be >= {min}, got {got}")]
    TooFewPoints { min: usize, got: usize },

    #[error("expected an odd number of points, got {0}")]
    EvenPointCount(usize),

    #[error("could not draw a direction with every |x . z_i| >= 1e-12 after {attempts} attempts")]
    DirectionResampleExhausted { attempts: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the geometry kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("the zero vector does not represent a projective element")]
    ZeroVector,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("quadric matrix is not symmetric")]
    NotSymmetric,

    #[error("singular matrix (relative determinant {0:e})")]
    Singular(f64),

    #[error("points are not collinear (residual {0:e})")]
    NotCollinear(f64),

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("the line lies on the quadric (a generator); the value is indeterminate")]
    Generator,

    #[error("a point lies on the absolute; the distance diverges")]
    OnAbsolute,

    #[error("point does not lie on the quadric (residual {0:e})")]
    NotOnQuadric(f64),

    #[error("coincident points")]
    Coincident,

    #[error("projection from the centre is degenerate")]
    ProjectionDegenerate,

    #[error("transformation of kind {kind} cannot act on {target}")]
    Inapplicable { kind: &'static str, target: &'static str },

    #[error("unknown {what} '{name}'")]
    Unknown { what: &'static str, name: String },

    #[error("group '{group}' does not support dimension {dimension}")]
    UnsupportedDimension { group: String, dimension: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("property undefined on {undefined} of {trials} samples; sampler does not match the property")]
    SamplerMismatch { undefined: usize, trials: usize },

    #[error("matrix does not preserve the quadratic form (residual {0:e})")]
    FormNotPreserved(f64),

    #[error("root finder did not converge (max residual {0:e})")]
    NoConvergence(f64),

    #[error("jacobian evaluation failed at {failed} of {samples} samples")]
    JacobianFailure { failed: usize, samples: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid value for '{field}': {message}")]
    Validation { field: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

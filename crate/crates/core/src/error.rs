use thiserror::Error;

/// Errors raised by the linear-algebra engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("field mismatch: {0}")]
    Field(String),

    #[error("space mismatch: {0}")]
    Space(String),

    #[error("singular basis: |det| = {det:e} <= threshold {threshold:e}")]
    SingularBasis { det: f64, threshold: f64 },

    #[error("variance mismatch: {0}")]
    Variance(String),

    #[error("linearly dependent set: vector {index} has residual norm {residual:e} after projection")]
    DependentSet { index: usize, residual: f64 },

    #[error("symmetry violated: {0}")]
    Symmetry(String),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal mass {off_diagonal:e})")]
    Convergence { sweeps: usize, off_diagonal: f64 },

    #[error("degenerate H-form: min |eigenvalue| = {min_abs:e} <= threshold {threshold:e}")]
    DegenerateForm { min_abs: f64, threshold: f64 },

    #[error("incompatible inner product and H-form: ||h h - 1||_F = {residual:e}")]
    Compatibility { residual: f64 },

    #[error("Gram matrix is not positive definite: min eigenvalue {min_eigenvalue:e} <= threshold {threshold:e}")]
    NotPositiveDefinite { min_eigenvalue: f64, threshold: f64 },
}

impl Error {
    /// Stable name of the error kind, used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Shape(_) => "ShapeError",
            Error::Field(_) => "FieldError",
            Error::Space(_) => "SpaceError",
            Error::SingularBasis { .. } => "SingularBasisError",
            Error::Variance(_) => "VarianceError",
            Error::DependentSet { .. } => "DependentSetError",
            Error::Symmetry(_) => "SymmetryError",
            Error::Convergence { .. } => "ConvergenceError",
            Error::DegenerateForm { .. } => "DegenerateFormError",
            Error::Compatibility { .. } => "CompatibilityError",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefiniteError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Shape(msg.into()))
}

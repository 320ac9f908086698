use thiserror::Error;

/// Errors raised by algebra, module, frame and file operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Two values live over different coefficient algebras.
    #[error("algebra mismatch: expected blocks {expected:?}, found {found:?}")]
    AlgebraMismatch {
        expected: Vec<usize>,
        found: Vec<usize>,
    },

    /// Matrix or tuple shapes are inconsistent.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Vectors or operators belong to different Hilbert modules.
    #[error("module mismatch: {0}")]
    ModuleMismatch(String),

    /// A vector is not fixed by the projection of its module.
    #[error("vector {index} lies outside the module: projection defect {defect:.3e}")]
    OutsideModule { index: usize, defect: f64 },

    /// Functional calculus was asked for on a non-Hermitian element.
    #[error("element is not Hermitian: max entry deviation {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    /// A square root was requested of an element with negative spectrum.
    #[error("element is not positive: eigenvalue {eigenvalue:.6e} in block {block}")]
    NotPositive { block: usize, eigenvalue: f64 },

    /// Inversion hit a numerically zero eigenvalue.
    #[error("singular element: eigenvalue {eigenvalue:.6e} in block {block} below threshold")]
    Singular { block: usize, eigenvalue: f64 },

    /// The lower frame bound vanished; the family does not frame its module.
    #[error("not a frame: optimal lower bound {lower_bound:.6e}")]
    NotAFrame { lower_bound: f64 },

    /// A frame has no elements.
    #[error("empty frame")]
    EmptyFrame,

    /// A construction hypothesis failed.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A document failed structural validation.
    #[error("invalid file at {path}: {reason}")]
    Validation { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors produced by algebra, module, operator, and complex operations.
#[derive(Error, Debug)]
pub enum Error {
    #[error("algebra shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: String, right: String },

    #[error("module space mismatch: {left} vs {right}")]
    SpaceMismatch { left: String, right: String },

    #[error("morphism dimension mismatch in {op}: {detail}")]
    MorphismMismatch { op: &'static str, detail: String },

    #[error("operator is not self-adjoint: residual {residual:e} exceeds tolerance {tol:e}")]
    NotSelfAdjoint { residual: f64, tol: f64 },

    #[error("not a projector: residual {residual:e} exceeds tolerance {tol:e} ({which})")]
    InvalidProjector {
        which: &'static str,
        residual: f64,
        tol: f64,
    },

    #[error("not a cochain complex: ||d_{degree_next} d_{degree}|| = {residual:e} exceeds tolerance {tol:e}")]
    NotAComplex {
        degree: usize,
        degree_next: usize,
        residual: f64,
        tol: f64,
    },

    #[error("degree {degree} out of range for complex of length {length}")]
    DegreeOutOfRange { degree: usize, length: usize },

    #[error("{what} residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualExceeded {
        what: String,
        residual: f64,
        tol: f64,
    },

    #[error("kernel multiplicity in block {block} at degree {degree} is not integral: {value}")]
    NonIntegralMultiplicity {
        degree: usize,
        block: usize,
        value: f64,
    },

    #[error("inconsistent plant: {0}")]
    InconsistentPlant(String),

    #[error("invalid simplicial complex: {0}")]
    InvalidSimplicialComplex(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 1 for mathematical invariant
    /// violations, 2 for I/O, parse, and usage failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Json(_) | Error::Io(_) | Error::InvalidInput(_) => 2,
            _ => 1,
        }
    }
}

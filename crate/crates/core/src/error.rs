use thiserror::Error;

/// Failures raised by the numerical layers and the decision procedures.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix has a non-finite entry")]
    NonFinite,
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("zero vector does not define a projective point")]
    ZeroVector,
    #[error("eigenvalues {first} and {second} of matrix {matrix} coincide projectively")]
    RepeatedEigenvalues { matrix: usize, first: usize, second: usize },
    #[error("matrix {matrix} is not diagonalizable (eigenvector residual {residual:e})")]
    NonDiagonalizable { matrix: usize, residual: f64 },
    #[error("eigenvalue computation did not converge for matrix {matrix}")]
    NoConvergence { matrix: usize },
    #[error("points do not form a projective frame: {0}")]
    DegenerateFrame(String),
    #[error("no antilinear involution respects the eigendirections: {0}")]
    NoConjugation(String),
    #[error("eigendirections admit a {free_dims}-parameter family of conjugations")]
    UnderdeterminedConjugation { free_dims: usize },
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),
    #[error("cross ratio is indeterminate (0/0)")]
    IndeterminateCrossRatio,
    #[error("triple ratio has a vanishing factor")]
    DegenerateTriple,
    #[error("flags are not in generic position: {0}")]
    GenericityViolation(String),
    #[error("eigenvalues of matrix {matrix} are not compatible with any real form")]
    IncompatibleEigenvalues { matrix: usize },
    #[error("base pair shares its eigendirections")]
    SharedEigendirections,
    #[error("method precondition failed: {0}")]
    Precondition(String),
    #[error("infeasible instance specification: {0}")]
    InfeasibleSpec(String),
}

impl Error {
    /// Attaches the generator index to per-matrix failures.
    pub fn at_matrix(self, index: usize) -> Self {
        match self {
            Error::RepeatedEigenvalues { first, second, .. } => {
                Error::RepeatedEigenvalues { matrix: index, first, second }
            }
            Error::NonDiagonalizable { residual, .. } => Error::NonDiagonalizable { matrix: index, residual },
            Error::NoConvergence { .. } => Error::NoConvergence { matrix: index },
            Error::IncompatibleEigenvalues { .. } => Error::IncompatibleEigenvalues { matrix: index },
            other => other,
        }
    }

    /// True for failures rooted in the spectra of the inputs.
    pub fn is_spectral(&self) -> bool {
        matches!(
            self,
            Error::RepeatedEigenvalues { .. }
                | Error::NonDiagonalizable { .. }
                | Error::NoConvergence { .. }
                | Error::IncompatibleEigenvalues { .. }
        )
    }

    /// True for failures of a flag or frame genericity requirement.
    pub fn is_genericity(&self) -> bool {
        matches!(
            self,
            Error::GenericityViolation(_)
                | Error::DegenerateFrame(_)
                | Error::SharedEigendirections
                | Error::IndeterminateCrossRatio
                | Error::DegenerateTriple
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

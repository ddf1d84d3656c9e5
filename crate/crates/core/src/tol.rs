use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every module.
///
/// All comparisons are relative to the natural scale of the quantity being
/// tested, so the defaults are meaningful for inputs of any magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Singularity of matrices (reciprocal condition number) and frames
    /// (Hadamard-normalised determinant of the points).
    pub deg_tol: f64,
    /// Eigenvector residual relative to the matrix norm.
    pub eig_tol: f64,
    /// Minimum projective separation `|λi/λj - 1|` of eigenvalues.
    pub sep_tol: f64,
    /// Angular resolution used when classifying spectra.
    pub angle_tol: f64,
    /// Relative singular value threshold for rank decisions.
    pub rank_tol: f64,
    /// Membership tests for cross and triple ratios.
    pub cr_tol: f64,
    /// Acceptance threshold for certificate residuals.
    pub cert_tol: f64,
}

pub const DEFAULT_DEG_TOL: f64 = 1e-10;
pub const DEFAULT_EIG_TOL: f64 = 1e-8;
pub const DEFAULT_SEP_TOL: f64 = 1e-6;
pub const DEFAULT_ANGLE_TOL: f64 = 1e-8;
pub const DEFAULT_RANK_TOL: f64 = 1e-8;
pub const DEFAULT_CR_TOL: f64 = 1e-7;
pub const DEFAULT_CERT_TOL: f64 = 1e-7;

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            deg_tol: DEFAULT_DEG_TOL,
            eig_tol: DEFAULT_EIG_TOL,
            sep_tol: DEFAULT_SEP_TOL,
            angle_tol: DEFAULT_ANGLE_TOL,
            rank_tol: DEFAULT_RANK_TOL,
            cr_tol: DEFAULT_CR_TOL,
            cert_tol: DEFAULT_CERT_TOL,
        }
    }
}

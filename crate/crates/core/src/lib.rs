//! Decide whether a finite collection of complex projective transformations
//! is simultaneously conjugate into PGL(k, R), and produce certificates.

pub mod coords;
pub mod decide;
pub mod error;
pub mod flags;
pub mod linalg;
pub mod oracle;
pub mod par;
pub mod projlin;
pub mod rform;
pub mod spectrum;
pub mod tol;

pub use error::{Error, Result};
pub use tol::Tolerances;

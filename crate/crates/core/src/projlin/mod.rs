//! Complex projective linear algebra: matrices, points, eigensystems and frames.

mod eigen;
mod frame;
mod matrix;
mod point;

pub use eigen::{eig, EigenSystem};
pub use frame::{frame_from_points, homography, ProjFrame};
pub use matrix::ComplexMatrix;
pub use point::{proj_eq, ProjPoint};

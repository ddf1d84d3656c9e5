use crate::error::{Error, Result};
use crate::linalg::{singular_values, CMat, C64};
use crate::tol::Tolerances;

/// A square, finite, invertible complex matrix representing an element of
/// PGL(k, C). Scalar multiples represent the same transformation.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    m: CMat,
}

fn reciprocal_condition(m: &CMat) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        _ => 0.0,
    }
}

impl ComplexMatrix {
    pub fn new(m: CMat, tol: &Tolerances) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if m.nrows() == 0 || reciprocal_condition(&m) <= tol.deg_tol {
            return Err(Error::Singular);
        }
        Ok(ComplexMatrix { m })
    }

    /// Builds from row-major rows.
    pub fn from_rows(rows: &[Vec<C64>], tol: &Tolerances) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare { rows: n, cols: bad.len() });
        }
        Self::new(CMat::from_fn(n, n, |i, j| rows[i][j]), tol)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim()).map(|i| self.m.row(i).iter().copied().collect()).collect()
    }

    /// Conjugates by `g`: returns `g * self * g^-1`.
    pub fn conjugated_by(&self, g: &CMat) -> Option<CMat> {
        let gi = g.clone().try_inverse()?;
        Some(g * &self.m * gi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn rejects_singular_and_non_square() {
        let tol = Tolerances::default();
        let sing = CMat::from_fn(2, 2, |_, _| c(1.0, 0.0));
        assert_eq!(ComplexMatrix::new(sing, &tol), Err(Error::Singular));
        let rect = CMat::zeros(2, 3);
        assert!(matches!(ComplexMatrix::new(rect, &tol), Err(Error::NotSquare { .. })));
        let nan = CMat::from_fn(2, 2, |i, j| if i == j { c(f64::NAN, 0.0) } else { c(0.0, 0.0) });
        assert_eq!(ComplexMatrix::new(nan, &tol), Err(Error::NonFinite));
    }

    #[test]
    fn accepts_tiny_but_regular_matrices() {
        let tol = Tolerances::default();
        let m = CMat::identity(3, 3) * c(1e-30, 0.0);
        assert!(ComplexMatrix::new(m, &tol).is_ok());
    }
}

use crate::error::{Error, Result};
use crate::linalg::{CVec, C64};

/// A point of CP^{k-1}, stored as its canonical representative: the
/// coordinate of largest modulus equals 1, with ties going to the lowest index.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjPoint {
    coords: CVec,
    pivot: usize,
}

const TIE_RTOL: f64 = 1e-12;

impl ProjPoint {
    pub fn new(v: CVec) -> Result<Self> {
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let top = v.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if top == 0.0 {
            return Err(Error::ZeroVector);
        }
        let pivot = v.iter().position(|z| z.norm() >= top * (1.0 - TIE_RTOL)).unwrap();
        let scale = v[pivot];
        let mut coords = v / scale;
        coords[pivot] = C64::new(1.0, 0.0);
        Ok(ProjPoint { coords, pivot })
    }

    pub fn from_slice(v: &[C64]) -> Result<Self> {
        Self::new(CVec::from_column_slice(v))
    }

    pub fn coords(&self) -> &CVec {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn pivot(&self) -> usize {
        self.pivot
    }

    pub fn conj(&self) -> ProjPoint {
        ProjPoint::new(self.coords.map(|z| z.conj())).expect("non-zero")
    }

    /// Affine coordinate `z` of `[z, 1]` in CP^1, `None` at infinity.
    pub fn affine(&self) -> Option<C64> {
        debug_assert_eq!(self.dim(), 2);
        if self.coords[1].norm() == 0.0 {
            None
        } else {
            Some(self.coords[0] / self.coords[1])
        }
    }

    /// Sine of the Fubini-Study angle to `other`, in `[0, 1]`.
    pub fn distance(&self, other: &ProjPoint) -> f64 {
        let a = &self.coords / C64::from(self.coords.norm());
        let b = &other.coords / C64::from(other.coords.norm());
        let proj = &b * b.dotc(&a);
        (a - proj).norm().min(1.0)
    }
}

/// Projective equality: `b` is rescaled at the pivot of `a`'s canonical
/// representative and the two are compared in the max norm.
pub fn proj_eq(a: &ProjPoint, b: &ProjPoint, tol: f64) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    let p = a.pivot;
    let s = b.coords[p];
    if s.norm() < 0.5 {
        return false;
    }
    a.coords.iter().zip(b.coords.iter()).all(|(x, y)| (x - y / s).norm() < tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, cvec};

    #[test]
    fn canonical_representative() {
        let p = ProjPoint::new(cvec(&[(2.0, 0.0), (0.0, 4.0)])).unwrap();
        assert_eq!(p.pivot(), 1);
        assert!((p.coords()[0] - c(0.0, -0.5)).norm() < 1e-15);
        let inf = ProjPoint::new(cvec(&[(5.0, 0.0), (0.0, 0.0)])).unwrap();
        assert_eq!(inf.coords()[0], c(1.0, 0.0));
        assert_eq!(inf.affine(), None);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let p = ProjPoint::new(cvec(&[(-1.0, 0.0), (1.0, 0.0)])).unwrap();
        assert_eq!(p.pivot(), 0);
        assert!((p.coords()[1] - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_vector_rejected() {
        assert_eq!(ProjPoint::new(cvec(&[(0.0, 0.0), (0.0, 0.0)])), Err(Error::ZeroVector));
    }

    #[test]
    fn equality_is_projective() {
        let a = ProjPoint::new(cvec(&[(1.0, 1.0), (2.0, 0.0), (0.0, 3.0)])).unwrap();
        let b = ProjPoint::new(cvec(&[(1.0, 1.0), (2.0, 0.0), (0.0, 3.0)]) * c(-0.3, 7.0)).unwrap();
        assert!(proj_eq(&a, &b, 1e-12));
        assert!(a.distance(&b) < 1e-15);
        let d = ProjPoint::new(cvec(&[(1.0, 1.0), (2.0, 0.0), (0.0, 3.1)])).unwrap();
        assert!(!proj_eq(&a, &d, 1e-12));
    }
}

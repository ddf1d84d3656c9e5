use super::ProjPoint;
use crate::error::{Error, Result};
use crate::linalg::{columns, hadamard_ratio, solve, CMat, CVec};
use crate::tol::Tolerances;

/// `k + 1` points in general position together with the basis
/// `b_j = λ_j v_j` whose sum represents the last point.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjFrame {
    pub points: Vec<ProjPoint>,
    pub basis: Vec<CVec>,
}

impl ProjFrame {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_matrix(&self) -> CMat {
        columns(&self.basis)
    }
}

pub fn frame_from_points(points: &[ProjPoint], tol: &Tolerances) -> Result<ProjFrame> {
    let k = points.first().map_or(0, |p| p.dim());
    if points.len() != k + 1 || k == 0 {
        return Err(Error::DegenerateFrame(format!("expected {} points, got {}", k + 1, points.len())));
    }
    if let Some(p) = points.iter().find(|p| p.dim() != k) {
        return Err(Error::DimensionMismatch { expected: k, found: p.dim() });
    }
    let vs: Vec<CVec> = points.iter().map(|p| p.coords().clone()).collect();
    for skip in 0..=k {
        let subset: Vec<CVec> = (0..=k).filter(|&j| j != skip).map(|j| vs[j].clone()).collect();
        if hadamard_ratio(&columns(&subset)) <= tol.deg_tol {
            return Err(Error::DegenerateFrame(format!("points other than #{skip} lie in a hyperplane")));
        }
    }
    let lambda = solve(&columns(&vs[..k]), &vs[k]).ok_or_else(|| Error::DegenerateFrame("singular basis".into()))?;
    let basis = (0..k).map(|j| &vs[j] * lambda[j]).collect();
    Ok(ProjFrame { points: points.to_vec(), basis })
}

/// The unique projective transformation sending `src` to `dst`, as the
/// matrix carrying one frame basis onto the other.
pub fn homography(src: &ProjFrame, dst: &ProjFrame) -> Result<CMat> {
    if src.dim() != dst.dim() {
        return Err(Error::DimensionMismatch { expected: src.dim(), found: dst.dim() });
    }
    let inv = src
        .basis_matrix()
        .try_inverse()
        .ok_or_else(|| Error::DegenerateFrame("singular source basis".into()))?;
    Ok(dst.basis_matrix() * inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cvec, rvec, C64};
    use crate::projlin::proj_eq;

    fn pt(v: &[(f64, f64)]) -> ProjPoint {
        ProjPoint::new(cvec(v)).unwrap()
    }

    fn same_up_to_common_scalar(a: &[CVec], b: &[CVec]) -> bool {
        let s: C64 = a[0].dotc(&b[0]) / a[0].norm_squared();
        a.iter().zip(b).all(|(x, y)| (x * s - y).norm() < 1e-10 * y.norm())
    }

    #[test]
    fn frame_from_hyperbolic_directions() {
        let f = frame_from_points(
            &[pt(&[(-1.0, 0.0), (1.0, 0.0)]), pt(&[(0.0, -1.0), (1.0, 0.0)]), pt(&[(1.0, 0.0), (1.0, 0.0)])],
            &Tolerances::default(),
        )
        .unwrap();
        let expected = vec![cvec(&[(0.0, 1.0), (0.0, -1.0)]), cvec(&[(1.0, -1.0), (1.0, 1.0)])];
        assert!(same_up_to_common_scalar(&f.basis, &expected));
    }

    #[test]
    fn frame_from_axis_points() {
        let f = frame_from_points(
            &[pt(&[(1.0, 0.0), (0.0, 0.0)]), pt(&[(0.0, 0.0), (1.0, 0.0)]), pt(&[(0.0, -1.0), (3.0, 0.0)])],
            &Tolerances::default(),
        )
        .unwrap();
        let expected = vec![cvec(&[(0.0, -1.0), (0.0, 0.0)]), cvec(&[(0.0, 0.0), (3.0, 0.0)])];
        assert!(same_up_to_common_scalar(&f.basis, &expected));
    }

    #[test]
    fn collinear_points_are_rejected() {
        let pts = [
            ProjPoint::new(rvec(&[1.0, 0.0, 0.0])).unwrap(),
            ProjPoint::new(rvec(&[0.0, 1.0, 0.0])).unwrap(),
            ProjPoint::new(rvec(&[1.0, 1.0, 0.0])).unwrap(),
            ProjPoint::new(rvec(&[1.0, 1.0, 1.0])).unwrap(),
        ];
        assert!(matches!(frame_from_points(&pts, &Tolerances::default()), Err(Error::DegenerateFrame(_))));
    }

    #[test]
    fn homography_maps_frame_to_frame() {
        let tol = Tolerances::default();
        let src = frame_from_points(
            &[pt(&[(1.0, 0.0), (0.0, 0.0)]), pt(&[(0.0, 0.0), (1.0, 0.0)]), pt(&[(1.0, 0.0), (1.0, 0.0)])],
            &tol,
        )
        .unwrap();
        let dst = frame_from_points(
            &[pt(&[(2.0, 1.0), (1.0, 0.0)]), pt(&[(0.0, 1.0), (3.0, 0.0)]), pt(&[(1.0, 0.0), (-1.0, 2.0)])],
            &tol,
        )
        .unwrap();
        let g = homography(&src, &dst).unwrap();
        for (p, q) in src.points.iter().zip(&dst.points) {
            let img = ProjPoint::new(&g * p.coords()).unwrap();
            assert!(proj_eq(&img, q, 1e-12));
        }
    }
}

//! Cross ratios in CP^1, triple ratios in CP^2, and the coordinate sets they
//! define on configurations of flags.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flags::{quotient_cp1, quotient_cp2, Flag, PointedLine};
use crate::linalg::{det2, dot, CVec, C64};
use crate::projlin::ProjPoint;
use crate::tol::Tolerances;

/// A value in `Ĉ = C ∪ {∞}`, stored homogeneously as `num / den` with
/// `|num|² + |den|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossRatio {
    pub num: C64,
    pub den: C64,
}

impl CrossRatio {
    pub fn new(num: C64, den: C64) -> Self {
        let n = (num.norm_sqr() + den.norm_sqr()).sqrt();
        CrossRatio { num: num / n, den: den / n }
    }

    pub fn finite(z: C64) -> Self {
        Self::new(z, C64::new(1.0, 0.0))
    }

    pub fn infinity() -> Self {
        CrossRatio { num: C64::new(1.0, 0.0), den: C64::new(0.0, 0.0) }
    }

    /// Finite value, or `None` at infinity.
    pub fn value(&self) -> Option<C64> {
        if self.den.norm() == 0.0 {
            None
        } else {
            Some(self.num / self.den)
        }
    }

    pub fn is_infinite(&self, tol: f64) -> bool {
        self.den.norm() <= tol
    }

    pub fn conj(&self) -> Self {
        CrossRatio { num: self.num.conj(), den: self.den.conj() }
    }

    pub fn recip(&self) -> Self {
        CrossRatio { num: self.den, den: self.num }
    }

    pub fn mul(&self, other: &CrossRatio) -> Self {
        Self::new(self.num * other.num, self.den * other.den)
    }

    /// Real or infinite: `|Im z| < tol (1 + |Re z|)`.
    pub fn is_real(&self, tol: f64) -> bool {
        match self.value() {
            None => true,
            Some(z) => z.im.abs() < tol * (1.0 + z.re.abs()),
        }
    }

    pub fn is_positive_real(&self, tol: f64) -> bool {
        matches!(self.value(), Some(z) if z.re > 0.0 && z.im.abs() < tol * (1.0 + z.re.abs()))
    }

    pub fn on_unit_circle(&self, tol: f64) -> bool {
        matches!(self.value(), Some(z) if (z.norm() - 1.0).abs() < tol)
    }

    /// Equality in `Ĉ`, measured by the chordal distance.
    pub fn approx_eq(&self, other: &CrossRatio, tol: f64) -> bool {
        chordal(self, other) < tol
    }
}

/// Chordal distance on the Riemann sphere, in `[0, 1]`.
pub fn chordal(a: &CrossRatio, b: &CrossRatio) -> f64 {
    (a.num * b.den - a.den * b.num).norm()
}

fn unit(p: &ProjPoint) -> CVec {
    let v = p.coords();
    v / C64::from(v.norm())
}

fn homogeneous(num: C64, den: C64, tol: &Tolerances) -> Result<CrossRatio> {
    if num.norm() <= tol.deg_tol && den.norm() <= tol.deg_tol {
        return Err(Error::IndeterminateCrossRatio);
    }
    Ok(CrossRatio::new(num, den))
}

/// `[A, B, C, D] = (A - D)(C - B) / ((A - B)(C - D))`, so that
/// `[∞, x, 0, 1] = x`.
pub fn cross_ratio(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint, d: &ProjPoint, tol: &Tolerances) -> Result<CrossRatio> {
    let (a, b, c, d) = (unit(a), unit(b), unit(c), unit(d));
    homogeneous(det2(&a, &d) * det2(&c, &b), det2(&a, &b) * det2(&c, &d), tol)
}

/// `[[A, B, C, D]] = (A - B)(C - D) / ((A - D)(B - C))`, so that
/// `[[∞, -1, 0, x]] = x`.
pub fn fg_cross_ratio(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint, d: &ProjPoint, tol: &Tolerances) -> Result<CrossRatio> {
    let (a, b, c, d) = (unit(a), unit(b), unit(c), unit(d));
    homogeneous(det2(&a, &b) * det2(&c, &d), det2(&a, &d) * det2(&b, &c), tol)
}

/// `r3 = f_a(v_b) f_b(v_c) f_c(v_a) / (f_a(v_c) f_b(v_a) f_c(v_b))` for three
/// pointed lines of CP^2.
pub fn triple_ratio(a: &PointedLine, b: &PointedLine, c: &PointedLine, tol: &Tolerances) -> Result<C64> {
    let ev = |f: &PointedLine, p: &PointedLine| dot(&f.form, &p.point) / C64::from(f.form.norm() * p.point.norm());
    let factors = [ev(a, b), ev(b, c), ev(c, a), ev(a, c), ev(b, a), ev(c, b)];
    if factors.iter().any(|z| z.norm() <= tol.deg_tol) {
        return Err(Error::DegenerateTriple);
    }
    Ok(factors[0] * factors[1] * factors[2] / (factors[3] * factors[4] * factors[5]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexedCrossRatio {
    /// Dimension of the `A` subspace in the quotient.
    pub i: usize,
    /// Dimension of the `C` subspace in the quotient.
    pub j: usize,
    pub value: CrossRatio,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexedTripleRatio {
    pub i: usize,
    pub j: usize,
    /// Dimension of the middle flag's subspace in the quotient.
    pub l: usize,
    pub value: C64,
}

/// The `k - 1` cross ratios `[A^{i,j}, B^{i,j}, C^{i,j}, D^{i,j}]` for
/// `i + j = k - 2`, ordered by `i`.
pub fn cross_ratio_set(a: &Flag, b1: &CVec, c: &Flag, d1: &CVec, tol: &Tolerances) -> Result<Vec<IndexedCrossRatio>> {
    let k = a.dim();
    (0..=k - 2)
        .map(|i| {
            let j = k - 2 - i;
            let [pa, pb, pc, pd] = quotient_cp1(a, b1, c, d1, i, j, tol)?;
            Ok(IndexedCrossRatio { i, j, value: cross_ratio(&pa, &pb, &pc, &pd, tol)? })
        })
        .collect()
}

/// The `(k - 1)(k - 2) / 2` triple ratios `r3(A^{ijl}, B^{ijl}, C^{ijl})`
/// for `i + j + l = k - 3`, ordered lexicographically by `(i, j)`.
pub fn triple_ratio_set(a: &Flag, b: &Flag, c: &Flag, tol: &Tolerances) -> Result<Vec<IndexedTripleRatio>> {
    let k = a.dim();
    if k < 3 {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity((k - 1) * (k - 2) / 2);
    for i in 0..=k - 3 {
        for j in 0..=k - 3 - i {
            let l = k - 3 - i - j;
            let [fa, fb, fc] = quotient_cp2(a, b, c, i, j, l, tol)?;
            out.push(IndexedTripleRatio { i, j, l, value: triple_ratio(&fa, &fb, &fc, tol)? });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, cvec, rvec, unit_vector};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn at(z: C64) -> ProjPoint {
        ProjPoint::new(CVec::from_vec(vec![z, c(1.0, 0.0)])).unwrap()
    }

    fn inf() -> ProjPoint {
        ProjPoint::new(rvec(&[1.0, 0.0])).unwrap()
    }

    #[test]
    fn cross_ratio_normalisation() {
        let v = cross_ratio(&inf(), &at(c(5.0, 0.0)), &at(c(0.0, 0.0)), &at(c(1.0, 0.0)), &tol()).unwrap();
        assert!((v.value().unwrap() - c(5.0, 0.0)).norm() < 1e-14);
        let w = cross_ratio(&inf(), &at(c(0.0, 1.0)), &at(c(0.0, 0.0)), &at(c(0.0, -1.0)), &tol()).unwrap();
        assert!((w.value().unwrap() - c(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn coincident_points() {
        let one = cross_ratio(&inf(), &at(c(1.0, 0.0)), &at(c(0.0, 0.0)), &at(c(1.0, 0.0)), &tol()).unwrap();
        assert!((one.value().unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        let infinite = cross_ratio(&inf(), &inf(), &at(c(0.0, 0.0)), &at(c(1.0, 0.0)), &tol()).unwrap();
        assert!(infinite.is_infinite(1e-14));
        assert!(infinite.is_real(1e-7));
        let e = cross_ratio(&inf(), &inf(), &at(c(0.0, 0.0)), &inf(), &tol());
        assert_eq!(e, Err(Error::IndeterminateCrossRatio));
    }

    #[test]
    fn fg_normalisation() {
        let x = c(0.3, -2.0);
        let v = fg_cross_ratio(&inf(), &at(c(-1.0, 0.0)), &at(c(0.0, 0.0)), &at(x), &tol()).unwrap();
        assert!((v.value().unwrap() - x).norm() < 1e-14);
    }

    #[test]
    fn conventions_are_related_by_negative_reciprocal() {
        let (a, b, cc, d) = (at(c(0.2, 1.0)), at(c(-3.0, 0.5)), at(c(1.0, -1.0)), at(c(2.0, 2.0)));
        let p = cross_ratio(&a, &b, &cc, &d, &tol()).unwrap().value().unwrap();
        let q = fg_cross_ratio(&a, &b, &cc, &d, &tol()).unwrap().value().unwrap();
        assert!((p * q + 1.0).norm() < 1e-12);
        let r = fg_cross_ratio(&a, &d, &cc, &b, &tol()).unwrap().value().unwrap();
        assert!((p + r).norm() < 1e-12);
    }

    fn standard(k: usize) -> Flag {
        Flag::new((0..k).map(|j| unit_vector(k, j)).collect(), &tol()).unwrap()
    }

    #[test]
    fn cross_ratios_of_standard_configuration() {
        let a = standard(4);
        let cf = a.reversed();
        let b = cvec(&[(2.0, 0.0), (0.0, 1.0), (3.0, 0.0), (-1.0, 1.0)]);
        let d = rvec(&[1.0; 4]);
        let set = cross_ratio_set(&a, &b, &cf, &d, &tol()).unwrap();
        assert_eq!(set.len(), 3);
        for (n, cr) in set.iter().enumerate() {
            assert_eq!((cr.i, cr.j), (n, 2 - n));
            assert!((cr.value.value().unwrap() - b[n] / b[n + 1]).norm() < 1e-13);
        }
    }

    fn closed_forms(b: [C64; 3], bp: [C64; 3]) -> (C64, C64) {
        let [b1, b2, b3] = b;
        let [p1, p2, p3] = bp;
        ((b1 * p2 * b3 - p1 * b2 * b3) / (b1 * b2 * p3 - b1 * p2 * b3), (p3 - p2) / (p2 - p1))
    }

    #[test]
    fn triple_ratios_match_closed_forms() {
        let a = Flag::new(vec![unit_vector(3, 0), unit_vector(3, 1)], &tol()).unwrap();
        let cf = Flag::new(vec![unit_vector(3, 2), unit_vector(3, 1)], &tol()).unwrap();
        let b = [c(2.0, 1.0), c(-1.0, 0.5), c(0.7, -3.0)];
        let bp = [c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)];
        let bf = Flag::new(vec![CVec::from_vec(b.to_vec()), CVec::from_vec(bp.to_vec())], &tol()).unwrap();
        let df = Flag::new(vec![rvec(&[1.0, 1.0, 1.0]), CVec::from_vec(bp.to_vec())], &tol()).unwrap();
        let abc = triple_ratio_set(&a, &bf, &cf, &tol()).unwrap();
        let acd = triple_ratio_set(&a, &cf, &df, &tol()).unwrap();
        let (x, y) = closed_forms(b, bp);
        assert!((abc[0].value - x).norm() < 1e-12);
        assert!((acd[0].value - y).norm() < 1e-12);
        assert!((acd[0].value - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn triple_ratio_set_sizes() {
        for k in 3..=6 {
            let a = standard(k);
            let cf = a.reversed();
            let b = Flag::new(
                (0..k)
                    .map(|j| CVec::from_fn(k, |i, _| C64::from_polar(1.0 + i as f64, 1.3 * i as f64 + 0.7 * j as f64 + 0.1 * (i * j * j) as f64)))
                    .collect(),
                &tol(),
            )
            .unwrap();
            assert_eq!(triple_ratio_set(&a, &b, &cf, &tol()).unwrap().len(), (k - 1) * (k - 2) / 2);
        }
    }
}

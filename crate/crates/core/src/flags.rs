//! Flags given by ordered spanning lists, genericity tests, and the quotients
//! used to read off cross and triple ratios.

use crate::error::{Error, Result};
use crate::linalg::{complement_basis, conditioning, cross3, CMat, CVec, C64};
use crate::projlin::ProjPoint;
use crate::tol::Tolerances;

/// The flag `span v_1 ⊂ span(v_1, v_2) ⊂ ...` of an ordered list of
/// independent vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    spanning: Vec<CVec>,
}

impl Flag {
    pub fn new(spanning: Vec<CVec>, tol: &Tolerances) -> Result<Self> {
        let k = spanning.first().map_or(0, |v| v.len());
        if spanning.is_empty() || spanning.len() > k {
            return Err(Error::GenericityViolation("a flag needs between 1 and k vectors".into()));
        }
        if let Some(v) = spanning.iter().find(|v| v.len() != k) {
            return Err(Error::DimensionMismatch { expected: k, found: v.len() });
        }
        if crate::linalg::rank(&spanning, tol.rank_tol) != spanning.len() {
            return Err(Error::GenericityViolation("flag vectors are dependent".into()));
        }
        let spanning = spanning.into_iter().map(|v| &v / C64::from(v.norm())).collect();
        Ok(Flag { spanning })
    }

    pub fn from_points(points: &[ProjPoint], tol: &Tolerances) -> Result<Self> {
        Self::new(points.iter().map(|p| p.coords().clone()).collect(), tol)
    }

    /// Ambient dimension `k`.
    pub fn dim(&self) -> usize {
        self.spanning[0].len()
    }

    /// Number of spanning vectors, the dimension of the largest subspace.
    pub fn len(&self) -> usize {
        self.spanning.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spanning.is_empty()
    }

    /// The `i`-th spanning vector, counting from 1.
    pub fn vector(&self, i: usize) -> &CVec {
        &self.spanning[i - 1]
    }

    /// Spanning vectors of the `i`-dimensional subspace.
    pub fn subspace(&self, i: usize) -> &[CVec] {
        &self.spanning[..i]
    }

    /// The paired flag: the same list in reverse order.
    pub fn reversed(&self) -> Flag {
        Flag { spanning: self.spanning.iter().rev().cloned().collect() }
    }
}

/// Flag of a spanning list `(v_1, v̄_1, v_2, v̄_2, ..., h_1, ..., h_n)` built
/// from elliptic pairs followed by hyperbolic directions.
pub fn build_elliptic_flag(pairs: &[(CVec, CVec)], hyperbolic: &[CVec], tol: &Tolerances) -> Result<Flag> {
    let mut list = Vec::with_capacity(2 * pairs.len() + hyperbolic.len());
    for (v, w) in pairs {
        list.push(v.clone());
        list.push(w.clone());
    }
    list.extend(hyperbolic.iter().cloned());
    Flag::new(list, tol)
}

fn compositions(total: usize, caps: &[usize], f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(total: usize, caps: &[usize], acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if acc.len() == caps.len() {
            return total != 0 || f(acc);
        }
        let rest: usize = caps[acc.len() + 1..].iter().sum();
        let cap = caps[acc.len()].min(total);
        for i in 0..=cap {
            if total - i > rest {
                continue;
            }
            acc.push(i);
            let ok = rec(total - i, caps, acc, f);
            acc.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    rec(total, caps, &mut Vec::new(), f)
}

fn full_rank(vs: &[CVec], tol: &Tolerances) -> bool {
    !vs.is_empty() && conditioning(vs) > tol.rank_tol
}

/// Whether every direct sum `F1_{i1} ⊕ F2_{i2} ⊕ ...` with `Σ i = k` has full rank.
pub fn generic_position(flags: &[&Flag], tol: &Tolerances) -> bool {
    let Some(k) = flags.first().map(|f| f.dim()) else {
        return true;
    };
    let caps: Vec<usize> = flags.iter().map(|f| f.len()).collect();
    compositions(k, &caps, &mut |parts| {
        let vs: Vec<CVec> = flags.iter().zip(parts).flat_map(|(f, &i)| f.subspace(i).iter().cloned()).collect();
        full_rank(&vs, tol)
    })
}

/// Genericity of `(A, span v, C, span d)`: every direct sum of `A_i`, `C_j`
/// and a subset of `{v, d}` of total dimension `k` has full rank. This covers
/// the non-degeneracy of every quotient used by the cross-ratio set of `v`.
pub fn generic_with_point(a: &Flag, v: &CVec, c: &Flag, d: &CVec, tol: &Tolerances) -> bool {
    let k = a.dim();
    let caps = [a.len(), c.len(), 1, 1];
    compositions(k, &caps, &mut |parts| {
        let mut vs: Vec<CVec> = a.subspace(parts[0]).to_vec();
        vs.extend(c.subspace(parts[1]).iter().cloned());
        if parts[2] == 1 {
            vs.push(v.clone());
        }
        if parts[3] == 1 {
            vs.push(d.clone());
        }
        full_rank(&vs, tol)
    })
}

fn quotient_map(span: &[CVec], k: usize, tol: &Tolerances) -> Result<CMat> {
    if !span.is_empty() && !full_rank_partial(span, tol) {
        return Err(Error::GenericityViolation("quotient subspace is degenerate".into()));
    }
    let comp = complement_basis(span, k, tol.rank_tol)
        .ok_or_else(|| Error::GenericityViolation("quotient subspace is degenerate".into()))?;
    Ok(crate::linalg::columns(&comp).adjoint())
}

fn full_rank_partial(vs: &[CVec], tol: &Tolerances) -> bool {
    crate::linalg::rank(vs, tol.rank_tol) == vs.len()
}

fn image(q: &CMat, v: &CVec, tol: &Tolerances) -> Result<CVec> {
    let w = q * v;
    if w.norm() <= tol.rank_tol * v.norm() {
        return Err(Error::GenericityViolation("a vector lies in the quotient subspace".into()));
    }
    Ok(w)
}

/// Images in `C^k / (A_i ⊕ C_j) ≅ CP^1` of `A_{i+1}`, `B_1`, `C_{j+1}` and
/// `D_1`, where `i + j = k - 2`.
pub fn quotient_cp1(a: &Flag, b1: &CVec, c: &Flag, d1: &CVec, i: usize, j: usize, tol: &Tolerances) -> Result<[ProjPoint; 4]> {
    let k = a.dim();
    if i + j + 2 != k || a.len() < i + 1 || c.len() < j + 1 {
        return Err(Error::DimensionMismatch { expected: k - 2, found: i + j });
    }
    let mut span = a.subspace(i).to_vec();
    span.extend(c.subspace(j).iter().cloned());
    let q = quotient_map(&span, k, tol)?;
    let pts = [
        image(&q, a.vector(i + 1), tol)?,
        image(&q, b1, tol)?,
        image(&q, c.vector(j + 1), tol)?,
        image(&q, d1, tol)?,
    ];
    let [p0, p1, p2, p3] = pts.map(|w| ProjPoint::new(w).expect("non-zero image"));
    Ok([p0, p1, p2, p3])
}

/// A point on a line in CP^2: the point `p` and the linear form `f` of the line.
#[derive(Debug, Clone, PartialEq)]
pub struct PointedLine {
    pub point: CVec,
    pub form: CVec,
}

/// Images in `C^k / (A_i ⊕ C_j ⊕ β_l) ≅ CP^2` of the pointed lines of the
/// three flags, where `i + j + l = k - 3`.
pub fn quotient_cp2(
    a: &Flag,
    beta: &Flag,
    c: &Flag,
    i: usize,
    j: usize,
    l: usize,
    tol: &Tolerances,
) -> Result<[PointedLine; 3]> {
    let k = a.dim();
    if i + j + l + 3 != k || a.len() < i + 2 || c.len() < j + 2 || beta.len() < l + 2 {
        return Err(Error::DimensionMismatch { expected: k - 3, found: i + j + l });
    }
    let mut span = a.subspace(i).to_vec();
    span.extend(c.subspace(j).iter().cloned());
    span.extend(beta.subspace(l).iter().cloned());
    let q = quotient_map(&span, k, tol)?;
    let pointed = |f: &Flag, n: usize| -> Result<PointedLine> {
        let p = image(&q, f.vector(n + 1), tol)?;
        let r = image(&q, f.vector(n + 2), tol)?;
        let form = cross3(&p, &r);
        if form.norm() <= tol.rank_tol * p.norm() * r.norm() {
            return Err(Error::GenericityViolation("flag collapses in the quotient".into()));
        }
        Ok(PointedLine { point: p, form })
    };
    Ok([pointed(a, i)?, pointed(beta, l)?, pointed(c, j)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rvec, unit_vector};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn standard(k: usize) -> Flag {
        Flag::new((0..k).map(|j| unit_vector(k, j)).collect(), &tol()).unwrap()
    }

    #[test]
    fn standard_pair_is_generic() {
        let a = standard(3);
        let c = a.reversed();
        assert!(generic_position(&[&a, &c], &tol()));
        assert!(!generic_position(&[&a, &a], &tol()));
    }

    #[test]
    fn point_in_sum_of_lines_is_not_generic() {
        let a = standard(3);
        let c = a.reversed();
        let d = rvec(&[1.0, 1.0, 1.0]);
        assert!(!generic_with_point(&a, &rvec(&[1.0, 1.0, -1.0]), &c, &d, &tol()));
        assert!(generic_with_point(&a, &rvec(&[1.0, 2.0, 1.0]), &c, &d, &tol()));
        assert!(!generic_with_point(&a, &rvec(&[1.0, 0.0, 1.0]), &c, &d, &tol()));
    }

    #[test]
    fn quotient_cp1_in_standard_normalisation() {
        let a = standard(4);
        let c = a.reversed();
        let b = rvec(&[2.0, 3.0, 5.0, 7.0]);
        let d = rvec(&[1.0, 1.0, 1.0, 1.0]);
        let [pa, pb, pc, pd] = quotient_cp1(&a, &b, &c, &d, 1, 1, &tol()).unwrap();
        assert!((pa.coords() - rvec(&[1.0, 0.0])).norm() < 1e-14);
        assert!((pc.coords() - rvec(&[0.0, 1.0])).norm() < 1e-14);
        assert!((pd.coords() - rvec(&[1.0, 1.0])).norm() < 1e-14);
        assert!((pb.coords() - rvec(&[3.0 / 5.0, 1.0])).norm() < 1e-14);
    }

    #[test]
    fn quotient_cp2_identity_when_nothing_is_removed() {
        let a = standard(3);
        let c = a.reversed();
        let beta = Flag::new(vec![rvec(&[1.0, 2.0, 3.0]), rvec(&[0.0, 1.0, 5.0])], &tol()).unwrap();
        let [fa, fb, fc] = quotient_cp2(&a, &beta, &c, 0, 0, 0, &tol()).unwrap();
        assert!((fa.point.clone() - unit_vector(3, 0)).norm() < 1e-14);
        assert!((fc.point.clone() - unit_vector(3, 2)).norm() < 1e-14);
        let expected = cross3(beta.vector(1), beta.vector(2));
        let scale = fb.form.dot(&expected) / expected.norm_squared();
        assert!((fb.form.clone() - &expected * scale).norm() < 1e-12);
    }

    #[test]
    fn quotient_cp2_drops_first_coordinate() {
        let a = standard(4);
        let c = a.reversed();
        let beta = Flag::new(vec![rvec(&[1.0, 2.0, 3.0, 4.0]), rvec(&[0.0, 1.0, 5.0, 1.0])], &tol()).unwrap();
        let [fa, fb, _] = quotient_cp2(&a, &beta, &c, 1, 0, 0, &tol()).unwrap();
        assert!((fa.point.clone() - unit_vector(3, 0)).norm() < 1e-14);
        assert!((fb.point.clone() - rvec(&[2.0, 3.0, 4.0]) / C64::from(30f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn elliptic_flag_order() {
        let v = crate::linalg::cvec(&[(1.0, 1.0), (0.0, 0.0), (1.0, 0.0)]);
        let w = crate::linalg::cvec(&[(1.0, -1.0), (0.0, 0.0), (1.0, 0.0)]);
        let h = rvec(&[0.0, 1.0, 0.0]);
        let f = build_elliptic_flag(&[(v.clone(), w)], std::slice::from_ref(&h), &tol()).unwrap();
        assert_eq!(f.len(), 3);
        assert!((f.vector(3) - h).norm() < 1e-14);
    }

    #[test]
    fn composition_count() {
        let mut n = 0;
        compositions(3, &[3, 3, 3, 3], &mut |_| {
            n += 1;
            true
        });
        assert_eq!(n, 20);
    }
}

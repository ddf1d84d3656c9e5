//! Small dense complex linear algebra on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CVec = DVector<C64>;
pub type CMat = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Complex vector from `(re, im)` pairs.
pub fn cvec(entries: &[(f64, f64)]) -> CVec {
    CVec::from_iterator(entries.len(), entries.iter().map(|&(r, i)| c(r, i)))
}

/// Complex vector from real entries.
pub fn rvec(entries: &[f64]) -> CVec {
    CVec::from_iterator(entries.len(), entries.iter().map(|&r| c(r, 0.0)))
}

/// Complex matrix from rows of `(re, im)` pairs.
pub fn cmat(rows: &[&[(f64, f64)]]) -> CMat {
    let n = rows.len();
    CMat::from_fn(n, rows[0].len(), |i, j| c(rows[i][j].0, rows[i][j].1))
}

/// Matrix whose columns are the given vectors.
pub fn columns(vs: &[CVec]) -> CMat {
    let k = vs.first().map_or(0, |v| v.len());
    CMat::from_fn(k, vs.len(), |i, j| vs[j][i])
}

pub fn max_abs(v: &[C64]) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Bilinear (not Hermitian) pairing.
pub fn dot(a: &CVec, b: &CVec) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

pub fn cross3(a: &CVec, b: &CVec) -> CVec {
    CVec::from_vec(vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

pub fn det2(p: &CVec, q: &CVec) -> C64 {
    p[0] * q[1] - p[1] * q[0]
}

pub fn conj_vec(v: &CVec) -> CVec {
    v.map(|z| z.conj())
}

pub fn conj_mat(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

/// Singular values in decreasing order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank of the span of `vs` after normalising each vector.
pub fn rank(vs: &[CVec], tol: f64) -> usize {
    let unit: Vec<CVec> = vs
        .iter()
        .filter(|v| v.norm() > 0.0)
        .map(|v| v / C64::from(v.norm()))
        .collect();
    if unit.is_empty() {
        return 0;
    }
    let s = singular_values(&columns(&unit));
    let top = s[0];
    s.iter().filter(|&&x| x > tol * top).count()
}

/// Smallest singular value divided by the largest, for unit-normalised columns.
pub fn conditioning(vs: &[CVec]) -> f64 {
    let unit: Vec<CVec> = vs.iter().map(|v| v / C64::from(v.norm().max(f64::MIN_POSITIVE))).collect();
    let s = singular_values(&columns(&unit));
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 && s.len() == vs[0].len() => lo / hi,
        _ => 0.0,
    }
}

/// Orthonormal basis of the null space of `a`, decided at relative threshold `tol`.
pub fn null_space(a: &CMat, tol: f64) -> Vec<CVec> {
    null_space_with_floor(a, tol, 0.0)
}

/// Like [`null_space`], but singular values are compared against
/// `tol * max(σ_max, floor)`, so a matrix that is zero up to rounding is
/// recognised as such.
pub fn null_space_with_floor(a: &CMat, tol: f64, floor: f64) -> Vec<CVec> {
    let n = a.ncols();
    if a.nrows() == 0 {
        return (0..n).map(|j| unit_vector(n, j)).collect();
    }
    let padded = if a.nrows() < n {
        let mut p = CMat::zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let top = svd.singular_values.iter().fold(floor, |m, &x| m.max(x));
    let mut out = Vec::new();
    for (idx, &s) in svd.singular_values.iter().enumerate() {
        if s <= tol * top || top == 0.0 {
            out.push(v_t.row(idx).transpose().map(|z| z.conj()));
        }
    }
    out
}

pub fn unit_vector(n: usize, j: usize) -> CVec {
    let mut v = CVec::zeros(n);
    v[j] = ONE;
    v
}

/// Modified Gram-Schmidt with one re-orthogonalisation pass. Vectors whose
/// residual falls below `tol` times their norm are dropped.
pub fn orthonormalize(vs: &[CVec], tol: f64) -> Vec<CVec> {
    let mut out: Vec<CVec> = Vec::new();
    for v in vs {
        let n0 = v.norm();
        if n0 == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let p = q.dotc(&w);
                w -= q * p;
            }
        }
        let n = w.norm();
        if n > tol * n0 {
            out.push(w / C64::from(n));
        }
    }
    out
}

/// Orthonormal basis of the Hermitian complement of `span`, built by pivoted
/// Gram-Schmidt over the coordinate vectors so that coordinate subspaces get
/// coordinate complements. Returns `None` when `span` is rank deficient.
pub fn complement_basis(span: &[CVec], k: usize, tol: f64) -> Option<Vec<CVec>> {
    let q = orthonormalize(span, tol);
    if q.len() != span.len() {
        return None;
    }
    let mut basis = q.clone();
    let mut out = Vec::with_capacity(k - q.len());
    let mut used = vec![false; k];
    while basis.len() < k {
        let mut best: Option<(usize, CVec, f64)> = None;
        for j in (0..k).filter(|&j| !used[j]) {
            let mut w = unit_vector(k, j);
            for _ in 0..2 {
                for b in &basis {
                    let p = b.dotc(&w);
                    w -= b * p;
                }
            }
            let n = w.norm();
            if best.as_ref().is_none_or(|(_, _, bn)| n > *bn + 1e-12) {
                best = Some((j, w, n));
            }
        }
        let (j, w, n) = best?;
        used[j] = true;
        let w = w / C64::from(n);
        basis.push(w.clone());
        out.push(w);
    }
    Some(out)
}

/// `|det| / prod ||col||`, a scale-free measure of invertibility in `[0, 1]`.
pub fn hadamard_ratio(m: &CMat) -> f64 {
    let mut denom = 1.0;
    for j in 0..m.ncols() {
        denom *= m.column(j).norm();
    }
    if denom == 0.0 {
        return 0.0;
    }
    m.clone().determinant().norm() / denom
}

pub fn solve(a: &CMat, b: &CVec) -> Option<CVec> {
    a.clone().lu().solve(b)
}

pub fn inverse(a: &CMat) -> Option<CMat> {
    a.clone().try_inverse()
}

/// Frobenius inner product `<a, b> = sum conj(a_ij) b_ij`.
pub fn frob_inner(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

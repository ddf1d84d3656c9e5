//! Antilinear involutions that respect prescribed eigendirections, and the
//! real forms they fix.
//!
//! An involution `σ(v) = S v̄` with `S S̄ = I` fixes a real form of `C^k`.
//! It respects a collection of eigendirections when it fixes every
//! hyperbolic direction and swaps every elliptic pair. The linear maps
//! having every direction as an eigenvector form a commutative algebra
//! `C^m`, one factor per block of the finest direct-sum decomposition that
//! contains every direction. Respecting involutions are found block by block;
//! there is exactly one up to phase when `m = 1` and a continuum otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{columns, conj_mat, conj_vec, null_space_with_floor, orthonormalize, complement_basis, CMat, CVec, C64, ONE, ZERO};
use crate::projlin::{ComplexMatrix, EigenSystem, ProjPoint};
use crate::spectrum::AdmissibleLine;
use crate::tol::Tolerances;

/// Eigendirections of one or more generators. `images[i]` is the index the
/// conjugation must send direction `i` to: itself for hyperbolic directions,
/// the partner for elliptic ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EigenData {
    pub directions: Vec<ProjPoint>,
    pub images: Vec<usize>,
}

impl EigenData {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.directions.first().map_or(0, |p| p.dim())
    }

    pub fn is_hyperbolic(&self, i: usize) -> bool {
        self.images[i] == i
    }

    pub fn push_hyperbolic(&mut self, p: ProjPoint) -> usize {
        let i = self.directions.len();
        self.directions.push(p);
        self.images.push(i);
        i
    }

    pub fn push_pair(&mut self, p: ProjPoint, q: ProjPoint) -> (usize, usize) {
        let i = self.directions.len();
        self.directions.push(p);
        self.directions.push(q);
        self.images.push(i + 1);
        self.images.push(i);
        (i, i + 1)
    }

    /// Adds every eigendirection of `es`, labelled by `line`.
    pub fn push_system(&mut self, es: &EigenSystem, line: &AdmissibleLine) {
        let base = self.directions.len();
        for (i, (p, label)) in es.vectors.iter().zip(&line.labels).enumerate() {
            self.directions.push(p.clone());
            self.images.push(base + label.image(i));
        }
    }
}

/// An antilinear involution `v ↦ S v̄`, normalised so that `S S̄ = I` and the
/// largest entry of `S` is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Conjugation {
    s: CMat,
}

impl Conjugation {
    /// Complex conjugation of coordinates.
    pub fn standard(k: usize) -> Self {
        Conjugation { s: CMat::identity(k, k) }
    }

    /// Normalises `s`; fails unless `S S̄` is a positive multiple of the identity.
    pub fn from_matrix(s: CMat, tol: f64) -> Result<Self> {
        let k = s.nrows();
        let ss = &s * conj_mat(&s);
        let kappa = ss.trace() / C64::from(k as f64);
        let off = (&ss - CMat::identity(k, k) * kappa).norm();
        if off > tol * ss.norm() || kappa.re <= 0.0 || kappa.im.abs() > tol * kappa.norm() {
            return Err(Error::NoConjugation("S·conj(S) is not a positive multiple of I".into()));
        }
        let mut s = s / C64::from(kappa.re.sqrt());
        let big = s.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or(ONE);
        s *= C64::from_polar(1.0, -big.arg());
        Ok(Conjugation { s })
    }

    pub fn matrix(&self) -> &CMat {
        &self.s
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        &self.s * conj_vec(v)
    }

    pub fn apply_point(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(self.apply(p.coords())).expect("involution is invertible")
    }

    /// Conjugation in the coordinates `w = g^-1 v`.
    pub fn in_coordinates(&self, g: &CMat) -> Option<Conjugation> {
        let gi = g.clone().try_inverse()?;
        Some(Conjugation { s: gi * &self.s * conj_mat(g) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Multiplicity {
    Zero,
    One,
    Infinite,
}

/// Outcome of the search for respecting involutions.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugationSearch {
    pub witness: Option<Conjugation>,
    /// Blocks of the finest decomposition containing every direction.
    pub components: usize,
    /// Real dimension of the family of projective real forms.
    pub free_dims: usize,
    pub reason: Option<String>,
}

impl ConjugationSearch {
    fn none(reason: impl Into<String>) -> Self {
        ConjugationSearch { witness: None, components: 0, free_dims: 0, reason: Some(reason.into()) }
    }

    pub fn multiplicity(&self) -> Multiplicity {
        match (&self.witness, self.components) {
            (None, _) => Multiplicity::Zero,
            (Some(_), 1) => Multiplicity::One,
            (Some(_), _) => Multiplicity::Infinite,
        }
    }
}

/// A real form of `C^k`, given by a basis of fixed vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct RForm {
    pub basis: Vec<CVec>,
}

impl RForm {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether `p` lies on the projectivisation of the real form.
    pub fn contains(&self, p: &ProjPoint, tol: f64) -> bool {
        let Some(x) = columns(&self.basis).lu().solve(p.coords()) else {
            return false;
        };
        let big = x.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or(ONE);
        let x = x / big;
        x.iter().all(|z| z.im.abs() <= tol)
    }
}

const FIT_TOL: f64 = 1e-4;

fn unit(v: &CVec) -> CVec {
    v / C64::from(v.norm())
}

/// Null space of `{B : B·conj(src) ∥ dst}` over `rows × cols` matrices.
fn antilinear_constraints(pairs: &[(CVec, CVec)], rows: usize, cols: usize, tol: f64) -> Vec<CMat> {
    let n = rows * cols;
    let mut a = CMat::zeros(pairs.len() * rows, n);
    for (p, (src, dst)) in pairs.iter().enumerate() {
        let s = conj_vec(&unit(src));
        let d = unit(dst);
        let proj = CMat::identity(rows, rows) - &d * d.adjoint();
        for r in 0..rows {
            for b in 0..rows {
                let pb = proj[(r, b)];
                if pb == ZERO {
                    continue;
                }
                for col in 0..cols {
                    a[(p * rows + r, b * cols + col)] = pb * s[col];
                }
            }
        }
    }
    // Rows are built from unit vectors, so the natural scale is 1.
    null_space_with_floor(&a, tol, 1.0)
        .into_iter()
        .map(|v| CMat::from_fn(rows, cols, |b, col| v[b * cols + col]))
        .collect()
}

/// Splits `C^r` into the blocks of the algebra spanned by `basis`.
fn split_blocks(basis: &[CMat], r: usize) -> Option<Vec<Vec<CVec>>> {
    if basis.len() == 1 {
        return Some(vec![(0..r).map(|j| crate::linalg::unit_vector(r, j)).collect()]);
    }
    let mut t = CMat::zeros(r, r);
    for (i, b) in basis.iter().enumerate() {
        let coef = C64::from_polar(1.0 + 0.618 * i as f64, 1.0 + 2.3 * i as f64);
        t += b * coef;
    }
    let t = &t / C64::from(t.norm());
    let schur = nalgebra::Schur::try_new(t.clone(), 1e-15, 10_000)?;
    let (_, tri) = schur.unpack();
    let mut eigs: Vec<C64> = (0..r).map(|i| tri[(i, i)]).collect();
    let scale = eigs.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let mut clusters: Vec<(C64, usize)> = Vec::new();
    eigs.sort_by(|a, b| a.re.total_cmp(&b.re));
    for z in eigs {
        match clusters.iter_mut().find(|(c, _)| (*c - z).norm() <= 1e-6 * scale) {
            Some(entry) => entry.1 += 1,
            None => clusters.push((z, 1)),
        }
    }
    if clusters.len() != basis.len() {
        return None;
    }
    let mut blocks = Vec::new();
    for (mu, d) in clusters {
        let shifted = &t - CMat::identity(r, r) * mu;
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t?;
        let mut idx: Vec<usize> = (0..r).collect();
        idx.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
        blocks.push(idx[..d].iter().map(|&i| v_t.row(i).adjoint()).collect());
    }
    Some(blocks)
}

/// Searches for involutions respecting `data`.
pub fn search_conjugations(data: &EigenData, tol: &Tolerances) -> ConjugationSearch {
    let k = data.dim();
    if data.is_empty() {
        return ConjugationSearch::none("no eigendirections");
    }
    for (i, &j) in data.images.iter().enumerate() {
        if data.images.get(j) != Some(&i) {
            return ConjugationSearch::none(format!("direction {i} has an inconsistent partner"));
        }
        if j != i && data.directions[i].distance(&data.directions[j]) < FIT_TOL {
            return ConjugationSearch::none(format!("elliptic directions {i} and {j} coincide"));
        }
    }

    let raw: Vec<CVec> = data.directions.iter().map(|p| p.coords().clone()).collect();
    let qv = orthonormalize(&raw, tol.rank_tol.sqrt());
    let r = qv.len();
    let qv_mat = columns(&qv);
    let xs: Vec<CVec> = raw.iter().map(|v| qv_mat.adjoint() * v).collect();

    let diag_pairs: Vec<(CVec, CVec)> = xs.iter().map(|x| (conj_vec(x), x.clone())).collect();
    let algebra = antilinear_constraints(&diag_pairs, r, r, tol.rank_tol);
    let Some(blocks) = split_blocks(&algebra, r) else {
        return ConjugationSearch::none("could not resolve the block decomposition");
    };
    let m = blocks.len();
    let mut starts = Vec::with_capacity(m);
    let mut acc = 0;
    for b in &blocks {
        starts.push(acc);
        acc += b.len();
    }
    let qc = columns(&blocks.concat());
    let Some(qc_inv) = qc.clone().try_inverse() else {
        return ConjugationSearch::none("block basis is singular");
    };

    let ys: Vec<CVec> = xs.iter().map(|x| &qc_inv * x).collect();
    let mut comp = Vec::with_capacity(ys.len());
    for y in &ys {
        let norms: Vec<f64> =
            (0..m).map(|c| y.rows(starts[c], blocks[c].len()).norm()).collect();
        let best = (0..m).max_by(|&a, &b| norms[a].total_cmp(&norms[b])).unwrap();
        if norms.iter().enumerate().any(|(c, &n)| c != best && n > FIT_TOL * norms[best]) {
            return ConjugationSearch::none("a direction straddles two blocks");
        }
        comp.push(best);
    }

    let mut perm: Vec<Option<usize>> = vec![None; m];
    for (i, &j) in data.images.iter().enumerate() {
        let (a, b) = (comp[i], comp[j]);
        match perm[a] {
            None => perm[a] = Some(b),
            Some(p) if p != b => {
                return ConjugationSearch::none("partners of one block fall in different blocks");
            }
            _ => {}
        }
    }
    let perm: Vec<usize> = perm.into_iter().map(|p| p.expect("every block holds a direction")).collect();
    if (0..m).any(|c| perm[perm[c]] != c) {
        return ConjugationSearch::none("blocks are not exchanged in pairs");
    }

    let block_of = |y: &CVec, c: usize| -> CVec { y.rows(starts[c], blocks[c].len()).into_owned() };
    let solve_block = |from: usize, to: usize| -> Option<CMat> {
        let pairs: Vec<(CVec, CVec)> = (0..ys.len())
            .filter(|&i| comp[i] == from)
            .map(|i| (block_of(&ys[i], from), block_of(&ys[data.images[i]], to)))
            .collect();
        let sols = antilinear_constraints(&pairs, blocks[to].len(), blocks[from].len(), tol.rank_tol);
        if sols.len() == 1 {
            Some(sols.into_iter().next().unwrap())
        } else {
            None
        }
    };

    let mut s_tilde = CMat::zeros(r, r);
    let mut fixed = 0;
    let mut swapped = 0;
    for c in 0..m {
        let d = blocks[c].len();
        if perm[c] == c {
            let Some(b) = solve_block(c, c) else {
                return ConjugationSearch::none(format!("no antilinear map respects block {c}"));
            };
            let bb = &b * conj_mat(&b);
            let kappa = bb.trace() / C64::from(d as f64);
            if (&bb - CMat::identity(d, d) * kappa).norm() > FIT_TOL * bb.norm()
                || kappa.re <= 0.0
                || kappa.im.abs() > FIT_TOL * kappa.norm()
            {
                return ConjugationSearch::none(format!("block {c} admits no involution"));
            }
            let b = b / C64::from(kappa.re.sqrt());
            s_tilde.view_mut((starts[c], starts[c]), (d, d)).copy_from(&b);
            fixed += 1;
        } else if c < perm[c] {
            let c2 = perm[c];
            let (Some(x), Some(y)) = (solve_block(c, c2), solve_block(c2, c)) else {
                return ConjugationSearch::none(format!("no antilinear map exchanges blocks {c} and {c2}"));
            };
            if x.nrows() != x.ncols() {
                return ConjugationSearch::none("exchanged blocks differ in dimension");
            }
            let yx = &y * conj_mat(&x);
            let nu = yx.trace() / C64::from(d as f64);
            if nu.norm() == 0.0 || (&yx - CMat::identity(d, d) * nu).norm() > FIT_TOL * yx.norm() {
                return ConjugationSearch::none(format!("blocks {c} and {c2} admit no involution"));
            }
            s_tilde.view_mut((starts[c2], starts[c]), (d, d)).copy_from(&x);
            s_tilde.view_mut((starts[c], starts[c2]), (d, d)).copy_from(&(y / nu));
            swapped += 1;
        }
    }

    let Some(qc_conj_inv) = conj_mat(&qc).try_inverse() else {
        return ConjugationSearch::none("block basis is singular");
    };
    let s_v = &qc * s_tilde * qc_conj_inv;
    let mut q_full = qv.clone();
    let mut full = CMat::identity(k, k);
    full.view_mut((0, 0), (r, r)).copy_from(&s_v);
    let extra = if r < k {
        q_full.extend(complement_basis(&qv, k, tol.rank_tol).expect("orthonormal span"));
        1
    } else {
        0
    };
    let q = columns(&q_full);
    let s = &q * full * q.transpose();
    let witness = match Conjugation::from_matrix(s, FIT_TOL) {
        Ok(w) => w,
        Err(_) => return ConjugationSearch::none("assembled map is not an involution"),
    };
    for (i, &j) in data.images.iter().enumerate() {
        let img = witness.apply_point(&data.directions[i]);
        if img.distance(&data.directions[j]) > FIT_TOL {
            return ConjugationSearch::none(format!("direction {i} is not respected"));
        }
    }
    let components = m + extra;
    let free_dims = fixed + extra + 2 * swapped - 1;
    ConjugationSearch { witness: Some(witness), components, free_dims, reason: None }
}

/// The unique respecting involution, when there is exactly one.
pub fn conjugation_from_eigendata(data: &EigenData, tol: &Tolerances) -> Result<Conjugation> {
    let found = search_conjugations(data, tol);
    match found.multiplicity() {
        Multiplicity::Zero => Err(Error::NoConjugation(found.reason.unwrap_or_default())),
        Multiplicity::One => Ok(found.witness.expect("witness present")),
        Multiplicity::Infinite => Err(Error::UnderdeterminedConjugation { free_dims: found.free_dims }),
    }
}

pub fn rform_multiplicity(data: &EigenData, tol: &Tolerances) -> Multiplicity {
    search_conjugations(data, tol).multiplicity()
}

/// A basis of vectors fixed by `c`, chosen greedily from `e_j + S e_j` and
/// `i (e_j - S e_j)` and scaled so each has largest coordinate of modulus 1.
pub fn rform_from_conjugation(c: &Conjugation) -> RForm {
    let k = c.dim();
    let s = c.matrix();
    let mut candidates = Vec::with_capacity(2 * k);
    for j in 0..k {
        let e = crate::linalg::unit_vector(k, j);
        let se = s.column(j).into_owned();
        candidates.push(&e + &se);
        candidates.push((&e - &se) * crate::linalg::I);
    }
    let mut chosen: Vec<CVec> = Vec::with_capacity(k);
    let mut ortho: Vec<CVec> = Vec::with_capacity(k);
    while chosen.len() < k {
        let mut best: Option<(usize, CVec, f64)> = None;
        for (idx, v) in candidates.iter().enumerate() {
            let mut w = v.clone();
            for _ in 0..2 {
                for q in &ortho {
                    let p = q.dotc(&w);
                    w -= q * p;
                }
            }
            let n = w.norm();
            if best.as_ref().is_none_or(|(_, _, bn)| n > *bn + 1e-12) {
                best = Some((idx, w, n));
            }
        }
        let (idx, w, n) = best.expect("candidates span C^k");
        ortho.push(w / C64::from(n));
        let v = candidates[idx].clone();
        let top = v.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        chosen.push(v / C64::from(top));
    }
    RForm { basis: chosen }
}

/// Matrix whose columns are the real-form basis; conjugating by it makes
/// every transformation preserving the form projectively real.
pub fn realifier(r: &RForm) -> CMat {
    columns(&r.basis)
}

/// Relative distance of `S M̄ S^-1` from the nearest multiple of `M`.
pub fn preservation_defect(m: &ComplexMatrix, c: &Conjugation) -> f64 {
    let s = c.matrix();
    let Some(si) = s.clone().try_inverse() else {
        return f64::INFINITY;
    };
    let mm = m.matrix();
    let x = s * conj_mat(mm) * si;
    let mu = crate::linalg::frob_inner(mm, &x) / C64::from(mm.norm_squared());
    let resid = (&x - mm * mu).norm() / x.norm();
    resid.max((mu.norm() - 1.0).abs())
}

pub fn preserves(m: &ComplexMatrix, c: &Conjugation, tol: f64) -> bool {
    preservation_defect(m, c) < tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, cvec, rvec};

    fn pt(v: &[(f64, f64)]) -> ProjPoint {
        ProjPoint::new(cvec(v)).unwrap()
    }

    fn rpt(v: &[f64]) -> ProjPoint {
        ProjPoint::new(rvec(v)).unwrap()
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn hyperbolic_frame_gives_standard_conjugation() {
        let mut d = EigenData::new();
        for v in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 1.0, 1.0]] {
            d.push_hyperbolic(rpt(&v));
        }
        let s = conjugation_from_eigendata(&d, &tol()).unwrap();
        assert!((s.matrix() - CMat::identity(3, 3)).norm() < 1e-12);
        let rf = rform_from_conjugation(&s);
        for (j, b) in rf.basis.iter().enumerate() {
            assert!((b - crate::linalg::unit_vector(3, j)).norm() < 1e-12);
        }
    }

    #[test]
    fn swapped_axes_give_antidiagonal_conjugation() {
        let mut d = EigenData::new();
        d.push_pair(pt(&[(1.0, 0.0), (0.0, 0.0)]), pt(&[(0.0, 0.0), (1.0, 0.0)]));
        d.push_pair(pt(&[(0.0, -1.0), (3.0, 0.0)]), pt(&[(0.0, -3.0), (1.0, 0.0)]));
        let s = conjugation_from_eigendata(&d, &tol()).unwrap();
        let expected = CMat::from_fn(2, 2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert!((s.matrix() - expected).norm() < 1e-12);
        let rf = rform_from_conjugation(&s);
        assert!(rf.contains(&pt(&[(1.0, 0.0), (1.0, 0.0)]), 1e-10));
        assert!(rf.contains(&pt(&[(0.0, 1.0), (0.0, -1.0)]), 1e-10));
        assert!(rf.contains(&ProjPoint::new(cvec(&[(0.6, 0.8), (1.0, 0.0)])).unwrap(), 1e-10));
        assert!(!rf.contains(&pt(&[(2.0, 0.0), (1.0, 0.0)]), 1e-6));
    }

    #[test]
    fn quaternionic_structure_is_rejected() {
        let mut d = EigenData::new();
        d.push_pair(pt(&[(1.0, 0.0), (0.0, 0.0)]), pt(&[(0.0, 0.0), (1.0, 0.0)]));
        d.push_pair(pt(&[(1.0, 0.0), (1.0, 0.0)]), pt(&[(-1.0, 0.0), (1.0, 0.0)]));
        assert_eq!(rform_multiplicity(&d, &tol()), Multiplicity::Zero);
        assert!(matches!(conjugation_from_eigendata(&d, &tol()), Err(Error::NoConjugation(_))));
    }

    fn staged() -> EigenData {
        let mut d = EigenData::new();
        d.push_pair(pt(&[(0.0, -1.0), (1.0, 0.0), (0.0, 0.0)]), pt(&[(0.0, 1.0), (1.0, 0.0), (0.0, 0.0)]));
        d.push_pair(pt(&[(1.0, 1.0), (1.0, 0.0), (0.0, 0.0)]), pt(&[(1.0, -1.0), (1.0, 0.0), (0.0, 0.0)]));
        d.push_hyperbolic(rpt(&[0.0, 0.0, 1.0]));
        d
    }

    #[test]
    fn staged_multiplicities() {
        let mut d = staged();
        let found = search_conjugations(&d, &tol());
        assert_eq!(found.multiplicity(), Multiplicity::Infinite);
        assert_eq!(found.free_dims, 1);
        assert!(matches!(
            conjugation_from_eigendata(&d, &tol()),
            Err(Error::UnderdeterminedConjugation { free_dims: 1 })
        ));
        d.push_hyperbolic(rpt(&[0.0, 1.0, 1.0]));
        assert_eq!(rform_multiplicity(&d, &tol()), Multiplicity::One);
        d.push_pair(rpt(&[1.0, 0.0, 1.0]), rpt(&[2.0, 0.0, 2.0]));
        assert_eq!(rform_multiplicity(&d, &tol()), Multiplicity::Zero);
    }

    #[test]
    fn split_hyperbolic_frame_is_infinite() {
        let mut d = EigenData::new();
        for v in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 1.0]] {
            d.push_hyperbolic(rpt(&v));
        }
        let found = search_conjugations(&d, &tol());
        assert_eq!(found.multiplicity(), Multiplicity::Infinite);
        assert_eq!(found.components, 2);
    }

    #[test]
    fn single_elliptic_pair_has_a_family() {
        let mut d = EigenData::new();
        d.push_pair(pt(&[(1.0, 0.0), (0.0, 0.0)]), pt(&[(0.0, 0.0), (1.0, 0.0)]));
        let found = search_conjugations(&d, &tol());
        assert_eq!(found.multiplicity(), Multiplicity::Infinite);
        assert_eq!(found.free_dims, 1);
        let w = found.witness.unwrap();
        assert!((w.apply_point(&d.directions[0])).distance(&d.directions[1]) < 1e-12);
    }

    #[test]
    fn deficient_span_leaves_free_complement() {
        let mut d = EigenData::new();
        d.push_hyperbolic(rpt(&[1.0, 0.0, 0.0]));
        d.push_hyperbolic(rpt(&[0.0, 1.0, 0.0]));
        d.push_hyperbolic(rpt(&[1.0, 1.0, 0.0]));
        let found = search_conjugations(&d, &tol());
        assert_eq!(found.multiplicity(), Multiplicity::Infinite);
        assert_eq!(found.components, 2);
    }

    #[test]
    fn realifier_makes_preserving_maps_real() {
        let mut d = EigenData::new();
        d.push_pair(pt(&[(1.0, 0.0), (0.0, 0.0)]), pt(&[(0.0, 0.0), (1.0, 0.0)]));
        d.push_pair(pt(&[(0.0, -1.0), (3.0, 0.0)]), pt(&[(0.0, -3.0), (1.0, 0.0)]));
        let s = conjugation_from_eigendata(&d, &tol()).unwrap();
        let g = realifier(&rform_from_conjugation(&s));
        let m = ComplexMatrix::new(
            CMat::from_fn(2, 2, |i, j| [[c(-2.0, 5.0), c(-3.0, 0.0)], [c(-3.0, 0.0), c(-2.0, -5.0)]][i][j]),
            &tol(),
        )
        .unwrap();
        assert!(preserves(&m, &s, 1e-10));
        let n = g.clone().try_inverse().unwrap() * m.matrix() * g;
        let phase = n[(0, 0)] / C64::from(n[(0, 0)].norm());
        assert!((n / phase).iter().all(|z| z.im.abs() < 1e-12));
    }
}

use crate::coords::{cross_ratio_set, CrossRatio};
use crate::error::{Error, Result};
use crate::flags::{build_elliptic_flag, generic_with_point, Flag};
use crate::linalg::{CVec, C64};
use crate::projlin::ComplexMatrix;
use crate::spectrum::SpectralKind;
use crate::tol::Tolerances;

use super::{attach_certificate, require_generic, Condition, Decision, Generator, Method, Test, Verdict};

fn values(a: &Flag, v: &CVec, c: &Flag, d: &CVec, tol: &Tolerances) -> Result<Vec<CrossRatio>> {
    Ok(cross_ratio_set(a, v, c, d, tol)?.into_iter().map(|x| x.value).collect())
}

fn one() -> CrossRatio {
    CrossRatio::finite(C64::new(1.0, 0.0))
}

/// Conditions for a hyperbolic eigendirection `v` read against a flag `A`
/// whose first `2m` vectors are elliptic pairs, its reverse `C`, and a
/// hyperbolic direction `d`.
pub fn hyperbolic_direction_conditions(
    a: &Flag,
    c: &Flag,
    d: &CVec,
    m: usize,
    v: &CVec,
    generator: Option<usize>,
    tol: &Tolerances,
) -> Result<Vec<Condition>> {
    let k = a.dim();
    let x = values(a, v, c, d, tol)?;
    let n = k - 2 * m;
    let mut out = Vec::new();
    let mut push = |label: String, test, vals| out.push(Condition::evaluate(label, generator, test, vals, tol));
    for j in (0..2 * m).step_by(2).filter(|&j| j <= k - 2) {
        push(format!("hyperbolic condition 1 at j={j}"), Test::UnitCircle, vec![x[j]]);
    }
    for j in (0..(2 * m).saturating_sub(3)).step_by(2) {
        let p = x[j].mul(&x[j + 1]).mul(&x[j + 1]).mul(&x[j + 2]);
        push(format!("hyperbolic condition 2 at j={j}"), Test::ArgumentSum, vec![p]);
    }
    for j in 2 * m..=k - 2 {
        push(format!("hyperbolic condition 3 at j={j}"), Test::Real, vec![x[j]]);
    }
    if m >= 1 && n >= 1 {
        let j = 2 * m - 2;
        let p = x[j].mul(&x[j + 1]).mul(&x[j + 1]);
        push(format!("hyperbolic condition 4 at j={j}"), Test::ArgumentSum, vec![p]);
    }
    Ok(out)
}

/// Conditions for an elliptic pair `(β, β')` against the same data as
/// [`hyperbolic_direction_conditions`].
pub fn elliptic_pair_conditions(
    a: &Flag,
    c: &Flag,
    d: &CVec,
    m: usize,
    beta: &CVec,
    beta_p: &CVec,
    generator: Option<usize>,
    tol: &Tolerances,
) -> Result<Vec<Condition>> {
    let k = a.dim();
    let x = values(a, beta, c, d, tol)?;
    let y = values(a, beta_p, c, d, tol)?;
    let n = k - 2 * m;
    let mut out = Vec::new();
    let mut push = |label: String, test, vals| out.push(Condition::evaluate(label, generator, test, vals, tol));
    for j in (0..2 * m).step_by(2).filter(|&j| j <= k - 2) {
        push(format!("elliptic condition 1 at j={j}"), Test::Equal, vec![x[j].mul(&y[j].conj()), one()]);
    }
    for j in (1..(2 * m).saturating_sub(2)).step_by(2) {
        push(format!("elliptic condition 2 at j={j}"), Test::Conjugate, vec![x[j], y[j - 1].mul(&y[j]).mul(&y[j + 1])]);
    }
    for j in 2 * m..=k - 2 {
        push(format!("elliptic condition 3 at j={j}"), Test::Conjugate, vec![x[j], y[j]]);
    }
    if m >= 1 && n >= 1 {
        let j = 2 * m - 1;
        push(format!("elliptic condition 4 at j={j}"), Test::Conjugate, vec![y[j], x[j - 1].mul(&x[j])]);
    }
    Ok(out)
}

/// Atypical flag of a generator: elliptic pairs first, then hyperbolic
/// directions. Returns the flag and the number of pairs.
fn base_flag(g: &Generator, tol: &Tolerances) -> Result<(Flag, usize)> {
    let v = |i: usize| g.eig.vectors[i].coords().clone();
    let pairs: Vec<(CVec, CVec)> = g.pairs().into_iter().map(|(i, j)| (v(i), v(j))).collect();
    let hyp: Vec<CVec> = g.hyperbolic().into_iter().map(v).collect();
    Ok((build_elliptic_flag(&pairs, &hyp, tol)?, pairs.len()))
}

struct Frame<'g> {
    base: &'g Generator,
    a: Flag,
    c: Flag,
    m: usize,
    d: CVec,
    d_at: (usize, usize),
}

fn directions(gens: &[Generator], skip: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
    gens.iter().filter(move |g| g.index != skip).flat_map(|g| (0..g.eig.dim()).map(move |i| (g.index, i)))
}

fn find_frame<'g>(gens: &'g [Generator], tol: &Tolerances) -> Option<Frame<'g>> {
    for base in gens {
        let Ok((a, m)) = base_flag(base, tol) else {
            continue;
        };
        let c = a.reversed();
        for g in gens.iter().filter(|g| g.index != base.index) {
            for i in g.hyperbolic() {
                let d = g.eig.vectors[i].coords().clone();
                let ok = directions(gens, base.index)
                    .filter(|&at| at != (g.index, i))
                    .all(|(h, j)| generic_with_point(&a, gens[h].eig.vectors[j].coords(), &c, &d, tol));
                if ok {
                    return Some(Frame { base, a, c, m, d, d_at: (g.index, i) });
                }
            }
        }
    }
    None
}

/// Necessary conditions between a strictly elliptic generator and an
/// elliptic pair of another generator, used when no hyperbolic direction
/// is available to fix the frame.
fn elliptic_only(gens: &[Generator], tol: &Tolerances) -> Result<Vec<Condition>> {
    let base = gens
        .iter()
        .find(|g| g.kind() == SpectralKind::StrictlyElliptic)
        .ok_or_else(|| Error::GenericityViolation("no frame with a hyperbolic direction in generic position".into()))?;
    let (a, _) = base_flag(base, tol)?;
    let c = a.reversed();
    let k = a.dim();
    let mut out = Vec::new();
    for g in gens.iter().filter(|g| g.index != base.index) {
        for (i, j) in g.pairs() {
            let x = values(&a, g.eig.vectors[i].coords(), &c, g.eig.vectors[j].coords(), tol)?;
            for n in (0..k - 1).step_by(2) {
                out.push(Condition::evaluate(format!("elliptic pair ratio at j={n}"), Some(g.index), Test::PositiveReal, vec![x[n]], tol));
            }
        }
    }
    Ok(out)
}

/// Decides using cross ratios alone, read against the atypical flag of one
/// generator and a hyperbolic eigendirection of another.
///
/// These conditions are sufficient but their failure is not conclusive on
/// its own; callers confirm a `No` by the direct method.
pub fn decide_pglk_cross_only(ms: &[ComplexMatrix], gens: &[Generator], tol: &Tolerances) -> Result<Decision> {
    require_generic(gens)?;
    if gens.len() < 2 {
        return Err(Error::Precondition("at least two generators are required".into()));
    }
    let Some(f) = find_frame(gens, tol) else {
        let conditions = elliptic_only(gens, tol)?;
        if conditions.iter().all(|c| c.passed) {
            return Err(Error::Precondition("elliptic pair conditions hold but do not fix a real form".into()));
        }
        let mut d = Decision::new(Verdict::No, Method::Cross);
        d.conditions = conditions;
        return Ok(attach_certificate(d, ms, gens, tol));
    };
    let mut conditions = Vec::new();
    for g in gens.iter().filter(|g| g.index != f.base.index) {
        for i in g.hyperbolic() {
            if (g.index, i) == f.d_at {
                continue;
            }
            let v = g.eig.vectors[i].coords();
            conditions.extend(hyperbolic_direction_conditions(&f.a, &f.c, &f.d, f.m, v, Some(g.index), tol)?);
        }
        for (i, j) in g.pairs() {
            let (b, bp) = (g.eig.vectors[i].coords(), g.eig.vectors[j].coords());
            conditions.extend(elliptic_pair_conditions(&f.a, &f.c, &f.d, f.m, b, bp, Some(g.index), tol)?);
        }
    }
    let passed = conditions.iter().all(|c| c.passed);
    let mut d = Decision::new(if passed { Verdict::Yes } else { Verdict::No }, Method::Cross);
    d.conditions = conditions;
    Ok(attach_certificate(d, ms, gens, tol))
}

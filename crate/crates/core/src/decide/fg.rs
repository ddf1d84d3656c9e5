use serde::{Deserialize, Serialize};

use crate::coords::{cross_ratio_set, fg_cross_ratio, triple_ratio_set, CrossRatio, IndexedCrossRatio, IndexedTripleRatio};
use crate::error::{Error, Result};
use crate::flags::{generic_position, quotient_cp1, Flag};
use crate::linalg::{CVec, C64};
use crate::projlin::ComplexMatrix;
use crate::rform::{rform_from_conjugation, search_conjugations, EigenData, Multiplicity};
use crate::spectrum::SpectralKind;
use crate::tol::Tolerances;

use super::{analyse, attach_certificate, require_generic, Condition, Decision, Generator, Method, Test, Verdict};

/// Normalising flags `A`, `C = Ā` and line `D_1` against which every
/// generator's coordinates are read.
struct Reference {
    a: Flag,
    c: Flag,
    d1: CVec,
    /// The second hyperbolic generator's flags, when the reference comes
    /// from two hyperbolic generators.
    base: Option<(usize, usize, Flag, Flag)>,
}

fn genericity(e: Error) -> Error {
    if e.is_genericity() {
        e
    } else {
        Error::GenericityViolation(e.to_string())
    }
}

fn flag_of(g: &Generator, order: &[usize], tol: &Tolerances) -> Result<Flag> {
    Flag::from_points(&order.iter().map(|&i| g.eig.vectors[i].clone()).collect::<Vec<_>>(), tol)
}

/// Flags `(β, β')` of a generator. Hyperbolic generators use eigenvalue
/// order; others place each elliptic pair symmetrically around the middle so
/// that `β'` is the conjugate flag of `β`.
fn generator_flags(g: &Generator, tol: &Tolerances) -> Result<(Flag, Flag, bool)> {
    let k = g.eig.dim();
    let hyperbolic = g.hyperbolic();
    if hyperbolic.len() == k {
        let beta = flag_of(g, &(0..k).collect::<Vec<_>>(), tol)?;
        let rev = beta.reversed();
        return Ok((beta, rev, true));
    }
    if hyperbolic.len() > 1 {
        return Err(Error::Precondition(format!(
            "generator {} has {} hyperbolic and some elliptic eigendirections",
            g.index,
            hyperbolic.len()
        )));
    }
    let pairs = g.pairs();
    let mut order: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    order.extend(hyperbolic);
    order.extend(pairs.iter().rev().map(|p| p.1));
    let beta = flag_of(g, &order, tol)?;
    let rev = beta.reversed();
    Ok((beta, rev, false))
}

fn strictly_hyperbolic(g: &Generator) -> bool {
    g.kind() == SpectralKind::StrictlyHyperbolic
}

fn hyperbolic_reference(gens: &[Generator], tol: &Tolerances) -> Option<Result<Reference>> {
    let pool: Vec<&Generator> = gens.iter().filter(|g| strictly_hyperbolic(g)).collect();
    if pool.len() < 2 {
        return None;
    }
    let k = gens[0].eig.dim();
    let natural: Vec<usize> = (0..k).collect();
    for (x, g) in pool.iter().enumerate() {
        for (y, h) in pool.iter().enumerate() {
            if x == y {
                continue;
            }
            let (Ok(a), Ok(b)) = (flag_of(g, &natural, tol), flag_of(h, &natural, tol)) else {
                continue;
            };
            let c = a.reversed();
            let d = b.reversed();
            if generic_position(&[&a, &b, &c, &d], tol) {
                let d1 = d.vector(1).clone();
                return Some(Ok(Reference { a, c, d1, base: Some((g.index, h.index, b, d)) }));
            }
        }
    }
    Some(Err(Error::GenericityViolation("no pair of hyperbolic generators has flags in generic position".into())))
}

/// A fixed real matrix with no vanishing minors, used to move the synthetic
/// reference basis into general position.
fn mixing(k: usize) -> Vec<Vec<f64>> {
    (0..k)
        .map(|i| (0..k).map(|j| 1.0 / (1.0 + i as f64 + 2.0 * j as f64) + if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// Builds a reference from the real form fixed by the first generator's
/// eigendirections together with as few further directions as are needed
/// to pin it down. `Ok(None)` means those directions already admit no
/// common real form.
fn synthetic_reference(gens: &[Generator], tol: &Tolerances) -> Result<Option<Reference>> {
    let mut data = EigenData::new();
    data.push_system(&gens[0].eig, gens[0].line());
    let mut extra: Vec<(usize, Option<usize>)> = Vec::new();
    for g in &gens[1..] {
        for i in g.hyperbolic() {
            extra.push((g.index, Some(i)));
        }
    }
    for g in &gens[1..] {
        if g.pairs().is_empty() {
            continue;
        }
        extra.push((g.index, None));
    }
    let mut found = search_conjugations(&data, tol);
    for (idx, which) in extra {
        if found.multiplicity() != Multiplicity::Infinite {
            break;
        }
        let g = &gens[idx];
        match which {
            Some(i) => {
                data.push_hyperbolic(g.eig.vectors[i].clone());
            }
            None => {
                let (p, q) = g.pairs()[0];
                data.push_pair(g.eig.vectors[p].clone(), g.eig.vectors[q].clone());
            }
        }
        found = search_conjugations(&data, tol);
    }
    let w = match (found.multiplicity(), found.witness) {
        (Multiplicity::Zero, _) => return Ok(None),
        (Multiplicity::One, Some(w)) => w,
        _ => return Err(Error::Precondition("eigendirections do not determine a reference real form".into())),
    };
    let u = rform_from_conjugation(&w).basis;
    let k = u.len();
    let r = mixing(k);
    let basis: Vec<CVec> = r
        .iter()
        .map(|row| row.iter().zip(&u).fold(CVec::zeros(k), |acc, (&x, v)| acc + v * C64::from(x)))
        .collect();
    let d1 = basis.iter().enumerate().fold(CVec::zeros(k), |acc, (i, v)| acc + v * C64::from(1.0 + 0.25 * i as f64));
    let a = Flag::new(basis, tol)?;
    let c = a.reversed();
    Ok(Some(Reference { a, c, d1, base: None }))
}

fn reference(gens: &[Generator], tol: &Tolerances) -> Result<Option<Reference>> {
    match hyperbolic_reference(gens, tol) {
        Some(r) => r.map(Some),
        None => synthetic_reference(gens, tol),
    }
}

fn crosses(r: &Reference, beta: &Flag, tol: &Tolerances) -> Result<Vec<IndexedCrossRatio>> {
    cross_ratio_set(&r.a, beta.vector(1), &r.c, &r.d1, tol).map_err(genericity)
}

fn triples(r: &Reference, beta: &Flag, tol: &Tolerances) -> Result<Vec<IndexedTripleRatio>> {
    triple_ratio_set(&r.a, beta, &r.c, tol).map_err(genericity)
}

fn push_real(out: &mut Vec<Condition>, name: &str, g: usize, vals: &[CrossRatio], idx: &[String], tol: &Tolerances) {
    for (v, i) in vals.iter().zip(idx) {
        out.push(Condition::evaluate(format!("{name}{i}"), Some(g), Test::Real, vec![*v], tol));
    }
}

fn cross_values(xs: &[IndexedCrossRatio]) -> (Vec<CrossRatio>, Vec<String>) {
    xs.iter().map(|x| (x.value, format!("({},{})", x.i, x.j))).unzip()
}

fn triple_values(xs: &[IndexedTripleRatio]) -> (Vec<CrossRatio>, Vec<String>) {
    xs.iter().map(|x| (CrossRatio::finite(x.value), format!("({},{},{})", x.i, x.j, x.l))).unzip()
}

/// Conditions for one generator read against the reference.
fn generator_conditions(r: &Reference, g: &Generator, tol: &Tolerances) -> Result<Vec<Condition>> {
    let (beta, beta_p, hyperbolic) = generator_flags(g, tol)?;
    if !generic_position(&[&r.a, &beta, &r.c], tol) {
        return Err(Error::GenericityViolation(format!("flags of generator {} are not in generic position", g.index)));
    }
    let (cb, cbi) = cross_values(&crosses(r, &beta, tol)?);
    let (cp, _) = cross_values(&crosses(r, &beta_p, tol)?);
    let (tb, tbi) = triple_values(&triples(r, &beta, tol)?);
    let (tp, _) = triple_values(&triples(r, &beta_p, tol)?);
    let mut out = Vec::new();
    if hyperbolic {
        push_real(&mut out, "[A, b, C, D]", g.index, &cb, &cbi, tol);
        push_real(&mut out, "[A, b', C, D]", g.index, &cp, &cbi, tol);
        push_real(&mut out, "r3(A, b, C)", g.index, &tb, &tbi, tol);
        push_real(&mut out, "r3(A, b', C)", g.index, &tp, &tbi, tol);
    } else {
        for ((x, y), i) in cb.iter().zip(&cp).zip(&cbi) {
            out.push(Condition::evaluate(format!("[A, b, C, D] = conj [A, b', C, D] {i}"), Some(g.index), Test::Conjugate, vec![*x, *y], tol));
        }
        for ((x, y), i) in tb.iter().zip(&tp).zip(&tbi) {
            out.push(Condition::evaluate(format!("r3(A, b, C) = conj r3(A, b', C) {i}"), Some(g.index), Test::Conjugate, vec![*x, *y], tol));
        }
    }
    Ok(out)
}

fn base_conditions(r: &Reference, tol: &Tolerances) -> Result<Vec<Condition>> {
    let Some((_, h, b, d)) = &r.base else {
        return Ok(Vec::new());
    };
    let (cb, cbi) = cross_values(&crosses(r, b, tol)?);
    let (t1, t1i) = triple_values(&triples(r, b, tol)?);
    let (t2, t2i) = triple_values(&triple_ratio_set(&r.a, &r.c, d, tol).map_err(genericity)?);
    let mut out = Vec::new();
    push_real(&mut out, "[A, B, C, D]", *h, &cb, &cbi, tol);
    push_real(&mut out, "r3(A, B, C)", *h, &t1, &t1i, tol);
    push_real(&mut out, "r3(A, C, D)", *h, &t2, &t2i, tol);
    Ok(out)
}

fn run(ms: &[ComplexMatrix], gens: &[Generator], method: Method, tol: &Tolerances) -> Result<Decision> {
    require_generic(gens)?;
    let Some(r) = reference(gens, tol)? else {
        let mut d = Decision::new(Verdict::No, method);
        d.diagnostics.push("eigendirections used for the reference admit no common real form".into());
        return Ok(attach_certificate(d, ms, gens, tol));
    };
    let mut conditions = base_conditions(&r, tol)?;
    for g in gens {
        if let Some((a, b, _, _)) = &r.base {
            if g.index == *a || g.index == *b {
                continue;
            }
        }
        conditions.extend(generator_conditions(&r, g, tol)?);
    }
    let passed = conditions.iter().all(|c| c.passed);
    let mut d = Decision::new(if passed { Verdict::Yes } else { Verdict::No }, method);
    if r.base.is_none() {
        d.diagnostics.push("reference flags built from a synthetic hyperbolic frame".into());
    }
    d.conditions = conditions;
    Ok(attach_certificate(d, ms, gens, tol))
}

/// Decides a collection in PGL(3, C) from cross and triple ratios.
pub fn decide_pgl3(ms: &[ComplexMatrix], gens: &[Generator], tol: &Tolerances) -> Result<Decision> {
    let k = gens.first().map_or(0, |g| g.eig.dim());
    if k != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: k });
    }
    run(ms, gens, Method::Dim3, tol)
}

/// Decides a collection in PGL(k, C), `k >= 3`, from the cross and triple
/// ratios of eigendirection flags against a pair of hyperbolic generators,
/// or against a synthetic hyperbolic frame when fewer than two exist.
pub fn decide_pglk_fg(ms: &[ComplexMatrix], gens: &[Generator], tol: &Tolerances) -> Result<Decision> {
    let k = gens.first().map_or(0, |g| g.eig.dim());
    if k < 3 {
        return Err(Error::Precondition("flag coordinates need k >= 3".into()));
    }
    run(ms, gens, Method::Fg, tol)
}

/// Coordinates of one flag read against the reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlagCoordinates {
    pub generator: usize,
    pub flag: String,
    pub cross: Vec<IndexedCrossRatio>,
    /// The same quotients in the `[[A, B, C, D]]` normalisation.
    pub fg_cross: Vec<IndexedCrossRatio>,
    pub triple: Vec<IndexedTripleRatio>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinateReport {
    /// Generators whose flags define the reference, or empty when the
    /// reference is synthetic.
    pub reference: Vec<usize>,
    pub flags: Vec<FlagCoordinates>,
}

fn fg_crosses(r: &Reference, v: &CVec, tol: &Tolerances) -> Result<Vec<IndexedCrossRatio>> {
    let k = r.a.dim();
    (0..=k - 2)
        .map(|i| {
            let j = k - 2 - i;
            let [pa, pb, pc, pd] = quotient_cp1(&r.a, v, &r.c, &r.d1, i, j, tol)?;
            Ok(IndexedCrossRatio { i, j, value: fg_cross_ratio(&pa, &pb, &pc, &pd, tol)? })
        })
        .collect::<Result<_>>()
        .map_err(genericity)
}

/// Every coordinate used by the flag-based criteria, for inspection.
pub fn coordinate_report(ms: &[ComplexMatrix], tol: &Tolerances) -> Result<CoordinateReport> {
    let gens = analyse(ms, tol)?;
    if gens[0].eig.dim() < 3 {
        return Err(Error::Precondition("flag coordinates need k >= 3".into()));
    }
    require_generic(&gens)?;
    let r = reference(&gens, tol)?.ok_or_else(|| Error::NoConjugation("reference eigendirections admit no real form".into()))?;
    let mut flags = Vec::new();
    let mut skip = Vec::new();
    if let Some((g, h, b, d)) = &r.base {
        skip = vec![*g, *h];
        flags.push(FlagCoordinates {
            generator: *h,
            flag: "B".into(),
            cross: crosses(&r, b, tol)?,
            fg_cross: fg_crosses(&r, b.vector(1), tol)?,
            triple: triples(&r, b, tol)?,
        });
        flags.push(FlagCoordinates {
            generator: *h,
            flag: "D".into(),
            cross: Vec::new(),
            fg_cross: Vec::new(),
            triple: triple_ratio_set(&r.a, &r.c, d, tol).map_err(genericity)?,
        });
    }
    for g in gens.iter().filter(|g| !skip.contains(&g.index)) {
        let (beta, beta_p, _) = generator_flags(g, tol)?;
        for (name, f) in [("beta", &beta), ("beta'", &beta_p)] {
            flags.push(FlagCoordinates {
                generator: g.index,
                flag: name.into(),
                cross: crosses(&r, f, tol)?,
                fg_cross: fg_crosses(&r, f.vector(1), tol)?,
                triple: triples(&r, f, tol)?,
            });
        }
    }
    Ok(CoordinateReport { reference: skip, flags })
}

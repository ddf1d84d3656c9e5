use crate::coords::{cross_ratio, CrossRatio};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::projlin::{proj_eq, ComplexMatrix, ProjPoint};
use crate::spectrum::SpectralKind;
use crate::tol::Tolerances;

use super::{analyse, attach_certificate, Condition, Decision, Generator, Method, Test, Verdict};

/// Eigendirections of a generator of PGL(2, C) as `(m⁻, m⁺)`.
fn ends(g: &Generator) -> (&ProjPoint, &ProjPoint) {
    (&g.eig.vectors[0], &g.eig.vectors[1])
}

fn same_point(a: &ProjPoint, b: &ProjPoint, tol: &Tolerances) -> bool {
    proj_eq(a, b, tol.rank_tol)
}

fn same_pair(g: &Generator, h: &Generator, tol: &Tolerances) -> bool {
    let (a, b) = ends(g);
    let (c, d) = ends(h);
    (same_point(a, c, tol) && same_point(b, d, tol)) || (same_point(a, d, tol) && same_point(b, c, tol))
}

fn is_hyperbolic(g: &Generator) -> bool {
    g.kind() == SpectralKind::StrictlyHyperbolic
}

/// Collects conditions, recording degenerate cross ratios as failures.
struct Sheet<'a> {
    tol: &'a Tolerances,
    conditions: Vec<Condition>,
}

impl<'a> Sheet<'a> {
    fn cr(&self, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint, d: &ProjPoint) -> Option<CrossRatio> {
        cross_ratio(a, b, c, d, self.tol).ok()
    }

    fn push(&mut self, label: String, generator: Option<usize>, test: Test, values: Option<Vec<CrossRatio>>) {
        match values {
            Some(v) => self.conditions.push(Condition::evaluate(label, generator, test, v, self.tol)),
            None => self.conditions.push(Condition { label, generator, test, values: Vec::new(), passed: false }),
        }
    }
}

fn first_pair<'g>(gens: &'g [Generator], want: bool, tol: &Tolerances) -> Option<(&'g Generator, &'g Generator)> {
    let pool: Vec<&Generator> = gens.iter().filter(|g| is_hyperbolic(g) == want).collect();
    for (x, g) in pool.iter().enumerate() {
        for h in &pool[x + 1..] {
            if !same_pair(g, h, tol) {
                return Some((g, h));
            }
        }
    }
    None
}

/// Decides a collection in PGL(2, C) from cross ratios of eigendirections.
///
/// The base pair is two hyperbolic generators if possible, then two
/// elliptic ones, then one of each. Generators sharing both fixed points
/// and the type of a base generator impose no further condition.
pub fn decide_pgl2(ms: &[ComplexMatrix], gens: &[Generator], tol: &Tolerances) -> Result<Decision> {
    if gens.len() < 2 {
        return Err(Error::Precondition("at least two generators are required".into()));
    }
    if gens[0].eig.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: gens[0].eig.dim() });
    }
    let mut s = Sheet { tol, conditions: Vec::new() };
    let redundant = |g: &Generator, base: &[&Generator]| {
        base.iter().any(|b| b.index == g.index || (is_hyperbolic(b) == is_hyperbolic(g) && same_pair(b, g, tol)))
    };
    if let Some((g1, g2)) = first_pair(gens, true, tol) {
        let (h1m, h1p) = ends(g1);
        let (h2m, h2p) = ends(g2);
        let v = s.cr(h1m, h2m, h1p, h2p).map(|x| vec![x]);
        s.push("[h1-, h2-, h1+, h2+]".into(), Some(g2.index), Test::Real, v);
        let n = if same_point(h2m, h1m, tol) || same_point(h2m, h1p, tol) { h2p } else { h2m };
        for g in gens.iter().filter(|g| !redundant(g, &[g1, g2])) {
            let (m, p) = ends(g);
            if is_hyperbolic(g) {
                for (tag, x) in [("-", m), ("+", p)] {
                    let v = s.cr(h1m, x, h1p, n).map(|x| vec![x]);
                    s.push(format!("[h1-, h{tag}, h1+, n]"), Some(g.index), Test::Real, v);
                }
            } else {
                let v = s.cr(h1m, m, h1p, n).zip(s.cr(h1m, p, h1p, n)).map(|(a, b)| vec![a, b]);
                s.push("[h1-, e-, h1+, n] = conj [h1-, e+, h1+, n]".into(), Some(g.index), Test::Conjugate, v);
            }
        }
    } else if let Some((g1, g2)) = first_pair(gens, false, tol) {
        let (e1m, e1p) = ends(g1);
        let (e2m, e2p) = ends(g2);
        let v = s.cr(e1m, e2m, e1p, e2p).map(|x| vec![x]);
        s.push("[e1-, e2-, e1+, e2+]".into(), Some(g2.index), Test::PositiveReal, v);
        for g in gens.iter().filter(|g| !redundant(g, &[g1, g2])) {
            let (m, p) = ends(g);
            if is_hyperbolic(g) {
                for (tag, x) in [("-", m), ("+", p)] {
                    let v = s.cr(e1m, x, e1p, e2m).zip(s.cr(e1m, x, e1p, e2p)).map(|(a, b)| vec![a.mul(&b)]);
                    s.push(format!("[e1-, h{tag}, e1+, e2-] [e1-, h{tag}, e1+, e2+]"), Some(g.index), Test::UnitCircle, v);
                }
            } else {
                let v = s.cr(e1m, m, e1p, p).map(|x| vec![x]);
                s.push("[e1-, e-, e1+, e+]".into(), Some(g.index), Test::PositiveReal, v);
                let v = s.cr(e2m, m, e2p, p).map(|x| vec![x]);
                s.push("[e2-, e-, e2+, e+]".into(), Some(g.index), Test::PositiveReal, v);
                let v = s.cr(e1m, m, e1p, e2m).zip(s.cr(e1m, p, e1p, e2p)).map(|(a, b)| vec![a.mul(&b)]);
                s.push("[e1-, e-, e1+, e2-] [e1-, e+, e1+, e2+]".into(), Some(g.index), Test::UnitCircle, v);
            }
        }
    } else {
        let h = gens.iter().find(|g| is_hyperbolic(g)).expect("a hyperbolic generator");
        let e = gens.iter().find(|g| !is_hyperbolic(g)).expect("an elliptic generator");
        let (hm, hp) = ends(h);
        let (em, ep) = ends(e);
        if same_pair(h, e, tol) {
            return Err(Error::SharedEigendirections);
        }
        let v = s.cr(hm, em, hp, ep).map(|x| vec![x]);
        s.push("[h-, e-, h+, e+]".into(), Some(e.index), Test::UnitCircle, v);
    }
    let passed = s.conditions.iter().all(|c| c.passed);
    let mut d = Decision::new(if passed { Verdict::Yes } else { Verdict::No }, Method::Dim2);
    d.conditions = s.conditions;
    Ok(attach_certificate(d, ms, gens, tol))
}

fn real_defect(x: &CrossRatio, tol: &Tolerances) -> C64 {
    match x.value() {
        Some(z) if !x.is_infinite(tol.deg_tol) => (z - z.conj()) / (1.0 + z.norm_sqr()),
        _ => C64::new(0.0, 0.0),
    }
}

/// The condition functions of a collection in PGL(2, C) whose first two
/// generators are hyperbolic. There are `2n - 3` of them and all vanish
/// exactly when the collection is conjugate into PGL(2, R).
///
/// Values are scaled by the chordal size of their arguments, so vanishing
/// can be tested against `cr_tol` whatever the position of the points.
pub fn condition_functions_pgl2(ms: &[ComplexMatrix], tol: &Tolerances) -> Result<Vec<C64>> {
    let gens = analyse(ms, tol)?;
    if gens[0].eig.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: gens[0].eig.dim() });
    }
    if gens.len() < 2 || !is_hyperbolic(&gens[0]) || !is_hyperbolic(&gens[1]) {
        return Err(Error::Precondition("the first two generators must be hyperbolic".into()));
    }
    if same_pair(&gens[0], &gens[1], tol) {
        return Err(Error::SharedEigendirections);
    }
    let (m1m, m1p) = ends(&gens[0]);
    let (m2m, m2p) = ends(&gens[1]);
    let cr = |b: &ProjPoint, d: &ProjPoint| cross_ratio(m1m, b, m1p, d, tol);
    let mut out = vec![real_defect(&cr(m2m, m2p)?, tol)];
    for g in &gens[2..] {
        let (mm, mp) = ends(g);
        let x = cr(mm, m2p)?;
        let y = cr(mp, m2p)?;
        if is_hyperbolic(g) {
            out.push(real_defect(&x, tol));
            out.push(real_defect(&y, tol));
            continue;
        }
        match (x.value().filter(|_| !x.is_infinite(tol.deg_tol)), y.value().filter(|_| !y.is_infinite(tol.deg_tol))) {
            (Some(x), Some(y)) => {
                let scale = ((1.0 + x.norm_sqr()) * (1.0 + y.norm_sqr())).sqrt();
                out.push(((x - x.conj()) - (y.conj() - y)) / scale);
                out.push(((x + x.conj()) - (y.conj() + y)) / scale);
            }
            (None, None) => out.extend([C64::new(0.0, 0.0); 2]),
            _ => out.extend([C64::new(1.0, 0.0); 2]),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::{decide, decide_direct};
    use crate::linalg::{c, CMat};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    /// Elliptic map fixing `p` and `q` with rotation angle 1.
    fn elliptic(p: C64, q: C64) -> ComplexMatrix {
        let g = CMat::from_row_slice(2, 2, &[p, q, c(1.0, 0.0), c(1.0, 0.0)]);
        let d = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::from_polar(1.0, 1.0), C64::from_polar(1.0, -1.0)]));
        ComplexMatrix::new(&g * d * g.try_inverse().unwrap(), &tol()).unwrap()
    }

    fn elliptic_at_infinity() -> ComplexMatrix {
        let d = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::from_polar(1.0, 0.7), C64::from_polar(1.0, -0.7)]));
        ComplexMatrix::new(d, &tol()).unwrap()
    }

    #[test]
    fn three_elliptics_without_common_circle() {
        let ms = vec![elliptic_at_infinity(), elliptic(c(1.0, 0.0), c(4.0, 0.0)), elliptic(c(2.0, 0.0), c(3.0, 0.0))];
        let gens = analyse(&ms, &tol()).unwrap();
        let d = decide_pgl2(&ms, &gens, &tol()).unwrap();
        assert_eq!(d.verdict, Verdict::No);
        let pairwise: Vec<bool> = d.conditions.iter().filter(|c| c.test == Test::PositiveReal).map(|c| c.passed).collect();
        assert!(pairwise.iter().all(|&p| p));
        assert!(!decide_direct(&ms, &gens, &tol()).is_yes());
    }

    #[test]
    fn three_elliptics_on_a_circle() {
        let ms = vec![elliptic_at_infinity(), elliptic(c(1.0, 0.0), c(4.0, 0.0)), elliptic(c(0.0, 3.0), c(0.0, 4.0 / 3.0))];
        let d = decide(&ms, Method::Dim2, &tol()).unwrap();
        assert!(d.is_yes(), "{d:?}");
        assert!(d.certificate.unwrap().residual < 1e-9);
    }

    #[test]
    fn elliptic_not_inverted() {
        let ms = vec![elliptic_at_infinity(), elliptic(c(1.0, 0.0), c(-1.0, 0.0))];
        let d = decide(&ms, Method::Dim2, &tol()).unwrap();
        assert_eq!(d.verdict, Verdict::No);
        let v = d.conditions[0].values[0].value().unwrap();
        assert!((v - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn condition_count() {
        let h = |a: f64, b: f64| {
            let g = CMat::from_row_slice(2, 2, &[c(a, 0.0), c(b, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
            let d = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(2.0, 0.0), c(1.0, 0.0)]));
            ComplexMatrix::new(&g * d * g.try_inverse().unwrap(), &tol()).unwrap()
        };
        let ms = vec![h(0.0, 1.0), h(2.0, 5.0), h(-1.0, 3.0), elliptic(c(0.5, 1.0), c(0.5, -1.0)), h(7.0, -2.0)];
        let f = condition_functions_pgl2(&ms, &tol()).unwrap();
        assert_eq!(f.len(), 7);
        assert!(f.iter().all(|z| z.norm() < 1e-12));
    }
}

use crate::projlin::ComplexMatrix;
use crate::rform::{preservation_defect, search_conjugations, Multiplicity};
use crate::spectrum::AdmissibleLine;
use crate::tol::Tolerances;

use super::{eigendata, verify_certificate, Certificate, Decision, Generator, Method, Verdict};

const MAX_LABELLINGS: usize = 4096;

fn labellings(gens: &[Generator]) -> Vec<Vec<&AdmissibleLine>> {
    let mut out: Vec<Vec<&AdmissibleLine>> = vec![Vec::new()];
    for g in gens {
        let mut next = Vec::with_capacity(out.len() * g.class.lines.len());
        for prefix in &out {
            for line in &g.class.lines {
                let mut v = prefix.clone();
                v.push(line);
                next.push(v);
            }
        }
        next.truncate(MAX_LABELLINGS);
        out = next;
    }
    out
}

/// Solves for an involution respecting every eigendirection of every
/// generator and checks that each generator preserves its real form.
///
/// Non-generic spectra admit several labellings; each is tried in turn.
pub fn decide_direct(ms: &[ComplexMatrix], gens: &[Generator], tol: &Tolerances) -> Decision {
    let mut d = Decision::new(Verdict::No, Method::Direct);
    let mut reasons = Vec::new();
    for lines in labellings(gens) {
        let found = search_conjugations(&eigendata(gens, &lines), tol);
        let mult = found.multiplicity();
        let Some(w) = found.witness else {
            reasons.push(found.reason.unwrap_or_default());
            continue;
        };
        let worst = ms.iter().map(|m| preservation_defect(m, &w)).fold(0.0, f64::max);
        if worst >= tol.cert_tol.max(tol.eig_tol) {
            reasons.push(format!("respecting involution found but preservation defect is {worst:.3e}"));
            continue;
        }
        let gamma = crate::rform::realifier(&crate::rform::rform_from_conjugation(&w));
        let residual = verify_certificate(ms, &gamma);
        d.verdict = Verdict::Yes;
        d.multiplicity = Some(mult);
        d.certificate = Some(Certificate { gamma, residual });
        return d;
    }
    d.multiplicity = Some(Multiplicity::Zero);
    reasons.dedup();
    d.diagnostics.extend(reasons);
    d
}

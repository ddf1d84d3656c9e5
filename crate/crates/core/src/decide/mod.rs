//! Decision procedures for simultaneous conjugacy into PGL(k, R).
//!
//! Every procedure returns a [`Decision`]. A `Yes` carries a certificate
//! `Γ` such that every `Γ^-1 M Γ` is a complex multiple of a real matrix.

mod cross;
mod direct;
mod fg;
mod pgl2;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use cross::{decide_pglk_cross_only, elliptic_pair_conditions, hyperbolic_direction_conditions};
pub use direct::decide_direct;
pub use fg::{coordinate_report, decide_pgl3, decide_pglk_fg, CoordinateReport, FlagCoordinates};
pub use pgl2::{condition_functions_pgl2, decide_pgl2};

use crate::coords::CrossRatio;
use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};
use crate::projlin::{eig, ComplexMatrix, EigenSystem};
use crate::rform::{realifier, rform_from_conjugation, search_conjugations, EigenData, Multiplicity};
use crate::spectrum::{classify_eigenvalues, AdmissibleLine, SpectralClass, SpectralKind};
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
}

/// Requested procedure. `Auto` picks the most specific applicable one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Auto,
    Dim2,
    Dim3,
    Fg,
    Cross,
    Direct,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Auto => "auto",
            Method::Dim2 => "dim2",
            Method::Dim3 => "dim3",
            Method::Fg => "fg",
            Method::Cross => "cross",
            Method::Direct => "direct",
        };
        f.write_str(s)
    }
}

/// Membership test applied to the values of a [`Condition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Test {
    /// The value lies in `R ∪ {∞}`.
    Real,
    /// The value lies in `(0, ∞)`.
    PositiveReal,
    /// The value has modulus 1.
    UnitCircle,
    /// The first value equals the conjugate of the second.
    Conjugate,
    /// The first value equals the second.
    Equal,
    /// The value, a product of cross ratios, is a positive real.
    ArgumentSum,
}

/// One evaluated coordinate condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub label: String,
    pub generator: Option<usize>,
    pub test: Test,
    pub values: Vec<CrossRatio>,
    pub passed: bool,
}

impl Condition {
    pub(crate) fn evaluate(label: String, generator: Option<usize>, test: Test, values: Vec<CrossRatio>, tol: &Tolerances) -> Self {
        let t = tol.cr_tol;
        let passed = match test {
            Test::Real => values[0].is_real(t),
            Test::PositiveReal => values[0].is_positive_real(t),
            Test::UnitCircle => values[0].on_unit_circle(t),
            Test::Conjugate => values[0].approx_eq(&values[1].conj(), t),
            Test::Equal => values[0].approx_eq(&values[1], t),
            Test::ArgumentSum => match values[0].value() {
                Some(z) if z.norm() > 0.0 => (z / z.norm() - 1.0).norm() < t,
                _ => false,
            },
        };
        Condition { label, generator, test, values, passed }
    }
}

/// A conjugating matrix and its measured residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub gamma: CMat,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub verdict: Verdict,
    pub method: Method,
    pub conditions: Vec<Condition>,
    pub certificate: Option<Certificate>,
    pub multiplicity: Option<Multiplicity>,
    pub diagnostics: Vec<String>,
}

impl Decision {
    pub(crate) fn new(verdict: Verdict, method: Method) -> Self {
        Decision { verdict, method, conditions: Vec::new(), certificate: None, multiplicity: None, diagnostics: Vec::new() }
    }

    pub fn is_yes(&self) -> bool {
        self.verdict == Verdict::Yes
    }

    /// Conditions that failed.
    pub fn failures(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.passed)
    }
}

/// Eigen-decomposition and spectral class of one generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub index: usize,
    pub eig: EigenSystem,
    pub class: SpectralClass,
}

impl Generator {
    pub fn line(&self) -> &AdmissibleLine {
        self.class.primary().expect("compatible generator")
    }

    pub fn kind(&self) -> SpectralKind {
        self.line().kind()
    }

    /// Elliptic pairs `(i, partner)` with `i < partner`, in eigenvalue order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.line()
            .labels
            .iter()
            .enumerate()
            .filter_map(|(i, l)| match *l {
                crate::spectrum::EigenLabel::Elliptic { partner } if i < partner => Some((i, partner)),
                _ => None,
            })
            .collect()
    }

    pub fn hyperbolic(&self) -> Vec<usize> {
        self.line().labels.iter().enumerate().filter(|(_, l)| l.is_hyperbolic()).map(|(i, _)| i).collect()
    }
}

/// Validates dimensions and computes every generator's eigensystem and
/// spectral class. Incompatible spectra are reported as errors.
pub fn analyse(ms: &[ComplexMatrix], tol: &Tolerances) -> Result<Vec<Generator>> {
    let k = ms.first().map(|m| m.dim()).ok_or_else(|| Error::Precondition("no generators".into()))?;
    if k < 2 {
        return Err(Error::Precondition("dimension must be at least 2".into()));
    }
    let mut out = Vec::with_capacity(ms.len());
    for (index, m) in ms.iter().enumerate() {
        if m.dim() != k {
            return Err(Error::DimensionMismatch { expected: k, found: m.dim() });
        }
        let es = eig(m, tol).map_err(|e| e.at_matrix(index))?;
        let class = classify_eigenvalues(&es.values, tol);
        if !class.is_compatible() {
            return Err(Error::IncompatibleEigenvalues { matrix: index });
        }
        out.push(Generator { index, eig: es, class });
    }
    Ok(out)
}

pub(crate) fn require_generic(gens: &[Generator]) -> Result<()> {
    match gens.iter().find(|g| !g.class.generic) {
        Some(g) => Err(Error::GenericityViolation(format!("generator {} has a non-generic spectrum", g.index))),
        None => Ok(()),
    }
}

pub(crate) fn eigendata(gens: &[Generator], lines: &[&AdmissibleLine]) -> EigenData {
    let mut d = EigenData::new();
    for (g, line) in gens.iter().zip(lines) {
        d.push_system(&g.eig, line);
    }
    d
}

/// Largest imaginary part among the entries of the projectively normalised
/// matrices `Γ^-1 M Γ`. The phase of each matrix is chosen to minimise the
/// squared imaginary parts, which has a closed form.
pub fn verify_certificate(ms: &[ComplexMatrix], gamma: &CMat) -> f64 {
    let Some(gi) = gamma.clone().try_inverse() else {
        return f64::INFINITY;
    };
    ms.iter()
        .map(|m| {
            let n = &gi * m.matrix() * gamma;
            let top = n.iter().fold(0.0f64, |a, z| a.max(z.norm()));
            if top == 0.0 || !top.is_finite() {
                return f64::INFINITY;
            }
            let n = n / C64::from(top);
            let sq: C64 = n.iter().map(|z| z * z).sum();
            let phase = C64::from_polar(1.0, -sq.arg() / 2.0);
            n.iter().map(|z| (z * phase).im.abs()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Builds a certificate from the involutions respecting the generators'
/// eigendirections under the given labelling.
pub(crate) fn certify(ms: &[ComplexMatrix], gens: &[Generator], lines: &[&AdmissibleLine], tol: &Tolerances) -> (Option<Certificate>, Multiplicity) {
    let data = eigendata(gens, lines);
    let found = search_conjugations(&data, tol);
    let mult = found.multiplicity();
    let cert = found.witness.map(|w| {
        let gamma = realifier(&rform_from_conjugation(&w));
        let residual = verify_certificate(ms, &gamma);
        Certificate { gamma, residual }
    });
    (cert, mult)
}

pub(crate) fn primary_lines(gens: &[Generator]) -> Vec<&AdmissibleLine> {
    gens.iter().map(|g| g.line()).collect()
}

/// Attaches a certificate to a coordinate-based `Yes`.
pub(crate) fn attach_certificate(mut d: Decision, ms: &[ComplexMatrix], gens: &[Generator], tol: &Tolerances) -> Decision {
    let (cert, mult) = certify(ms, gens, &primary_lines(gens), tol);
    d.multiplicity = Some(mult);
    if d.is_yes() {
        if cert.is_none() {
            d.diagnostics.push("coordinate conditions hold but no respecting involution was found".into());
        }
        d.certificate = cert;
    }
    d
}

fn run(ms: &[ComplexMatrix], gens: &[Generator], method: Method, tol: &Tolerances) -> Result<Decision> {
    match method {
        Method::Dim2 => decide_pgl2(ms, gens, tol),
        Method::Dim3 => decide_pgl3(ms, gens, tol),
        Method::Fg => decide_pglk_fg(ms, gens, tol),
        Method::Cross => decide_pglk_cross_only(ms, gens, tol),
        Method::Direct => Ok(decide_direct(ms, gens, tol)),
        Method::Auto => unreachable!("resolved by decide"),
    }
}

/// Decides whether `ms` is simultaneously conjugate into PGL(k, R).
///
/// With `Method::Auto` the dimension-specific procedures are tried first, then
/// the flag-coordinate criteria, then cross ratios alone, and finally the
/// direct conjugation solve. A `Yes` is only returned together with a
/// certificate whose residual is below `cert_tol`.
pub fn decide(ms: &[ComplexMatrix], method: Method, tol: &Tolerances) -> Result<Decision> {
    let gens = analyse(ms, tol)?;
    let k = gens[0].eig.dim();
    let mut notes = Vec::new();
    let mut decision = if method != Method::Auto {
        run(ms, &gens, method, tol)?
    } else if gens.len() == 1 {
        decide_direct(ms, &gens, tol)
    } else {
        let cascade: &[Method] = match k {
            2 => &[Method::Dim2],
            3 => &[Method::Dim3, Method::Cross],
            _ => &[Method::Fg, Method::Cross],
        };
        let mut chosen = None;
        for &m in cascade {
            match run(ms, &gens, m, tol) {
                Ok(d) => {
                    chosen = Some(d);
                    break;
                }
                Err(e) if !e.is_spectral() => notes.push(format!("{m} not applicable: {e}")),
                Err(e) => return Err(e),
            }
        }
        match chosen {
            Some(d) if d.method == Method::Cross && !d.is_yes() => {
                let confirm = decide_direct(ms, &gens, tol);
                if confirm.is_yes() {
                    notes.push("cross-ratio conditions failed; direct conjugation succeeded".into());
                    confirm
                } else {
                    d
                }
            }
            Some(d) => d,
            None => decide_direct(ms, &gens, tol),
        }
    };
    decision.diagnostics.splice(0..0, notes);
    if decision.is_yes() {
        let ok = decision.certificate.as_ref().is_some_and(|c| c.residual < tol.cert_tol);
        if !ok {
            decision.verdict = Verdict::No;
            decision.diagnostics.push("certificate residual exceeds cert_tol".into());
        }
    }
    Ok(decision)
}

/// Decides each collection independently, in parallel when enabled.
pub fn decide_batch(batch: &[Vec<ComplexMatrix>], method: Method, tol: &Tolerances, exec: crate::par::Exec) -> Vec<Result<Decision>> {
    crate::par::map(batch, exec, |ms| decide(ms, method, tol))
}

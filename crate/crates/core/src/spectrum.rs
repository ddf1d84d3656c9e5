//! Classification of eigenvalue spectra against lines through the origin.
//!
//! A diagonalizable element of PGL(k, C) with projectively distinct
//! eigenvalues is conjugate into PGL(k, R) exactly when some line
//! `e^{iθ}R` makes every eigenvalue either lie on the line or be the
//! reflection of another eigenvalue across it.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::linalg::C64;
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectralKind {
    StrictlyHyperbolic,
    StrictlyElliptic,
    Mixed,
    Incompatible,
}

/// Role of one eigenvalue relative to an admissible line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EigenLabel {
    Hyperbolic,
    Elliptic { partner: usize },
}

impl EigenLabel {
    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, EigenLabel::Hyperbolic)
    }

    /// Index the conjugation should send eigendirection `i` to.
    pub fn image(&self, i: usize) -> usize {
        match *self {
            EigenLabel::Hyperbolic => i,
            EigenLabel::Elliptic { partner } => partner,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleLine {
    /// Angle of the line in `[0, π)`.
    pub theta: f64,
    pub labels: Vec<EigenLabel>,
}

impl AdmissibleLine {
    pub fn kind(&self) -> SpectralKind {
        let hyperbolic = self.labels.iter().filter(|l| l.is_hyperbolic()).count();
        if hyperbolic == self.labels.len() {
            SpectralKind::StrictlyHyperbolic
        } else if hyperbolic == 0 {
            SpectralKind::StrictlyElliptic
        } else {
            SpectralKind::Mixed
        }
    }

    pub fn hyperbolic_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_hyperbolic()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralClass {
    pub kind: SpectralKind,
    pub lines: Vec<AdmissibleLine>,
    pub generic: bool,
}

impl SpectralClass {
    pub fn is_compatible(&self) -> bool {
        !self.lines.is_empty()
    }

    /// The line used when a single labelling is needed.
    pub fn primary(&self) -> Option<&AdmissibleLine> {
        self.lines.first()
    }
}

fn wrap_pi(theta: f64) -> f64 {
    let t = theta.rem_euclid(PI);
    if PI - t < 1e-14 {
        0.0
    } else {
        t
    }
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

fn labels_for(values: &[C64], theta: f64, tol: f64) -> Option<Vec<EigenLabel>> {
    let rot = C64::from_polar(1.0, -theta);
    let refl = C64::from_polar(1.0, 2.0 * theta);
    let mut labels: Vec<Option<EigenLabel>> = vec![None; values.len()];
    for i in 0..values.len() {
        if labels[i].is_some() {
            continue;
        }
        let z = values[i];
        let r = z * rot;
        if r.im.abs() <= tol * z.norm() {
            labels[i] = Some(EigenLabel::Hyperbolic);
            continue;
        }
        let mirror = refl * z.conj();
        let j = (0..values.len())
            .filter(|&j| j != i && labels[j].is_none())
            .find(|&j| (values[j] - mirror).norm() <= tol * z.norm())?;
        labels[i] = Some(EigenLabel::Elliptic { partner: j });
        labels[j] = Some(EigenLabel::Elliptic { partner: i });
    }
    labels.into_iter().collect()
}

/// Finds every admissible line for `values` and labels the eigenvalues
/// against each.
pub fn classify_eigenvalues(values: &[C64], tol: &Tolerances) -> SpectralClass {
    let mut candidates: Vec<f64> = Vec::new();
    for (i, a) in values.iter().enumerate() {
        candidates.push(wrap_pi(a.arg()));
        for b in &values[i + 1..] {
            candidates.push(wrap_pi((a.arg() + b.arg()) / 2.0));
        }
    }
    let mut lines: Vec<AdmissibleLine> = Vec::new();
    for theta in candidates {
        if lines.iter().any(|l| angle_gap(l.theta, theta) < tol.angle_tol) {
            continue;
        }
        if let Some(labels) = labels_for(values, theta, tol.angle_tol) {
            lines.push(AdmissibleLine { theta, labels });
        }
    }
    lines.sort_by(|a, b| a.theta.total_cmp(&b.theta));

    let antipodal = values.iter().enumerate().any(|(i, a)| {
        values[i + 1..].iter().any(|b| (-*b / *a - 1.0).norm() < tol.sep_tol)
    });
    let generic = lines.len() == 1 && !antipodal;
    let kind = if lines.is_empty() {
        SpectralKind::Incompatible
    } else if lines.iter().any(|l| l.kind() == SpectralKind::StrictlyHyperbolic) {
        SpectralKind::StrictlyHyperbolic
    } else if lines.iter().any(|l| l.kind() == SpectralKind::StrictlyElliptic) {
        SpectralKind::StrictlyElliptic
    } else {
        SpectralKind::Mixed
    };
    SpectralClass { kind, lines, generic }
}

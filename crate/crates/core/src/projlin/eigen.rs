use std::cmp::Ordering;
use std::f64::consts::TAU;

use nalgebra::Schur;

use super::{ComplexMatrix, ProjPoint};
use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, C64};
use crate::tol::Tolerances;

/// Eigenvalues with their eigendirections, sorted by argument in `[0, 2π)`
/// and then by modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub values: Vec<C64>,
    pub vectors: Vec<ProjPoint>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Eigendirections as raw vectors.
    pub fn vector_list(&self) -> Vec<CVec> {
        self.vectors.iter().map(|p| p.coords().clone()).collect()
    }
}

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 10_000;

pub(crate) fn arg_key(z: C64, angle_tol: f64) -> f64 {
    let mut a = z.arg();
    if a < 0.0 {
        a += TAU;
    }
    if TAU - a < angle_tol {
        a = 0.0;
    }
    a
}

fn order(a: C64, b: C64, angle_tol: f64) -> Ordering {
    let (ka, kb) = (arg_key(a, angle_tol), arg_key(b, angle_tol));
    if (ka - kb).abs() > angle_tol {
        ka.total_cmp(&kb)
    } else {
        a.norm().total_cmp(&b.norm())
    }
}

/// Eigen-decomposition of a diagonalizable matrix with projectively distinct
/// eigenvalues.
pub fn eig(m: &ComplexMatrix, tol: &Tolerances) -> Result<EigenSystem> {
    let a = m.matrix();
    let k = m.dim();
    let scale = a.norm();
    let a = a / C64::from(scale);
    let schur = Schur::try_new(a.clone(), SCHUR_EPS, SCHUR_MAX_ITER).ok_or(Error::NoConvergence { matrix: 0 })?;
    let (_, t) = schur.unpack();
    let mut values: Vec<C64> = (0..k).map(|i| t[(i, i)]).collect();
    values.sort_by(|x, y| order(*x, *y, tol.angle_tol));

    for i in 0..k {
        for j in i + 1..k {
            if (values[i] / values[j] - 1.0).norm() < tol.sep_tol {
                return Err(Error::RepeatedEigenvalues { matrix: 0, first: i, second: j });
            }
        }
    }

    let mut vectors = Vec::with_capacity(k);
    for &lambda in &values {
        let shifted = &a - CMat::identity(k, k) * lambda;
        let svd = shifted.clone().svd(false, true);
        let v_t = svd.v_t.expect("requested V^H");
        let (idx, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(y.1))
            .expect("non-empty");
        let v: CVec = v_t.row(idx).transpose().map(|z| z.conj());
        let residual = (&shifted * &v).norm() / v.norm();
        if residual > tol.eig_tol {
            return Err(Error::NonDiagonalizable { matrix: 0, residual });
        }
        vectors.push(ProjPoint::new(v)?);
    }
    let values = values.into_iter().map(|v| v * scale).collect();
    Ok(EigenSystem { values, vectors })
}

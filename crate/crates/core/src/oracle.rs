//! Ground-truth instances and an independent brute-force check.
//!
//! Instances are real diagonalizable matrices with prescribed spectral
//! types, optionally conjugated by one random complex matrix `Γ`. A
//! perturbed instance moves a single eigendirection of one generator off
//! the real form before conjugating.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::decide::{verify_certificate, Verdict};
use crate::error::{Error, Result};
use crate::linalg::{conditioning, CMat, CVec, C64};
use crate::par::{self, Exec};
use crate::projlin::ComplexMatrix;
use crate::tol::Tolerances;

/// Spectral type requested for a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorType {
    /// Distinct real eigenvalues.
    Hyperbolic,
    /// Conjugate pairs only, plus one real eigenvalue when `k` is odd.
    Elliptic,
    /// At least one conjugate pair and at least one real eigenvalue beyond
    /// what the elliptic type uses.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct TypeMix {
    pub hyperbolic: usize,
    pub elliptic: usize,
    pub mixed: usize,
}

impl TypeMix {
    pub fn total(&self) -> usize {
        self.hyperbolic + self.elliptic + self.mixed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scramble {
    None,
    #[default]
    RandomGamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub generator: usize,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub k: usize,
    pub n_generators: usize,
    pub mix: TypeMix,
    pub seed: u64,
    #[serde(default)]
    pub scramble: Scramble,
    #[serde(default)]
    pub perturbation: Option<Perturbation>,
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InfeasibleSpec(m));
        if self.k < 2 {
            return bad(format!("k = {} is below 2", self.k));
        }
        if self.n_generators == 0 {
            return bad("no generators requested".into());
        }
        if self.mix.total() != self.n_generators {
            return bad(format!("type mix sums to {} but {} generators were requested", self.mix.total(), self.n_generators));
        }
        if self.mix.mixed > 0 && self.k < 3 {
            return bad("mixed generators need k >= 3".into());
        }
        if let Some(p) = self.perturbation {
            if p.generator >= self.n_generators {
                return bad(format!("perturbed generator {} does not exist", p.generator));
            }
            if !(p.magnitude > 0.0 && p.magnitude.is_finite()) {
                return bad("perturbation magnitude must be positive".into());
            }
        }
        Ok(())
    }
}

/// A generated collection with its ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub matrices: Vec<ComplexMatrix>,
    pub types: Vec<GeneratorType>,
    pub truth: Verdict,
    /// The scrambling matrix. For `Yes` instances every `Γ^-1 M Γ` is a
    /// complex multiple of a real matrix.
    pub gamma: CMat,
}

const MIN_GAP: f64 = 0.1;
const MAX_CONDITION: f64 = 20.0;

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn well_separated(values: &[C64]) -> bool {
    values.iter().enumerate().all(|(i, a)| {
        values[i + 1..].iter().all(|b| {
            let r = a / b;
            (r - 1.0).norm() >= MIN_GAP && (r + 1.0).norm() >= MIN_GAP
        })
    })
}

/// Eigenvalues of a real matrix: `(value, paired)` where paired values come
/// as `a + ib` followed implicitly by `a - ib`.
fn sample_spectrum(rng: &mut ChaCha8Rng, k: usize, pairs: usize) -> Vec<C64> {
    loop {
        let mut out = Vec::with_capacity(k);
        for _ in 0..pairs {
            let r = rng.gen_range(-1.0f64..1.0).exp();
            let phi = rng.gen_range(0.15..PI - 0.15);
            out.push(C64::from_polar(r, phi));
        }
        for _ in 0..k - 2 * pairs {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            out.push(C64::new(sign * rng.gen_range(-1.5f64..1.5).exp(), 0.0));
        }
        let mut full: Vec<C64> = out[..pairs].iter().flat_map(|z| [*z, z.conj()]).collect();
        full.extend_from_slice(&out[pairs..]);
        if well_separated(&full) {
            return out;
        }
    }
}

fn random_real(rng: &mut ChaCha8Rng, k: usize) -> CMat {
    loop {
        let m = CMat::from_fn(k, k, |_, _| C64::new(normal(rng), 0.0));
        let cols: Vec<CVec> = (0..k).map(|j| m.column(j).into_owned()).collect();
        if conditioning(&cols) > 1.0 / MAX_CONDITION {
            return m;
        }
    }
}

fn random_complex(rng: &mut ChaCha8Rng, k: usize) -> CMat {
    loop {
        let m = CMat::from_fn(k, k, |_, _| C64::new(normal(rng), normal(rng)));
        let cols: Vec<CVec> = (0..k).map(|j| m.column(j).into_owned()).collect();
        if conditioning(&cols) > 1.0 / MAX_CONDITION {
            return m;
        }
    }
}

/// Eigenvectors and eigenvalues of a real generator, as complex columns.
struct Eigen {
    vectors: CMat,
    values: Vec<C64>,
    /// Index of the conjugate partner, or itself for real eigenvalues.
    partner: Vec<usize>,
}

fn real_generator(rng: &mut ChaCha8Rng, k: usize, ty: GeneratorType) -> Eigen {
    let pairs = match ty {
        GeneratorType::Hyperbolic => 0,
        GeneratorType::Elliptic => k / 2,
        GeneratorType::Mixed => {
            let most = (k - 1) / 2;
            if k % 2 == 1 && most > 1 {
                rng.gen_range(1..most)
            } else {
                rng.gen_range(1..=most)
            }
        }
    };
    let spec = sample_spectrum(rng, k, pairs);
    let r = random_real(rng, k);
    let mut vectors = CMat::zeros(k, k);
    let mut values = Vec::with_capacity(k);
    let mut partner = Vec::with_capacity(k);
    for (p, z) in spec[..pairs].iter().enumerate() {
        let (a, b) = (r.column(2 * p).into_owned(), r.column(2 * p + 1).into_owned());
        let v = &a - &b * C64::i();
        vectors.set_column(2 * p, &v);
        vectors.set_column(2 * p + 1, &v.map(|x| x.conj()));
        values.extend([*z, z.conj()]);
        partner.extend([2 * p + 1, 2 * p]);
    }
    for (q, z) in spec[pairs..].iter().enumerate() {
        let j = 2 * pairs + q;
        vectors.set_column(j, &r.column(j));
        values.push(*z);
        partner.push(j);
    }
    Eigen { vectors, values, partner }
}

fn unit(v: &CVec) -> CVec {
    v / C64::from(v.norm())
}

/// Random unit vector orthogonal to every vector in `against`.
fn orthogonal(rng: &mut ChaCha8Rng, k: usize, against: &[CVec], real: bool) -> CVec {
    loop {
        let mut u = CVec::from_fn(k, |_, _| C64::new(normal(rng), if real { 0.0 } else { normal(rng) }));
        for _ in 0..2 {
            for a in against {
                let a = unit(a);
                let p = a.dotc(&u);
                u -= a * p;
            }
        }
        if real {
            u = u.map(|z| C64::new(z.re, 0.0));
        }
        if u.norm() > 1e-3 {
            return unit(&u);
        }
    }
}

/// Moves one eigendirection off the standard real form by `eps`.
fn perturb(rng: &mut ChaCha8Rng, e: &mut Eigen, eps: f64) {
    let k = e.values.len();
    let t = rng.gen_range(0..k);
    let v = unit(&e.vectors.column(t).into_owned());
    let moved = if e.partner[t] == t {
        let u = orthogonal(rng, k, std::slice::from_ref(&v), true);
        &v + u * C64::new(0.0, eps)
    } else {
        let vbar = v.map(|z| z.conj());
        let against = if k > 2 { vec![v.clone(), vbar] } else { vec![v.clone()] };
        let u = orthogonal(rng, k, &against, false);
        &v + u * C64::from_polar(eps, rng.gen_range(0.0..2.0 * PI))
    };
    e.vectors.set_column(t, &moved);
}

fn assemble(e: &Eigen) -> Option<CMat> {
    let inv = e.vectors.clone().try_inverse()?;
    let d = CMat::from_diagonal(&CVec::from_vec(e.values.clone()));
    Some(&e.vectors * d * inv)
}

/// Builds an instance. Deterministic in `spec`.
pub fn generate(spec: &InstanceSpec, tol: &Tolerances) -> Result<Instance> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let k = spec.k;
    let mut types = Vec::with_capacity(spec.n_generators);
    types.extend(std::iter::repeat_n(GeneratorType::Hyperbolic, spec.mix.hyperbolic));
    types.extend(std::iter::repeat_n(GeneratorType::Elliptic, spec.mix.elliptic));
    types.extend(std::iter::repeat_n(GeneratorType::Mixed, spec.mix.mixed));
    types.shuffle(&mut rng);
    let gamma = match spec.scramble {
        Scramble::None => CMat::identity(k, k),
        Scramble::RandomGamma => random_complex(&mut rng, k),
    };
    let gi = gamma.clone().try_inverse().ok_or(Error::Singular)?;
    let mut matrices = Vec::with_capacity(types.len());
    for (g, &ty) in types.iter().enumerate() {
        let mut e = real_generator(&mut rng, k, ty);
        let perturbed = spec.perturbation.filter(|p| p.generator == g);
        let m = match perturbed {
            Some(p) => {
                perturb(&mut rng, &mut e, p.magnitude);
                assemble(&e).ok_or(Error::Singular)?
            }
            None => assemble(&e).ok_or(Error::Singular)?.map(|z| C64::new(z.re, 0.0)),
        };
        let scale = C64::from_polar(rng.gen_range(-0.5f64..0.5).exp(), rng.gen_range(0.0..2.0 * PI));
        let m = &gamma * m * &gi * scale;
        matrices.push(ComplexMatrix::new(m, tol)?);
    }
    let truth = if spec.perturbation.is_some() { Verdict::No } else { Verdict::Yes };
    Ok(Instance { matrices, types, truth, gamma })
}

/// A random feasible spec with `2..=6` generators of mixed types.
pub fn random_spec(k: usize, seed: u64) -> InstanceSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let n = rng.gen_range(2..=6);
    let mut mix = TypeMix::default();
    for _ in 0..n {
        match rng.gen_range(0..if k >= 3 { 3 } else { 2 }) {
            0 => mix.hyperbolic += 1,
            1 => mix.elliptic += 1,
            _ => mix.mixed += 1,
        }
    }
    InstanceSpec { k, n_generators: n, mix, seed, scramble: Scramble::RandomGamma, perturbation: None }
}

/// The same spec with one generator perturbed by `magnitude`.
pub fn perturbed(spec: &InstanceSpec, magnitude: f64) -> InstanceSpec {
    let mut s = spec.clone();
    let generator = (spec.seed % spec.n_generators as u64) as usize;
    s.perturbation = Some(Perturbation { generator, magnitude });
    s
}

pub fn generate_batch(specs: &[InstanceSpec], tol: &Tolerances, exec: Exec) -> Vec<Result<Instance>> {
    par::map(specs, exec, |s| generate(s, tol))
}

/// Certificate residual of the construction matrix; tiny for `Yes` instances.
pub fn truth_residual(inst: &Instance) -> f64 {
    verify_certificate(&inst.matrices, &inst.gamma)
}

/// Hermitian 2×2 matrix as `(h11, h22, Re h12, Im h12)`.
type Herm = [f64; 4];

/// `M* H M` for Hermitian `H`.
fn congruence(m: &[C64; 4], h: &Herm) -> Herm {
    let h12 = C64::new(h[2], h[3]);
    let hm = [
        m[0] * h[0] + m[2] * h12,
        m[1] * h[0] + m[3] * h12,
        m[0] * h12.conj() + m[2] * h[1],
        m[1] * h12.conj() + m[3] * h[1],
    ];
    let x11 = m[0].conj() * hm[0] + m[2].conj() * hm[2];
    let x22 = m[1].conj() * hm[1] + m[3].conj() * hm[3];
    let x12 = m[0].conj() * hm[1] + m[2].conj() * hm[3];
    [x11.re, x22.re, x12.re, x12.im]
}

/// Circle `{x ∈ S^2 : n·x = h}` on the Riemann sphere as a Hermitian form.
fn circle(alpha: f64, beta: f64, h: f64) -> Herm {
    let n = [alpha.sin() * beta.cos(), alpha.sin() * beta.sin(), alpha.cos()];
    [n[2] - h, -(n[2] + h), n[0], n[1]]
}

/// Frobenius inner product of Hermitian matrices.
fn inner(a: &Herm, b: &Herm) -> f64 {
    a[0] * b[0] + a[1] * b[1] + 2.0 * (a[2] * b[2] + a[3] * b[3])
}

/// Squared relative residual `min ‖X ∓ H‖² / ‖H‖²`. For `|det M| = 1`,
/// `M` preserves the circle of `H` exactly when `M* H M = ±H`.
fn residual2(x: &Herm, h: &Herm) -> f64 {
    let hh = inner(h, h);
    if hh == 0.0 {
        return f64::INFINITY;
    }
    let e = inner(x, h).signum();
    let d: Herm = std::array::from_fn(|t| x[t] - e * h[t]);
    inner(&d, &d) / hh
}

fn defect(m: &[C64; 4], h: &Herm) -> f64 {
    residual2(&congruence(m, h), h).sqrt()
}

fn worst(ms: &[[C64; 4]], h: &Herm) -> f64 {
    ms.iter().map(|m| defect(m, h)).fold(0.0, f64::max)
}

/// Result of [`brute_rform_search`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteResult {
    /// Smallest worst-case defect over circles. With `M` scaled to
    /// `|det M| = 1`, a generator's defect for a circle `H` is
    /// `min ‖M* H M ∓ H‖ / ‖H‖` in the Frobenius norm, which vanishes exactly
    /// when `M` preserves the circle. It depends on the coordinates the
    /// matrices are given in.
    pub best: f64,
    /// Circle parameters `(α, β, ρ)`: unit normal at polar angle `α` and
    /// azimuth `β`, and angular radius `ρ` of the cap it bounds.
    pub circle: (f64, f64, f64),
}

const REFINE_STARTS: usize = 32;
const MAX_MOVES: usize = 200;

/// Best offset for the circles with normal at `(α, β)`. With `H = N - hI`,
/// the summed squared residual over generators is a ratio of quadratics in
/// `h`, minimised in closed form for each choice of signs. Returns the value
/// and `h`, with `|h| <= hmax` to keep away from point circles.
fn fit_offset(gens: &[[C64; 4]], mm: &[Herm], alpha: f64, beta: f64, hmax: f64) -> (f64, f64) {
    let n = circle(alpha, beta, 0.0);
    let id: Herm = [1.0, 1.0, 0.0, 0.0];
    let na: Vec<Herm> = gens.iter().map(|m| congruence(m, &n)).collect();
    let mut best = (f64::INFINITY, 0.0);
    for signs in 0..1usize << gens.len() {
        let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
        for (i, (x, y)) in na.iter().zip(mm).enumerate() {
            let e = if signs >> i & 1 == 1 { -1.0 } else { 1.0 };
            let u: Herm = std::array::from_fn(|t| x[t] - e * n[t]);
            let v: Herm = std::array::from_fn(|t| y[t] - e * id[t]);
            a += inner(&v, &v);
            b += inner(&u, &v);
            c += inner(&u, &u);
        }
        // Stationary points solve b h² + (a - c) h - b = 0.
        let mut cands = vec![-hmax, hmax];
        if b != 0.0 {
            let r = ((a - c) * (a - c) + 4.0 * b * b).sqrt();
            cands.extend([(c - a + r) / (2.0 * b), (c - a - r) / (2.0 * b)].into_iter().filter(|h| h.abs() <= hmax));
        } else {
            cands.push(0.0);
        }
        for h in cands {
            let q = (c - 2.0 * b * h + a * h * h) / (2.0 * (1.0 + h * h));
            if q < best.0 {
                best = (q, h);
            }
        }
    }
    best
}

/// Searches circles of the Riemann sphere for one preserved by every
/// generator. Normals run over a `grid × grid` lattice, the offset of each is
/// fitted exactly, and the deepest local minima are refined.
pub fn brute_rform_search(ms: &[ComplexMatrix], grid: usize, exec: Exec) -> Result<BruteResult> {
    if ms.iter().any(|m| m.dim() != 2) {
        return Err(Error::Precondition("brute-force search is limited to k = 2".into()));
    }
    let grid = grid.max(2);
    let gens: Vec<[C64; 4]> = ms
        .iter()
        .map(|m| {
            let a = m.matrix();
            let s = C64::from(a.determinant().norm().sqrt());
            [a[(0, 0)] / s, a[(0, 1)] / s, a[(1, 0)] / s, a[(1, 1)] / s]
        })
        .collect();
    let id: Herm = [1.0, 1.0, 0.0, 0.0];
    let mm: Vec<Herm> = gens.iter().map(|m| congruence(m, &id)).collect();
    let step = PI / grid as f64;
    let hmax = (0.5 * step).cos();
    // (α, β, h) and (π - α, β + π, -h) describe the same circle, so only the
    // upper hemisphere of normals is needed.
    let polar = grid.div_ceil(2);
    let slices = par::map_range(polar, exec, |i| {
        let alpha = (i as f64 + 0.5) * step;
        (0..grid)
            .map(|j| {
                let beta = j as f64 * 2.0 * step;
                let (v, h) = fit_offset(&gens, &mm, alpha, beta, hmax);
                (v, (alpha, beta, h))
            })
            .collect::<Vec<_>>()
    });
    let rows = slices.len();
    let value = |i: usize, j: usize| slices[i][j % grid].0;
    let mut starts = Vec::new();
    for i in 0..rows {
        for j in 0..grid {
            let v = value(i, j);
            let lowest = (i.saturating_sub(1)..(i + 2).min(rows))
                .flat_map(|a| (grid + j - 1..grid + j + 2).map(move |b| (a, b)))
                .all(|(a, b)| (a, b % grid) == (i, j) || value(a, b) >= v);
            if lowest {
                starts.push(slices[i][j]);
            }
        }
    }
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));
    starts.truncate(REFINE_STARTS);
    let refined = par::map(&starts, exec, |s| {
        let (alpha, beta, h) = refine(&gens, &mm, (s.1 .0, s.1 .1), step, hmax);
        let (alpha, beta, h) = polish(&gens, [alpha, beta, h], hmax);
        BruteResult { best: worst(&gens, &circle(alpha, beta, h)), circle: (alpha, beta, h.acos()) }
    });
    Ok(refined.into_iter().min_by(|a, b| a.best.total_cmp(&b.best)).expect("at least one start"))
}

/// Compass search over the normal, with the offset fitted at each point.
fn refine(gens: &[[C64; 4]], mm: &[Herm], start: (f64, f64), step: f64, hmax: f64) -> (f64, f64, f64) {
    let eval = |p: (f64, f64)| fit_offset(gens, mm, p.0, p.1, hmax);
    let mut p = start;
    let mut f = eval(p);
    let mut s = step;
    let mut moves = 0;
    while s > 1e-13 {
        let mut improved = false;
        for (da, db) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            let q = (p.0 + s * da, p.1 + s * db);
            let g = eval(q);
            if g.0 < f.0 {
                p = q;
                f = g;
                improved = true;
                break;
            }
        }
        // A long slide along a shallow valley is cut short by shrinking the step.
        moves += 1;
        if !improved || moves == MAX_MOVES {
            s *= 0.5;
            moves = 0;
        }
    }
    (p.0, p.1, f.1)
}

/// Stacked residuals `(M* H M - εH) / ‖H‖`, one block per generator, with
/// each sign taken from the current circle.
fn residuals(gens: &[[C64; 4]], p: [f64; 3]) -> Vec<f64> {
    let h = circle(p[0], p[1], p[2]);
    let norm = inner(&h, &h).sqrt();
    let mut out = Vec::with_capacity(4 * gens.len());
    for m in gens {
        let x = congruence(m, &h);
        let e = inner(&x, &h).signum();
        let r: Herm = std::array::from_fn(|t| (x[t] - e * h[t]) / norm);
        out.extend([r[0], r[1], std::f64::consts::SQRT_2 * r[2], std::f64::consts::SQRT_2 * r[3]]);
    }
    out
}

/// Levenberg-Marquardt on `(α, β, h)`. Compass search gets into the basin but
/// crawls along its curved floor.
fn polish(gens: &[[C64; 4]], start: [f64; 3], hmax: f64) -> (f64, f64, f64) {
    let cost = |p: [f64; 3]| residuals(gens, p).iter().map(|r| r * r).sum::<f64>();
    let mut p = start;
    let mut f = cost(p);
    let mut lambda = 1e-3;
    for _ in 0..200 {
        let r = residuals(gens, p);
        let mut jac = nalgebra::DMatrix::<f64>::zeros(r.len(), 3);
        for c in 0..3 {
            let d = 1e-7;
            let (mut lo, mut hi) = (p, p);
            lo[c] -= d;
            hi[c] += d;
            for (row, (a, b)) in residuals(gens, hi).iter().zip(residuals(gens, lo)).enumerate() {
                jac[(row, c)] = (a - b) / (2.0 * d);
            }
        }
        let jtj = jac.transpose() * &jac;
        let g = jac.transpose() * nalgebra::DVector::from_vec(r);
        let mut moved = false;
        while lambda < 1e12 {
            let mut a = jtj.clone();
            for c in 0..3 {
                a[(c, c)] += lambda * jtj[(c, c)].max(1e-12);
            }
            let Some(delta) = a.lu().solve(&(-&g)) else { break };
            let q = [p[0] + delta[0], p[1] + delta[1], p[2] + delta[2]];
            let fq = if q[2].abs() <= hmax { cost(q) } else { f64::INFINITY };
            if fq < f {
                let small = delta.norm() < 1e-15;
                p = q;
                f = fq;
                lambda = (lambda * 0.1).max(1e-12);
                moved = !small;
                break;
            }
            lambda *= 10.0;
        }
        if !moved {
            break;
        }
    }
    (p[0], p[1], p[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn circle_forms() {
        let real_line = circle(PI / 2.0, PI / 2.0, 0.0);
        let v = |z: C64| {
            let h12 = C64::new(real_line[2], real_line[3]);
            z.norm_sqr() * real_line[0] + real_line[1] + 2.0 * (z.conj() * h12).re
        };
        assert!(v(c(3.0, 0.0)).abs() < 1e-12);
        assert!(v(c(3.0, 1.0)).abs() > 1e-3);
    }

    #[test]
    fn yes_instances_have_real_construction() {
        for k in 2..=5 {
            for seed in 0..20 {
                let inst = generate(&random_spec(k, seed), &tol()).unwrap();
                assert!(truth_residual(&inst) < 1e-10, "k={k} seed={seed}");
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let s = random_spec(4, 7);
        assert_eq!(generate(&s, &tol()).unwrap(), generate(&s, &tol()).unwrap());
    }

    #[test]
    fn infeasible_specs() {
        let mut s = random_spec(2, 1);
        s.mix = TypeMix { hyperbolic: 1, elliptic: 0, mixed: s.n_generators - 1 };
        assert!(matches!(generate(&s, &tol()), Err(Error::InfeasibleSpec(_))));
        s.mix = TypeMix { hyperbolic: s.n_generators + 1, ..Default::default() };
        assert!(matches!(generate(&s, &tol()), Err(Error::InfeasibleSpec(_))));
    }

    #[test]
    fn brute_search_finds_circle_of_yes_instance() {
        let s = InstanceSpec { k: 2, n_generators: 3, mix: TypeMix { hyperbolic: 2, elliptic: 1, mixed: 0 }, seed: 3, scramble: Scramble::RandomGamma, perturbation: None };
        let inst = generate(&s, &tol()).unwrap();
        assert!(brute_rform_search(&inst.matrices, 200, Exec::Sequential).unwrap().best < 1e-6);
        let bad = generate(&perturbed(&s, 0.05), &tol()).unwrap();
        assert!(brute_rform_search(&bad.matrices, 200, Exec::Sequential).unwrap().best > 1e-3);
    }
}

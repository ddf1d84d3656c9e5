use std::f64::consts::PI;

use proptest::prelude::*;
use realform::coords::{chordal, cross_ratio, triple_ratio};
use realform::decide::{condition_functions_pgl2, decide, decide_pgl2, verify_certificate, analyse, Method, Verdict};
use realform::flags::PointedLine;
use realform::linalg::{CMat, CVec, C64};
use realform::oracle::{generate, perturbed, random_spec, GeneratorType, InstanceSpec, Scramble, TypeMix};
use realform::projlin::{ComplexMatrix, ProjPoint};
use realform::spectrum::classify_eigenvalues;
use realform::Tolerances;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn complex() -> impl Strategy<Value = C64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn vector(k: usize) -> impl Strategy<Value = CVec> {
    prop::collection::vec(complex(), k).prop_map(CVec::from_vec)
}

/// Square matrices with reciprocal condition number above 0.05.
fn matrix(k: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec(complex(), k * k)
        .prop_map(move |v| CMat::from_row_slice(k, k, &v))
        .prop_filter("well conditioned", |m| {
            let s = m.clone().singular_values();
            s.min() > 0.05 * s.max()
        })
}

fn point(z: C64) -> ProjPoint {
    ProjPoint::from_slice(&[z, C64::new(1.0, 0.0)]).unwrap()
}

fn moved(g: &CMat, p: &ProjPoint) -> ProjPoint {
    ProjPoint::new(g * p.coords()).unwrap()
}

fn separated(zs: &[C64]) -> bool {
    zs.iter().enumerate().all(|(i, a)| zs[i + 1..].iter().all(|b| (a - b).norm() > 0.1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cross_ratio_is_projectively_invariant(
        zs in prop::collection::vec(complex(), 4).prop_filter("distinct", |zs| separated(zs)),
        g in matrix(2),
    ) {
        let t = tol();
        let p: Vec<ProjPoint> = zs.iter().map(|&z| point(z)).collect();
        let q: Vec<ProjPoint> = p.iter().map(|x| moved(&g, x)).collect();
        let before = cross_ratio(&p[0], &p[1], &p[2], &p[3], &t).unwrap();
        let after = cross_ratio(&q[0], &q[1], &q[2], &q[3], &t).unwrap();
        prop_assert!(chordal(&before, &after) < 1e-9);
    }

    #[test]
    fn conjugate_points_give_conjugate_cross_ratio(
        zs in prop::collection::vec(complex(), 4).prop_filter("distinct", |zs| separated(zs)),
    ) {
        let t = tol();
        let p: Vec<ProjPoint> = zs.iter().map(|&z| point(z)).collect();
        let q: Vec<ProjPoint> = zs.iter().map(|&z| point(z.conj())).collect();
        let a = cross_ratio(&p[0], &p[1], &p[2], &p[3], &t).unwrap();
        let b = cross_ratio(&q[0], &q[1], &q[2], &q[3], &t).unwrap();
        prop_assert!(chordal(&a.conj(), &b) < 1e-12);
    }

    #[test]
    fn triple_ratio_is_projectively_invariant(
        points in prop::collection::vec(vector(3), 3),
        forms in prop::collection::vec(vector(3), 3),
        g in matrix(3),
    ) {
        let t = tol();
        // Each line must pass through its point and avoid the other points.
        let lines: Vec<PointedLine> = points
            .iter()
            .zip(&forms)
            .map(|(p, f)| {
                let along = f.dot(p) / p.dot(p);
                PointedLine { point: p.clone(), form: f - p * along }
            })
            .collect();
        let r = triple_ratio(&lines[0], &lines[1], &lines[2], &t);
        prop_assume!(r.as_ref().is_ok_and(|r| r.norm() > 1e-3 && r.norm() < 1e3));
        let gi_t = g.clone().try_inverse().unwrap().transpose();
        let image: Vec<PointedLine> = lines
            .iter()
            .map(|l| PointedLine { point: &g * &l.point, form: &gi_t * &l.form })
            .collect();
        let s = triple_ratio(&image[0], &image[1], &image[2], &t).unwrap();
        let r = r.unwrap();
        prop_assert!((s - r).norm() < 1e-7 * r.norm().max(1.0));
    }

    #[test]
    fn rotating_a_real_spectrum_rotates_its_line(
        values in prop::collection::vec(0.2..5.0f64, 3),
        signs in prop::collection::vec(any::<bool>(), 3),
        phi in 0.0..PI,
    ) {
        let mut vs: Vec<f64> = values.iter().zip(&signs).map(|(&v, &s)| if s { v } else { -v }).collect();
        vs.sort_by(|a, b| a.total_cmp(b));
        prop_assume!(vs.windows(2).all(|w| (w[1] - w[0]).abs() > 0.1));
        let rotated: Vec<C64> = vs.iter().map(|&v| C64::from_polar(1.0, phi) * v).collect();
        let class = classify_eigenvalues(&rotated, &tol());
        prop_assert!(class.is_compatible());
        let hit = class.lines.iter().any(|l| {
            let d = (l.theta - phi).rem_euclid(PI);
            d.min(PI - d) < 1e-9 && l.labels.iter().all(|x| x.is_hyperbolic())
        });
        prop_assert!(hit);
    }

    #[test]
    fn certificate_residual_ignores_scale(seed in any::<u64>(), s in complex()) {
        prop_assume!(s.norm() > 0.1);
        let t = tol();
        let inst = generate(&random_spec(3, seed), &t).unwrap();
        let a = verify_certificate(&inst.matrices, &inst.gamma);
        let b = verify_certificate(&inst.matrices, &(&inst.gamma * s));
        prop_assert!(a < 1e-9);
        prop_assert!((a - b).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_instances_round_trip(seed in any::<u64>(), k in 2usize..=4) {
        let t = tol();
        let spec = random_spec(k, seed);
        let yes = generate(&spec, &t).unwrap();
        let d = decide(&yes.matrices, Method::Auto, &t).unwrap();
        prop_assert_eq!(d.verdict, Verdict::Yes);
        let gamma = &d.certificate.as_ref().unwrap().gamma;
        prop_assert!(verify_certificate(&yes.matrices, gamma) < 1e-6);
        let no = generate(&perturbed(&spec, 0.05), &t).unwrap();
        prop_assert_eq!(decide(&no.matrices, Method::Auto, &t).unwrap().verdict, Verdict::No);
    }

    #[test]
    fn verdict_survives_conjugation(seed in any::<u64>(), k in 2usize..=4, bad in any::<bool>(), g in (2usize..=4).prop_flat_map(matrix)) {
        prop_assume!(g.nrows() == k);
        let t = tol();
        let mut spec = random_spec(k, seed);
        if bad {
            spec = perturbed(&spec, 0.05);
        }
        let inst = generate(&spec, &t).unwrap();
        let gi = g.clone().try_inverse().unwrap();
        let moved: Vec<ComplexMatrix> = inst.matrices.iter().map(|m| ComplexMatrix::new(&g * m.matrix() * &gi, &t).unwrap()).collect();
        let a = decide(&inst.matrices, Method::Auto, &t).unwrap().verdict;
        let b = decide(&moved, Method::Auto, &t).unwrap().verdict;
        prop_assert_eq!(a, b);
    }

    /// The two routes through PGL(2) use different auxiliary points; their
    /// answers must coincide.
    #[test]
    fn pgl2_condition_functions_agree_with_decision(seed in any::<u64>(), elliptic in 0usize..3, hyperbolic in 2usize..4, bad in any::<bool>()) {
        let t = tol();
        let mix = TypeMix { hyperbolic, elliptic, mixed: 0 };
        let mut spec = InstanceSpec { k: 2, n_generators: mix.total(), mix, seed, scramble: Scramble::RandomGamma, perturbation: None };
        if bad {
            spec = perturbed(&spec, 0.05);
        }
        let inst = generate(&spec, &t).unwrap();
        let mut order: Vec<usize> = (0..inst.types.len()).collect();
        order.sort_by_key(|&i| inst.types[i] != GeneratorType::Hyperbolic);
        let ms: Vec<ComplexMatrix> = order.iter().map(|&i| inst.matrices[i].clone()).collect();
        let values = condition_functions_pgl2(&ms, &t).unwrap();
        prop_assert_eq!(values.len(), 2 * ms.len() - 3);
        let vanish = values.iter().all(|v| v.norm() < t.cr_tol);
        let gens = analyse(&ms, &t).unwrap();
        let d = decide_pgl2(&ms, &gens, &t).unwrap();
        prop_assert_eq!(vanish, d.is_yes());
        prop_assert_eq!(d.is_yes(), !bad);
    }
}

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use realform::decide::{decide_batch, Method};
use realform::oracle::{brute_rform_search, generate, generate_batch, random_spec};
use realform::par::Exec;
use realform::Tolerances;

const MODES: [(&str, Exec); 2] = [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)];

fn batch_decide(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("decide_batch");
    group.sample_size(10);
    for k in [2usize, 3, 4] {
        let specs: Vec<_> = (0..64).map(|s| random_spec(k, s)).collect();
        let batch: Vec<_> = generate_batch(&specs, &tol, Exec::Parallel).into_iter().map(|i| i.unwrap().matrices).collect();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, k), &batch, |b, batch| {
                b.iter(|| decide_batch(batch, Method::Auto, &tol, exec));
            });
        }
    }
    group.finish();
}

fn brute(c: &mut Criterion) {
    let tol = Tolerances::default();
    let inst = generate(&random_spec(2, 1), &tol).unwrap();
    let mut group = c.benchmark_group("brute_rform_search");
    group.sample_size(10);
    for grid in [50usize, 100] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, grid), &grid, |b, &grid| {
                b.iter(|| brute_rform_search(&inst.matrices, grid, exec).unwrap());
            });
        }
    }
    group.finish();
}

criterion_group!(benches, batch_decide, brute);
criterion_main!(benches);

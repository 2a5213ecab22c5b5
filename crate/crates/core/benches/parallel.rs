use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hochkit::exactla::{Fp, Matrix};
use hochkit::par::Strategy;
use hochkit::simpset::{enumerate_horns, inner_kan_check_with, nerve, FinCategory};

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn random_matrix(n: usize, seed: u64) -> Matrix {
    let f = Fp::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_data(f, n, n, (0..n * n).map(|_| rng.gen_range(0..5)).collect()).unwrap()
}

fn bench_rref(c: &mut Criterion) {
    let mut g = c.benchmark_group("rref");
    for n in [64, 192, 384] {
        let m = random_matrix(n, n as u64);
        for (name, s) in STRATEGIES {
            g.bench_with_input(BenchmarkId::new(name, n), &m, |b, m| b.iter(|| black_box(m.rref_with(s))));
        }
    }
    g.finish();
}

fn bench_mul(c: &mut Criterion) {
    let mut g = c.benchmark_group("mul");
    for n in [64, 192, 384] {
        let a = random_matrix(n, 1);
        let m = random_matrix(n, 2);
        for (name, s) in STRATEGIES {
            g.bench_with_input(BenchmarkId::new(name, n), &(&a, &m), |b, (a, m)| b.iter(|| black_box(a.mul_with(m, s).unwrap())));
        }
    }
    g.finish();
}

fn bench_horns(c: &mut Criterion) {
    let mut g = c.benchmark_group("horn_scan");
    g.sample_size(10);
    for (label, cat) in [("Z2xZ2", FinCategory::klein_group()), ("S3", FinCategory::symmetric3())] {
        let k = nerve(&cat, 4).unwrap();
        for (name, s) in STRATEGIES {
            g.bench_with_input(BenchmarkId::new(format!("{name}/enumerate"), label), &k, |b, k| {
                b.iter(|| black_box(enumerate_horns(k, 3, 1, s).len()))
            });
            g.bench_with_input(BenchmarkId::new(format!("{name}/inner_kan"), label), &k, |b, k| {
                b.iter(|| black_box(inner_kan_check_with(k, 3, s).unwrap().horns_checked))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, bench_rref, bench_mul, bench_horns);
criterion_main!(benches);

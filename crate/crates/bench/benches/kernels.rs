use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use grosym::{
    antisym_canonical, infty_one_exact, scaling_search, singular_values, tame, kg_upper, Matrix,
    SymplecticSpace, TameParams, VectorFamily,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0))
}

fn bench_infty_one(c: &mut Criterion) {
    let mut group = c.benchmark_group("infty_one_exact");
    for n in [8usize, 12, 16, 20] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let a = random_matrix(&mut rng, n, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| infty_one_exact(a).unwrap().value)
        });
    }
    group.finish();
}

fn bench_singular_values(c: &mut Criterion) {
    let mut group = c.benchmark_group("singular_values");
    for n in [10usize, 20, 40] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let a = random_matrix(&mut rng, n, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| singular_values(a))
        });
    }
    group.finish();
}

fn bench_scaling_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("scaling_search");
    group.sample_size(10);
    for n in [6usize, 10] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let a = random_matrix(&mut rng, n, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| scaling_search(a, 100, 0, kg_upper()).unwrap())
        });
    }
    group.finish();
}

fn bench_canonical(c: &mut Criterion) {
    let mut group = c.benchmark_group("antisym_canonical");
    for n in [10usize, 20, 40] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let g = random_matrix(&mut rng, n, n);
        let b_mat = g.sub(&g.transpose()).scaled(0.5);
        group.bench_with_input(BenchmarkId::from_parameter(n), &b_mat, |b, m| {
            b.iter(|| antisym_canonical(m, 1e-9).unwrap())
        });
    }
    group.finish();
}

fn bench_tame(c: &mut Criterion) {
    let mut group = c.benchmark_group("tame");
    group.sample_size(10);
    for n in [2usize, 4] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let cols = random_matrix(&mut rng, 2 * n, 8);
        let fam = VectorFamily::new(SymplecticSpace::standard(n).unwrap(), cols).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &fam, |b, fam| {
            b.iter(|| tame(fam, kg_upper(), 1e-6, &TameParams::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_infty_one,
    bench_singular_values,
    bench_scaling_search,
    bench_canonical,
    bench_tame
);
criterion_main!(benches);

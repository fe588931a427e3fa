use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skewforge_bench::{reference, tame};
use skewforge_core::suites::{run_suite, Suite, SuiteConfig};
use skewforge_core::transforms::{d_invariant, normalize_galois, reparam, Reparam};
use skewforge_core::{gen, RatFunc};

fn multiply(c: &mut Criterion) {
    let mut g = c.benchmark_group("mul");
    for n in [8usize, 16, 24] {
        let s = reference(n);
        let mut r = ChaCha8Rng::seed_from_u64(1);
        let a = gen::series(&mut r, 3, 0, n, 2, 0.3, false);
        let b = gen::series(&mut r, 3, 0, n, 2, 0.3, false);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |bch, _| {
            bch.iter(|| s.mul(&a, &b).unwrap());
        });
    }
    g.finish();
}

fn delta(c: &mut Criterion) {
    let mut g = c.benchmark_group("delta");
    for n in [8usize, 16] {
        let a = RatFunc::from_poly(skewforge_core::Poly::from_coeffs(3, &[1, 2, 0, 1]));
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |bch, &n| {
            bch.iter_batched(
                || reference(n),
                |s| s.delta(1, n - 1, &a).unwrap(),
                criterion::BatchSize::SmallInput,
            );
        });
    }
    g.finish();
}

fn transforms(c: &mut Criterion) {
    let s = reference(12);
    c.bench_function("reparam/shift", |bch| {
        let r = Reparam::Shift { b: RatFunc::t(3), q: 2 };
        bch.iter(|| reparam(&s, &r).unwrap());
    });
    c.bench_function("d_invariant", |bch| {
        bch.iter_batched(|| reference(12), |s| d_invariant(&s, &s.t()).unwrap(), criterion::BatchSize::SmallInput);
    });
    let t = tame(10);
    c.bench_function("normalize_galois/tame", |bch| bch.iter(|| normalize_galois(&t).unwrap()));
}

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("suite");
    g.sample_size(10);
    for suite in [Suite::Flyii, Suite::Ozamene] {
        let cfg = SuiteConfig {
            suite,
            p: 3,
            precision: 10,
            seed: 42,
            cases: 50,
        };
        g.bench_function(suite.name(), |bch| bch.iter(|| run_suite(&cfg).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, multiply, delta, transforms, suites);
criterion_main!(benches);

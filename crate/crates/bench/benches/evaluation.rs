use criterion::{black_box, criterion_group, criterion_main, Criterion};

use qboson_core::algebra::apply_h_direct;
use qboson_core::partition::enumerate;
use qboson_core::spectral::{build_rule, gram_matrix, QuadMode};
use qboson_core::{
    Complex64, EvalOptions, FockVector, HlEvaluator, ModelParams, Partition, SpectralPoint,
};

fn phi(c: &mut Criterion) {
    let p = ModelParams::default();
    let lambda = Partition::new(vec![5, 3, 1]);
    let xi = SpectralPoint::new(vec![2.7, 1.9, 0.4]);
    c.bench_function("phi n=3", |b| {
        b.iter(|| {
            HlEvaluator::new(black_box(&xi), &p, EvalOptions::default())
                .unwrap()
                .value(&lambda)
                .unwrap()
        })
    });
    let eval = HlEvaluator::new(&xi, &p, EvalOptions::default()).unwrap();
    c.bench_function("phi n=3 reused evaluator", |b| {
        b.iter(|| eval.value(black_box(&lambda)).unwrap())
    });
}

fn gram(c: &mut Criterion) {
    let p = ModelParams::default();
    let mut group = c.benchmark_group("gram");
    group.sample_size(10);
    let one = (
        enumerate(1, 6),
        build_rule(1, 400, QuadMode::Alcove).unwrap(),
    );
    group.bench_function("n=1 L=6 400 nodes", |b| {
        b.iter(|| gram_matrix(&one.0, &one.1, &p).unwrap())
    });
    let two = (
        enumerate(2, 4),
        build_rule(2, 100, QuadMode::FullCube).unwrap(),
    );
    group.bench_function("n=2 L=4 100^2 nodes", |b| {
        b.iter(|| gram_matrix(&two.0, &two.1, &p).unwrap())
    });
    group.finish();
}

fn hamiltonian(c: &mut Criterion) {
    let p = ModelParams::default();
    let f = FockVector::from_pairs(
        3,
        enumerate(3, 8)
            .into_iter()
            .enumerate()
            .map(|(k, l)| (l, Complex64::new(1.0 / (1.0 + k as f64), 0.5))),
    )
    .unwrap();
    c.bench_function("apply_h_direct n=3 L=8", |b| {
        b.iter(|| apply_h_direct(black_box(&f), &p))
    });
}

criterion_group!(benches, phi, gram, hamiltonian);
criterion_main!(benches);

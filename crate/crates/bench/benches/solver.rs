use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use tomofeat::varsolve::estimate_lipschitz;
use tomofeat::{
    fista, sample_filter_with_units, FeatureKernel, FilterUnits, SolverConfig, StepRule,
};
use tomofeat_bench::{disc_sinogram, sparse_spec};

fn bench_solver(c: &mut Criterion) {
    let spec = sparse_spec();
    let sino = disc_sinogram(&spec);
    let filt = sample_filter_with_units(
        &FeatureKernel::LaplacianOfGaussian { alpha: 1.3 },
        &spec,
        FilterUnits::GridSamples,
    )
    .unwrap();
    // One fixed-step configuration so the benchmark measures the iteration
    // loop, not the power iteration.
    let step = 1.0 / (1.01 * estimate_lipschitz(&spec, 200, 1.0, 0.001, 50).unwrap());
    let cfg = SolverConfig {
        lambda: 0.001,
        mu: 0.001,
        max_iters: 10,
        step: StepRule::Fixed(step),
        record_objective: false,
    };
    c.bench_function("fista 10 iterations, 200px x 40 angles", |b| {
        b.iter(|| black_box(fista(black_box(&sino), &filt, &cfg, 200, 1.0).unwrap()))
    });
    c.bench_function("power iteration (50 steps)", |b| {
        b.iter(|| black_box(estimate_lipschitz(&spec, 200, 1.0, 0.001, 50).unwrap()))
    });
}

criterion_group!(benches, bench_solver);
criterion_main!(benches);

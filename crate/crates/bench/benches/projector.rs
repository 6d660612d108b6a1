use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use tomofeat::{adjoint, backproject, forward, DiscPhantom};
use tomofeat_bench::{disc_sinogram, sparse_spec};

fn bench_projector(c: &mut Criterion) {
    let spec = sparse_spec();
    let raster = DiscPhantom::three_disc(200, 1.0).unwrap().rasterize();
    let sino = disc_sinogram(&spec);

    c.bench_function("forward 200px x 40 angles", |b| {
        b.iter(|| black_box(forward(black_box(&raster), &spec).unwrap()))
    });
    c.bench_function("adjoint 200px x 40 angles", |b| {
        b.iter(|| black_box(adjoint(black_box(&sino), 200, 1.0).unwrap()))
    });
    c.bench_function("backproject 200px x 40 angles", |b| {
        b.iter(|| black_box(backproject(black_box(&sino), 200, 1.0).unwrap()))
    });
}

criterion_group!(benches, bench_projector);
criterion_main!(benches);

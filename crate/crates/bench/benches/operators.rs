use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kksampling::operators::{fourier_side_projection, generalized_sampling, kantorovich_1d, quasi_projection};
use kksampling::synthesis::synthesize_kernel;
use kksampling::{Averager, Kernel, TestFunction};
use kksampling_bench::{dyadic_1d, quincunx_2d, settings};

fn one_dimensional(c: &mut Criterion) {
    let (m, grid) = dyadic_1d(400);
    let (trunc, q) = settings();
    let f = TestFunction::gaussian(1);
    let kernel = synthesize_kernel(&Averager::unit_box(1), 4).expect("synthesis");
    let a = Averager::unit_box(1);
    let mut group = c.benchmark_group("quasi_projection_1d");
    for j in [3u32, 5, 7] {
        group.bench_with_input(BenchmarkId::from_parameter(j), &j, |b, &j| {
            b.iter(|| quasi_projection(&f, &kernel, &a, &m, j, &grid, &trunc, &q).expect("operator"))
        });
    }
    group.finish();

    let indicator = TestFunction::indicator();
    c.bench_function("kantorovich_1d_w32", |b| {
        b.iter(|| kantorovich_1d(&indicator, 32.0, &Kernel::sinc(1), &grid, &trunc, &q, None).expect("operator"))
    });
    c.bench_function("generalized_sampling_w32", |b| {
        b.iter(|| generalized_sampling(&indicator, 32.0, &Kernel::sinc(1), &grid, &trunc, None).expect("operator"))
    });
    c.bench_function("fourier_side_j3", |b| {
        b.iter(|| fourier_side_projection(&f, &m, 3, &grid, &trunc, &q).expect("operator"))
    });
}

fn two_dimensional(c: &mut Criterion) {
    let (m, grid) = quincunx_2d(41);
    let (trunc, q) = settings();
    let f = TestFunction::gaussian(2);
    let mut group = c.benchmark_group("quasi_projection_quincunx");
    group.sample_size(10);
    for j in [3u32, 5] {
        group.bench_with_input(BenchmarkId::from_parameter(j), &j, |b, &j| {
            b.iter(|| {
                quasi_projection(&f, &Kernel::sinc(2), &Averager::unit_box(2), &m, j, &grid, &trunc, &q)
                    .expect("operator")
            })
        });
    }
    group.finish();
}

criterion_group!(benches, one_dimensional, two_dimensional);
criterion_main!(benches);

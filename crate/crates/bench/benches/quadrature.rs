use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use gl2calc_bench::{kernel_point, operator};
use gl2calc_core::quad::{eval_kernel, KernelEvaluator, QuadratureSpec};
use gl2calc_core::symfunc::standard_bump;
use gl2calc_core::theta::theta;

fn bench_kernel(c: &mut Criterion) {
    let (f, support) = standard_bump(0.4).expect("standard bump");
    let pt = kernel_point();
    let mut group = c.benchmark_group("kernel");
    group.sample_size(10);
    for order in [16, 32, 64] {
        let spec = QuadratureSpec::new(order);
        group.bench_with_input(BenchmarkId::from_parameter(order), &spec, |b, &spec| {
            b.iter(|| eval_kernel(black_box(&f), &support, black_box(&pt), spec))
        });
    }
    group.finish();
}

fn bench_apply(c: &mut Criterion) {
    let (f, support) = standard_bump(0.4).expect("standard bump");
    let pt = kernel_point();
    let image = theta(&operator("wb*wb"));
    let mut group = c.benchmark_group("apply");
    group.sample_size(10);
    group.bench_function("theta(wb*wb) on K_F, order 32", |b| {
        b.iter(|| {
            let mut ev = KernelEvaluator::new(&f, &support, QuadratureSpec::new(32));
            ev.apply(black_box(&image), black_box(&pt))
        })
    });
    group.finish();
}

criterion_group!(benches, bench_kernel, bench_apply);
criterion_main!(benches);

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use gl2calc_bench::{operator, OPERATORS};
use gl2calc_core::coeffs::{gcd, ParamPoly};
use gl2calc_core::parse::parse_operator;
use gl2calc_core::theta::{theta, Theta};

fn bench_theta(c: &mut Criterion) {
    let mut group = c.benchmark_group("theta");
    for text in OPERATORS {
        let op = operator(text);
        group.bench_with_input(BenchmarkId::from_parameter(text), &op, |b, op| {
            b.iter(|| theta(black_box(op)))
        });
    }
    group.finish();
}

fn bench_fourier_mul(c: &mut Criterion) {
    let mut th = Theta::new();
    let x = th.apply(&operator("c*wb"));
    let y = th.apply(&operator("wb*wb"));
    c.bench_function("fourier mul c*wb by wb*wb", |b| {
        b.iter(|| black_box(&x) * black_box(&y))
    });
}

fn bench_group_mul(c: &mut Criterion) {
    let x = operator("wa*wd - wb*wc");
    let y = operator("(a + b)^2*da*db + Dinv*dc");
    c.bench_function("group mul", |b| b.iter(|| black_box(&x) * black_box(&y)));
}

fn bench_parse(c: &mut Criterion) {
    let text = "(a + b)^3*da*dd - 5/3*b*Dinv^2*wc + wa*wd - wb*wc";
    c.bench_function("parse", |b| b.iter(|| parse_operator(black_box(text))));
}

fn bench_gcd(c: &mut Criterion) {
    let m = ParamPoly::mu1;
    let line = |k: i64| &(&m() - &ParamPoly::mu2()) - &ParamPoly::from_int(k);
    let p = &(&line(1) * &line(-1)) * &(&m() + &ParamPoly::from_int(2));
    let q = &(&line(1) * &line(2)) * &(&ParamPoly::mu2() - &ParamPoly::from_int(3));
    let r = &(&m() * &m()) + &ParamPoly::mu2();
    let (pr, qr) = (&p * &r, &q * &r);
    c.bench_function("gcd along lines", |b| b.iter(|| gcd(black_box(&p), black_box(&q))));
    c.bench_function("gcd general", |b| b.iter(|| gcd(black_box(&pr), black_box(&qr))));
}

criterion_group!(
    benches,
    bench_theta,
    bench_fourier_mul,
    bench_group_mul,
    bench_parse,
    bench_gcd
);
criterion_main!(benches);

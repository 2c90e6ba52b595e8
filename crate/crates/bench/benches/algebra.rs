use criterion::{criterion_group, criterion_main, Criterion};
use lpdo::{
    extract_left_factor, full_factorization, parse_operator, Expr, FactorOptions, GaugeFunction,
    RootKind,
};
use std::hint::black_box;

const LANDAU: &str = "Dx^3 + x*Dx^2*Dy + 2*Dx^2 + (2*x + 2)*Dx*Dy + Dx + (2 + x)*Dy";
const SPLIT: &str = "Dx^2 - Dy^2 + y*Dx + x*Dy + 1/4*(y^2 - x^2) - 1";

fn compose(c: &mut Criterion) {
    let a = parse_operator("Dx^2 + x*y*Dx*Dy + sin(x)*Dy + x^2").unwrap();
    let b = parse_operator("Dx + y^2*Dy^2 + 1/(x + 1)").unwrap();
    c.bench_function("compose order 2 x order 2", |bch| {
        bch.iter(|| black_box(&a).compose(black_box(&b)))
    });
    c.bench_function("transpose order 2", |bch| {
        bch.iter(|| black_box(&a).transpose())
    });
    let g = GaugeFunction::from(lpdo::parse("x*y^2 - sin(x)").unwrap());
    c.bench_function("gauge conjugate order 2", |bch| {
        bch.iter(|| black_box(&a).gauge_conjugate(black_box(&g)))
    });
}

fn factor(c: &mut Criterion) {
    let split = parse_operator(SPLIT).unwrap();
    c.bench_function("left factor, simple root", |bch| {
        bch.iter(|| extract_left_factor(black_box(&split), &RootKind::Finite(Expr::one())).unwrap())
    });
    c.bench_function("full factorization, order 2", |bch| {
        bch.iter(|| full_factorization(black_box(&split), &FactorOptions::default()).unwrap())
    });
    let landau = parse_operator(LANDAU).unwrap();
    let opts = FactorOptions {
        riccati: vec![lpdo::parse("1 + 1/(x + C)").unwrap()],
        ..Default::default()
    };
    c.bench_function("full factorization, Landau", |bch| {
        bch.iter(|| full_factorization(black_box(&landau), &opts).unwrap())
    });
}

criterion_group!(benches, compose, factor);
criterion_main!(benches);

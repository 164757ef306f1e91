//! Benchmarks for the hot paths: expression arithmetic, prequantization,
//! the full eigen pipeline, on-shell reduction, and the parser.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use polyquant::observables::{eigen_analysis, energy_operator, psi_s, stress_energy};
use polyquant::prequant::{prequantize_adapted, VolumeMode};
use polyquant::pullback::SolutionSection;
use polyquant::symexpr::{Expr, Metric};

fn parse(src: &str) -> Expr {
    src.parse().expect("benchmark expressions parse")
}

fn bench_expr_mul(c: &mut Criterion) {
    let s = SolutionSection::on_shell();
    let gamma = s.gamma_expr();
    let gamma_bar = gamma.conjugate();
    let poly = parse("(1/2)*pi0^2 + (1/2)*pi1^2 + (m^2*c^2/(2*hbar^2))*phi^2");
    c.bench_function("expr_mul_plane_waves", |b| {
        b.iter(|| black_box(&gamma).mul(black_box(&gamma_bar)))
    });
    c.bench_function("expr_mul_polynomial", |b| {
        b.iter(|| black_box(&poly).mul(black_box(&poly)))
    });
}

fn bench_prequantize(c: &mut Criterion) {
    let density = stress_energy(0).expect("energy density");
    c.bench_function("prequantize_energy_density", |b| {
        b.iter(|| prequantize_adapted(black_box(&density), VolumeMode::L3))
    });
}

fn bench_eigen_pipeline(c: &mut Criterion) {
    let op = energy_operator().expect("energy operator");
    let state = psi_s(&parse("A*Abar")).expect("tuned state");
    let section = SolutionSection::new(Metric::minkowski(), true);
    c.bench_function("eigen_energy_full_pipeline", |b| {
        b.iter(|| eigen_analysis(black_box(&op), black_box(&state), black_box(&section)))
    });
}

fn bench_on_shell_reduce(c: &mut Criterion) {
    let metric = Metric::minkowski();
    let e = parse("k0^5*phi^2 + k0^2*pi1 + hbar*k0^3*k1").mul(&parse("k0^2 + k1^2"));
    c.bench_function("on_shell_reduce", |b| {
        b.iter(|| black_box(&e).on_shell_reduce(black_box(&metric)))
    });
}

fn bench_parse_round_trip(c: &mut Criterion) {
    let src = "-(1/2)*pi0^2 + (1/2)*(pi1^2 + pi2^2 + pi3^2) \
               + (m^2*c^2/(2*hbar^2))*phi^2 + i*A*exp(i*(k0*x0 - k1*x1))";
    c.bench_function("parse_print_round_trip", |b| {
        b.iter(|| {
            let e: Expr = black_box(src).parse().expect("parses");
            black_box(e.to_string())
        })
    });
}

criterion_group!(
    benches,
    bench_expr_mul,
    bench_prequantize,
    bench_eigen_pipeline,
    bench_on_shell_reduce,
    bench_parse_round_trip
);
criterion_main!(benches);

use std::hint::black_box;

use achsolve::cr::Component;
use achsolve::{det_product_check, gjms_apply, Complex64, GjmsRequest};
use achsolve_bench::{background, exact_solve, float_solve};
use criterion::{criterion_group, criterion_main, Criterion};

fn solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    group.bench_function("exact_flat_n14", |b| b.iter(|| exact_solve(black_box("heisenberg"), 14).unwrap()));
    group.bench_function("exact_torsion_n12", |b| {
        b.iter(|| exact_solve(black_box("constant:1/2:1/3+1/2i"), 12).unwrap())
    });
    let grid = background::<Complex64>("heisenberg-deformed:0.02").unwrap();
    group.bench_function("float_deformed_16_n10", |b| b.iter(|| float_solve(black_box(&grid), 10).unwrap()));
    group.finish();
}

fn gjms(c: &mut Criterion) {
    let bg = background::<Complex64>("heisenberg-deformed:0.02").unwrap();
    let source = float_solve(&bg, 10).unwrap();
    let f = Component::Fourier(vec![(Complex64::new(1.0, 0.0), [1, 2, 0])]).to_field(bg.geom().unwrap()).unwrap();
    let mut group = c.benchmark_group("gjms");
    group.sample_size(10);
    for k in [1, 2, 3] {
        group.bench_function(format!("deformed_16_k{k}"), |b| {
            b.iter(|| gjms_apply(&GjmsRequest { k, f: f.clone(), source: &source, background: &bg }).unwrap())
        });
    }
    group.finish();
}

fn indicial(c: &mut Criterion) {
    c.bench_function("det_product_check_200", |b| b.iter(|| det_product_check(black_box(200)).unwrap()));
}

criterion_group!(benches, solver, gjms, indicial);
criterion_main!(benches);

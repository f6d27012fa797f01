//! Microbenchmarks for the algebra layers: field operations, polynomial
//! multiplication, and trial-division factorization.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use census_core::polyfq::{factor, Poly};
use census_core::Field;

fn field_of_order(q: u64) -> Field {
    Field::from_order(q).unwrap()
}

fn dense_poly(field: &Field, degree: usize, seed: u64) -> Poly {
    // Simple LCG so the inputs are deterministic but not structured.
    let mut state = seed;
    let coeffs = (0..=degree)
        .map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            field.element_from_index(state % field.q())
        })
        .collect();
    Poly::from_coeffs(field, coeffs)
}

fn bench_field_ops(c: &mut Criterion) {
    let mut group = c.benchmark_group("field");
    for q in [2u64, 9, 256] {
        let field = field_of_order(q);
        let a = field.element_from_index(q - 1);
        let b = field.element_from_index((q / 2 + 1) % q);
        group.bench_function(format!("mul q={q}"), |bench| {
            bench.iter(|| black_box(field.mul(black_box(&a), black_box(&b))))
        });
        group.bench_function(format!("inv q={q}"), |bench| {
            bench.iter(|| black_box(field.inv(black_box(&a)).unwrap()))
        });
    }
    group.finish();
}

fn bench_poly_ops(c: &mut Criterion) {
    let mut group = c.benchmark_group("poly");
    for q in [2u64, 9] {
        let field = field_of_order(q);
        let a = dense_poly(&field, 64, 1);
        let b = dense_poly(&field, 64, 2);
        group.bench_function(format!("mul deg 64 q={q}"), |bench| {
            bench.iter(|| black_box(a.mul(black_box(&b))))
        });
        let f = dense_poly(&field, 12, 3);
        group.bench_function(format!("factor deg 12 q={q}"), |bench| {
            bench.iter(|| black_box(factor(black_box(&f)).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_field_ops, bench_poly_ops);
criterion_main!(benches);

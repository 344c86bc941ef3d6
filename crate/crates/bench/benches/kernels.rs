use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use itertools::Itertools;

use ellconf_core::classes::{build_class, product};
use ellconf_core::cohomology::{cohomology, groth_hodge_polynomial};
use ellconf_core::exterior::pair_count;
use ellconf_core::model::enumerate_nbc_forests;
use ellconf_core::partitions::enumerate_marked;
use ellconf_core::{ClassName, KrizModel, ModelId, Space};

// Models memoize slices, so every iteration starts from a fresh one.
fn fresh(n: usize) -> KrizModel {
    KrizModel::new(n).expect("supported n")
}

fn forests(c: &mut Criterion) {
    let mut g = c.benchmark_group("nbc_forests");
    for n in [5, 7] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| (0..n).map(|q| enumerate_nbc_forests(n, q).len()).sum::<usize>())
        });
    }
    g.finish();
}

fn normal_form(c: &mut Criterion) {
    // Every product of three pair generators at n = 5, most of them broken circuits.
    let n = 5;
    let pairs = pair_count(n);
    let words: Vec<u64> = (0..pairs)
        .tuple_combinations()
        .map(|(a, b, c)| [a, b, c].iter().map(|k| 1u64 << (2 * n + k)).sum())
        .collect();
    c.bench_function("normal_form/n5_q3", |b| {
        b.iter(|| {
            let model = fresh(n);
            words.iter().map(|&m| model.normal_form_monomial(m).len()).sum::<usize>()
        })
    });
}

fn differential(c: &mut Criterion) {
    let mut g = c.benchmark_group("differential_matrix");
    for n in [4, 5] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| {
                let model = fresh(n);
                black_box(model.differential_matrix(2, 2).nnz())
            })
        });
    }
    g.finish();
}

fn invariants(c: &mut Criterion) {
    let mut g = c.benchmark_group("invariants");
    for which in [ModelId::UA, ModelId::UB] {
        g.bench_with_input(BenchmarkId::from_parameter(which.name()), &which, |b, &which| {
            b.iter(|| {
                let model = fresh(5);
                black_box(model.dim(which, 4, 2).unwrap())
            })
        });
    }
    g.finish();
}

fn cohomology_bench(c: &mut Criterion) {
    let mut g = c.benchmark_group("cohomology");
    g.sample_size(10);
    for n in [4, 5] {
        g.bench_with_input(BenchmarkId::new("UB", n), &n, |b, &n| {
            b.iter(|| black_box(cohomology(&fresh(n), ModelId::UB).unwrap().len()))
        });
    }
    g.bench_function("grothendieck_um/5", |b| {
        b.iter(|| black_box(groth_hodge_polynomial(&fresh(5), Space::UM).unwrap()))
    });
    g.finish();
}

fn classes(c: &mut Criterion) {
    c.bench_function("classes/alpha_squared_n6", |b| {
        b.iter(|| {
            let model = fresh(6);
            let a = build_class(&model, ClassName::Alpha).unwrap();
            black_box(product(&model, &a.value, &a.value).unwrap())
        })
    });
}

fn partitions(c: &mut Criterion) {
    c.bench_function("marked_partitions/n23_9_16", |b| b.iter(|| black_box(enumerate_marked(23, 9, 16).len())));
}

criterion_group!(benches, forests, normal_form, differential, invariants, cohomology_bench, classes, partitions);
criterion_main!(benches);

use std::hint::black_box;

use clonelab::theories::{theory_generators, TheoryName};
use clonelab::{commutant, generate_clone_with, Execution, GeneratorSet, SearchOptions, DEFAULT_BUDGET};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn generators(name: &str) -> GeneratorSet {
    theory_generators(&TheoryName::parse(name, None).unwrap()).unwrap()
}

fn modes() -> [(&'static str, SearchOptions); 2] {
    [
        ("sequential", SearchOptions { budget: DEFAULT_BUDGET, execution: Execution::Sequential }),
        ("parallel", SearchOptions { budget: DEFAULT_BUDGET, execution: Execution::Parallel }),
    ]
}

fn commutants(c: &mut Criterion) {
    let mut group = c.benchmark_group("commutant");
    for (theory, n) in [("aff@zmod5", 2), ("fincard@zmod3", 2), ("uslat", 5)] {
        let gens = generators(theory);
        for (mode, opts) in modes() {
            group.bench_with_input(BenchmarkId::new(mode, format!("{theory}/n={n}")), &opts, |b, opts| {
                b.iter(|| commutant(black_box(&gens), n, opts).unwrap())
            });
        }
    }
    group.finish();
}

fn clone_generation(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate_clone");
    for (theory, n) in [("mat-left@zmod3", 3), ("uslat", 5)] {
        let gens = generators(theory);
        for (mode, opts) in modes() {
            group.bench_with_input(BenchmarkId::new(mode, format!("{theory}/n={n}")), &opts, |b, opts| {
                b.iter(|| generate_clone_with(black_box(&gens), n, opts).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, commutants, clone_generation);
criterion_main!(benches);

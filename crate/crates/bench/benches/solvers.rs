use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use rtiling_bench::{coloured, copy_hypergraph};
use rtiling_core::constructions::{build_triangle_extremal, build_clique_extremal};
use rtiling_core::convert::{convert, count_bad_triples};
use rtiling_core::fractional::{decide_fractional, solve_fractional_matching};
use rtiling_core::tiling::{has_perfect_rainbow_tiling, max_rainbow_tiling};

fn simplex(c: &mut Criterion) {
    let mut group = c.benchmark_group("fractional");
    for n in [6, 9, 12] {
        let f = copy_hypergraph(n, 7);
        group.bench_with_input(BenchmarkId::new("solve", n), &f, |b, f| {
            b.iter(|| solve_fractional_matching(black_box(f)))
        });
        group.bench_with_input(BenchmarkId::new("decide", n), &f, |b, f| {
            b.iter(|| decide_fractional(black_box(f)).unwrap())
        });
    }
    group.finish();
}

fn packing(c: &mut Criterion) {
    let mut group = c.benchmark_group("packing");
    group.sample_size(10);
    let p16 = build_clique_extremal(3, 3).unwrap();
    group.bench_function("clique_extremal(3,3) perfect", |b| {
        b.iter(|| has_perfect_rainbow_tiling(black_box(&p16), 3, u64::MAX).unwrap())
    });
    let p15 = build_triangle_extremal(13, 3).unwrap();
    group.bench_function("triangle_extremal(13,3) max", |b| {
        b.iter(|| max_rainbow_tiling(black_box(&p15), 3, u64::MAX).unwrap())
    });
    group.finish();
}

fn conversion(c: &mut Criterion) {
    let mut group = c.benchmark_group("conversion");
    for n in [20, 40, 80] {
        let g = coloured(n, 3);
        group.bench_with_input(BenchmarkId::new("convert", n), &g, |b, g| b.iter(|| convert(black_box(g))));
        let d = convert(&g).digraph;
        group.bench_with_input(BenchmarkId::new("bad_triples", n), &(g, d), |b, (g, d)| {
            b.iter(|| count_bad_triples(black_box(g), black_box(d), None))
        });
    }
    group.finish();
}

criterion_group!(benches, simplex, packing, conversion);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use wdim::constructions::{complete, directed_cycle, gamma, sharp_upper_example};
use wdim::dimension::naive_weak_metric_dimension;
use wdim::enumerate::{strongly_connected_masks, Limits};
use wdim::weak_metric_dimension;

fn dimension(c: &mut Criterion) {
    let mut group = c.benchmark_group("dimension");
    let cases = [
        ("gamma(17,2)", gamma(17, 2).unwrap()),
        ("gamma(18,2)", gamma(18, 2).unwrap()),
        ("K12", complete(12)),
        ("C16", directed_cycle(16)),
        ("sharp_upper(14,3)", sharp_upper_example(14, 3).unwrap()),
    ];
    for (name, g) in &cases {
        group.bench_with_input(BenchmarkId::new("pruned", name), g, |b, g| {
            b.iter(|| weak_metric_dimension(black_box(g), false).unwrap())
        });
    }
    let g = gamma(9, 2).unwrap();
    group.bench_function("naive/gamma(9,2)", |b| {
        b.iter(|| naive_weak_metric_dimension(black_box(&g)).unwrap())
    });
    group.finish();
}

fn distances(c: &mut Criterion) {
    c.bench_function("distances/gamma(100,3)", |b| {
        b.iter(|| {
            let g = gamma(100, 3).unwrap();
            g.distances().unwrap().diameter()
        })
    });
}

fn enumeration(c: &mut Criterion) {
    c.bench_function("strongly_connected_masks/4", |b| {
        b.iter(|| {
            strongly_connected_masks(4, Limits::default())
                .unwrap()
                .len()
        })
    });
}

criterion_group!(benches, dimension, distances, enumeration);
criterion_main!(benches);

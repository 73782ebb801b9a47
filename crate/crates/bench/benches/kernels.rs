use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use evasion_core::chain::HomologyReport;
use evasion_core::collapse::{search_collapsible, DEFAULT_NODE_BUDGET};
use evasion_core::dtree::dtc;
use evasion_core::fixtures::seven_vertex_torus;
use evasion_core::graph::{builtin_property, EdgeUniverse, GraphClasses};
use evasion_core::theorems::suite_cases;
use evasion_core::{barycentric_subdivision, standard_complex, Prime, StandardKind};

fn homology(c: &mut Criterion) {
    let mut group = c.benchmark_group("homology");
    let torus = seven_vertex_torus();
    let (bar_torus, _) = barycentric_subdivision(&torus);
    let p = Prime::new(3).unwrap();
    group.bench_function("torus", |b| b.iter(|| HomologyReport::new(black_box(&torus), p)));
    group.bench_function("subdivided torus", |b| {
        b.iter(|| HomologyReport::new(black_box(&bar_torus), p))
    });
    group.finish();
}

fn subdivision(c: &mut Criterion) {
    let mut group = c.benchmark_group("barycentric_subdivision");
    for n in [2, 3, 4] {
        let simplex = standard_complex(StandardKind::Full, n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &simplex, |b, s| {
            b.iter(|| barycentric_subdivision(black_box(s)))
        });
    }
    group.finish();
}

fn collapse(c: &mut Criterion) {
    let mut group = c.benchmark_group("search_collapsible");
    for n in [2, 3] {
        let (bar, _) = barycentric_subdivision(&standard_complex(StandardKind::Full, n).unwrap());
        group.bench_with_input(BenchmarkId::new("bar simplex", n), &bar, |b, c| {
            b.iter(|| search_collapsible(black_box(c), DEFAULT_NODE_BUDGET))
        });
    }
    group.finish();
}

fn decision_trees(c: &mut Criterion) {
    let mut group = c.benchmark_group("dtc");
    group.sample_size(10);
    for n in [4, 5] {
        let h = builtin_property("connected", EdgeUniverse::complete(n).unwrap(), None).unwrap();
        group.bench_with_input(BenchmarkId::new("connected", n), &h, |b, h| {
            b.iter(|| dtc(black_box(h)))
        });
    }
    group.finish();
}

fn graph_classes(c: &mut Criterion) {
    let mut group = c.benchmark_group("graph_classes");
    group.sample_size(10);
    group.bench_function("complete(5)", |b| {
        b.iter(|| GraphClasses::new(EdgeUniverse::complete(5).unwrap()).unwrap())
    });
    group.finish();
}

fn theorem_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("theorem_suite");
    group.sample_size(10);
    group.bench_function("all", |b| {
        b.iter(|| {
            suite_cases(None)
                .iter()
                .map(|case| case.run().passed())
                .filter(|&ok| ok)
                .count()
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    homology,
    subdivision,
    collapse,
    decision_trees,
    graph_classes,
    theorem_suite
);
criterion_main!(benches);

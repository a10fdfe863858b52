use std::hint::black_box;

use collidere_core::decomposition::{decompose_check, enumerate_decomposition_targets, SearchBudget};
use collidere_core::enumerate_types_with_delta;
use collidere_core::expr::{parse_expression, parse_type};
use collidere_core::obstructions::{aggregate_verdict, rules, DeformationProblem};
use criterion::{criterion_group, criterion_main, Criterion};

fn problem(source: &str, targets: &str) -> DeformationProblem {
    let s = parse_type(source).unwrap();
    let t = parse_expression(targets).unwrap().expand();
    DeformationProblem::new(s, t)
}

fn dual_graph_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("decompose");
    g.sample_size(20);
    for (s, t) in [("K(4,2)", "3D4 + 3A1"), ("K7", "7K3"), ("K(3,4)", "2A7 + 4A1"), ("K5", "3K3 + A1")] {
        let p = problem(s, t);
        g.bench_function(format!("{s} -> {t}"), |b| {
            b.iter(|| decompose_check(&p.source, black_box(&p.targets), SearchBudget::default(), None))
        });
    }
    g.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    g.sample_size(10);
    g.bench_function("types with delta 10", |b| b.iter(|| enumerate_types_with_delta(black_box(10))));
    for name in ["X9", "K(4,2)"] {
        let t = parse_type(name).unwrap();
        g.bench_function(format!("decompositions of {}", t.label()), |b| {
            b.iter(|| enumerate_decomposition_targets(black_box(&t), SearchBudget::default()))
        });
    }
    g.finish();
}

fn obstructions(c: &mut Criterion) {
    let k7 = problem("K7", "7K3");
    let k5 = problem("K5", "3K3 + A1");
    c.bench_function("spectrum rule K7 -> 7K3", |b| b.iter(|| rules::rule_spectrum_signature(black_box(&k7))));
    c.bench_function("spectrum rule K5 -> 3K3 + A1", |b| b.iter(|| rules::rule_spectrum_signature(black_box(&k5))));
    let k42 = problem("K(4,2)", "3D4 + 3A1");
    c.bench_function("full check K(4,2) -> 3D4 + 3A1", |b| {
        b.iter(|| aggregate_verdict(black_box(&k42), SearchBudget::default()))
    });
}

criterion_group!(benches, dual_graph_search, enumeration, obstructions);
criterion_main!(benches);

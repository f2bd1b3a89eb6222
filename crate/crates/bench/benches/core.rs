use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ncpoly::polyhedral::families;
use ncpoly::section::{classify, SectionSpec};
use ncpoly::{construct_witness, dual_convert, ConeRep, ConvertMode, PtOracle, SolverConfig};
use ncpoly_bench::{cones, section_points};

fn double_description(c: &mut Criterion) {
    let mut g = c.benchmark_group("dual_convert");
    for (name, v) in cones() {
        let rep = ConeRep::V(v);
        g.bench_with_input(BenchmarkId::from_parameter(name), &rep, |b, rep| {
            b.iter(|| dual_convert(black_box(rep), ConvertMode::Strict).unwrap())
        });
    }
    g.finish();
}

fn decide(c: &mut Criterion) {
    let oracle = PtOracle::new(&families::square_cone()).unwrap();
    let cfg = SolverConfig::default();
    let mut g = c.benchmark_group("decide");
    for (name, a) in section_points() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &a, |b, a| b.iter(|| oracle.decide(black_box(a), &cfg).unwrap()));
    }
    g.finish();
    let spec = SectionSpec::default().with_grid(11);
    c.bench_function("section/11x11", |b| b.iter(|| classify(&oracle, black_box(&spec), &cfg).unwrap()));
}

fn witness(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let mut g = c.benchmark_group("construct_witness");
    g.sample_size(10);
    for (name, v) in cones() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &v, |b, v| b.iter(|| construct_witness(black_box(v), &cfg).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, double_description, decide, witness);
criterion_main!(benches);

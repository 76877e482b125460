use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use thompson_core::circuits::TruthTable;
use thompson_core::generators::Gen;
use thompson_core::metrics::{all_permutations, cayley_ball, min_circuit_size_with, BallOptions, DEFAULT_BASIS};
use thompson_core::par::{self, Exec};

const MODES: [(&str, Exec); 2] = [("rayon", Exec::Auto), ("sequential", Exec::Sequential)];

fn ball(c: &mut Criterion) {
    let gens = [Gen::Sigma, Gen::sigma_inv(), Gen::PhiNot, Gen::PhiOr, Gen::Tau12_0, Gen::Tau(1, 2)];
    let mut g = c.benchmark_group("cayley_ball_r4");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| cayley_ball(&gens, 4, BallOptions { exec, ..Default::default() }).unwrap().len())
        });
    }
    g.finish();
}

fn min_size(c: &mut Criterion) {
    let perms: Vec<TruthTable> = all_permutations(2).into_iter().take(8).collect();
    let mut g = c.benchmark_group("min_circuit_size_m2");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::map(exec, &perms, |f| min_circuit_size_with(f, &DEFAULT_BASIS, 12, Exec::Sequential).map(|m| m.size)))
        });
    }
    g.finish();
}

criterion_group!(benches, ball, min_size);
criterion_main!(benches);

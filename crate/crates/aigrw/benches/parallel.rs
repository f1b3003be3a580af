//! Data-parallel vs sequential throughput on the simulation-heavy paths:
//! packed pattern evaluation, equivalence checking, and the multi-try
//! random baseline. Build with `--no-default-features` to measure the
//! purely sequential library configuration.

use criterion::{criterion_group, criterion_main, Criterion};

use aigrw::cost::{random_tries_seq, CostKind};
use aigrw::cuts::enumerate_cuts;
use aigrw::equiv::{check_equivalence, EquivMode};
use aigrw::gen::random_aig;
use aigrw::sim::{simulate_packed, simulate_packed_seq};

fn sim_inputs(n_inputs: usize, n_words: usize, seed: u64) -> Vec<Vec<u64>> {
    let mut state = seed | 1;
    (0..n_inputs)
        .map(|_| {
            (0..n_words)
                .map(|_| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    state
                })
                .collect()
        })
        .collect()
}

fn bench_simulation(c: &mut Criterion) {
    let g = random_aig(1, 24, 2000);
    let inputs = sim_inputs(g.inputs().len(), 4096, 0xBEEF);
    let mut group = c.benchmark_group("simulate_262k_patterns");
    group.bench_function("sequential", |b| {
        b.iter(|| simulate_packed_seq(&g, &inputs).unwrap())
    });
    group.bench_function("default", |b| {
        b.iter(|| simulate_packed(&g, &inputs).unwrap())
    });
    group.finish();
}

fn bench_equivalence(c: &mut Criterion) {
    let g = random_aig(2, 20, 1500);
    let h = g.clone();
    let mode = EquivMode::Random {
        n_vectors: 100_000,
        seed: 7,
    };
    c.bench_function("equivalence_100k_vectors", |b| {
        b.iter(|| assert!(check_equivalence(&g, &h, mode).unwrap()))
    });
}

fn bench_random_baseline(c: &mut Criterion) {
    let g = random_aig(3, 12, 300);
    let cuts = enumerate_cuts(&g, 4, 16).unwrap();
    let mut group = c.benchmark_group("random_baseline_10_tries");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| random_tries_seq(&g, &cuts, 10, CostKind::NodeCount).unwrap())
    });
    #[cfg(feature = "parallel")]
    group.bench_function("default", |b| {
        use aigrw::cost::{run_method, Method, RunConfig};
        b.iter(|| run_method(&g, Method::Random { tries: 10 }, &RunConfig::default()).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_simulation,
    bench_equivalence,
    bench_random_baseline
);
criterion_main!(benches);

//! Parallel vs sequential throughput on the two bulk workloads. With the
//! default `parallel` feature the first variant fans out over rayon; built
//! with --no-default-features both variants run the same sequential code.

use criterion::{criterion_group, criterion_main, Criterion};

use twistlen::experiments::{
    run_grid_on, run_grid_on_sequential, synthetic_english, verify_monotonicity_mass,
    verify_monotonicity_mass_sequential, ExperimentConfig,
};
use twistlen::metrics::{MDomain, Method};

fn bench_grid(c: &mut Criterion) {
    let corpus = synthetic_english(60_000, 9);
    let config = ExperimentConfig {
        text_lengths: vec![200, 300],
        key_lengths: vec![2, 4, 6],
        m_domain: MDomain::new(2, 15).expect("valid"),
        texts_per_cell: 10,
        keys_per_text: 4,
        methods: vec![Method::TwistPlus, Method::TwistPlusPlus],
        master_seed: 5,
        corpus_paths: vec![],
    };

    let mut group = c.benchmark_group("grid_240_trials");
    group.sample_size(20);
    group.bench_function("default", |b| {
        b.iter(|| run_grid_on(&config, &corpus).expect("grid run"))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| run_grid_on_sequential(&config, &corpus).expect("grid run"))
    });
    group.finish();
}

fn bench_monotonicity(c: &mut Criterion) {
    let mut group = c.benchmark_group("monotonicity_2000_cases");
    group.sample_size(10);
    group.bench_function("default", |b| b.iter(|| verify_monotonicity_mass(2_000, 3)));
    group.bench_function("sequential", |b| {
        b.iter(|| verify_monotonicity_mass_sequential(2_000, 3))
    });
    group.finish();
}

criterion_group!(benches, bench_grid, bench_monotonicity);
criterion_main!(benches);

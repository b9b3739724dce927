use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cdbs_core::fock::{output_distribution_with, FockState, SimConfig};
use cdbs_core::random::{random_depth2_optical, random_layered_circuit};
use cdbs_core::shallow::{simulate_depth2_optical, ShallowConfig};
use cdbs_core::Execution;

const MODES: [Execution; 2] = [Execution::Sequential, Execution::Parallel];

fn name(e: Execution) -> &'static str {
    match e {
        Execution::Sequential => "sequential",
        Execution::Parallel => "parallel",
    }
}

/// Full Fock-basis enumeration: one permanent per basis state.
fn fock_enumeration(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let circuit = random_layered_circuit(14, 4, FockState::single_photons(14, &[0, 2, 4, 6, 8, 10]), &mut rng);
    let mut group = c.benchmark_group("fock_output_distribution");
    group.sample_size(10);
    for e in MODES {
        let config = SimConfig {
            execution: e,
            ..SimConfig::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name(e)), &config, |b, config| {
            b.iter(|| output_distribution_with(black_box(&circuit), config).unwrap())
        });
    }
    group.finish();
}

/// Shot-by-shot chain sampling of a depth-2 circuit.
fn shallow_sampling(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let circuit = random_depth2_optical(128, 48, &mut rng);
    let mut group = c.benchmark_group("shallow_sampling_10k");
    group.sample_size(10);
    for e in MODES {
        let config = ShallowConfig {
            execution: e,
            ..ShallowConfig::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name(e)), &config, |b, config| {
            b.iter(|| simulate_depth2_optical(black_box(&circuit), 10_000, 7, config).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, fock_enumeration, shallow_sampling);
criterion_main!(benches);

mod common;

use std::time::{Duration, Instant};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cdbs_core::circuit::{OpticalCircuit, PostselectionSpec, TwoModeGate};
use cdbs_core::fock::{circuit_distribution, FockState, SimConfig};
use cdbs_core::qubit::{simulate, QubitCircuit, TwoQubitGate};
use cdbs_core::random::{haar_mat4, random_depth2_optical, random_depth2_qubits, random_layered_circuit};
use cdbs_core::shallow::{
    exact_depth2_optical, exact_depth2_optical_monitored, exact_depth2_qubits, simulate_depth2_optical,
    simulate_depth2_qubits, ShallowConfig, StepOrder, STORED_PHOTON_CAP, MEASURED_PHOTON_CAP,
};
use cdbs_core::{Error, Execution, Mat2};

use common::{chi_square, CHI_SQUARE_ALPHA};

/// Random register split: some modes postselected on 0 or 1 photons, some
/// outputs, the rest traced out.
fn with_random_register(mut c: OpticalCircuit, rng: &mut ChaCha8Rng) -> OpticalCircuit {
    let mut modes: Vec<usize> = (0..c.modes).collect();
    modes.shuffle(rng);
    let post = rng.random_range(0..=modes.len() / 2);
    let mut spec = PostselectionSpec::new();
    for &m in &modes[..post] {
        spec.require(m, rng.random_range(0..=1));
    }
    let mut outputs: Vec<usize> = modes[post..].iter().copied().filter(|_| rng.random_bool(0.8)).collect();
    outputs.sort();
    c.postselection = spec;
    c.output_modes = outputs;
    c
}

fn random_optical(seed: u64) -> OpticalCircuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes = rng.random_range(2..=8);
    let photons = rng.random_range(0..=modes.min(4));
    let c = random_depth2_optical(modes, photons, &mut rng);
    if rng.random_bool(0.5) {
        with_random_register(c, &mut rng)
    } else {
        c
    }
}

fn random_qubits(seed: u64, max_qubits: usize) -> QubitCircuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_qubits);
    let mut c = random_depth2_qubits(n, &mut rng);
    if rng.random_bool(0.5) {
        let mut qs: Vec<usize> = (0..n).collect();
        qs.shuffle(&mut rng);
        let post = rng.random_range(0..n);
        c.postselect = qs[..post].iter().map(|&q| (q, rng.random_range(0..=1))).collect();
        c.outputs = qs[post..].to_vec();
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn optical_chains_match_the_permanent_oracle(seed: u64) {
        let c = random_optical(seed);
        let oracle = circuit_distribution(&c, &SimConfig::default());
        let (shallow, stats) = match (exact_depth2_optical_monitored(&c, &ShallowConfig::default()), oracle.as_ref()) {
            (Err(Error::InfeasiblePostselection(_)), Err(Error::InfeasiblePostselection(_))) => return Ok(()),
            (r, _) => r.unwrap(),
        };
        let oracle = oracle.unwrap();
        prop_assert!(shallow.max_abs_diff(&oracle) < 1e-9);
        prop_assert!((shallow.success_probability() - oracle.success_probability()).abs() < 1e-9);
        prop_assert!(stats.max_stored <= STORED_PHOTON_CAP);
        prop_assert!(stats.max_measured <= MEASURED_PHOTON_CAP);
    }

    #[test]
    fn qubit_chains_match_the_statevector(seed: u64) {
        let c = random_qubits(seed, 10);
        match (exact_depth2_qubits(&c, &ShallowConfig::default()), simulate(&c)) {
            (Ok(a), Ok(b)) => {
                prop_assert!(a.max_abs_diff(&b) < 1e-9);
                prop_assert!((a.success_probability() - b.success_probability()).abs() < 1e-9);
            }
            (Err(Error::InfeasiblePostselection(_)), Err(Error::InfeasiblePostselection(_))) => {}
            (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
        }
    }

    #[test]
    fn step_order_does_not_matter(seed: u64) {
        let low = ShallowConfig::default();
        let high = ShallowConfig { order: StepOrder::HighestFirst, ..low };
        let c = random_optical(seed);
        if let (Ok(a), Ok(b)) = (exact_depth2_optical(&c, &low), exact_depth2_optical(&c, &high)) {
            prop_assert!(a.max_abs_diff(&b) < 1e-12);
        }
        let q = random_qubits(seed, 8);
        if let (Ok(a), Ok(b)) = (exact_depth2_qubits(&q, &low), exact_depth2_qubits(&q, &high)) {
            prop_assert!(a.max_abs_diff(&b) < 1e-12);
        }
    }

    #[test]
    fn depth_three_is_rejected(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes = rng.random_range(2..=8);
        let c = random_layered_circuit(modes, 3, FockState::single_photons(modes, &[0]), &mut rng);
        let err = exact_depth2_optical(&c, &ShallowConfig::default()).unwrap_err();
        prop_assert!(matches!(err, Error::UnsupportedDepth { depth: 3, .. }), "{err:?}");
        let err = simulate_depth2_optical(&c, 1, 0, &ShallowConfig::default()).unwrap_err();
        prop_assert!(matches!(err, Error::UnsupportedDepth { depth: 3, .. }), "{err:?}");

        let mut q = random_depth2_qubits(4, &mut rng);
        q.layers.push(vec![TwoQubitGate::new(0, 3, haar_mat4(&mut rng))]);
        let err = exact_depth2_qubits(&q, &ShallowConfig::default()).unwrap_err();
        prop_assert!(matches!(err, Error::UnsupportedDepth { depth: 3, .. }), "{err:?}");
    }

    #[test]
    fn sampling_is_deterministic_across_execution_modes(seed: u64, shots in 0usize..10_000) {
        let c = random_optical(seed);
        let par = ShallowConfig::default();
        let seq = ShallowConfig { execution: Execution::Sequential, ..par };
        let a = simulate_depth2_optical(&c, shots, seed, &par).unwrap();
        prop_assert_eq!(&a, &simulate_depth2_optical(&c, shots, seed, &par).unwrap());
        prop_assert_eq!(&a, &simulate_depth2_optical(&c, shots, seed, &seq).unwrap());
    }
}

#[test]
fn qubit_samples_fit_the_statevector() {
    for seed in 0..5 {
        let c = random_qubits(500 + seed, 6);
        let Ok(exact) = simulate(&c) else { continue };
        let expected: Vec<(Vec<u8>, f64)> = exact.iter().collect();
        let batch = simulate_depth2_qubits(&c, 50_000, seed, &ShallowConfig::default()).unwrap();
        let test = chi_square(&batch.outcomes, &expected, CHI_SQUARE_ALPHA);
        assert!(test.passed(), "circuit {seed}: {test:?}");
        let rate = batch.acceptance_rate();
        assert!((rate - exact.success_probability()).abs() < 0.02, "{rate} vs {}", exact.success_probability());
    }
}

/// Photons on even modes, balanced splitters on `(2i, 2i+1)`, identities on
/// `(2i+1, 2i+2)`: one chain spanning every mode.
fn identity_heavy(modes: usize) -> OpticalCircuit {
    let photons: Vec<usize> = (0..modes).step_by(2).collect();
    let mut c = OpticalCircuit::new(FockState::single_photons(modes, &photons));
    for i in (0..modes - 1).step_by(2) {
        c.add_gate(0, TwoModeGate::balanced(i, i + 1));
    }
    for i in (1..modes - 1).step_by(2) {
        c.add_gate(1, TwoModeGate::new(i, i + 1, Mat2::IDENTITY));
    }
    c
}

fn per_shot(modes: usize, shots: usize) -> Duration {
    let c = identity_heavy(modes);
    let config = ShallowConfig {
        execution: Execution::Sequential,
        ..ShallowConfig::default()
    };
    simulate_depth2_optical(&c, 16, 0, &config).unwrap();
    let start = Instant::now();
    let batch = simulate_depth2_optical(&c, shots, 1, &config).unwrap();
    assert_eq!(batch.outcomes.len(), shots);
    start.elapsed() / shots as u32
}

#[test]
fn per_shot_cost_grows_linearly_with_modes() {
    let sizes = [64, 256, 1024];
    let times: Vec<f64> = sizes.iter().map(|&m| per_shot(m, 400).as_secs_f64()).collect();
    for w in 0..2 {
        // 4x the modes; a quadratic cost would show up as 16x.
        let ratio = times[w + 1] / times[w];
        assert!(ratio < 10.0, "{} -> {} modes: {ratio:.2}x per shot", sizes[w], sizes[w + 1]);
    }
}

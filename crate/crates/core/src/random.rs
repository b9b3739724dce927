//! Random instances for property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::circuit::{OpticalCircuit, TwoModeGate};
use crate::fock::FockState;
use crate::linalg::{ComplexMatrix, Mat2, Mat4, C64};
use crate::qubit::{Angle, GraphProgram, Measurement, Outcome, QubitCircuit, TwoQubitGate, MAX_LAYER};

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unitary: Gram-Schmidt on the columns of a complex Gaussian
/// matrix.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = (0..dim).map(|_| (0..dim).map(|_| gaussian(rng)).collect()).collect();
    for j in 0..dim {
        for k in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let proj: C64 = done[k].iter().zip(&rest[0]).map(|(q, v)| q.conj() * v).sum();
            for (v, q) in rest[0].iter_mut().zip(&done[k]) {
                *v -= proj * q;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for v in &mut cols[j] {
            *v /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

pub fn haar_mat2(rng: &mut impl Rng) -> Mat2 {
    let u = haar_unitary(2, rng);
    Mat2::new(u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)])
}

pub fn haar_mat4(rng: &mut impl Rng) -> Mat4 {
    Mat4::from_matrix(&haar_unitary(4, rng))
}

/// Random complex matrix with Gaussian entries.
pub fn gaussian_matrix(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| gaussian(rng))
}

/// `k` distinct pairs out of `0..n` in random order, `1 <= k <= n / 2`.
fn random_pairs(n: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let k = rng.random_range(1..=n / 2);
    (0..k).map(|i| (idx[2 * i], idx[2 * i + 1])).collect()
}

/// Circuit of exactly `depth` layers, each a random pairing of the modes with
/// Haar-random blocks. Needs `modes >= 2` when `depth > 0`.
pub fn random_layered_circuit(modes: usize, depth: usize, input: FockState, rng: &mut impl Rng) -> OpticalCircuit {
    assert_eq!(input.modes(), modes);
    let mut c = OpticalCircuit::new(input);
    for layer in 0..depth {
        for (a, b) in random_pairs(modes, rng) {
            c.add_gate(layer, TwoModeGate::new(a, b, haar_mat2(rng)));
        }
    }
    c
}

/// Depth-2 circuit on `modes` modes with `photons` single photons on random
/// modes, every mode an output.
pub fn random_depth2_optical(modes: usize, photons: usize, rng: &mut impl Rng) -> OpticalCircuit {
    assert!(photons <= modes);
    let mut idx: Vec<usize> = (0..modes).collect();
    idx.shuffle(rng);
    let input = FockState::single_photons(modes, &idx[..photons]);
    random_layered_circuit(modes, 2, input, rng)
}

/// Depth-2 qubit circuit with Haar-random prep, gates and readout.
pub fn random_depth2_qubits(qubits: usize, rng: &mut impl Rng) -> QubitCircuit {
    let mut c = QubitCircuit::new(qubits);
    c.prep = (0..qubits).map(|_| haar_mat2(rng)).collect();
    c.readout = (0..qubits).map(|_| haar_mat2(rng)).collect();
    c.layers = (0..2)
        .map(|_| {
            random_pairs(qubits, rng)
                .into_iter()
                .map(|(a, b)| TwoQubitGate::new(a, b, haar_mat4(rng)))
                .collect()
        })
        .collect();
    c
}

/// Random degree-≤3 graph program with a valid three-layer edge coloring,
/// random angles, and `outputs` output vertices (the last ones). Outcomes are
/// `+` unless `allow_minus`.
pub fn random_graph_program(vertices: usize, outputs: usize, allow_minus: bool, rng: &mut impl Rng) -> GraphProgram {
    assert!(outputs <= vertices);
    let mut g = GraphProgram::new(vertices);
    if vertices >= 2 {
        for layer in 1..=MAX_LAYER {
            let mut idx: Vec<usize> = (0..vertices).collect();
            idx.shuffle(rng);
            let k = rng.random_range(0..=vertices / 2);
            for i in 0..k {
                let (u, v) = (idx[2 * i], idx[2 * i + 1]);
                if !g.edges.iter().any(|e| e.touches(u) && e.touches(v)) {
                    g = g.with_edge(u.min(v), u.max(v), layer);
                }
            }
        }
    }
    for v in 0..vertices {
        let angle = Angle::ALL[rng.random_range(0..Angle::ALL.len())];
        let outcome = if allow_minus && rng.random_bool(0.5) {
            Outcome::Minus
        } else {
            Outcome::Plus
        };
        g = g.with_measurement(v, Measurement::new(angle, outcome));
    }
    let outs: Vec<usize> = (vertices - outputs..vertices).collect();
    for &o in &outs {
        if rng.random_bool(0.5) {
            g.pattern[o] = None;
        }
    }
    g.with_outputs(outs)
}

/// A `dim`-long complex vector with unit norm.
pub fn random_state(dim: usize, rng: &mut impl Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= n);
    v
}

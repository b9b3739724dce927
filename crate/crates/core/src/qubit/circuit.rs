use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::state::{check_qubits, graph_state_with_cap, Statevector, DEFAULT_QUBIT_CAP};
use super::GraphProgram;
use crate::error::{Error, Result};
use crate::linalg::{Mat2, Mat4, C64, ZERO};
use crate::TAU_PROB;

#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitGate {
    pub a: usize,
    pub b: usize,
    /// Indexed by `2·b_a + b_b`.
    pub matrix: Mat4,
}

impl TwoQubitGate {
    pub fn new(a: usize, b: usize, matrix: Mat4) -> Self {
        Self { a, b, matrix }
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Self::new(a, b, Mat4::cz())
    }
}

/// Layered two-qubit circuit on `|0…0⟩`. Single-qubit gates only appear as
/// `prep` (before the first layer) and `readout` (basis rotation before the
/// computational-basis measurement), so they never add depth.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitCircuit {
    pub qubits: usize,
    pub prep: Vec<Mat2>,
    pub layers: Vec<Vec<TwoQubitGate>>,
    pub readout: Vec<Mat2>,
    /// Required measured bit per postselected qubit.
    pub postselect: BTreeMap<usize, u8>,
    /// Reported qubits; bit strings list them in this order.
    pub outputs: Vec<usize>,
}

impl QubitCircuit {
    /// Identity prep and readout, no layers, every qubit an output.
    pub fn new(qubits: usize) -> Self {
        Self {
            qubits,
            prep: vec![Mat2::IDENTITY; qubits],
            layers: Vec::new(),
            readout: vec![Mat2::IDENTITY; qubits],
            postselect: BTreeMap::new(),
            outputs: (0..qubits).collect(),
        }
    }

    /// Number of layers holding at least one two-qubit gate.
    pub fn depth(&self) -> usize {
        self.layers.iter().filter(|l| !l.is_empty()).count()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidProgram(msg));
        let n = self.qubits;
        if self.prep.len() != n || self.readout.len() != n {
            return bad("prep and readout need one gate per qubit".into());
        }
        for (li, layer) in self.layers.iter().enumerate() {
            let mut used = BTreeSet::new();
            for g in layer {
                if g.a >= n || g.b >= n || g.a == g.b {
                    return bad(format!("layer {li}: bad qubit pair ({}, {})", g.a, g.b));
                }
                for q in [g.a, g.b] {
                    if !used.insert(q) {
                        return bad(format!("layer {li}: qubit {q} used twice"));
                    }
                }
            }
        }
        for (&q, &bit) in &self.postselect {
            if q >= n || bit > 1 {
                return bad(format!("bad postselection {q} -> {bit}"));
            }
            if self.outputs.contains(&q) {
                return bad(format!("qubit {q} is both postselected and output"));
            }
        }
        let mut outs = BTreeSet::new();
        if self.outputs.iter().any(|&o| o >= n || !outs.insert(o)) {
            return bad("outputs must be distinct qubits".into());
        }
        Ok(())
    }

    /// Final statevector after readout rotations, before measurement.
    pub fn final_state(&self) -> Result<Statevector> {
        self.validate()?;
        check_qubits(self.qubits, DEFAULT_QUBIT_CAP)?;
        let mut s = Statevector::zero(self.qubits);
        for (q, g) in self.prep.iter().enumerate() {
            s.apply_1q(q, g);
        }
        for layer in &self.layers {
            for g in layer {
                s.apply_2q(g.a, g.b, &g.matrix);
            }
        }
        for (q, g) in self.readout.iter().enumerate() {
            s.apply_1q(q, g);
        }
        Ok(s)
    }
}

/// Probabilities over output bit strings (first output most significant),
/// dense over all `2^k` strings.
#[derive(Clone, Debug, PartialEq)]
pub struct LogicalDistribution {
    bits: usize,
    probs: Vec<f64>,
    success_probability: f64,
}

impl LogicalDistribution {
    pub fn new(bits: usize, probs: Vec<f64>, success_probability: f64) -> Result<Self> {
        if probs.len() != 1 << bits {
            return Err(Error::Dimension(format!(
                "{} probabilities for {bits} output bits",
                probs.len()
            )));
        }
        Ok(Self {
            bits,
            probs,
            success_probability,
        })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn probability(&self, outcome: &[u8]) -> f64 {
        self.probs[bits_to_index(outcome)]
    }

    pub fn success_probability(&self) -> f64 {
        self.success_probability
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `(bit string, probability)` in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<u8>, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, &p)| (index_to_bits(i, self.bits), p))
    }

    pub fn tvd(&self, other: &LogicalDistribution) -> f64 {
        assert_eq!(self.bits, other.bits, "distributions over different registers");
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            / 2.0
    }

    pub fn max_abs_diff(&self, other: &LogicalDistribution) -> f64 {
        assert_eq!(self.bits, other.bits, "distributions over different registers");
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for LogicalDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (bits, p) in self.iter() {
            let s: String = bits.iter().map(|b| char::from(b'0' + b)).collect();
            writeln!(f, "{s} {p:.12}")?;
        }
        Ok(())
    }
}

pub(crate) fn bits_to_index(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

pub(crate) fn index_to_bits(index: usize, bits: usize) -> Vec<u8> {
    (0..bits).map(|i| ((index >> (bits - 1 - i)) & 1) as u8).collect()
}

/// Measures every qubit of `c`, postselects and reports the outputs.
pub fn simulate(c: &QubitCircuit) -> Result<LogicalDistribution> {
    let s = c.final_state()?;
    let k = c.outputs.len();
    let mut probs = vec![0.0; 1 << k];
    for (i, a) in s.amplitudes().iter().enumerate() {
        if c.postselect.iter().any(|(&q, &bit)| ((i >> q) & 1) as u8 != bit) {
            continue;
        }
        let key = c
            .outputs
            .iter()
            .fold(0, |acc, &q| (acc << 1) | ((i >> q) & 1));
        probs[key] += a.norm_sqr();
    }
    normalize(k, probs)
}

fn normalize(bits: usize, mut probs: Vec<f64>) -> Result<LogicalDistribution> {
    let mass: f64 = probs.iter().sum();
    if !(mass >= TAU_PROB) {
        return Err(Error::InfeasiblePostselection(mass));
    }
    for p in &mut probs {
        *p /= mass;
    }
    LogicalDistribution::new(bits, probs, mass)
}

/// The single-round postselected circuit of a measurement pattern: `H` prep on
/// every vertex, one CZ layer per edge-coloring layer, then each measured
/// vertex's basis rotation. Non-output measured vertices are postselected on
/// their outcome bit.
pub fn flatten_postselect(g: &GraphProgram) -> Result<QubitCircuit> {
    g.validate()?;
    let mut c = QubitCircuit::new(g.vertices);
    c.prep = vec![Mat2::hadamard(); g.vertices];
    c.layers = (1..=super::graph::MAX_LAYER)
        .map(|l| g.layer_edges(l).map(|e| TwoQubitGate::cz(e.u, e.v)).collect())
        .collect();
    for (v, m) in g.pattern.iter().enumerate() {
        if let Some(m) = m {
            c.readout[v] = m.angle.basis_rotation();
        }
    }
    c.postselect = g.postselected().map(|(v, m)| (v, m.outcome.bit())).collect();
    c.outputs = g.outputs.clone();
    Ok(c)
}

/// Conditional output distribution of a pattern, computed from the closed-form
/// graph state by contracting each postselected vertex with its measurement
/// bra, without going through [`flatten_postselect`].
pub fn logical_distribution(g: &GraphProgram) -> Result<LogicalDistribution> {
    g.validate()?;
    let state = graph_state_with_cap(g, DEFAULT_QUBIT_CAP)?;
    let mut amps: Vec<C64> = state.amplitudes().to_vec();
    let mut live: Vec<usize> = (0..g.vertices).collect();

    for v in (0..g.vertices).rev() {
        let Some(m) = g.pattern[v] else { continue };
        let r = m.angle.basis_rotation();
        let pos = live.iter().position(|&w| w == v).expect("vertex is live");
        if g.is_output(v) {
            let bit = 1 << pos;
            for i in 0..amps.len() {
                if i & bit == 0 {
                    let [a, b] = r.apply([amps[i], amps[i | bit]]);
                    amps[i] = a;
                    amps[i | bit] = b;
                }
            }
        } else {
            let bra = r.0[m.outcome.bit() as usize];
            let low = (1 << pos) - 1;
            let mut next = vec![ZERO; amps.len() / 2];
            for (j, out) in next.iter_mut().enumerate() {
                let i0 = ((j & !low) << 1) | (j & low);
                *out = bra[0] * amps[i0] + bra[1] * amps[i0 | (1 << pos)];
            }
            amps = next;
            live.remove(pos);
        }
    }

    let k = g.outputs.len();
    let mut probs = vec![0.0; 1 << k];
    for (i, a) in amps.iter().enumerate() {
        let key = g.outputs.iter().fold(0, |acc, &o| {
            let pos = live.iter().position(|&w| w == o).expect("output is live");
            (acc << 1) | ((i >> pos) & 1)
        });
        probs[key] += a.norm_sqr();
    }
    normalize(k, probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{brickwork_graph, Angle, Measurement, Outcome};

    #[test]
    fn empty_circuit_is_all_zeros() {
        let d = simulate(&QubitCircuit::new(3)).unwrap();
        assert_eq!(d.probability(&[0, 0, 0]), 1.0);
    }

    #[test]
    fn bell_pair() {
        let mut c = QubitCircuit::new(2);
        c.prep[0] = Mat2::hadamard();
        let mut cnot = Mat4::identity();
        cnot.0[2][2] = ZERO;
        cnot.0[3][3] = ZERO;
        cnot.0[2][3] = C64::new(1.0, 0.0);
        cnot.0[3][2] = C64::new(1.0, 0.0);
        c.layers.push(vec![TwoQubitGate::new(0, 1, cnot)]);
        let d = simulate(&c).unwrap();
        assert!((d.probability(&[0, 0]) - 0.5).abs() < 1e-15);
        assert!((d.probability(&[1, 1]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn flattened_depths() {
        assert_eq!(flatten_postselect(&brickwork_graph(2, 5)).unwrap().depth(), 3);
        assert_eq!(flatten_postselect(&brickwork_graph(1, 5)).unwrap().depth(), 2);
        assert_eq!(flatten_postselect(&GraphProgram::new(3)).unwrap().depth(), 0);
    }

    #[test]
    fn two_vertex_teleportation_identity() {
        // measuring vertex 0 at θ with outcome + leaves H·diag(1, e^{iθ})|+⟩ on vertex 1
        for a in Angle::ALL {
            let g = GraphProgram::new(2)
                .with_edge(0, 1, 1)
                .with_measurement(0, Measurement::plus(a))
                .with_outputs(vec![1]);
            let d = logical_distribution(&g).unwrap();
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let psi = (Mat2::hadamard() * Mat2::phase(a.radians())).apply([h.into(), h.into()]);
            assert!((d.probability(&[0]) - psi[0].norm_sqr()).abs() < 1e-12, "{a}");
            assert!((d.success_probability() - 0.5).abs() < 1e-12);
            assert!(d.max_abs_diff(&simulate(&flatten_postselect(&g).unwrap()).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn infeasible_pattern_is_an_error() {
        // a lone vertex in |+⟩ measured at angle 0 never gives −
        let g = GraphProgram::new(2)
            .with_measurement(0, Measurement::new(Angle::Zero, Outcome::Minus))
            .with_outputs(vec![1]);
        assert!(matches!(logical_distribution(&g), Err(Error::InfeasiblePostselection(_))));
        assert!(matches!(
            simulate(&flatten_postselect(&g).unwrap()),
            Err(Error::InfeasiblePostselection(_))
        ));
    }
}

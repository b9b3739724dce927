use super::GraphProgram;
use crate::error::{Error, Result};
use crate::linalg::{Mat2, Mat4, C64, ZERO};

/// Default limit on dense statevector width.
pub const DEFAULT_QUBIT_CAP: usize = 20;

pub(crate) fn check_qubits(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::ResourceLimit {
            resource: "statevector qubits",
            size: n as u128,
            cap: cap as u128,
        })
    } else {
        Ok(())
    }
}

/// Dense statevector; bit `q` of the index is qubit `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    qubits: usize,
    amps: Vec<C64>,
}

impl Statevector {
    pub fn zero(qubits: usize) -> Self {
        let mut amps = vec![ZERO; 1 << qubits];
        amps[0] = C64::new(1.0, 0.0);
        Self { qubits, amps }
    }

    pub fn from_amplitudes(qubits: usize, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != 1 << qubits {
            return Err(Error::Dimension(format!(
                "{} amplitudes for {qubits} qubits",
                amps.len()
            )));
        }
        Ok(Self { qubits, amps })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_1q(&mut self, q: usize, g: &Mat2) {
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let [a, b] = g.apply([self.amps[i], self.amps[i | bit]]);
                self.amps[i] = a;
                self.amps[i | bit] = b;
            }
        }
    }

    /// `g` is indexed by `2·b_a + b_b`.
    pub fn apply_2q(&mut self, a: usize, b: usize, g: &Mat4) {
        let (ba, bb) = (1 << a, 1 << b);
        for i in 0..self.amps.len() {
            if i & (ba | bb) == 0 {
                let idx = [i, i | bb, i | ba, i | ba | bb];
                let out = g.apply(idx.map(|j| self.amps[j]));
                for (j, v) in idx.into_iter().zip(out) {
                    self.amps[j] = v;
                }
            }
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Statevector) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// The graph state `∏_{(u,v)∈E} CZ_{uv} |+⟩^{⊗n}` written down directly:
/// amplitude `2^{−n/2} (−1)^{Σ_E b_u b_v}`.
pub fn graph_state(g: &GraphProgram) -> Result<Statevector> {
    graph_state_with_cap(g, DEFAULT_QUBIT_CAP)
}

pub fn graph_state_with_cap(g: &GraphProgram, cap: usize) -> Result<Statevector> {
    let n = g.vertices;
    check_qubits(n, cap)?;
    let scale = (0.5f64).powf(n as f64 / 2.0);
    let amps = (0..1usize << n)
        .map(|i| {
            let odd = g
                .edges
                .iter()
                .filter(|e| (i >> e.u) & 1 == 1 && (i >> e.v) & 1 == 1)
                .count()
                % 2;
            C64::new(if odd == 1 { -scale } else { scale }, 0.0)
        })
        .collect();
    Ok(Statevector { qubits: n, amps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::brickwork_graph;

    #[test]
    fn single_vertex_is_plus() {
        let s = graph_state(&GraphProgram::new(1)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(s.amplitudes(), &[C64::new(h, 0.0), C64::new(h, 0.0)]);
    }

    #[test]
    fn closed_form_matches_gate_application() {
        let g = brickwork_graph(2, 5);
        let mut s = Statevector::zero(g.vertices);
        for q in 0..g.vertices {
            s.apply_1q(q, &Mat2::hadamard());
        }
        for e in &g.edges {
            s.apply_2q(e.u, e.v, &Mat4::cz());
        }
        let closed = graph_state(&g).unwrap();
        assert!((closed.inner(&s).norm() - 1.0).abs() < 1e-12);
        assert!(closed
            .amplitudes()
            .iter()
            .zip(s.amplitudes())
            .all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            graph_state_with_cap(&GraphProgram::new(5), 4),
            Err(Error::ResourceLimit { size: 5, cap: 4, .. })
        ));
    }
}

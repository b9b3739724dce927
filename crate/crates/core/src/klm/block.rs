use std::f64::consts::PI;

use crate::circuit::{Layer, OpticalCircuit, PhaseShifter, TwoModeGate};
use crate::error::{Error, Result};
use crate::fock::FockState;
use crate::linalg::Mat2;
use crate::TAU_UNITARY;

/// Success probability of the postselected CZ block.
pub const KNILL_SUCCESS: f64 = 2.0 / 27.0;

/// Success probability of one mode teleportation.
pub const TELEPORT_SUCCESS: f64 = 0.25;

/// Reusable circuit fragment over `modes` local modes.
#[derive(Clone, Debug, PartialEq)]
pub struct GateBlock {
    pub name: &'static str,
    pub modes: usize,
    pub layers: Vec<Layer>,
    /// Photons injected at ancilla inputs, by local mode.
    pub ancilla_input: Vec<(usize, u32)>,
    /// Photons required at ancilla outputs, by local mode.
    pub postselection: Vec<(usize, u32)>,
    /// Local modes that carry computational input.
    pub ports: Vec<usize>,
    /// Local modes that carry the computational result.
    pub outputs: Vec<usize>,
}

impl GateBlock {
    /// The block as a standalone circuit, with the given photons on its ports.
    pub fn to_circuit(&self, port_photons: &[u32]) -> OpticalCircuit {
        assert_eq!(port_photons.len(), self.ports.len(), "one occupation per port");
        let mut occ = vec![0; self.modes];
        for (&p, &n) in self.ports.iter().zip(port_photons) {
            occ[p] = n;
        }
        for &(m, n) in &self.ancilla_input {
            occ[m] += n;
        }
        let mut c = OpticalCircuit::new(FockState::new(occ));
        c.layers = self.layers.clone();
        c.postselection = self.postselection.iter().copied().collect();
        c.output_modes = self.outputs.clone();
        c
    }

    /// Writes the block into `circuit`: local mode `i` becomes `mode_map[i]` and
    /// local layer `l` lands in circuit layer `layer_slots[l]`. Ancilla inputs
    /// and postselection are added to the circuit's.
    pub fn instantiate(&self, circuit: &mut OpticalCircuit, mode_map: &[usize], layer_slots: &[usize]) {
        assert_eq!(mode_map.len(), self.modes, "one global mode per local mode");
        assert_eq!(layer_slots.len(), self.layers.len(), "one slot per block layer");
        for (layer, &slot) in self.layers.iter().zip(layer_slots) {
            for p in &layer.phases {
                circuit.add_phase(slot, mode_map[p.mode], p.phase);
            }
            for g in &layer.gates {
                let mut g = g.clone();
                g.mode_a = mode_map[g.mode_a];
                g.mode_b = mode_map[g.mode_b];
                circuit.add_gate(slot, g);
            }
        }
        for &(m, n) in &self.ancilla_input {
            circuit.input.occupations_mut()[mode_map[m]] += n;
        }
        for &(m, n) in &self.postselection {
            circuit.postselection.require(mode_map[m], n);
        }
    }
}

/// Exact angles `(θ, φ)` of the CZ block: `cos θ = 1/√3` and
/// `cos φ = √((3 + √6)/6)`, about 54.7356° and 17.6322°. The solver in
/// [`super::solve_knill_angles`] reproduces them from rounded seeds.
pub fn knill_angles() -> (f64, f64) {
    let theta = (1.0 / 3f64.sqrt()).acos();
    let phi = ((3.0 + 6f64.sqrt()) / 6.0).sqrt().acos();
    (theta, phi)
}

/// Local mode layout of the CZ block: `[port a, ancilla, ancilla, port b]`.
pub const CZ_PORT_A: usize = 0;
pub const CZ_PORT_B: usize = 3;

/// The CZ block for explicit angles. Wiring:
///
/// ```text
/// layer 1: reflection(θ) on (a, c1)   rotation(−θ) on (c2, b)
/// layer 2: rotation(π − θ) on (a, b)  rotation(φ) on (c1, c2)
/// ```
///
/// with `rotation(t) = [[cos t, −sin t], [sin t, cos t]]` and
/// `reflection(t) = [[cos t, sin t], [sin t, −cos t]]`. Each ancilla `c1`,
/// `c2` gets one photon and is postselected on one photon.
pub fn knill_cz_with(theta: f64, phi: f64) -> GateBlock {
    let mut l1 = Layer::default();
    l1.gates.push(TwoModeGate::new(0, 1, Mat2::reflection(theta)).labeled("cz"));
    l1.gates.push(TwoModeGate::new(2, 3, Mat2::rotation(-theta)).labeled("cz"));
    let mut l2 = Layer::default();
    l2.gates.push(TwoModeGate::new(0, 3, Mat2::rotation(PI - theta)).labeled("cz"));
    l2.gates.push(TwoModeGate::new(1, 2, Mat2::rotation(phi)).labeled("cz"));
    GateBlock {
        name: "knill_cz",
        modes: 4,
        layers: vec![l1, l2],
        ancilla_input: vec![(1, 1), (2, 1)],
        postselection: vec![(1, 1), (2, 1)],
        ports: vec![CZ_PORT_A, CZ_PORT_B],
        outputs: vec![CZ_PORT_A, CZ_PORT_B],
    }
}

/// Postselected CZ on the photon occupations of its two ports: conditioned on
/// one photon at each ancilla it applies `diag(1, 1, 1, −1)` to
/// `|00⟩, |01⟩, |10⟩, |11⟩` with amplitude `√(2/27)`.
pub fn knill_cz() -> GateBlock {
    let (theta, phi) = knill_angles();
    knill_cz_with(theta, phi)
}

/// CZ block with optional π phase shifters on its ports before the first
/// layer. A π phase on a port flips the sign whenever that port holds a photon.
pub fn cz_block(phase_a: bool, phase_b: bool) -> GateBlock {
    let mut b = knill_cz();
    for (on, port) in [(phase_a, CZ_PORT_A), (phase_b, CZ_PORT_B)] {
        if on {
            b.layers[0].phases.push(PhaseShifter::new(port, PI));
        }
    }
    b
}

/// [`knill_cz`] preceded by π phase shifters on both ports: up to a global
/// phase it flips the sign of the port state `|00⟩` only. Applied to the
/// zero rails of two dual-rail qubits it is a logical CZ.
pub fn cz_on_zero_rails() -> GateBlock {
    let mut b = cz_block(true, true);
    b.name = "cz_on_zero_rails";
    b
}

/// Local modes of the teleportation block: `[input, t1, t2]`.
pub const TELEPORT_INPUT: usize = 0;
pub const TELEPORT_OUTPUT: usize = 2;

/// Moves the state of mode 0 onto mode 2. Layer 1 prepares
/// `(|01⟩ + |10⟩)/√2` on `(t1, t2)` from one photon in `t1`; layer 2 is a
/// balanced beam splitter on `(input, t1)`. Postselecting one photon at the
/// input mode and none at `t1` leaves the input state on `t2` with success
/// probability 1/4 for vacuum and single-photon inputs alike.
pub fn teleport_mode() -> GateBlock {
    let mut prep = Layer::default();
    prep.gates.push(TwoModeGate::new(1, 2, Mat2::balanced()).labeled("tp-prep"));
    let mut bell = Layer::default();
    bell.gates.push(TwoModeGate::new(0, 1, Mat2::balanced()).labeled("tp-bell"));
    GateBlock {
        name: "teleport_mode",
        modes: 3,
        layers: vec![prep, bell],
        ancilla_input: vec![(1, 1)],
        postselection: vec![(0, 1), (1, 0)],
        ports: vec![TELEPORT_INPUT],
        outputs: vec![TELEPORT_OUTPUT],
    }
}

/// Per-qubit `(zero rail, one rail)` modes: `|0⟩_L` is a photon in the zero
/// rail, `|1⟩_L` a photon in the one rail.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualRailMap {
    pub rails: Vec<(usize, usize)>,
}

impl DualRailMap {
    /// Qubit `q` on modes `(2q, 2q + 1)`.
    pub fn consecutive(qubits: usize) -> Self {
        Self {
            rails: (0..qubits).map(|q| (2 * q, 2 * q + 1)).collect(),
        }
    }

    pub fn zero(&self, q: usize) -> usize {
        self.rails[q].0
    }

    pub fn one(&self, q: usize) -> usize {
        self.rails[q].1
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for &(z, o) in &self.rails {
            for m in [z, o] {
                if !seen.insert(m) {
                    return Err(Error::InvalidProgram(format!("mode {m} used by two rails")));
                }
            }
        }
        Ok(())
    }
}

/// The two-mode gate on a qubit's rails whose single-photon action is `u` on
/// the logical basis.
pub fn encode_single_qubit(u: &Mat2, qubit: usize, map: &DualRailMap) -> Result<TwoModeGate> {
    let err = u.unitarity_error();
    if !(err <= TAU_UNITARY) {
        return Err(Error::NonUnitary(err));
    }
    Ok(TwoModeGate::new(map.zero(qubit), map.one(qubit), *u))
}

use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::block::{cz_block, encode_single_qubit, knill_cz, teleport_mode, DualRailMap};
use crate::circuit::{depth, validate, OpticalCircuit, PostselectionSpec};
use crate::error::{Error, Result};
use crate::fock::FockState;
use crate::linalg::Mat2;
use crate::qubit::{serialize_program, GraphProgram, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pipeline {
    /// Prep layer, three sequential CZ rounds of two layers, basis layer.
    Naive8,
    /// All CZ blocks in parallel, with rail alternation and mode teleportation.
    Depth4,
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pipeline::Naive8 => "naive8",
            Pipeline::Depth4 => "depth4",
        })
    }
}

impl FromStr for Pipeline {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive8" => Ok(Pipeline::Naive8),
            "depth4" => Ok(Pipeline::Depth4),
            other => Err(Error::InvalidProgram(format!(
                "unknown pipeline `{other}` (expected naive8 or depth4)"
            ))),
        }
    }
}

/// A compiled circuit and what is needed to read it back as qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledArtifact {
    pub circuit: OpticalCircuit,
    pub pipeline: Pipeline,
    /// `depth(&circuit)`.
    pub depth: usize,
    /// Output vertices, in the program's output order.
    pub output_qubits: Vec<usize>,
    /// Final rails of each output vertex, parallel to `output_qubits`.
    pub qubit_map: DualRailMap,
    /// SHA-256 of the program's text form, lowercase hex.
    pub source_digest: String,
    pub cz_blocks: usize,
    pub teleports: usize,
}

impl CompiledArtifact {
    pub fn postselection(&self) -> &PostselectionSpec {
        &self.circuit.postselection
    }

    pub fn photons(&self) -> u32 {
        self.circuit.photons()
    }
}

pub fn program_digest(g: &GraphProgram) -> String {
    Sha256::digest(serialize_program(g).as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn compile(g: &GraphProgram, pipeline: Pipeline) -> Result<CompiledArtifact> {
    match pipeline {
        Pipeline::Naive8 => compile_naive(g),
        Pipeline::Depth4 => compile_depth4(g),
    }
}

fn base_circuit(g: &GraphProgram, extra_modes: usize) -> OpticalCircuit {
    let modes = 2 * g.vertices + extra_modes;
    let mut occ = vec![0; modes];
    for q in 0..g.vertices {
        occ[2 * q] = 1;
    }
    let mut c = OpticalCircuit::new(FockState::new(occ));
    c.output_modes.clear();
    c
}

/// `|+⟩_L` preparation on every qubit in layer 0.
fn prep_layer(c: &mut OpticalCircuit, map: &DualRailMap, qubits: usize) -> Result<()> {
    for q in 0..qubits {
        c.add_gate(0, encode_single_qubit(&Mat2::hadamard(), q, map)?.labeled("H"));
    }
    Ok(())
}

/// Basis rotations in `layer`, postselection of measured non-output vertices
/// and the output register. `finals` holds each vertex's final rails.
fn finish(
    mut c: OpticalCircuit,
    g: &GraphProgram,
    finals: &DualRailMap,
    layer: usize,
    pipeline: Pipeline,
    cz_blocks: usize,
    teleports: usize,
) -> Result<CompiledArtifact> {
    for (v, m) in g.pattern.iter().enumerate() {
        if let Some(m) = m {
            let gate = encode_single_qubit(&m.angle.basis_rotation(), v, finals)?;
            c.add_gate(layer, gate.labeled("basis"));
        }
    }
    for (v, m) in g.postselected() {
        let (zero, one) = finals.rails[v];
        let bit = u32::from(m.outcome == Outcome::Minus);
        c.postselection.require(zero, 1 - bit).require(one, bit);
    }
    let qubit_map = DualRailMap {
        rails: g.outputs.iter().map(|&o| finals.rails[o]).collect(),
    };
    c.output_modes = qubit_map.rails.iter().flat_map(|&(z, o)| [z, o]).collect();
    validate(&c).into_result()?;
    debug_assert!(c.unassigned_modes().is_empty());
    Ok(CompiledArtifact {
        depth: depth(&c),
        circuit: c,
        pipeline,
        output_qubits: g.outputs.clone(),
        qubit_map,
        source_digest: program_digest(g),
        cz_blocks,
        teleports,
    })
}

/// Sequential pipeline: prep layer, each nonempty edge-coloring layer as a
/// two-layer round of CZ blocks on the qubits' one rails, basis layer.
/// Depth 8 when all three coloring layers are used.
pub fn compile_naive(g: &GraphProgram) -> Result<CompiledArtifact> {
    g.validate()?;
    let v = g.vertices;
    let map = DualRailMap::consecutive(v);
    let mut c = base_circuit(g, 2 * g.edges.len());
    prep_layer(&mut c, &map, v)?;

    let block = knill_cz();
    let mut next = 2 * v;
    let mut slot = 1;
    for layer in 1..=crate::qubit::MAX_LAYER {
        let round: Vec<_> = g.layer_edges(layer).copied().collect();
        if round.is_empty() {
            continue;
        }
        for e in round {
            block.instantiate(&mut c, &[map.one(e.u), next, next + 1, map.one(e.v)], &[slot, slot + 1]);
            next += 2;
        }
        slot += 2;
    }
    finish(c, g, &map, slot, Pipeline::Naive8, g.edges.len(), 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rail {
    Zero,
    One,
}

/// Parallel pipeline of depth 4.
///
/// Every CZ runs in layers 1–2 on its own ancillas. A vertex's first CZ uses
/// its one rail, its second its zero rail, and its third (degree-3 vertices
/// only) a fresh mode `t2` onto which the one rail is teleported; `t2` then
/// serves as the vertex's one rail. A CZ port on a zero rail gets a π phase on
/// its partner port, which turns the occupation-basis CZ into a logical CZ.
/// Layer 0 holds the `|+⟩_L` preparations and teleportation ancilla
/// preparations, layer 3 the Bell-projection beam splitters and the
/// measurement-basis rotations.
pub fn compile_depth4(g: &GraphProgram) -> Result<CompiledArtifact> {
    g.validate()?;
    let v = g.vertices;
    let map = DualRailMap::consecutive(v);
    let edges = g.edges_in_layer_order();
    let teleported: usize = (0..v).filter(|&w| g.degree(w) == 3).count();
    let mut c = base_circuit(g, 2 * edges.len() + 2 * teleported);
    prep_layer(&mut c, &map, v)?;

    let tp = teleport_mode();
    let mut finals = map.clone();
    let mut uses = vec![0usize; v];
    let mut next = 2 * v;
    for e in &edges {
        let mut ports = [(0usize, Rail::One); 2];
        for (i, w) in [e.u, e.v].into_iter().enumerate() {
            ports[i] = match uses[w] {
                0 => (map.one(w), Rail::One),
                1 => (map.zero(w), Rail::Zero),
                _ => {
                    let (t1, t2) = (next, next + 1);
                    next += 2;
                    tp.instantiate(&mut c, &[map.one(w), t1, t2], &[0, 3]);
                    finals.rails[w].1 = t2;
                    (t2, Rail::One)
                }
            };
            uses[w] += 1;
        }
        let block = cz_block(ports[1].1 == Rail::Zero, ports[0].1 == Rail::Zero);
        block.instantiate(&mut c, &[ports[0].0, next, next + 1, ports[1].0], &[1, 2]);
        next += 2;
    }
    debug_assert_eq!(next, c.modes);
    finish(c, g, &finals, 3, Pipeline::Depth4, edges.len(), teleported)
}

use super::{Layer, OpticalCircuit, PhaseShifter};
use crate::linalg::{ComplexMatrix, C64};

/// Entries with modulus at or below this are structural zeros for [`sparsity`].
pub const DEFAULT_SPARSITY_THRESHOLD: f64 = 1e-12;

/// Gates closer than this to a diagonal matrix are treated as phase shifters.
const DIAGONAL_TOL: f64 = 1e-12;

/// Rewrites the circuit so that depth can be read off its layers: diagonal
/// (phase-only or identity) gates become phase shifters, and every phase
/// shifter is folded into the nearest two-mode gate on its mode, preferring the
/// preceding one. Phases on modes no gate touches are kept as free phases.
/// The interferometer is unchanged.
pub fn normalize(circuit: &OpticalCircuit) -> OpticalCircuit {
    let mut layers: Vec<Layer> = circuit
        .layers
        .iter()
        .map(|layer| {
            let mut out = Layer {
                phases: layer.phases.clone(),
                gates: Vec::with_capacity(layer.gates.len()),
            };
            for gate in &layer.gates {
                if gate.unitary.is_diagonal(DIAGONAL_TOL) {
                    let d = gate.unitary.0;
                    out.phases.push(PhaseShifter::new(gate.mode_a, d[0][0].arg()));
                    out.phases.push(PhaseShifter::new(gate.mode_b, d[1][1].arg()));
                } else {
                    out.gates.push(gate.clone());
                }
            }
            out
        })
        .collect();

    let mut pending = Vec::new();
    for (li, layer) in layers.iter_mut().enumerate() {
        for p in layer.phases.drain(..) {
            pending.push((li, p));
        }
    }

    for (li, p) in pending {
        if p.phase == 0.0 {
            continue;
        }
        let factor = C64::from_polar(1.0, p.phase);
        let preceding = (0..li).rev().find_map(|l| {
            layers[l]
                .gates
                .iter()
                .position(|g| g.touches(p.mode))
                .map(|gi| (l, gi))
        });
        if let Some((l, gi)) = preceding {
            let g = &mut layers[l].gates[gi];
            let row = if g.mode_a == p.mode { 0 } else { 1 };
            for z in &mut g.unitary.0[row] {
                *z *= factor;
            }
            continue;
        }
        let following = (li..layers.len()).find_map(|l| {
            layers[l]
                .gates
                .iter()
                .position(|g| g.touches(p.mode))
                .map(|gi| (l, gi))
        });
        if let Some((l, gi)) = following {
            let g = &mut layers[l].gates[gi];
            let col = if g.mode_a == p.mode { 0 } else { 1 };
            for row in &mut g.unitary.0 {
                row[col] *= factor;
            }
            continue;
        }
        layers[li].phases.push(p);
    }

    OpticalCircuit {
        layers,
        ..circuit.clone()
    }
}

/// Number of layers that still contain a two-mode gate after [`normalize`].
pub fn depth(circuit: &OpticalCircuit) -> usize {
    normalize(circuit)
        .layers
        .iter()
        .filter(|l| !l.gates.is_empty())
        .count()
}

/// Length of the longest chain of mode-sharing two-mode gates after
/// [`normalize`]: the depth the circuit would have with every gate moved as
/// early as possible. Never exceeds [`depth`].
pub fn critical_depth(circuit: &OpticalCircuit) -> usize {
    let norm = normalize(circuit);
    let mut level = vec![0usize; circuit.modes];
    let mut deepest = 0;
    for layer in &norm.layers {
        for g in &layer.gates {
            let l = level[g.mode_a].max(level[g.mode_b]) + 1;
            level[g.mode_a] = l;
            level[g.mode_b] = l;
            deepest = deepest.max(l);
        }
    }
    deepest
}

/// Two-mode gate count of each stored layer after [`normalize`].
pub fn layer_gate_counts(circuit: &OpticalCircuit) -> Vec<usize> {
    normalize(circuit).layers.iter().map(|l| l.gates.len()).collect()
}

/// The m×m unitary of the circuit, composing layers in order.
pub fn interferometer(circuit: &OpticalCircuit) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(circuit.modes);
    for layer in &circuit.layers {
        for p in &layer.phases {
            u.scale_row(p.mode, C64::from_polar(1.0, p.phase));
        }
        for g in &layer.gates {
            u.apply_two_mode(g.mode_a, g.mode_b, &g.unitary);
        }
    }
    u
}

/// Largest number of entries with modulus above `threshold` in any row or column.
pub fn sparsity(u: &ComplexMatrix, threshold: f64) -> usize {
    let n = u.dim();
    let mut cols = vec![0usize; n];
    let mut worst = 0;
    for i in 0..n {
        let mut row = 0;
        for (j, z) in u.row(i).iter().enumerate() {
            if z.norm() > threshold {
                row += 1;
                cols[j] += 1;
            }
        }
        worst = worst.max(row);
    }
    cols.into_iter().fold(worst, usize::max)
}

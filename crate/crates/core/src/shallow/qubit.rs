use super::engine::{Cluster, LocalOp, Model, OccupancyLimits, Role};
use super::plan::{ChainPlan, StepOrder};
use super::{ShallowConfig, ShotBatch};
use crate::error::{Error, Result};
use crate::linalg::{Mat4, C64};
use crate::qubit::{bits_to_index, LogicalDistribution, QubitCircuit, TwoQubitGate};

/// The (at most two) nonempty layers of `c`.
fn shallow_layers(c: &QubitCircuit) -> Result<Vec<&Vec<TwoQubitGate>>> {
    c.validate()?;
    let nonempty: Vec<(usize, &Vec<TwoQubitGate>)> =
        c.layers.iter().enumerate().filter(|(_, l)| !l.is_empty()).collect();
    if let Some(&(layer, _)) = nonempty.get(2) {
        return Err(Error::UnsupportedDepth {
            depth: nonempty.len(),
            layer,
        });
    }
    Ok(nonempty.into_iter().map(|(_, l)| l).collect())
}

fn pairs(layer: Option<&&Vec<TwoQubitGate>>) -> Vec<(usize, usize)> {
    layer.map_or_else(Vec::new, |l| l.iter().map(|g| (g.a, g.b)).collect())
}

/// Chain plan of a depth-≤2 qubit circuit. A single nonempty layer is the
/// first layer; every qubit is then measured alone.
pub fn chain_plan_qubits(c: &QubitCircuit, order: StepOrder) -> Result<ChainPlan> {
    let layers = shallow_layers(c)?;
    ChainPlan::new(c.qubits, &pairs(layers.first()), &pairs(layers.get(1)), order)
}

fn model(c: &QubitCircuit, order: StepOrder) -> Result<Model> {
    let layers = shallow_layers(c)?;
    let plan = ChainPlan::new(c.qubits, &pairs(layers.first()), &pairs(layers.get(1)), order)?;
    let gate_of = |layer: Option<&&Vec<TwoQubitGate>>, a: usize| {
        layer.and_then(|l| l.iter().find(|g| g.a == a).map(|g| g.matrix))
    };

    let initial = plan
        .first
        .iter()
        .map(|g| {
            let col = |q: usize| [c.prep[q].0[0][0], c.prep[q].0[1][0]];
            match g[..] {
                [q] => {
                    let [a0, a1] = col(q);
                    Cluster {
                        amps: vec![([0, 0, 0, 0], a0), ([1, 0, 0, 0], a1)],
                    }
                }
                [a, b] => {
                    let (va, vb) = (col(a), col(b));
                    let v: [C64; 4] = [va[0] * vb[0], va[0] * vb[1], va[1] * vb[0], va[1] * vb[1]];
                    let m = gate_of(layers.first(), a).expect("pair comes from a gate");
                    let out = m.apply(v);
                    Cluster {
                        amps: (0..4).map(|i| ([(i >> 1) as u8, (i & 1) as u8, 0, 0], out[i])).collect(),
                    }
                }
                _ => unreachable!("groups hold one or two elements"),
            }
        })
        .collect();

    let ops = plan
        .second
        .iter()
        .map(|g| match g[..] {
            [q] => LocalOp::Qubit1(c.readout[q]),
            [a, b] => {
                let m = gate_of(layers.get(1), a).expect("pair comes from a gate");
                LocalOp::Qubit2(Mat4::kron(&c.readout[a], &c.readout[b]) * m)
            }
            _ => unreachable!("groups hold one or two elements"),
        })
        .collect();

    Ok(Model {
        plan,
        initial,
        ops,
        limits: OccupancyLimits {
            stored_cap: 1,
            measured_cap: 2,
        },
    })
}

fn roles(c: &QubitCircuit) -> Vec<Role> {
    let mut roles = vec![Role::Ignored; c.qubits];
    for (&q, &bit) in &c.postselect {
        roles[q] = Role::Post(bit);
    }
    for (i, &q) in c.outputs.iter().enumerate() {
        roles[q] = Role::Output(i);
    }
    roles
}

/// Exact postselected output distribution of a depth-≤2 qubit circuit.
pub fn exact_depth2_qubits(c: &QubitCircuit, config: &ShallowConfig) -> Result<LogicalDistribution> {
    let m = model(c, config.order)?;
    let k = c.outputs.len();
    let (entries, success, _) = m.exact(&roles(c), k, config.enumeration_cap, config.execution)?;
    let mut probs = vec![0.0; 1 << k];
    for (bits, p) in entries {
        probs[bits_to_index(&bits)] += p;
    }
    LogicalDistribution::new(k, probs, success)
}

/// Samples output bit strings shot by shot along the chain plan. Shots that
/// miss the postselection are discarded and counted.
pub fn simulate_depth2_qubits(
    c: &QubitCircuit,
    shots: usize,
    seed: u64,
    config: &ShallowConfig,
) -> Result<ShotBatch<Vec<u8>>> {
    let m = model(c, config.order)?;
    let (outcomes, _) = m.sample(shots, seed, config.execution, |values| {
        c.postselect
            .iter()
            .all(|(&q, &bit)| values[q] == bit)
            .then(|| c.outputs.iter().map(|&q| values[q]).collect())
    })?;
    Ok(ShotBatch { outcomes, shots })
}

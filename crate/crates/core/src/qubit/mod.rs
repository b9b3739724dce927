//! Logical-level oracle: graph programs, dense statevector simulation and the
//! single-round postselected form of a measurement pattern.

mod circuit;
mod graph;
mod state;

pub use circuit::{
    flatten_postselect, logical_distribution, simulate, LogicalDistribution, QubitCircuit, TwoQubitGate,
};
pub(crate) use circuit::bits_to_index;
pub use graph::{
    brickwork_graph, parse_program, serialize_program, Angle, Edge, GraphProgram, Measurement, Outcome,
    BRICK_PERIOD, MAX_DEGREE, MAX_LAYER,
};
pub use state::{graph_state, graph_state_with_cap, Statevector, DEFAULT_QUBIT_CAP};

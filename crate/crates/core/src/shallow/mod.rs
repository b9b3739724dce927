//! Exact weak simulation of depth-2 circuits.
//!
//! After the first layer every gate pair is in a known two-element state; the
//! second layer is a set of two-element measurements. Walking the layer-2
//! groups along the paths and cycles they form with the layer-1 groups, each
//! measurement only sees the conditional states of at most four elements, so a
//! shot costs constant work per element. The same walk, branching over every
//! outcome instead of sampling one, yields the exact distribution.
//!
//! Qubit circuits measure bits; optical circuits with single-photon or vacuum
//! inputs measure photon counts, which never exceed two per mode in a stored
//! state and four in a measured pair. A runtime monitor enforces both bounds.

mod engine;
mod optical;
mod plan;
mod qubit;

pub use engine::{OccupancyLimits, OccupancyStats};
pub use optical::{
    chain_plan_optical, exact_depth2_optical, exact_depth2_optical_monitored, simulate_depth2_optical,
    MEASURED_PHOTON_CAP, STORED_PHOTON_CAP,
};
pub use plan::{Chain, ChainPlan, Step, StepOrder};
pub use qubit::{chain_plan_qubits, exact_depth2_qubits, simulate_depth2_qubits};

use crate::Execution;

/// Default cap on enumerated outcomes, per chain and for the joint table.
pub const DEFAULT_ENUMERATION_CAP: u128 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShallowConfig {
    pub order: StepOrder,
    pub execution: Execution,
    pub enumeration_cap: u128,
}

impl Default for ShallowConfig {
    fn default() -> Self {
        Self {
            order: StepOrder::default(),
            execution: Execution::default(),
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// Accepted shots out of `shots` attempts.
#[derive(Clone, Debug, PartialEq)]
pub struct ShotBatch<T> {
    pub outcomes: Vec<T>,
    pub shots: usize,
}

impl<T> ShotBatch<T> {
    pub fn acceptance_rate(&self) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.outcomes.len() as f64 / self.shots as f64
        }
    }
}

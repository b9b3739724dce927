//! Backend selection for sampling an optical circuit.

use std::fmt;
use std::str::FromStr;

use crate::circuit::{depth, OpticalCircuit};
use crate::error::{Error, Result};
use crate::fock::{circuit_distribution, FockState, SimConfig};
use crate::shallow::{exact_depth2_optical, simulate_depth2_optical, ShallowConfig};

/// Deepest circuit the shallow backend accepts.
pub const SHALLOW_MAX_DEPTH: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Chain-decomposition sampler for depth ≤ 2.
    Shallow,
    /// Full Fock-space enumeration.
    Exact,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Shallow => "shallow",
            Backend::Exact => "exact",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shallow" => Ok(Backend::Shallow),
            "exact" => Ok(Backend::Exact),
            other => Err(Error::InvalidProgram(format!(
                "unknown backend `{other}` (expected shallow or exact)"
            ))),
        }
    }
}

/// A routing decision and why it was made.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    pub backend: Backend,
    pub depth: usize,
    pub reason: String,
}

/// Depth ≤ 2 with vacuum or single-photon inputs goes to the shallow backend,
/// everything else to the exact one. `force` overrides the choice.
pub fn route(circuit: &OpticalCircuit, force: Option<Backend>) -> Route {
    let d = depth(circuit);
    if let Some(backend) = force {
        return Route {
            backend,
            depth: d,
            reason: "forced".into(),
        };
    }
    let (backend, reason) = if d > SHALLOW_MAX_DEPTH {
        (Backend::Exact, format!("depth {d} > {SHALLOW_MAX_DEPTH}"))
    } else if circuit.input.max_occupation() > 1 {
        (Backend::Exact, "multi-photon input".to_string())
    } else {
        (Backend::Shallow, format!("depth {d} <= {SHALLOW_MAX_DEPTH}"))
    };
    Route {
        backend,
        depth: d,
        reason,
    }
}

/// Samples of the output register from either backend.
#[derive(Clone, Debug, PartialEq)]
pub struct RoutedSamples {
    pub route: Route,
    pub outcomes: Vec<FockState>,
    /// Shots drawn, accepted or not.
    pub shots: usize,
    /// Exact postselection success probability, when the backend computes it.
    pub success_probability: Option<f64>,
}

impl RoutedSamples {
    /// Fraction of shots that met the postselection.
    pub fn acceptance_rate(&self) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.outcomes.len() as f64 / self.shots as f64
        }
    }
}

/// Draws `shots` samples on the routed backend. The exact backend draws from
/// the postselected distribution directly; the shallow one discards shots that
/// miss the postselection and reports the exact success probability when its
/// outcome tables fit under the enumeration cap.
pub fn sample_routed(
    circuit: &OpticalCircuit,
    shots: usize,
    seed: u64,
    route: Route,
    sim: &SimConfig,
    shallow: &ShallowConfig,
) -> Result<RoutedSamples> {
    match route.backend {
        Backend::Exact => {
            let d = circuit_distribution(circuit, sim)?;
            Ok(RoutedSamples {
                outcomes: d.sample(shots, seed, sim.execution),
                shots,
                success_probability: Some(d.success_probability()),
                route,
            })
        }
        Backend::Shallow => {
            let batch = simulate_depth2_optical(circuit, shots, seed, shallow)?;
            let success_probability = if circuit.postselection.is_empty() {
                Some(1.0)
            } else {
                match exact_depth2_optical(circuit, shallow) {
                    Ok(d) => Some(d.success_probability()),
                    Err(Error::ResourceLimit { .. }) => None,
                    Err(e) => return Err(e),
                }
            };
            Ok(RoutedSamples {
                outcomes: batch.outcomes,
                shots,
                success_probability,
                route,
            })
        }
    }
}

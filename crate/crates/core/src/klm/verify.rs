use super::compile::{compile, CompiledArtifact, Pipeline};
use crate::error::{Error, Result};
use crate::fock::{circuit_distribution, SimConfig};
use crate::qubit::{logical_distribution, GraphProgram, LogicalDistribution};

/// Default pass threshold on total-variation distance and leakage.
pub const VERIFY_TOLERANCE: f64 = 1e-9;

/// An artifact's output read back as qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct OpticalReadout {
    /// Probabilities of the valid dual-rail patterns, conditioned on the
    /// postselection. Its success probability is the optical one.
    pub distribution: LogicalDistribution,
    /// Conditional mass on output patterns that are not one photon per qubit.
    pub leakage: f64,
}

/// Maps the postselected Fock distribution of the output register onto the
/// logical basis: rails `(1, 0)` read as 0, `(0, 1)` as 1; anything else is
/// leakage.
pub fn optical_readout(art: &CompiledArtifact, config: &SimConfig) -> Result<OpticalReadout> {
    let d = circuit_distribution(&art.circuit, config)?;
    let position = |m: usize| {
        art.circuit
            .output_modes
            .iter()
            .position(|&o| o == m)
            .ok_or_else(|| Error::InvalidProgram(format!("rail {m} is not an output mode")))
    };
    let rails: Vec<(usize, usize)> = art
        .qubit_map
        .rails
        .iter()
        .map(|&(z, o)| Ok((position(z)?, position(o)?)))
        .collect::<Result<_>>()?;
    let k = rails.len();
    let mut probs = vec![0.0; 1 << k];
    let mut leakage = 0.0;
    for (state, p) in d.iter() {
        let mut key = 0usize;
        let mut valid = true;
        for &(z, o) in &rails {
            key <<= 1;
            match (state.occupation(z), state.occupation(o)) {
                (1, 0) => {}
                (0, 1) => key |= 1,
                _ => valid = false,
            }
        }
        if valid {
            probs[key] += p;
        } else {
            leakage += p;
        }
    }
    Ok(OpticalReadout {
        distribution: LogicalDistribution::new(k, probs, d.success_probability())?,
        leakage,
    })
}

#[derive(Debug)]
pub struct BackendOutcome {
    pub name: String,
    pub result: Result<OpticalReadout>,
}

/// Result of checking a program's compiled circuits against the qubit oracle.
#[derive(Debug)]
pub struct VerifyReport {
    pub tolerance: f64,
    pub outcomes: Vec<BackendOutcome>,
}

impl VerifyReport {
    /// Pairwise total-variation distances between the backends that succeeded.
    pub fn pairwise_tvd(&self) -> Vec<(&str, &str, f64)> {
        let ok: Vec<(&str, &LogicalDistribution)> = self
            .outcomes
            .iter()
            .filter_map(|o| o.result.as_ref().ok().map(|r| (o.name.as_str(), &r.distribution)))
            .collect();
        let mut out = Vec::new();
        for i in 0..ok.len() {
            for j in i + 1..ok.len() {
                out.push((ok[i].0, ok[j].0, ok[i].1.tvd(ok[j].1)));
            }
        }
        out
    }

    pub fn max_tvd(&self) -> f64 {
        self.pairwise_tvd().iter().map(|t| t.2).fold(0.0, f64::max)
    }

    pub fn max_leakage(&self) -> f64 {
        self.outcomes
            .iter()
            .filter_map(|o| o.result.as_ref().ok().map(|r| r.leakage))
            .fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.result.is_ok())
            && self.max_tvd() <= self.tolerance
            && self.max_leakage() <= self.tolerance
    }
}

fn oracle(g: &GraphProgram) -> Result<OpticalReadout> {
    Ok(OpticalReadout {
        distribution: logical_distribution(g)?,
        leakage: 0.0,
    })
}

/// Compiles `g` with both pipelines and compares their postselected output
/// distributions with each other and with the qubit oracle.
pub fn verify_program(g: &GraphProgram, config: &SimConfig) -> VerifyReport {
    let mut outcomes = vec![BackendOutcome {
        name: "oracle".into(),
        result: oracle(g),
    }];
    for p in [Pipeline::Naive8, Pipeline::Depth4] {
        outcomes.push(BackendOutcome {
            name: p.to_string(),
            result: compile(g, p).and_then(|a| optical_readout(&a, config)),
        });
    }
    VerifyReport {
        tolerance: VERIFY_TOLERANCE,
        outcomes,
    }
}

/// Compares a given artifact (for instance one read back from disk) with the
/// qubit oracle of its source program.
pub fn verify_artifact(g: &GraphProgram, art: &CompiledArtifact, config: &SimConfig) -> VerifyReport {
    VerifyReport {
        tolerance: VERIFY_TOLERANCE,
        outcomes: vec![
            BackendOutcome {
                name: "oracle".into(),
                result: oracle(g),
            },
            BackendOutcome {
                name: format!("artifact({})", art.pipeline),
                result: optical_readout(art, config),
            },
        ],
    }
}

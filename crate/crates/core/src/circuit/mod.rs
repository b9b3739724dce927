//! Layered linear-optical circuit IR.
//!
//! A circuit is an ordered list of [`Layer`]s over `modes` optical modes. Within
//! a layer the free phase shifters act first, then the two-mode gates, which
//! must touch pairwise-disjoint modes. Gates may couple arbitrarily distant
//! modes.

mod analysis;
mod format;
mod validate;

use std::collections::BTreeMap;

pub use analysis::{
    critical_depth, depth, interferometer, layer_gate_counts, normalize, sparsity,
    DEFAULT_SPARSITY_THRESHOLD,
};
pub use format::{parse, serialize};
pub use validate::{validate, ValidationReport, Violation};

use crate::fock::FockState;
use crate::linalg::Mat2;

#[derive(Clone, Debug, PartialEq)]
pub struct TwoModeGate {
    pub mode_a: usize,
    pub mode_b: usize,
    /// Acts on the `(mode_a, mode_b)` creation operators column-wise.
    pub unitary: Mat2,
    pub label: Option<String>,
}

impl TwoModeGate {
    pub fn new(mode_a: usize, mode_b: usize, unitary: Mat2) -> Self {
        Self {
            mode_a,
            mode_b,
            unitary,
            label: None,
        }
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn balanced(mode_a: usize, mode_b: usize) -> Self {
        Self::new(mode_a, mode_b, Mat2::balanced()).labeled("BS")
    }

    pub fn touches(&self, mode: usize) -> bool {
        self.mode_a == mode || self.mode_b == mode
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseShifter {
    pub mode: usize,
    /// In `[0, 2π)`.
    pub phase: f64,
}

impl PhaseShifter {
    /// Wraps `phase` into `[0, 2π)`.
    pub fn new(mode: usize, phase: f64) -> Self {
        Self {
            mode,
            phase: wrap_phase(phase),
        }
    }
}

pub(crate) fn wrap_phase(phase: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let p = phase.rem_euclid(tau);
    if p >= tau {
        0.0
    } else {
        p
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Layer {
    pub phases: Vec<PhaseShifter>,
    pub gates: Vec<TwoModeGate>,
}

impl Layer {
    pub fn is_empty(&self) -> bool {
        self.phases.is_empty() && self.gates.is_empty()
    }
}

/// Required photon count per postselected mode.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PostselectionSpec(pub BTreeMap<usize, u32>);

impl PostselectionSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn require(&mut self, mode: usize, photons: u32) -> &mut Self {
        self.0.insert(mode, photons);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, mode: usize) -> Option<u32> {
        self.0.get(&mode).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|(&m, &n)| (m, n))
    }

    pub fn total_photons(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn matches(&self, state: &FockState) -> bool {
        self.iter().all(|(m, n)| state.occupation(m) == n)
    }
}

impl FromIterator<(usize, u32)> for PostselectionSpec {
    fn from_iter<I: IntoIterator<Item = (usize, u32)>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OpticalCircuit {
    pub modes: usize,
    pub input: FockState,
    pub layers: Vec<Layer>,
    pub postselection: PostselectionSpec,
    pub output_modes: Vec<usize>,
}

impl OpticalCircuit {
    /// An empty circuit with the given input and every mode in the output register.
    pub fn new(input: FockState) -> Self {
        let modes = input.modes();
        Self {
            modes,
            input,
            layers: Vec::new(),
            postselection: PostselectionSpec::new(),
            output_modes: (0..modes).collect(),
        }
    }

    fn layer_mut(&mut self, layer: usize) -> &mut Layer {
        if self.layers.len() <= layer {
            self.layers.resize_with(layer + 1, Layer::default);
        }
        &mut self.layers[layer]
    }

    pub fn add_gate(&mut self, layer: usize, gate: TwoModeGate) -> &mut Self {
        self.layer_mut(layer).gates.push(gate);
        self
    }

    pub fn add_phase(&mut self, layer: usize, mode: usize, phase: f64) -> &mut Self {
        self.layer_mut(layer)
            .phases
            .push(PhaseShifter::new(mode, phase));
        self
    }

    /// Appends an empty layer and returns its index.
    pub fn push_layer(&mut self) -> usize {
        self.layers.push(Layer::default());
        self.layers.len() - 1
    }

    /// The circuit that runs `self` and then `next` on the same modes. Input,
    /// postselection and outputs are taken from `self`.
    pub fn then(&self, next: &OpticalCircuit) -> OpticalCircuit {
        assert_eq!(self.modes, next.modes, "concatenated circuits must share modes");
        let mut out = self.clone();
        out.layers.extend(next.layers.iter().cloned());
        out
    }

    pub fn gates(&self) -> impl Iterator<Item = (usize, &TwoModeGate)> {
        self.layers
            .iter()
            .enumerate()
            .flat_map(|(i, l)| l.gates.iter().map(move |g| (i, g)))
    }

    pub fn photons(&self) -> u32 {
        self.input.total_photons()
    }

    /// Modes that are neither postselected nor in the output register.
    pub fn unassigned_modes(&self) -> Vec<usize> {
        (0..self.modes)
            .filter(|m| self.postselection.get(*m).is_none() && !self.output_modes.contains(m))
            .collect()
    }
}

use std::collections::BTreeMap;

use rand::Rng;

use super::FockState;
use crate::circuit::PostselectionSpec;
use crate::error::{Error, Result};
use crate::par::{inverse_cdf, sample_chunked};
use crate::{Execution, TAU_PROB};

/// Probabilities over Fock states, sorted by state. Zero-probability entries
/// that were enumerated are kept.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    modes: usize,
    entries: Vec<(FockState, f64)>,
    success_probability: f64,
}

impl Distribution {
    /// Entries must share a mode count. Duplicate states are summed.
    pub fn new(modes: usize, entries: impl IntoIterator<Item = (FockState, f64)>) -> Result<Self> {
        let mut map: BTreeMap<FockState, f64> = BTreeMap::new();
        for (s, p) in entries {
            if s.modes() != modes {
                return Err(Error::Dimension(format!(
                    "state {s} in a distribution over {modes} modes"
                )));
            }
            *map.entry(s).or_default() += p;
        }
        Ok(Self::from_sorted(modes, map.into_iter().collect(), 1.0))
    }

    pub(crate) fn from_sorted(modes: usize, entries: Vec<(FockState, f64)>, success: f64) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        Self {
            modes,
            entries,
            success_probability: success,
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(FockState, f64)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockState, f64)> {
        self.entries.iter().map(|(s, p)| (s, *p))
    }

    /// Probability of `state`; zero for states outside the support.
    pub fn probability(&self, state: &FockState) -> f64 {
        self.entries
            .binary_search_by(|(s, _)| s.cmp(state))
            .map_or(0.0, |i| self.entries[i].1)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }

    /// Mass that survived every postselection applied so far; 1 if none.
    pub fn success_probability(&self) -> f64 {
        self.success_probability
    }

    /// States with probability above `threshold`.
    pub fn support(&self, threshold: f64) -> impl Iterator<Item = &FockState> {
        self.entries.iter().filter(move |(_, p)| *p > threshold).map(|(s, _)| s)
    }

    /// Total-variation distance, treating missing states as probability 0.
    pub fn tvd(&self, other: &Distribution) -> f64 {
        let (mut i, mut j, mut acc) = (0, 0, 0.0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some((sa, pa)), Some((sb, pb))) if sa == sb => {
                    acc += (pa - pb).abs();
                    i += 1;
                    j += 1;
                }
                (Some((sa, pa)), Some((sb, _))) if sa < sb => {
                    acc += pa.abs();
                    i += 1;
                }
                (Some((_, pa)), None) => {
                    acc += pa.abs();
                    i += 1;
                }
                (_, Some((_, pb))) => {
                    acc += pb.abs();
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        acc / 2.0
    }

    /// Largest per-state probability difference.
    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        let keys = self.entries.iter().chain(&other.entries).map(|(s, _)| s);
        keys.map(|s| (self.probability(s) - other.probability(s)).abs())
            .fold(0.0, f64::max)
    }

    /// Marginal over the given positions of the key, in the order listed.
    pub fn marginal(&self, positions: &[usize]) -> Distribution {
        let mut map: BTreeMap<FockState, f64> = BTreeMap::new();
        for (s, p) in &self.entries {
            *map.entry(s.restrict(positions)).or_default() += p;
        }
        Self::from_sorted(positions.len(), map.into_iter().collect(), self.success_probability)
    }

    /// Draws `shots` states by inverse-CDF over the sorted entries. Identical
    /// `(self, shots, seed)` give identical sequences for either execution mode.
    pub fn sample(&self, shots: usize, seed: u64, exec: Execution) -> Vec<FockState> {
        if shots == 0 || self.entries.is_empty() {
            return Vec::new();
        }
        let total = self.total();
        let mut acc = 0.0;
        let cdf: Vec<f64> = self
            .entries
            .iter()
            .map(|(_, p)| {
                acc += p / total;
                acc
            })
            .collect();
        sample_chunked(exec, shots, seed, |rng, n| {
            (0..n)
                .map(|_| self.entries[inverse_cdf(&cdf, rng.random::<f64>())].0.clone())
                .collect()
        })
    }
}

/// Conditions `d` on the postselected modes carrying their required photon
/// counts. The result is keyed by the remaining modes in ascending order and
/// its success probability is multiplied by the matching mass.
pub fn postselect(d: &Distribution, spec: &PostselectionSpec) -> Result<Distribution> {
    if let Some((mode, _)) = spec.iter().find(|&(m, _)| m >= d.modes) {
        return Err(Error::Dimension(format!(
            "postselected mode {mode} outside a distribution over {} modes",
            d.modes
        )));
    }
    let keep: Vec<usize> = (0..d.modes).filter(|&m| spec.get(m).is_none()).collect();
    let matching: Vec<(FockState, f64)> = d
        .entries
        .iter()
        .filter(|(s, _)| spec.matches(s))
        .map(|(s, p)| (s.restrict(&keep), *p))
        .collect();
    let mass: f64 = matching.iter().map(|(_, p)| p).sum();
    if !(mass >= TAU_PROB) {
        return Err(Error::InfeasiblePostselection(mass));
    }
    // restricting a sorted list to a fixed mode subset keeps it sorted, and
    // matching states differ only on the kept modes
    let entries = matching.into_iter().map(|(s, p)| (s, p / mass)).collect();
    Ok(Distribution::from_sorted(keep.len(), entries, d.success_probability * mass))
}

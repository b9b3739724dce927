//! Gate-by-gate evolution of sparse Fock-space vectors. Independent of the
//! permanent route; used for superposition inputs and occupancy tracking.

use std::collections::BTreeMap;

use super::state::factorial;
use super::FockState;
use crate::circuit::{Layer, PostselectionSpec};
use crate::error::{Error, Result};
use crate::linalg::{Mat2, C64, ZERO};

/// Amplitudes at or below this modulus are dropped after each gate.
const PRUNE: f64 = 1e-15;

/// Sparse state vector over the Fock basis of a fixed number of modes.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    modes: usize,
    amps: BTreeMap<FockState, C64>,
}

impl FockVector {
    pub fn basis_state(state: FockState) -> Self {
        let modes = state.modes();
        Self {
            modes,
            amps: BTreeMap::from([(state, C64::new(1.0, 0.0))]),
        }
    }

    /// Superposition `Σ c_i |s_i⟩`; repeated states are summed.
    pub fn from_terms(modes: usize, terms: impl IntoIterator<Item = (FockState, C64)>) -> Result<Self> {
        let mut amps = BTreeMap::new();
        for (s, c) in terms {
            if s.modes() != modes {
                return Err(Error::Dimension(format!("state {s} in a {modes}-mode vector")));
            }
            *amps.entry(s).or_insert(ZERO) += c;
        }
        Ok(Self { modes, amps })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitude(&self, state: &FockState) -> C64 {
        self.amps.get(state).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockState, C64)> {
        self.amps.iter().map(|(s, &c)| (s, c))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|c| c.norm_sqr()).sum()
    }

    /// Largest single-mode occupation among states with modulus above `threshold`.
    pub fn max_occupation(&self, threshold: f64) -> u32 {
        self.amps
            .iter()
            .filter(|(_, c)| c.norm() > threshold)
            .map(|(s, _)| s.max_occupation())
            .max()
            .unwrap_or(0)
    }

    pub fn apply_phase(&mut self, mode: usize, phase: f64) {
        for (s, c) in self.amps.iter_mut() {
            *c *= C64::from_polar(1.0, phase * f64::from(s.occupation(mode)));
        }
    }

    pub fn apply_gate(&mut self, mode_a: usize, mode_b: usize, g: &Mat2) {
        let mut cache: BTreeMap<u32, Vec<Vec<C64>>> = BTreeMap::new();
        let mut out: BTreeMap<FockState, C64> = BTreeMap::new();
        for (s, c) in std::mem::take(&mut self.amps) {
            let (na, nb) = (s.occupation(mode_a), s.occupation(mode_b));
            let total = na + nb;
            let table = cache.entry(total).or_insert_with(|| two_mode_fock_matrix(g, total));
            for (k, &t) in table[na as usize].iter().enumerate() {
                if t == ZERO {
                    continue;
                }
                let mut next = s.clone();
                let occ = next.occupations_mut();
                occ[mode_a] = k as u32;
                occ[mode_b] = total - k as u32;
                *out.entry(next).or_insert(ZERO) += c * t;
            }
        }
        out.retain(|_, c| c.norm() > PRUNE);
        self.amps = out;
    }

    pub fn apply_layer(&mut self, layer: &Layer) {
        for p in &layer.phases {
            self.apply_phase(p.mode, p.phase);
        }
        for g in &layer.gates {
            self.apply_gate(g.mode_a, g.mode_b, &g.unitary);
        }
    }

    /// Applies the layers in order, failing once more than `cap` basis states
    /// carry amplitude. The check runs after every gate so a single wide
    /// layer cannot grow the vector far past the cap.
    pub fn evolve(&mut self, layers: &[Layer], cap: u128) -> Result<()> {
        let check = |v: &FockVector| {
            if v.amps.len() as u128 > cap {
                Err(Error::ResourceLimit {
                    resource: "sparse Fock vector",
                    size: v.amps.len() as u128,
                    cap,
                })
            } else {
                Ok(())
            }
        };
        for layer in layers {
            for p in &layer.phases {
                self.apply_phase(p.mode, p.phase);
            }
            for g in &layer.gates {
                self.apply_gate(g.mode_a, g.mode_b, &g.unitary);
                check(self)?;
            }
        }
        Ok(())
    }

    /// Unnormalized projection onto the postselected pattern, keyed by the
    /// remaining modes in ascending order.
    pub fn project(&self, spec: &PostselectionSpec) -> FockVector {
        let keep: Vec<usize> = (0..self.modes).filter(|&m| spec.get(m).is_none()).collect();
        let amps = self
            .amps
            .iter()
            .filter(|(s, _)| spec.matches(s))
            .map(|(s, &c)| (s.restrict(&keep), c))
            .collect();
        FockVector {
            modes: keep.len(),
            amps,
        }
    }
}

/// Fock-space action of a two-mode gate on the `total`-photon sector.
/// Row `n_a` lists the amplitudes of `|k, total − k⟩`, `k = 0..=total`, for the
/// input `|n_a, total − n_a⟩`.
///
/// The creation operators map as `a† → G00 a† + G10 b†` and
/// `b† → G01 a† + G11 b†`; expanding the product of binomials gives the
/// coefficients.
pub fn two_mode_fock_matrix(g: &Mat2, total: u32) -> Vec<Vec<C64>> {
    let [[g00, g01], [g10, g11]] = g.0;
    let n = total as usize;
    (0..=n)
        .map(|na| {
            let nb = n - na;
            let pa = binomial_expansion(g00, g10, na);
            let pb = binomial_expansion(g01, g11, nb);
            let norm_in = (factorial(na as u32) * factorial(nb as u32)).sqrt();
            (0..=n)
                .map(|k| {
                    let mut c = ZERO;
                    for i in k.saturating_sub(nb)..=k.min(na) {
                        c += pa[i] * pb[k - i];
                    }
                    c * (factorial(k as u32) * factorial((n - k) as u32)).sqrt() / norm_in
                })
                .collect()
        })
        .collect()
}

/// Coefficients of `x^i` in `(a x + b y)^n`.
fn binomial_expansion(a: C64, b: C64, n: usize) -> Vec<C64> {
    let mut coeffs = vec![ZERO; n + 1];
    let mut binom = 1.0;
    for (i, c) in coeffs.iter_mut().enumerate() {
        *c = a.powu(i as u32) * b.powu((n - i) as u32) * binom;
        binom = binom * (n - i) as f64 / (i + 1) as f64;
    }
    coeffs
}

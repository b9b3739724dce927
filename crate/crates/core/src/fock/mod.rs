//! Exact Fock-space simulation of linear-optical circuits.
//!
//! Amplitudes come from permanents of interferometer sub-matrices
//! ([`transition_amplitude`]); distributions enumerate the full Fock basis, or
//! only the postselected sector, in lexicographic order. [`FockVector`] offers
//! a second, gate-by-gate route used for superposition inputs and occupancy
//! tracking.

mod amplitude;
mod distribution;
mod evolve;
mod permanent;
mod state;

pub use amplitude::transition_amplitude;
pub use distribution::{postselect, Distribution};
pub use evolve::{two_mode_fock_matrix, FockVector};
pub use permanent::{permanent, MAX_PERMANENT_DIM};
pub use state::{basis, basis_size, Basis, FockState};

use amplitude::AmplitudeKernel;

use crate::circuit::{interferometer, validate, OpticalCircuit};
use crate::error::{Error, Result};
use crate::par::map_slice;
use crate::{Execution, TAU_PROB};

/// Default cap on the number of enumerated basis states.
pub const DEFAULT_BASIS_CAP: u128 = 5_000_000;

/// Amplitudes above this modulus count as support in [`occupancy_support`].
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub basis_cap: u128,
    pub execution: Execution,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            basis_cap: DEFAULT_BASIS_CAP,
            execution: Execution::default(),
        }
    }
}

fn check_cap(size: u128, cap: u128) -> Result<()> {
    if size > cap {
        Err(Error::ResourceLimit {
            resource: "Fock basis",
            size,
            cap,
        })
    } else {
        Ok(())
    }
}

/// Full output distribution over all `n`-photon states, ignoring postselection.
pub fn output_distribution(circuit: &OpticalCircuit) -> Result<Distribution> {
    output_distribution_with(circuit, &SimConfig::default())
}

pub fn output_distribution_with(circuit: &OpticalCircuit, config: &SimConfig) -> Result<Distribution> {
    validate(circuit).into_result()?;
    let n = circuit.photons();
    check_cap(basis_size(n, circuit.modes), config.basis_cap)?;
    let u = interferometer(circuit);
    let kernel = AmplitudeKernel::new(&u, &circuit.input)?;
    let states: Vec<FockState> = basis(n, circuit.modes).collect();
    let probs = map_slice(config.execution, &states, |s| {
        kernel.amplitude_unchecked(s).norm_sqr()
    });
    let entries = states.into_iter().zip(probs).collect();
    Ok(Distribution::from_sorted(circuit.modes, entries, 1.0))
}

/// Equal to `postselect(output_distribution(c), &c.postselection)` but only
/// enumerates states that match the postselection pattern, so the cap applies
/// to the free modes alone.
pub fn postselected_distribution(circuit: &OpticalCircuit, config: &SimConfig) -> Result<Distribution> {
    validate(circuit).into_result()?;
    let spec = &circuit.postselection;
    let n = circuit.photons();
    let fixed = spec.total_photons();
    if fixed > n {
        return Err(Error::InfeasiblePostselection(0.0));
    }
    let free: Vec<usize> = (0..circuit.modes).filter(|&m| spec.get(m).is_none()).collect();
    check_cap(basis_size(n - fixed, free.len()), config.basis_cap)?;

    let u = interferometer(circuit);
    let kernel = AmplitudeKernel::new(&u, &circuit.input)?;
    let mut template = FockState::vacuum(circuit.modes);
    for (m, k) in spec.iter() {
        template.occupations_mut()[m] = k;
    }
    let states: Vec<FockState> = basis(n - fixed, free.len()).collect();
    let probs = map_slice(config.execution, &states, |s| {
        let mut full = template.clone();
        for (&m, &k) in free.iter().zip(s.occupations()) {
            full.occupations_mut()[m] = k;
        }
        kernel.amplitude_unchecked(&full).norm_sqr()
    });
    let mass: f64 = probs.iter().sum();
    if !(mass >= TAU_PROB) {
        return Err(Error::InfeasiblePostselection(mass));
    }
    let entries = states.into_iter().zip(probs.into_iter().map(|p| p / mass)).collect();
    Ok(Distribution::from_sorted(free.len(), entries, mass))
}

/// Postselected distribution marginalized onto the output register, keyed by
/// the output modes in register order.
pub fn circuit_distribution(circuit: &OpticalCircuit, config: &SimConfig) -> Result<Distribution> {
    let d = postselected_distribution(circuit, config)?;
    let free: Vec<usize> = (0..circuit.modes)
        .filter(|&m| circuit.postselection.get(m).is_none())
        .collect();
    let positions: Vec<usize> = circuit
        .output_modes
        .iter()
        .map(|m| free.binary_search(m).expect("validated: outputs are not postselected"))
        .collect();
    Ok(d.marginal(&positions))
}

/// `shots` i.i.d. samples of the output register from [`circuit_distribution`].
pub fn sample(circuit: &OpticalCircuit, shots: usize, seed: u64) -> Result<Vec<FockState>> {
    sample_with(circuit, shots, seed, &SimConfig::default())
}

pub fn sample_with(
    circuit: &OpticalCircuit,
    shots: usize,
    seed: u64,
    config: &SimConfig,
) -> Result<Vec<FockState>> {
    let d = circuit_distribution(circuit, config)?;
    Ok(d.sample(shots, seed, config.execution))
}

/// Largest photon number found in a single mode across the support of the
/// state after the first `after_layer` stored layers.
pub fn occupancy_support(circuit: &OpticalCircuit, after_layer: usize) -> Result<u32> {
    occupancy_support_with(circuit, after_layer, DEFAULT_BASIS_CAP)
}

pub fn occupancy_support_with(circuit: &OpticalCircuit, after_layer: usize, cap: u128) -> Result<u32> {
    if after_layer > circuit.layers.len() {
        return Err(Error::LayerOutOfRange {
            index: after_layer,
            depth: circuit.layers.len(),
        });
    }
    validate(circuit).into_result()?;
    let mut v = FockVector::basis_state(circuit.input.clone());
    v.evolve(&circuit.layers[..after_layer], cap)?;
    Ok(v.max_occupation(SUPPORT_THRESHOLD))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::TwoModeGate;

    fn hom() -> OpticalCircuit {
        let mut c = OpticalCircuit::new(FockState::new(vec![1, 1]));
        c.add_gate(0, TwoModeGate::balanced(0, 1));
        c
    }

    #[test]
    fn hom_distribution() {
        let d = output_distribution(&hom()).unwrap();
        assert_eq!(d.len(), 3);
        assert!(d.probability(&FockState::new(vec![1, 1])) < 1e-30);
        assert!((d.probability(&FockState::new(vec![2, 0])) - 0.5).abs() < 1e-15);
        assert!((d.total() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = OpticalCircuit::new(FockState::new(vec![1, 0]));
        let d = output_distribution(&c).unwrap();
        assert_eq!(d.probability(&FockState::new(vec![1, 0])), 1.0);
        assert_eq!(sample(&c, 5, 3).unwrap(), vec![FockState::new(vec![1, 0]); 5]);
    }

    #[test]
    fn cap_reports_size() {
        let c = OpticalCircuit::new(FockState::single_photons(30, &[0, 1, 2, 3, 4, 5]));
        let config = SimConfig {
            basis_cap: 1000,
            ..SimConfig::default()
        };
        match output_distribution_with(&c, &config) {
            Err(Error::ResourceLimit { size, .. }) => assert_eq!(size, basis_size(6, 30)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sector_enumeration_matches_postselect() {
        let mut c = OpticalCircuit::new(FockState::new(vec![1, 1, 1, 0]));
        c.add_gate(0, TwoModeGate::balanced(0, 1));
        c.add_gate(0, TwoModeGate::new(2, 3, crate::Mat2::rotation(0.3)));
        c.add_gate(1, TwoModeGate::balanced(1, 2));
        c.postselection.require(3, 0).require(1, 1);
        c.output_modes = vec![2, 0];
        let config = SimConfig::default();
        let direct = postselected_distribution(&c, &config).unwrap();
        let via = postselect(&output_distribution(&c).unwrap(), &c.postselection).unwrap();
        assert!(direct.max_abs_diff(&via) < 1e-14);
        assert!((direct.success_probability() - via.success_probability()).abs() < 1e-14);
        let out = circuit_distribution(&c, &config).unwrap();
        assert_eq!(out.modes(), 2);
    }

    #[test]
    fn occupancy_after_hom() {
        assert_eq!(occupancy_support(&hom(), 0).unwrap(), 1);
        assert_eq!(occupancy_support(&hom(), 1).unwrap(), 2);
        assert!(matches!(
            occupancy_support(&hom(), 2),
            Err(Error::LayerOutOfRange { index: 2, depth: 1 })
        ));
    }
}

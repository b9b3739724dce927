use super::engine::{Cluster, LocalOp, Model, OccupancyLimits, OccupancyStats, Role};
use super::plan::{ChainPlan, StepOrder};
use super::{ShallowConfig, ShotBatch};
use crate::circuit::{normalize, validate, OpticalCircuit, TwoModeGate};
use crate::error::{Error, Result};
use crate::fock::{two_mode_fock_matrix, Distribution, FockState};

/// Photons a mode may hold in a stored conditional state.
pub const STORED_PHOTON_CAP: u8 = 2;
/// Photons a measured pair may hold.
pub const MEASURED_PHOTON_CAP: u8 = 4;

/// Gates of the (at most two) nonempty layers after phase absorption.
fn shallow_layers(c: &OpticalCircuit) -> Result<Vec<Vec<TwoModeGate>>> {
    validate(c).into_result()?;
    if let Some((mode, &photons)) = c.input.occupations().iter().enumerate().find(|(_, &n)| n > 1) {
        return Err(Error::MultiPhotonInput { mode, photons });
    }
    let norm = normalize(c);
    let nonempty: Vec<(usize, Vec<TwoModeGate>)> = norm
        .layers
        .into_iter()
        .enumerate()
        .filter(|(_, l)| !l.gates.is_empty())
        .map(|(i, l)| (i, l.gates))
        .collect();
    if let Some((layer, _)) = nonempty.get(2) {
        return Err(Error::UnsupportedDepth {
            depth: nonempty.len(),
            layer: *layer,
        });
    }
    Ok(nonempty.into_iter().map(|(_, g)| g).collect())
}

fn pairs(layer: Option<&Vec<TwoModeGate>>) -> Vec<(usize, usize)> {
    layer.map_or_else(Vec::new, |l| l.iter().map(|g| (g.mode_a, g.mode_b)).collect())
}

fn gate_of(layer: Option<&Vec<TwoModeGate>>, a: usize) -> &TwoModeGate {
    layer.and_then(|l| l.iter().find(|g| g.mode_a == a)).expect("pair comes from a gate")
}

fn tables(g: &TwoModeGate, max_total: u32) -> Vec<Vec<Vec<crate::C64>>> {
    (0..=max_total).map(|t| two_mode_fock_matrix(&g.unitary, t)).collect()
}

/// Chain plan of a depth-≤2 optical circuit.
pub fn chain_plan_optical(c: &OpticalCircuit, order: StepOrder) -> Result<ChainPlan> {
    let layers = shallow_layers(c)?;
    ChainPlan::new(c.modes, &pairs(layers.first()), &pairs(layers.get(1)), order)
}

fn model(c: &OpticalCircuit, order: StepOrder) -> Result<Model> {
    let layers = shallow_layers(c)?;
    let plan = ChainPlan::new(c.modes, &pairs(layers.first()), &pairs(layers.get(1)), order)?;
    let n = |m: usize| c.input.occupation(m) as u8;

    let initial = plan
        .first
        .iter()
        .map(|g| match g[..] {
            [m] => Cluster::basis(&[n(m)]),
            [a, b] => {
                let total = n(a) + n(b);
                let row = &two_mode_fock_matrix(&gate_of(layers.first(), a).unitary, total as u32)[n(a) as usize];
                Cluster {
                    amps: row
                        .iter()
                        .enumerate()
                        .map(|(k, &amp)| ([k as u8, total - k as u8, 0, 0], amp))
                        .collect(),
                }
            }
            _ => unreachable!("groups hold one or two elements"),
        })
        .collect();

    let ops = plan
        .second
        .iter()
        .map(|g| match g[..] {
            [_] => LocalOp::Identity,
            [a, _] => LocalOp::Modes2(tables(gate_of(layers.get(1), a), MEASURED_PHOTON_CAP as u32)),
            _ => unreachable!("groups hold one or two elements"),
        })
        .collect();

    Ok(Model {
        plan,
        initial,
        ops,
        limits: OccupancyLimits {
            stored_cap: STORED_PHOTON_CAP,
            measured_cap: MEASURED_PHOTON_CAP,
        },
    })
}

fn roles(c: &OpticalCircuit) -> Result<Vec<Role>> {
    let mut roles = vec![Role::Ignored; c.modes];
    for (m, k) in c.postselection.iter() {
        // A mode never holds more than the measured-pair cap.
        roles[m] = Role::Post(u8::try_from(k).unwrap_or(u8::MAX));
    }
    for (i, &m) in c.output_modes.iter().enumerate() {
        roles[m] = Role::Output(i);
    }
    Ok(roles)
}

/// Exact postselected distribution of the output register, keyed like
/// [`crate::fock::circuit_distribution`], with the occupancy monitor's maxima.
pub fn exact_depth2_optical_monitored(
    c: &OpticalCircuit,
    config: &ShallowConfig,
) -> Result<(Distribution, OccupancyStats)> {
    let m = model(c, config.order)?;
    let k = c.output_modes.len();
    let (entries, success, stats) = m.exact(&roles(c)?, k, config.enumeration_cap, config.execution)?;
    let entries = entries
        .into_iter()
        .map(|(v, p)| (FockState::new(v.into_iter().map(u32::from).collect()), p))
        .collect();
    Ok((Distribution::from_sorted(k, entries, success), stats))
}

pub fn exact_depth2_optical(c: &OpticalCircuit, config: &ShallowConfig) -> Result<Distribution> {
    exact_depth2_optical_monitored(c, config).map(|(d, _)| d)
}

/// Samples the output register shot by shot along the chain plan. Shots that
/// miss the postselection are discarded and counted.
pub fn simulate_depth2_optical(
    c: &OpticalCircuit,
    shots: usize,
    seed: u64,
    config: &ShallowConfig,
) -> Result<ShotBatch<FockState>> {
    let m = model(c, config.order)?;
    let (outcomes, _) = m.sample(shots, seed, config.execution, |values| {
        c.postselection
            .iter()
            .all(|(mode, k)| u32::from(values[mode]) == k)
            .then(|| FockState::new(c.output_modes.iter().map(|&mode| u32::from(values[mode])).collect()))
    })?;
    Ok(ShotBatch { outcomes, shots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{circuit_distribution, SimConfig};
    use crate::linalg::Mat2;

    fn two_hom_pairs() -> OpticalCircuit {
        let mut c = OpticalCircuit::new(FockState::new(vec![1, 1, 1, 1]));
        c.add_gate(0, TwoModeGate::balanced(0, 1));
        c.add_gate(0, TwoModeGate::balanced(2, 3));
        c
    }

    #[test]
    fn hom_pairs_never_give_coincidences() {
        let c = two_hom_pairs();
        let d = exact_depth2_optical(&c, &ShallowConfig::default()).unwrap();
        assert!(d.probability(&FockState::new(vec![1, 1, 1, 1])) < 1e-24);
        assert!((d.probability(&FockState::new(vec![2, 0, 0, 2])) - 0.25).abs() < 1e-12);
        let s = simulate_depth2_optical(&c, 2000, 5, &ShallowConfig::default()).unwrap();
        assert!(s.outcomes.iter().all(|f| f.occupation(0) != 1 && f.occupation(2) != 1));
    }

    #[test]
    fn brick_of_four_matches_fock_oracle() {
        let mut c = OpticalCircuit::new(FockState::new(vec![1, 1, 1, 0, 1]));
        c.add_gate(0, TwoModeGate::new(0, 1, Mat2::rotation(0.4)));
        c.add_gate(0, TwoModeGate::new(2, 3, Mat2::reflection(1.1)));
        c.add_phase(1, 1, 0.7);
        c.add_gate(1, TwoModeGate::new(1, 2, Mat2::balanced()));
        c.add_gate(1, TwoModeGate::new(4, 0, Mat2::rotation(-0.9)));
        c.postselection.require(3, 0);
        c.output_modes = vec![2, 0, 1, 4];
        let oracle = circuit_distribution(&c, &SimConfig::default()).unwrap();
        let (d, stats) = exact_depth2_optical_monitored(&c, &ShallowConfig::default()).unwrap();
        assert!(d.tvd(&oracle) < 1e-12, "{}", d.tvd(&oracle));
        assert!((d.success_probability() - oracle.success_probability()).abs() < 1e-12);
        assert!(stats.max_stored <= STORED_PHOTON_CAP);
        assert!(stats.max_measured <= MEASURED_PHOTON_CAP);
    }

    #[test]
    fn multi_photon_input_is_rejected() {
        let c = OpticalCircuit::new(FockState::new(vec![2, 0]));
        assert!(matches!(
            exact_depth2_optical(&c, &ShallowConfig::default()),
            Err(Error::MultiPhotonInput { mode: 0, photons: 2 })
        ));
    }
}

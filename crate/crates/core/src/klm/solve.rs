//! Numerical solve for the CZ block angles.
//!
//! For angles `(θ, φ)` the block's conditional amplitudes `g_{ab}` on port
//! state `|ab⟩` must satisfy `g_01 = g_10 = g_00`, `g_11 = −g_00`, and the
//! port photons must not hop or bunch. Those seven real conditions are solved
//! by Gauss-Newton with a central-difference Jacobian.

use super::block::knill_cz_with;
use crate::circuit::interferometer;
use crate::fock::{transition_amplitude, FockState};
use crate::linalg::{ComplexMatrix, C64};

/// Full 4-mode state with ports `(a, b)` and one photon in each ancilla.
fn port_state(a: u32, b: u32) -> FockState {
    FockState::new(vec![a, 1, 1, b])
}

fn amp(u: &ComplexMatrix, input: (u32, u32), output: (u32, u32)) -> C64 {
    transition_amplitude(u, &port_state(input.0, input.1), &port_state(output.0, output.1))
        .expect("photon-conserving port states")
}

/// Conditional port amplitudes `[g_00, g_01, g_10, g_11]` of the block with the
/// given angles.
pub fn knill_conditional_amplitudes(theta: f64, phi: f64) -> [C64; 4] {
    let u = interferometer(&knill_cz_with(theta, phi).to_circuit(&[0, 0]));
    [(0, 0), (0, 1), (1, 0), (1, 1)].map(|s| amp(&u, s, s))
}

fn residuals(theta: f64, phi: f64) -> Vec<f64> {
    let u = interferometer(&knill_cz_with(theta, phi).to_circuit(&[0, 0]));
    let g = [(0, 0), (0, 1), (1, 0), (1, 1)].map(|s| amp(&u, s, s));
    let conditions = [
        g[1] - g[0],
        g[2] - g[0],
        g[3] + g[0],
        amp(&u, (1, 0), (0, 1)),
        amp(&u, (0, 1), (1, 0)),
        amp(&u, (1, 1), (2, 0)),
        amp(&u, (1, 1), (0, 2)),
    ];
    conditions.iter().flat_map(|c| [c.re, c.im]).collect()
}

#[derive(Clone, Copy, Debug)]
pub struct KnillSolution {
    pub theta: f64,
    pub phi: f64,
    /// Euclidean norm of the residual vector at the solution.
    pub residual: f64,
    pub iterations: usize,
}

/// Solves for `(θ, φ)` from a starting guess in radians.
pub fn solve_knill_angles(theta0: f64, phi0: f64) -> KnillSolution {
    let norm = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (mut theta, mut phi) = (theta0, phi0);
    let h = 1e-7;
    let mut iterations = 0;
    for it in 1..=100 {
        iterations = it;
        let r = residuals(theta, phi);
        let jt: Vec<f64> = residuals(theta + h, phi)
            .iter()
            .zip(residuals(theta - h, phi))
            .map(|(a, b)| (a - b) / (2.0 * h))
            .collect();
        let jp: Vec<f64> = residuals(theta, phi + h)
            .iter()
            .zip(residuals(theta, phi - h))
            .map(|(a, b)| (a - b) / (2.0 * h))
            .collect();
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let (a, b, d) = (dot(&jt, &jt), dot(&jt, &jp), dot(&jp, &jp));
        let (gt, gp) = (dot(&jt, &r), dot(&jp, &r));
        let det = a * d - b * b;
        if det.abs() < 1e-300 {
            break;
        }
        let dt = -(d * gt - b * gp) / det;
        let dp = -(a * gp - b * gt) / det;
        theta += dt;
        phi += dp;
        if dt.abs().max(dp.abs()) < 1e-15 {
            break;
        }
    }
    KnillSolution {
        theta,
        phi,
        residual: norm(&residuals(theta, phi)),
        iterations,
    }
}

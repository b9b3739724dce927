//! Compiler from postselected measurement patterns to linear-optical circuits.
//!
//! Qubits are dual-rail encoded. CZ gates use the postselected four-mode block
//! of [`knill_cz`]; the depth-4 pipeline runs all of them in parallel by
//! alternating which rail of a qubit enters each block and by teleporting a
//! rail onto a fresh mode when both are taken.

mod artifact;
mod block;
mod compile;
mod solve;
mod verify;

pub use artifact::{parse_metadata, serialize_metadata, ArtifactMetadata};
pub use block::{
    cz_block, cz_on_zero_rails, encode_single_qubit, knill_angles, knill_cz, knill_cz_with, teleport_mode,
    DualRailMap, GateBlock, CZ_PORT_A, CZ_PORT_B, KNILL_SUCCESS, TELEPORT_INPUT, TELEPORT_OUTPUT,
    TELEPORT_SUCCESS,
};
pub use compile::{compile, compile_depth4, compile_naive, program_digest, CompiledArtifact, Pipeline};
pub use solve::{knill_conditional_amplitudes, solve_knill_angles, KnillSolution};
pub use verify::{
    optical_readout, verify_artifact, verify_program, BackendOutcome, OpticalReadout, VerifyReport,
    VERIFY_TOLERANCE,
};

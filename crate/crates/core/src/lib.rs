//! Compilation and exact simulation of constant-depth linear-optical circuits.
//!
//! The crate is organised around five subsystems:
//!
//! - [`fock`]: permanents, Fock-space transition amplitudes, exact output
//!   distributions, postselection and seeded inverse-CDF sampling.
//! - [`circuit`]: the layered two-mode-gate IR, depth counting with phase
//!   absorption, interferometer composition, sparsity and the text format.
//! - [`qubit`]: graph programs, brickwork layouts, dense statevector
//!   simulation and postselected flattening of measurement patterns.
//! - [`klm`]: dual-rail encoding, the postselected CZ block, mode
//!   teleportation and the depth-8 / depth-4 compilation pipelines.
//! - [`shallow`]: chain-decomposition weak simulators for depth-2 qubit and
//!   optical circuits, plus exact-distribution enumeration.
//!
//! Everything is a pure function of its inputs. Heavy loops (Fock-basis
//! enumeration, shot sampling) are partitioned into fixed-size chunks and run
//! on rayon when the `parallel` feature is enabled; chunk boundaries and
//! per-chunk RNG streams do not depend on the thread count, so results are
//! bit-identical between [`Execution::Sequential`] and [`Execution::Parallel`].

pub mod circuit;
pub mod error;
pub mod fock;
pub mod klm;
pub mod linalg;
mod par;
pub mod qubit;
pub mod random;
pub mod routing;
pub mod shallow;
mod text;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Mat2, Mat4, C64};
pub use par::Execution;

/// Max-norm tolerance on `U·U† − I` for a matrix to count as unitary.
pub const TAU_UNITARY: f64 = 1e-10;

/// Tolerance on probability sums and on the smallest usable postselection mass.
pub const TAU_PROB: f64 = 1e-9;

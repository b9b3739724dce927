use thiserror::Error;

use crate::circuit::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("photon number not conserved: input carries {input} photons, output {output}")]
    Conservation { input: u32, output: u32 },

    #[error("{resource} of size {size} exceeds the cap of {cap}")]
    ResourceLimit {
        resource: &'static str,
        size: u128,
        cap: u128,
    },

    #[error("postselection is infeasible: success probability {0:e}")]
    InfeasiblePostselection(f64),

    #[error("layer index {index} out of range for depth {depth}")]
    LayerOutOfRange { index: usize, depth: usize },

    #[error("unsupported depth {depth}: layer {layer} is a third two-mode layer; shallow simulation needs depth <= 2")]
    UnsupportedDepth { depth: usize, layer: usize },

    #[error("input mode {mode} holds {photons} photons; only vacuum or single-photon inputs are supported")]
    MultiPhotonInput { mode: usize, photons: u32 },

    #[error("occupancy discipline violated: {0}")]
    Occupancy(String),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NonUnitary(f64),

    #[error("invalid circuit:\n{0}")]
    InvalidCircuit(ValidationReport),

    #[error("invalid graph program: {0}")]
    InvalidProgram(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

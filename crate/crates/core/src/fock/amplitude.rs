use super::permanent::{permanent_row_major, MAX_PERMANENT_DIM};
use super::FockState;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// `⟨output| Û |input⟩ = Per(U_{T,S}) / √(∏ s_j! ∏ t_i!)`.
///
/// Column `j` of `U` is repeated `s_j` times and row `i` is repeated `t_i`
/// times, both in ascending mode order.
pub fn transition_amplitude(u: &ComplexMatrix, input: &FockState, output: &FockState) -> Result<C64> {
    AmplitudeKernel::new(u, input)?.amplitude(output)
}

/// Precomputed column selection for many amplitudes from one input state.
pub(crate) struct AmplitudeKernel<'a> {
    u: &'a ComplexMatrix,
    cols: Vec<usize>,
    input_norm: f64,
    photons: u32,
}

impl<'a> AmplitudeKernel<'a> {
    pub fn new(u: &'a ComplexMatrix, input: &FockState) -> Result<Self> {
        if input.modes() != u.dim() {
            return Err(Error::Dimension(format!(
                "input state has {} modes, interferometer {}",
                input.modes(),
                u.dim()
            )));
        }
        let photons = input.total_photons();
        if photons as usize > MAX_PERMANENT_DIM {
            return Err(Error::ResourceLimit {
                resource: "permanent dimension",
                size: photons.into(),
                cap: MAX_PERMANENT_DIM as u128,
            });
        }
        Ok(Self {
            u,
            cols: repeated_modes(input),
            input_norm: input.factorial_product(),
            photons,
        })
    }

    pub fn amplitude(&self, output: &FockState) -> Result<C64> {
        if output.modes() != self.u.dim() {
            return Err(Error::Dimension(format!(
                "output state has {} modes, interferometer {}",
                output.modes(),
                self.u.dim()
            )));
        }
        if output.total_photons() != self.photons {
            return Err(Error::Conservation {
                input: self.photons,
                output: output.total_photons(),
            });
        }
        Ok(self.amplitude_unchecked(output))
    }

    pub fn amplitude_unchecked(&self, output: &FockState) -> C64 {
        let k = self.cols.len();
        let rows = repeated_modes(output);
        let mut sub = Vec::with_capacity(k * k);
        for &r in &rows {
            let row = self.u.row(r);
            sub.extend(self.cols.iter().map(|&c| row[c]));
        }
        let norm = (self.input_norm * output.factorial_product()).sqrt();
        permanent_row_major(k, &sub) / norm
    }
}

fn repeated_modes(state: &FockState) -> Vec<usize> {
    state
        .occupations()
        .iter()
        .enumerate()
        .flat_map(|(m, &n)| std::iter::repeat_n(m, n as usize))
        .collect()
}

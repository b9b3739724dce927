//! Order-preserving data-parallel helpers with a sequential fallback.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// How chunked workloads are executed. Both variants give identical results;
/// without the `parallel` feature `Parallel` runs sequentially.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Shots per RNG stream. Fixed so that outputs do not depend on worker count.
pub(crate) const SHOT_CHUNK: usize = 4096;

/// Maps `f` over `0..len`, preserving order.
pub(crate) fn map_indices<R, F>(exec: Execution, len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..len).into_par_iter().map(f).collect()
        }
        _ => (0..len).map(f).collect(),
    }
}

/// Maps `f` over the items, preserving order.
pub(crate) fn map_slice<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// RNG for shot chunk `chunk` of a run seeded with `seed`.
pub(crate) fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// Draws `shots` samples by splitting them into [`SHOT_CHUNK`]-sized chunks,
/// each with its own deterministic RNG stream.
pub(crate) fn sample_chunked<T, F>(exec: Execution, shots: usize, seed: u64, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> Vec<T> + Sync + Send,
{
    let chunks = shots.div_ceil(SHOT_CHUNK);
    let per_chunk = map_indices(exec, chunks, |c| {
        let mut rng = chunk_rng(seed, c);
        let n = SHOT_CHUNK.min(shots - c * SHOT_CHUNK);
        draw(&mut rng, n)
    });
    per_chunk.into_iter().flatten().collect()
}

/// Index of the first cumulative weight strictly above `u`, clamped to the last entry.
pub(crate) fn inverse_cdf(cdf: &[f64], u: f64) -> usize {
    let idx = cdf.partition_point(|&c| c <= u);
    idx.min(cdf.len().saturating_sub(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn chunked_sampling_is_execution_independent() {
        let draw = |rng: &mut ChaCha8Rng, n: usize| (0..n).map(|_| rng.random::<u32>()).collect();
        let a = sample_chunked(Execution::Sequential, 10_000, 7, draw);
        let b = sample_chunked(Execution::Parallel, 10_000, 7, draw);
        assert_eq!(a.len(), 10_000);
        assert_eq!(a, b);
    }

    #[test]
    fn inverse_cdf_skips_zero_mass_entries() {
        let cdf = [0.25, 0.25, 1.0];
        assert_eq!(inverse_cdf(&cdf, 0.1), 0);
        assert_eq!(inverse_cdf(&cdf, 0.25), 2);
        assert_eq!(inverse_cdf(&cdf, 0.999), 2);
    }
}

//! Independent reference computations shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use cdbs_core::{ComplexMatrix, C64};
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub const CHI_SQUARE_ALPHA: f64 = 0.001;
const MIN_EXPECTED: f64 = 5.0;

pub fn corpus(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(rel)
}

/// Permanent as the plain sum over all permutations.
pub fn permanent_by_permutations(m: &ComplexMatrix) -> C64 {
    fn go(m: &ComplexMatrix, row: usize, used: &mut [bool], acc: C64, sum: &mut C64) {
        let n = m.dim();
        if row == n {
            *sum += acc;
            return;
        }
        for col in 0..n {
            if !used[col] {
                used[col] = true;
                go(m, row + 1, used, acc * m[(row, col)], sum);
                used[col] = false;
            }
        }
    }
    let mut sum = C64::new(0.0, 0.0);
    go(m, 0, &mut vec![false; m.dim()], C64::new(1.0, 0.0), &mut sum);
    sum
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    ComplexMatrix::from_fn(n, |i, j| (0..n).map(|k| a[(i, k)] * b[(k, j)]).sum())
}

/// `|⟨a|b⟩|²` for unit vectors.
pub fn fidelity(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>().norm_sqr()
}

pub fn normalized(v: &[C64]) -> Vec<C64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|z| z / n).collect()
}

/// Pearson goodness-of-fit outcome.
#[derive(Debug)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub critical: f64,
    /// Observations on outcomes the model gives zero probability.
    pub impossible: usize,
}

impl ChiSquare {
    pub fn passed(&self) -> bool {
        self.impossible == 0 && self.statistic <= self.critical
    }
}

/// Chi-square test of `samples` against `expected` probabilities at
/// significance `alpha`. Bins with expected count below 5 are pooled; if the
/// pool itself stays under 5 it is merged into the smallest regular bin.
pub fn chi_square<K: Ord + Clone>(samples: &[K], expected: &[(K, f64)], alpha: f64) -> ChiSquare {
    let shots = samples.len() as f64;
    let mut observed: BTreeMap<K, usize> = BTreeMap::new();
    for s in samples {
        *observed.entry(s.clone()).or_default() += 1;
    }
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut pool = (0.0, 0.0);
    let mut impossible = 0;
    let mut seen = 0;
    for (k, p) in expected {
        let o = observed.get(k).copied().unwrap_or(0) as f64;
        seen += o as usize;
        let e = p * shots;
        if *p == 0.0 {
            impossible += o as usize;
        } else if e < MIN_EXPECTED {
            pool.0 += o;
            pool.1 += e;
        } else {
            bins.push((o, e));
        }
    }
    impossible += samples.len() - seen;
    if pool.1 > 0.0 {
        if pool.1 >= MIN_EXPECTED || bins.is_empty() {
            bins.push(pool);
        } else {
            let smallest = bins
                .iter_mut()
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty");
            smallest.0 += pool.0;
            smallest.1 += pool.1;
        }
    }
    let statistic = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = bins.len().saturating_sub(1);
    let critical = if dof == 0 {
        f64::INFINITY
    } else {
        ChiSquared::new(dof as f64).unwrap().inverse_cdf(1.0 - alpha)
    };
    ChiSquare {
        statistic,
        dof,
        critical,
        impossible,
    }
}

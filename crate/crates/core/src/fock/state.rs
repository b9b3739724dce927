use std::fmt;

/// Occupation-number basis state. The derived ordering is lexicographic with
/// mode 0 most significant, which is also the enumeration order of [`basis`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState(Vec<u32>);

impl FockState {
    pub fn new(occupations: Vec<u32>) -> Self {
        Self(occupations)
    }

    pub fn vacuum(modes: usize) -> Self {
        Self(vec![0; modes])
    }

    /// One photon in each listed mode.
    pub fn single_photons(modes: usize, occupied: &[usize]) -> Self {
        let mut occ = vec![0; modes];
        for &m in occupied {
            occ[m] += 1;
        }
        Self(occ)
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn total_photons(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn occupation(&self, mode: usize) -> u32 {
        self.0[mode]
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }

    pub fn max_occupation(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// The occupations of `modes`, in the order given.
    pub fn restrict(&self, modes: &[usize]) -> FockState {
        Self(modes.iter().map(|&m| self.0[m]).collect())
    }

    /// `∏ n_i!` as a float.
    pub(crate) fn factorial_product(&self) -> f64 {
        self.0.iter().map(|&n| factorial(n)).product()
    }

    pub(crate) fn occupations_mut(&mut self) -> &mut [u32] {
        &mut self.0
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str("⟩")
    }
}

pub(crate) fn factorial(n: u32) -> f64 {
    (2..=n).map(f64::from).product()
}

/// `C(n + m − 1, n)`: the number of ways to place `n` photons in `m` modes.
/// Saturates at `u128::MAX`.
pub fn basis_size(photons: u32, modes: usize) -> u128 {
    if modes == 0 {
        return u128::from(photons == 0);
    }
    let n = u128::from(photons);
    let k = (modes - 1) as u128;
    let (small, total) = (n.min(k), n + k);
    let mut acc: u128 = 1;
    for i in 0..small {
        // acc * (total - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul(total - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Iterator over all `photons`-photon states of `modes` modes in ascending
/// lexicographic order, from `|0,…,0,n⟩` to `|n,0,…,0⟩`.
pub fn basis(photons: u32, modes: usize) -> Basis {
    let next = if modes == 0 {
        (photons == 0).then(|| FockState::vacuum(0))
    } else {
        let mut occ = vec![0; modes];
        occ[modes - 1] = photons;
        Some(FockState(occ))
    };
    Basis { next }
}

pub struct Basis {
    next: Option<FockState>,
}

impl Iterator for Basis {
    type Item = FockState;

    fn next(&mut self) -> Option<FockState> {
        let current = self.next.take()?;
        let c = &current.0;
        if let Some(j) = c.iter().rposition(|&n| n > 0).filter(|&j| j > 0) {
            let mut succ = c.clone();
            let rest = succ[j];
            succ[j] = 0;
            succ[j - 1] += 1;
            let last = succ.len() - 1;
            succ[last] = rest - 1;
            self.next = Some(FockState(succ));
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_sorted_and_complete() {
        for m in 0..5 {
            for n in 0..5 {
                let states: Vec<_> = basis(n, m).collect();
                assert_eq!(states.len() as u128, basis_size(n, m), "n={n} m={m}");
                assert!(states.windows(2).all(|w| w[0] < w[1]));
                assert!(states.iter().all(|s| s.total_photons() == n && s.modes() == m));
            }
        }
    }

    #[test]
    fn basis_order_for_two_photons_in_three_modes() {
        let got: Vec<Vec<u32>> = basis(2, 3).map(|s| s.0).collect();
        let want = [[0, 0, 2], [0, 1, 1], [0, 2, 0], [1, 0, 1], [1, 1, 0], [2, 0, 0]];
        assert_eq!(got, want.map(|r| r.to_vec()));
    }

    #[test]
    fn basis_size_handles_large_arguments() {
        assert_eq!(basis_size(10, 20), 20_030_010);
        assert_eq!(basis_size(0, 100), 1);
        assert_eq!(basis_size(500, 500), u128::MAX);
    }

    #[test]
    fn display_lists_occupations() {
        assert_eq!(FockState::new(vec![1, 0, 2]).to_string(), "|1,0,2⟩");
    }
}

use crate::linalg::{ComplexMatrix, C64, ONE, ZERO};

/// Largest matrix the Gray-code loop accepts.
pub const MAX_PERMANENT_DIM: usize = 40;

/// Permanent by Ryser's inclusion-exclusion formula, visiting column subsets
/// in Gray-code order so each step updates the row sums by one column:
/// O(2^k · k). The permanent of the 0×0 matrix is 1.
pub fn permanent(m: &ComplexMatrix) -> C64 {
    let k = m.dim();
    let data: Vec<C64> = (0..k).flat_map(|i| m.row(i).iter().copied()).collect();
    permanent_row_major(k, &data)
}

/// Same as [`permanent`] on a row-major `k×k` slice.
pub(crate) fn permanent_row_major(k: usize, a: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), k * k);
    assert!(k <= MAX_PERMANENT_DIM, "permanent of a {k}x{k} matrix is out of reach");
    match k {
        0 => return ONE,
        1 => return a[0],
        2 => return a[0] * a[3] + a[1] * a[2],
        _ => {}
    }
    let mut row_sums = vec![ZERO; k];
    let mut in_set = vec![false; k];
    let mut total = ZERO;
    let mut size = 0usize;
    for g in 1u64..(1u64 << k) {
        let j = g.trailing_zeros() as usize;
        in_set[j] = !in_set[j];
        if in_set[j] {
            size += 1;
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += a[i * k + j];
            }
        } else {
            size -= 1;
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= a[i * k + j];
            }
        }
        let prod = row_sums.iter().fold(ONE, |p, &s| p * s);
        if (k - size).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total
}

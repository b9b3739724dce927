//! Small dense complex matrices.
//!
//! [`ComplexMatrix`] is the m×m interferometer type. [`Mat2`] and [`Mat4`] are
//! fixed-size gate matrices for two-mode / one-qubit and two-qubit gates.
//! Gate matrices act on column vectors: `out_i = Σ_j U[i][j] in_j`.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// Builds a matrix from rows; every row must have as many entries as there are rows.
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries in a matrix with {dim} rows",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// Max-norm of `U·U† − I`.
    pub fn unitarity_error(&self) -> f64 {
        let prod = self * &self.adjoint();
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((prod[(i, j)] - target).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    pub fn scale_row(&mut self, i: usize, c: C64) {
        let dim = self.dim;
        for z in &mut self.data[i * dim..(i + 1) * dim] {
            *z *= c;
        }
    }

    /// Left-multiplies by `g` embedded on rows `a` and `b`.
    pub fn apply_two_mode(&mut self, a: usize, b: usize, g: &Mat2) {
        let dim = self.dim;
        for c in 0..dim {
            let x = self.data[a * dim + c];
            let y = self.data[b * dim + c];
            self.data[a * dim + c] = g.0[0][0] * x + g.0[0][1] * y;
            self.data[b * dim + c] = g.0[1][0] * x + g.0[1][1] * y;
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// 2×2 complex matrix: a two-mode gate or a single-qubit gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    /// The balanced beam splitter `[[1, 1], [1, -1]] / √2`; equal to the Hadamard gate.
    pub fn balanced() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::real(s, s, s, -s)
    }

    pub fn hadamard() -> Self {
        Self::balanced()
    }

    /// Real rotation `[[cos t, -sin t], [sin t, cos t]]`.
    pub fn rotation(t: f64) -> Self {
        let (s, c) = t.sin_cos();
        Self::real(c, -s, s, c)
    }

    /// Real reflection `[[cos t, sin t], [sin t, -cos t]]`.
    pub fn reflection(t: f64) -> Self {
        let (s, c) = t.sin_cos();
        Self::real(c, s, s, -c)
    }

    pub fn diag(a: C64, d: C64) -> Self {
        Self::new(a, ZERO, ZERO, d)
    }

    /// `diag(1, e^{iθ})`.
    pub fn phase(theta: f64) -> Self {
        Self::diag(ONE, C64::from_polar(1.0, theta))
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    pub fn unitarity_error(&self) -> f64 {
        let p = *self * self.adjoint();
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((p.0[i][j] - target).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.0[0][1].norm() <= tol && self.0[1][0].norm() <= tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.is_diagonal(tol) && (self.0[0][0] - ONE).norm() <= tol && (self.0[1][1] - ONE).norm() <= tol
    }

    /// Swaps the roles of the two modes.
    pub fn swapped(&self) -> Self {
        let m = &self.0;
        Self::new(m[1][1], m[1][0], m[0][1], m[0][0])
    }

    pub fn flat(&self) -> [C64; 4] {
        [self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1]]
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

/// 4×4 complex matrix: a two-qubit gate on basis `|q_a q_b⟩`, index `2·b_a + b_b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat4(pub [[C64; 4]; 4]);

impl Mat4 {
    pub fn identity() -> Self {
        let mut m = [[ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = ONE;
        }
        Mat4(m)
    }

    pub fn diag(d: [C64; 4]) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for i in 0..4 {
            m[i][i] = d[i];
        }
        Mat4(m)
    }

    pub fn cz() -> Self {
        Self::diag([ONE, ONE, ONE, -ONE])
    }

    /// `a ⊗ b`, with `a` acting on the first qubit of the pair.
    pub fn kron(a: &Mat2, b: &Mat2) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = a.0[i >> 1][j >> 1] * b.0[i & 1][j & 1];
            }
        }
        Mat4(m)
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        assert_eq!(m.dim(), 4);
        let mut out = [[ZERO; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z = m[(i, j)];
            }
        }
        Mat4(out)
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(4, |i, j| self.0[i][j])
    }

    pub fn adjoint(&self) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = self.0[j][i].conj();
            }
        }
        Mat4(m)
    }

    pub fn apply(&self, v: [C64; 4]) -> [C64; 4] {
        let mut out = [ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    /// Exchanges which qubit is "first".
    pub fn swapped(&self) -> Self {
        let p = |i: usize| ((i & 1) << 1) | (i >> 1);
        let mut m = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[p(i)][p(j)] = self.0[i][j];
            }
        }
        Mat4(m)
    }

    pub fn unitarity_error(&self) -> f64 {
        self.to_matrix().unitarity_error()
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        (0..4).all(|i| {
            (0..4).all(|j| {
                let target = if i == j { ONE } else { ZERO };
                (self.0[i][j] - target).norm() <= tol
            })
        })
    }
}

impl Mul for Mat4 {
    type Output = Mat4;
    fn mul(self, rhs: Mat4) -> Mat4 {
        let mut out = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        Mat4(out)
    }
}

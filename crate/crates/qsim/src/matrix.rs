//! Minimal dense complex matrix used for gate payloads and oracle checks.

use crate::error::SimError;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Largest dense unitary allowed as a single gate payload: 2^10 x 2^10.
pub const MAX_DENSE_QUBITS: usize = 10;

/// Square complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "ragged matrix rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len());
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn dagger(&self) -> CMatrix {
        let n = self.dim;
        CMatrix::from_fn(n, |i, j| self[(j, i)].conj())
    }

    /// Frobenius norm of U†U − I; an upper bound on the operator-norm deviation.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.dagger().mul(self);
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { 1.0 } else { 0.0 };
                acc += (prod[(i, j)] - expect).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// U^(2^squarings) by repeated squaring.
    pub fn pow2(&self, squarings: usize) -> CMatrix {
        let mut m = self.clone();
        for _ in 0..squarings {
            m = m.mul(&m);
        }
        m
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// A dense matrix payload validated as unitary at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseUnitary(CMatrix);

impl DenseUnitary {
    pub const TOLERANCE: f64 = 1e-10;

    pub fn new(matrix: CMatrix) -> Result<Self, SimError> {
        let dim = matrix.dim();
        if !dim.is_power_of_two() || dim > (1 << MAX_DENSE_QUBITS) {
            return Err(SimError::BadMatrixDim {
                dim,
                max: MAX_DENSE_QUBITS,
            });
        }
        let deviation = matrix.unitarity_deviation();
        if deviation > Self::TOLERANCE {
            return Err(SimError::NonUnitary { dim, deviation });
        }
        Ok(DenseUnitary(matrix))
    }

    /// Diagonal unitary from unit-modulus entries; skips the full product check.
    pub fn diagonal(entries: &[Complex64]) -> Result<Self, SimError> {
        let dim = entries.len();
        if !dim.is_power_of_two() || dim > (1 << MAX_DENSE_QUBITS) {
            return Err(SimError::BadMatrixDim {
                dim,
                max: MAX_DENSE_QUBITS,
            });
        }
        let mut worst = 0.0f64;
        let mut m = CMatrix::zeros(dim);
        for (i, e) in entries.iter().enumerate() {
            worst = worst.max((e.norm() - 1.0).abs());
            m[(i, i)] = *e;
        }
        if worst > Self::TOLERANCE {
            return Err(SimError::NonUnitary {
                dim,
                deviation: worst,
            });
        }
        Ok(DenseUnitary(m))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn qubits(&self) -> usize {
        self.0.qubits()
    }

    pub fn dagger(&self) -> DenseUnitary {
        DenseUnitary(self.0.dagger())
    }

    pub(crate) fn pow2(&self, squarings: usize) -> DenseUnitary {
        DenseUnitary(self.0.pow2(squarings))
    }
}

//! LU factorisation with partial pivoting for square complex systems.

use crate::error::{Error, Result};
use crate::linalg::matrix::{ComplexMatrix, ComplexVector, C64, ONE, ZERO};

#[derive(Clone, Debug)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let n = m.rows();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = m.max_abs();
        for k in 0..n {
            let (pivot_row, pivot_abs) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            if pivot_abs == 0.0 || pivot_abs <= 1e-300 * scale.max(1.0) {
                return Err(Error::Singular { index: k });
            }
            if pivot_row != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
                perm.swap(k, pivot_row);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }
        Ok(Lu { lu, perm })
    }

    #[allow(clippy::needless_range_loop)]
    pub fn solve(&self, b: &[C64]) -> Result<ComplexVector> {
        let n = self.lu.rows();
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        Ok(ComplexVector(x))
    }

    pub fn inverse(&self) -> ComplexMatrix {
        let n = self.lu.rows();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            cols.push(self.solve(&e).expect("dimension checked"));
        }
        ComplexMatrix::from_columns(n, &cols)
    }
}

/// Solve `m x = b`.
pub fn solve(m: &ComplexMatrix, b: &[C64]) -> Result<ComplexVector> {
    Lu::new(m)?.solve(b)
}

pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(Lu::new(m)?.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_matrix, seeded_rng};

    #[test]
    fn inverse_of_random_matrix() {
        let mut rng = seeded_rng(3, 0);
        let m = random_matrix(&mut rng, 7, 7);
        let inv = inverse(&m).unwrap();
        let prod = &m * &inv;
        assert!((&prod - &ComplexMatrix::identity(7)).max_abs() < 1e-11);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let m = ComplexMatrix::from_diagonal(&[1.0, 0.0, 2.0]);
        assert!(matches!(Lu::new(&m), Err(Error::Singular { index: 1 })));
    }
}

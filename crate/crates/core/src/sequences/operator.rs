use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, op_norm, psd_sqrt, ComplexMatrix, ComplexVector, C64};
use crate::sequences::sparse::SparseVector;

type DiagonalRule = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Repr {
    /// `B e_k = d_k e_k` for every coordinate `k`, at any dimension.
    Diagonal(DiagonalRule),
    Dense(ComplexMatrix),
    /// Pointwise multiplication of grid coordinates by a sampled function.
    Multiplication(Vec<f64>),
}

/// A candidate operator `B` in `f = Σ ⟨f, B f_n⟩ f_n`.
#[derive(Clone)]
pub struct ReconstructionOperator {
    name: String,
    repr: Repr,
}

impl fmt::Debug for ReconstructionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.repr {
            Repr::Diagonal(_) => "diagonal".to_string(),
            Repr::Dense(m) => format!("dense {}x{}", m.rows(), m.cols()),
            Repr::Multiplication(v) => format!("multiplication on {} points", v.len()),
        };
        write!(f, "ReconstructionOperator({}: {kind})", self.name)
    }
}

impl ReconstructionOperator {
    pub fn diagonal(
        name: impl Into<String>,
        rule: impl Fn(usize) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ReconstructionOperator {
            name: name.into(),
            repr: Repr::Diagonal(Arc::new(rule)),
        }
    }

    pub fn dense(name: impl Into<String>, matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        Ok(ReconstructionOperator {
            name: name.into(),
            repr: Repr::Dense(matrix),
        })
    }

    pub fn multiplication(name: impl Into<String>, values: Vec<f64>) -> Self {
        ReconstructionOperator {
            name: name.into(),
            repr: Repr::Multiplication(values),
        }
    }

    pub fn identity() -> Self {
        Self::diagonal("identity", |_| 1.0)
    }

    /// `B e_n = e_n / (n+1)²`, the operator paired with `f_n = (n+1) e_n`.
    pub fn scaled_linear_inverse_square() -> Self {
        Self::diagonal("inverse-square", |n| {
            1.0 / ((n as f64 + 1.0) * (n as f64 + 1.0))
        })
    }

    /// `B e_k = e_k / (k+1)`, the operator paired with the repeated basis.
    pub fn repeated_basis_inverse() -> Self {
        Self::diagonal("inverse-multiplicity", |k| 1.0 / (k as f64 + 1.0))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Dimension fixed by the representation, if any.
    pub fn fixed_dim(&self) -> Option<usize> {
        match &self.repr {
            Repr::Diagonal(_) => None,
            Repr::Dense(m) => Some(m.rows()),
            Repr::Multiplication(v) => Some(v.len()),
        }
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self.fixed_dim() {
            Some(d) if d != dim => Err(Error::DimensionMismatch {
                expected: dim,
                found: d,
            }),
            _ => Ok(()),
        }
    }

    /// Diagonal entry `d_k`, when the operator is diagonal in the coordinate basis.
    pub fn diagonal_entry(&self, k: usize) -> Option<f64> {
        match &self.repr {
            Repr::Diagonal(d) => Some(d(k)),
            Repr::Multiplication(v) => v.get(k).copied(),
            Repr::Dense(_) => None,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        !matches!(self.repr, Repr::Dense(_))
    }

    pub fn apply(&self, f: &[C64]) -> Result<ComplexVector> {
        self.check_dim(f.len())?;
        Ok(match &self.repr {
            Repr::Diagonal(d) => {
                ComplexVector(f.iter().enumerate().map(|(k, v)| v * d(k)).collect())
            }
            Repr::Multiplication(w) => {
                ComplexVector(f.iter().zip(w).map(|(v, s)| v * *s).collect())
            }
            Repr::Dense(m) => m.matvec(f)?,
        })
    }

    /// `B* f`.
    pub fn apply_adjoint(&self, f: &[C64]) -> Result<ComplexVector> {
        match &self.repr {
            Repr::Dense(m) => {
                self.check_dim(f.len())?;
                let n = m.rows();
                let mut out = vec![C64::new(0.0, 0.0); n];
                for (i, &fi) in f.iter().enumerate().take(n) {
                    if fi == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for (o, a) in out.iter_mut().zip(m.row(i)) {
                        *o += a.conj() * fi;
                    }
                }
                Ok(ComplexVector(out))
            }
            _ => self.apply(f),
        }
    }

    /// `B v` for an element supported inside `ℂ^dim`.
    pub fn apply_sparse(&self, v: &SparseVector, dim: usize) -> Result<SparseVector> {
        self.check_dim(dim)?;
        Ok(match &self.repr {
            Repr::Diagonal(d) => v.map_values(|k, x| x * d(k)),
            Repr::Multiplication(w) => v.map_values(|k, x| x * w[k]),
            Repr::Dense(m) => {
                let mut out = vec![C64::new(0.0, 0.0); dim];
                for &(k, x) in v.entries() {
                    for (i, o) in out.iter_mut().enumerate() {
                        *o += m[(i, k)] * x;
                    }
                }
                SparseVector::from_dense(&out)
            }
        })
    }

    /// Matrix of the operator on `ℂ^dim`.
    pub fn matrix(&self, dim: usize) -> Result<ComplexMatrix> {
        self.check_dim(dim)?;
        Ok(match &self.repr {
            Repr::Diagonal(d) => {
                ComplexMatrix::from_diagonal(&(0..dim).map(|k| d(k)).collect::<Vec<_>>())
            }
            Repr::Multiplication(w) => ComplexMatrix::from_diagonal(w),
            Repr::Dense(m) => m.clone(),
        })
    }

    /// `‖B‖` on `ℂ^dim`.
    pub fn norm(&self, dim: usize) -> Result<f64> {
        self.check_dim(dim)?;
        Ok(match &self.repr {
            Repr::Diagonal(d) => (0..dim).map(|k| d(k).abs()).fold(0.0, f64::max),
            Repr::Multiplication(w) => w.iter().map(|x| x.abs()).fold(0.0, f64::max),
            Repr::Dense(m) => op_norm(m),
        })
    }

    /// Smallest eigenvalue on `ℂ^dim`; requires a Hermitian representation.
    pub fn min_eigenvalue(&self, dim: usize) -> Result<f64> {
        self.check_dim(dim)?;
        Ok(match &self.repr {
            Repr::Diagonal(d) => (0..dim).map(|k| d(k)).fold(f64::INFINITY, f64::min),
            Repr::Multiplication(w) => w.iter().copied().fold(f64::INFINITY, f64::min),
            Repr::Dense(m) => hermitian_eigenvalues(m)?[0],
        })
    }

    /// Hermitian residual of the representation on `ℂ^dim` (zero for diagonal forms).
    pub fn hermitian_residual(&self, dim: usize) -> Result<f64> {
        self.check_dim(dim)?;
        Ok(match &self.repr {
            Repr::Dense(m) => m.hermitian_residual(),
            _ => 0.0,
        })
    }

    /// `√B` on `ℂ^dim`, failing for indefinite operators.
    pub fn sqrt(&self, dim: usize) -> Result<ReconstructionOperator> {
        self.check_dim(dim)?;
        let name = format!("sqrt({})", self.name);
        match &self.repr {
            Repr::Diagonal(d) => {
                if let Some(k) = (0..dim).find(|&k| d(k) < 0.0) {
                    return Err(Error::NotPsd {
                        min_eig: d(k),
                        max_eig: self.norm(dim)?,
                    });
                }
                let d = d.clone();
                Ok(Self::diagonal(name, move |k| d(k).max(0.0).sqrt()))
            }
            Repr::Multiplication(w) => {
                if let Some(x) = w.iter().find(|x| **x < 0.0) {
                    return Err(Error::NotPsd {
                        min_eig: *x,
                        max_eig: self.norm(dim)?,
                    });
                }
                Ok(Self::multiplication(
                    name,
                    w.iter().map(|x| x.sqrt()).collect(),
                ))
            }
            Repr::Dense(m) => Self::dense(name, psd_sqrt(m)?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paired_operators_have_documented_entries() {
        let b = ReconstructionOperator::scaled_linear_inverse_square();
        assert_eq!(b.diagonal_entry(2), Some(1.0 / 9.0));
        for dim in [1, 4, 64] {
            assert_eq!(b.norm(dim).unwrap(), 1.0);
        }
        let b2 = ReconstructionOperator::repeated_basis_inverse();
        assert_eq!(b2.diagonal_entry(0), Some(1.0));
        assert_eq!(b2.diagonal_entry(2), Some(1.0 / 3.0));
    }

    #[test]
    fn sqrt_and_adjoint() {
        let m = ComplexMatrix::from_row_major(
            2,
            2,
            vec![
                C64::new(2.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, -1.0),
                C64::new(2.0, 0.0),
            ],
        )
        .unwrap();
        let b = ReconstructionOperator::dense("m", m.clone()).unwrap();
        let r = b.sqrt(2).unwrap().matrix(2).unwrap();
        assert!((&(&r * &r) - &m).max_abs() < 1e-12);
        let f = [C64::new(1.0, 0.0), C64::new(0.0, 2.0)];
        let lhs = b.apply_adjoint(&f).unwrap();
        let rhs = m.adjoint().matvec(&f).unwrap();
        assert!(lhs.distance(&rhs) < 1e-15);
        assert!(b.check_dim(3).is_err());
    }
}

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, ComplexVector, C64, ZERO};
use crate::sequences::operator::ReconstructionOperator;
use crate::sequences::sparse::SparseVector;

/// A finite family `f_0, …, f_{n−1}` in `ℂ^dim` with its analysis, synthesis,
/// frame and Gram operators.
///
/// The dense operators are materialised on first use and cached, since some
/// families (exponentials on a fine grid) live in spaces where a dense frame
/// operator is never needed.
#[derive(Debug)]
pub struct TruncationFrame {
    scale: usize,
    dim: usize,
    indices: Vec<i64>,
    elements: Vec<SparseVector>,
    frame_op: OnceLock<ComplexMatrix>,
    gram: OnceLock<ComplexMatrix>,
    spectrum: OnceLock<Result<Vec<f64>>>,
}

impl Clone for TruncationFrame {
    fn clone(&self) -> Self {
        TruncationFrame::from_parts(
            self.scale,
            self.dim,
            self.indices.clone(),
            self.elements.clone(),
        )
    }
}

impl TruncationFrame {
    pub(crate) fn from_parts(
        scale: usize,
        dim: usize,
        indices: Vec<i64>,
        elements: Vec<SparseVector>,
    ) -> Self {
        debug_assert_eq!(indices.len(), elements.len());
        TruncationFrame {
            scale,
            dim,
            indices,
            elements,
            frame_op: OnceLock::new(),
            gram: OnceLock::new(),
            spectrum: OnceLock::new(),
        }
    }

    /// A family given directly by its elements; indices are `0..n`.
    pub fn from_elements(dim: usize, elements: Vec<SparseVector>) -> Result<Self> {
        if let Some(k) = elements
            .iter()
            .filter_map(|e| e.max_coordinate())
            .find(|&k| k >= dim)
        {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: k + 1,
            });
        }
        let indices = (0..elements.len() as i64).collect();
        Ok(Self::from_parts(elements.len(), dim, indices, elements))
    }

    pub fn from_dense(dim: usize, vectors: &[ComplexVector]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
        Self::from_elements(
            dim,
            vectors
                .iter()
                .map(|v| SparseVector::from_dense(&v.0))
                .collect(),
        )
    }

    /// Truncation scale this frame was generated at.
    pub fn scale(&self) -> usize {
        self.scale
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Sequence indices of the rows, in summation order.
    pub fn indices(&self) -> &[i64] {
        &self.indices
    }

    pub fn elements(&self) -> &[SparseVector] {
        &self.elements
    }

    pub fn element(&self, n: usize) -> ComplexVector {
        self.elements[n].to_dense(self.dim)
    }

    fn check(&self, f: &[C64]) -> Result<()> {
        if f.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: f.len(),
            });
        }
        Ok(())
    }

    /// Coefficients `⟨f, f_n⟩`.
    pub fn analyze(&self, f: &[C64]) -> Result<Vec<C64>> {
        self.check(f)?;
        Ok(self.elements.iter().map(|e| e.inner_from(f)).collect())
    }

    /// `Σ c_n f_n`.
    pub fn synthesize(&self, c: &[C64]) -> Result<ComplexVector> {
        if c.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: c.len(),
            });
        }
        let mut acc = vec![ZERO; self.dim];
        for (e, &cn) in self.elements.iter().zip(c) {
            e.axpy_into(cn, &mut acc);
        }
        Ok(ComplexVector(acc))
    }

    /// `S f = Σ ⟨f, f_n⟩ f_n`, streamed without forming `S`.
    pub fn apply_frame_op(&self, f: &[C64]) -> Result<ComplexVector> {
        let c = self.analyze(f)?;
        self.synthesize(&c)
    }

    /// Row `n` holds the conjugated coordinates of `f_n`, so `analysis · f = (⟨f, f_n⟩)_n`.
    pub fn analysis(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.len(), self.dim);
        for (n, e) in self.elements.iter().enumerate() {
            for &(k, v) in e.entries() {
                m[(n, k)] += v.conj();
            }
        }
        m
    }

    pub fn synthesis(&self) -> ComplexMatrix {
        self.analysis().adjoint()
    }

    /// `S = Σ f_n f_n*`.
    pub fn frame_op(&self) -> &ComplexMatrix {
        self.frame_op.get_or_init(|| {
            let mut s = ComplexMatrix::zeros(self.dim, self.dim);
            for e in &self.elements {
                for &(i, a) in e.entries() {
                    for &(j, b) in e.entries() {
                        s[(i, j)] += a * b.conj();
                    }
                }
            }
            s
        })
    }

    /// `G[n][m] = ⟨f_n, f_m⟩`.
    pub fn gram(&self) -> &ComplexMatrix {
        self.gram.get_or_init(|| {
            let count = self.len();
            let mut by_coord: Vec<Vec<(usize, C64)>> = vec![Vec::new(); self.dim];
            for (n, e) in self.elements.iter().enumerate() {
                for &(k, v) in e.entries() {
                    by_coord[k].push((n, v));
                }
            }
            let mut g = ComplexMatrix::zeros(count, count);
            for column in &by_coord {
                for &(n, a) in column {
                    for &(m, b) in column {
                        g[(n, m)] += a * b.conj();
                    }
                }
            }
            g
        })
    }

    /// Ascending spectrum of the frame operator.
    ///
    /// When there are fewer elements than dimensions the nonzero part is read
    /// off the (smaller) Gram matrix and padded with zeros.
    pub fn frame_spectrum(&self) -> Result<&[f64]> {
        self.spectrum
            .get_or_init(|| {
                if self.len() >= self.dim {
                    hermitian_eigenvalues(self.frame_op())
                } else {
                    let mut vals = hermitian_eigenvalues(self.gram())?;
                    let mut out = vec![0.0; self.dim - self.len()];
                    out.append(&mut vals);
                    Ok(out)
                }
            })
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(|e| e.clone())
    }

    /// The family `{B f_n}`.
    pub fn map(&self, op: &ReconstructionOperator) -> Result<TruncationFrame> {
        let elements = self
            .elements
            .iter()
            .map(|e| op.apply_sparse(e, self.dim))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts(
            self.scale,
            self.dim,
            self.indices.clone(),
            elements,
        ))
    }

    /// The family with each element scaled by `factor(n, ‖f_n‖)`.
    pub fn rescale(&self, mut factor: impl FnMut(usize, f64) -> f64) -> TruncationFrame {
        let elements = self
            .elements
            .iter()
            .enumerate()
            .map(|(n, e)| e.scaled(C64::new(factor(n, e.norm()), 0.0)))
            .collect();
        Self::from_parts(self.scale, self.dim, self.indices.clone(), elements)
    }

    /// Leading `count` elements.
    pub fn prefix(&self, count: usize) -> TruncationFrame {
        let count = count.min(self.len());
        Self::from_parts(
            self.scale,
            self.dim,
            self.indices[..count].to_vec(),
            self.elements[..count].to_vec(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::VectorSequence;

    #[test]
    fn diagonal_and_block_frame_operators() {
        let tf = VectorSequence::scaled_linear().truncate(4).unwrap();
        assert_eq!(
            tf.frame_op().diagonal(),
            [1.0, 4.0, 9.0, 16.0].map(|x| C64::new(x, 0.0))
        );
        let tf = VectorSequence::repeated_basis().truncate(3).unwrap();
        assert_eq!(tf.len(), 6);
        assert_eq!(
            tf.frame_op(),
            &ComplexMatrix::from_diagonal(&[1.0, 2.0, 3.0])
        );
    }

    #[test]
    fn frame_op_equals_synthesis_times_analysis() {
        let tf = VectorSequence::repeated_basis().truncate(5).unwrap();
        let direct = &tf.synthesis() * &tf.analysis();
        assert!((&direct - tf.frame_op()).max_abs() < 1e-14);
    }

    #[test]
    fn spectrum_via_gram_pads_zeros() {
        let v = vec![
            ComplexVector::from_real(&[1.0, 0.0, 0.0]),
            ComplexVector::from_real(&[0.0, 2.0, 0.0]),
        ];
        let tf = TruncationFrame::from_dense(3, &v).unwrap();
        assert_eq!(tf.frame_spectrum().unwrap(), &[0.0, 1.0, 4.0]);
    }
}

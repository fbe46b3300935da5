use smallvec::SmallVec;

use crate::linalg::{ComplexVector, C64, ZERO};

/// Coordinates of one sequence element, stored by support.
///
/// Coordinate-adapted sequences (scaled and repeated bases, small
/// perturbations of them) have one or two nonzero entries per element, so the
/// inline capacity covers them without allocation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseVector {
    entries: SmallVec<[(usize, C64); 2]>,
}

impl SparseVector {
    pub fn new() -> Self {
        SparseVector::default()
    }

    pub fn unit(k: usize) -> Self {
        Self::single(k, C64::new(1.0, 0.0))
    }

    pub fn single(k: usize, value: C64) -> Self {
        let mut entries = SmallVec::new();
        entries.push((k, value));
        SparseVector { entries }
    }

    /// Keeps every coordinate, including exact zeros.
    pub fn from_dense(values: &[C64]) -> Self {
        SparseVector {
            entries: values.iter().copied().enumerate().collect(),
        }
    }

    pub fn entries(&self) -> &[(usize, C64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|(_, v)| *v == ZERO)
    }

    /// Adds `value` at coordinate `k`, merging with an existing entry.
    pub fn add(&mut self, k: usize, value: C64) {
        if let Some(e) = self.entries.iter_mut().find(|e| e.0 == k) {
            e.1 += value;
        } else {
            self.entries.push((k, value));
        }
    }

    pub fn plus(&self, other: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        for &(k, v) in &other.entries {
            out.add(k, v);
        }
        out
    }

    /// Drops coordinates at or beyond `dim`.
    pub fn restricted(&self, dim: usize) -> SparseVector {
        SparseVector {
            entries: self
                .entries
                .iter()
                .copied()
                .filter(|(k, _)| *k < dim)
                .collect(),
        }
    }

    pub fn max_coordinate(&self) -> Option<usize> {
        self.entries.iter().map(|e| e.0).max()
    }

    pub fn scaled(&self, s: C64) -> SparseVector {
        SparseVector {
            entries: self.entries.iter().map(|&(k, v)| (k, v * s)).collect(),
        }
    }

    pub fn map_values(&self, mut f: impl FnMut(usize, C64) -> C64) -> SparseVector {
        SparseVector {
            entries: self.entries.iter().map(|&(k, v)| (k, f(k, v))).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.1.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `⟨f, self⟩ = Σ f_k conj(v_k)` for a dense `f`.
    pub fn inner_from(&self, f: &[C64]) -> C64 {
        self.entries.iter().map(|&(k, v)| f[k] * v.conj()).sum()
    }

    /// `⟨self, other⟩`.
    pub fn inner(&self, other: &SparseVector) -> C64 {
        let mut acc = ZERO;
        for &(k, v) in &self.entries {
            for &(j, w) in &other.entries {
                if j == k {
                    acc += v * w.conj();
                }
            }
        }
        acc
    }

    /// `acc += c · self`.
    pub fn axpy_into(&self, c: C64, acc: &mut [C64]) {
        for &(k, v) in &self.entries {
            acc[k] += c * v;
        }
    }

    pub fn to_dense(&self, dim: usize) -> ComplexVector {
        let mut out = ComplexVector::zeros(dim);
        for &(k, v) in &self.entries {
            out.0[k] += v;
        }
        out
    }
}

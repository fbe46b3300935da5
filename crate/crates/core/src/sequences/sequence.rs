use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexVector, C64};
use crate::sequences::sparse::SparseVector;
use crate::sequences::truncation::TruncationFrame;

/// Number of leading indices validated when a rule-based sequence is built.
pub const CONSTRUCTION_HORIZON: usize = 4096;

type CoefficientRule = Arc<dyn Fn(usize) -> f64 + Send + Sync>;
type MultiplicityRule = Arc<dyn Fn(usize) -> usize + Send + Sync>;
type DeltaFn = Arc<dyn Fn(usize) -> SparseVector + Send + Sync>;
type TailFn = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexSet {
    /// `n = 0, 1, 2, …`
    Natural,
    /// `n ∈ ℤ`, always consumed in the symmetric order `0, 1, −1, 2, −2, …`.
    Integer,
}

impl IndexSet {
    /// Sequence index at flat position `pos`.
    pub fn index_at(self, pos: usize) -> i64 {
        match self {
            IndexSet::Natural => pos as i64,
            IndexSet::Integer => {
                if pos == 0 {
                    0
                } else if pos % 2 == 1 {
                    pos.div_ceil(2) as i64
                } else {
                    -((pos / 2) as i64)
                }
            }
        }
    }
}

/// Structural metadata consumed by downstream checkers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StructureTag {
    /// `f_n = c_n e_n`.
    Diagonal,
    /// `e_k` repeated `multiplicity(k)` times, consecutively.
    BlockRepeated,
    /// `h_n = f_n + δ_n` with a declared ℓ¹ majorant of the deltas.
    Perturbed {
        declared_l1: f64,
    },
    /// `e^{2πinx}`, `n ∈ ℤ`, in a weighted L² space on a midpoint grid.
    Exponential,
    Generic,
}

impl StructureTag {
    pub fn name(&self) -> &'static str {
        match self {
            StructureTag::Diagonal => "diagonal",
            StructureTag::BlockRepeated => "block-repeated",
            StructureTag::Perturbed { .. } => "perturbed",
            StructureTag::Exponential => "exponential",
            StructureTag::Generic => "generic",
        }
    }
}

/// Known supremum of `‖f_n‖` over the whole (infinite) sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SupNorm {
    Bounded(f64),
    Unbounded,
    Unknown,
}

/// A summable family of perturbation vectors `δ_n` with a declared ℓ¹ tail.
#[derive(Clone)]
pub struct DeltaRule {
    description: String,
    rule: DeltaFn,
    tail: TailFn,
}

impl fmt::Debug for DeltaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DeltaRule")
            .field("description", &self.description)
            .finish()
    }
}

impl DeltaRule {
    /// `rule(n)` is `δ_n`; `tail(h)` must bound `Σ_{n ≥ h} ‖δ_n‖`.
    pub fn new(
        description: impl Into<String>,
        rule: impl Fn(usize) -> SparseVector + Send + Sync + 'static,
        tail: impl Fn(usize) -> f64 + Send + Sync + 'static,
    ) -> Self {
        DeltaRule {
            description: description.into(),
            rule: Arc::new(rule),
            tail: Arc::new(tail),
        }
    }

    pub fn zero() -> Self {
        Self::new("zero", |_| SparseVector::new(), |_| 0.0)
    }

    /// `δ_n = total / 2^{n+1} · e_coordinate`, so `Σ ‖δ_n‖ = total`.
    pub fn geometric(total: f64, coordinate: usize) -> Self {
        Self::new(
            format!("geometric(total={total}, coordinate={coordinate})"),
            move |n| {
                SparseVector::single(coordinate, C64::new(total * 0.5f64.powi(n as i32 + 1), 0.0))
            },
            move |h| total * 0.5f64.powi(h as i32),
        )
    }

    /// A single nonzero delta at position `index`.
    pub fn single(index: usize, delta: SparseVector) -> Self {
        let size = delta.norm();
        Self::new(
            format!("single(index={index}, norm={size})"),
            move |n| {
                if n == index {
                    delta.clone()
                } else {
                    SparseVector::new()
                }
            },
            move |h| if h <= index { size } else { 0.0 },
        )
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn delta(&self, n: usize) -> SparseVector {
        (self.rule)(n)
    }

    /// `Σ_{n < horizon} ‖δ_n‖`.
    pub fn horizon_l1(&self, horizon: usize) -> f64 {
        (0..horizon).map(|n| self.delta(n).norm()).sum()
    }

    pub fn tail_bound(&self, horizon: usize) -> f64 {
        (self.tail)(horizon)
    }

    /// Full-series ℓ¹ mass: summed head plus declared tail.
    pub fn spent(&self, horizon: usize) -> f64 {
        self.horizon_l1(horizon) + self.tail_bound(horizon)
    }
}

/// Coordinates `sqrt(w_j / Q) e^{2πinx_j}` of the exponentials in `L²(w dx)` on the
/// midpoint grid `x_j = (j + ½)/Q`, an orthonormal coordinate system for the
/// discretised space.
#[derive(Clone, Debug)]
pub struct ExponentialSystem {
    grid: usize,
    weights: Vec<f64>,
    amplitudes: Vec<f64>,
}

impl ExponentialSystem {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        let grid = weights.len();
        if grid == 0 || !grid.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "grid size must be even and positive, got {grid}"
            )));
        }
        if let Some(j) = weights.iter().position(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "weight at grid point {j} is {}",
                weights[j]
            )));
        }
        let amplitudes = weights.iter().map(|w| (w / grid as f64).sqrt()).collect();
        Ok(ExponentialSystem {
            grid,
            weights,
            amplitudes,
        })
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `e^{2πinx_j}` computed from the exact residue of `n(2j+1)` modulo `2Q`.
    pub fn phase(&self, n: i64, j: usize) -> C64 {
        let q2 = 2 * self.grid as i64;
        let r = (n.rem_euclid(q2) * (2 * j as i64 + 1)).rem_euclid(q2);
        C64::from_polar(1.0, PI * r as f64 / self.grid as f64)
    }

    pub fn element(&self, n: i64) -> SparseVector {
        let values: Vec<C64> = (0..self.grid)
            .map(|j| self.phase(n, j) * self.amplitudes[j])
            .collect();
        SparseVector::from_dense(&values)
    }

    /// Grid samples of a function mapped into the orthonormal coordinates.
    pub fn embed(&self, samples: &[C64]) -> ComplexVector {
        ComplexVector(
            samples
                .iter()
                .zip(&self.amplitudes)
                .map(|(s, a)| s * *a)
                .collect(),
        )
    }

    /// Inverse of [`embed`](Self::embed).
    pub fn sample(&self, coords: &[C64]) -> Vec<C64> {
        coords
            .iter()
            .zip(&self.amplitudes)
            .map(|(c, a)| c / *a)
            .collect()
    }
}

#[derive(Clone)]
enum Kind {
    Diagonal(CoefficientRule),
    BlockRepeated(MultiplicityRule),
    Perturbed {
        base: Box<VectorSequence>,
        deltas: DeltaRule,
    },
    Exponential(Arc<ExponentialSystem>),
    Finite {
        dim: usize,
        vectors: Arc<Vec<ComplexVector>>,
    },
}

/// A lazily generated family `{f_n}` in coordinates of ℓ² (or of a weighted grid space).
///
/// A truncation *scale* `N` means: `N` entries in `ℂ^N` for diagonal
/// sequences; the first `N` blocks (dimension `N`) for block-repeated ones;
/// indices `−N..N` on a fixed grid for exponentials; the first `N` vectors
/// for finite families.
#[derive(Clone)]
pub struct VectorSequence {
    name: String,
    index_set: IndexSet,
    kind: Kind,
    sup: SupNorm,
}

impl fmt::Debug for VectorSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorSequence")
            .field("name", &self.name)
            .field("index_set", &self.index_set)
            .field("tag", &self.tag())
            .finish()
    }
}

impl VectorSequence {
    /// `f_n = c_n e_n`. Fails when any of the first [`CONSTRUCTION_HORIZON`] coefficients is not positive.
    pub fn scaled_basis(
        name: impl Into<String>,
        c: impl Fn(usize) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        for n in 0..CONSTRUCTION_HORIZON {
            let v = c(n);
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::NonPositiveCoefficient { index: n, value: v });
            }
        }
        Ok(VectorSequence {
            name: name.into(),
            index_set: IndexSet::Natural,
            kind: Kind::Diagonal(Arc::new(c)),
            sup: SupNorm::Unknown,
        })
    }

    /// `c_n = (n+1)^p`; `p = 1` is the unbounded scaled basis, `p = 0` the
    /// orthonormal basis, `p = −1` the basis with `inf ‖f_n‖ = 0`.
    pub fn power_basis(power: f64) -> Self {
        let name = if power == 0.0 {
            "orthonormal".to_string()
        } else {
            format!("scaled(n+1)^{power}")
        };
        let sup = if power <= 0.0 {
            SupNorm::Bounded(1.0)
        } else {
            SupNorm::Unbounded
        };
        VectorSequence {
            name,
            index_set: IndexSet::Natural,
            kind: Kind::Diagonal(Arc::new(move |n| (n as f64 + 1.0).powf(power))),
            sup,
        }
    }

    /// `f_n = (n+1) e_n`.
    pub fn scaled_linear() -> Self {
        let mut s = Self::power_basis(1.0);
        s.name = "scaled-linear".into();
        s
    }

    pub fn orthonormal() -> Self {
        Self::power_basis(0.0)
    }

    /// `f_n = e_n / (n+1)`.
    pub fn scaled_reciprocal() -> Self {
        let mut s = Self::power_basis(-1.0);
        s.name = "scaled-reciprocal".into();
        s
    }

    /// `e_0, e_1, e_1, e_2, e_2, e_2, …`: `e_k` with multiplicity `k + 1`.
    pub fn repeated_basis() -> Self {
        Self::block_repeated("repeated-basis", |k| k + 1).expect("multiplicity k+1 is positive")
    }

    pub fn block_repeated(
        name: impl Into<String>,
        multiplicity: impl Fn(usize) -> usize + Send + Sync + 'static,
    ) -> Result<Self> {
        for k in 0..CONSTRUCTION_HORIZON {
            if multiplicity(k) == 0 {
                return Err(Error::InvalidArgument(format!(
                    "block {k} has multiplicity 0"
                )));
            }
        }
        Ok(VectorSequence {
            name: name.into(),
            index_set: IndexSet::Natural,
            kind: Kind::BlockRepeated(Arc::new(multiplicity)),
            sup: SupNorm::Bounded(1.0),
        })
    }

    /// Exponentials `{e^{2πinx}}_{n∈ℤ}` in `L²(w dx)` sampled on a midpoint grid.
    pub fn exponentials(name: impl Into<String>, system: ExponentialSystem) -> Self {
        let mass = system.weights().iter().sum::<f64>() / system.grid() as f64;
        VectorSequence {
            name: name.into(),
            index_set: IndexSet::Integer,
            kind: Kind::Exponential(Arc::new(system)),
            sup: SupNorm::Bounded(mass.sqrt()),
        }
    }

    /// An explicit finite family in `ℂ^dim`.
    pub fn finite(
        name: impl Into<String>,
        dim: usize,
        vectors: Vec<ComplexVector>,
    ) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
        let sup = vectors.iter().map(|v| v.norm()).fold(0.0, f64::max);
        Ok(VectorSequence {
            name: name.into(),
            index_set: IndexSet::Natural,
            kind: Kind::Finite {
                dim,
                vectors: Arc::new(vectors),
            },
            sup: SupNorm::Bounded(sup),
        })
    }

    /// `h_n = f_n + δ_n`. The deltas must be summable over the construction horizon.
    pub fn perturb(&self, deltas: DeltaRule) -> Result<Self> {
        let head = deltas.horizon_l1(CONSTRUCTION_HORIZON);
        if !head.is_finite() {
            return Err(Error::InvalidArgument(
                "perturbation is not summable over the construction horizon".into(),
            ));
        }
        let sup = match self.sup {
            SupNorm::Bounded(m) => {
                let largest = (0..CONSTRUCTION_HORIZON)
                    .map(|n| deltas.delta(n).norm())
                    .fold(0.0, f64::max);
                SupNorm::Bounded(m + largest)
            }
            other => other,
        };
        Ok(VectorSequence {
            name: format!("{}+{}", self.name, deltas.description()),
            index_set: self.index_set,
            kind: Kind::Perturbed {
                base: Box::new(self.clone()),
                deltas,
            },
            sup,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Declares the supremum of `‖f_n‖` over the whole sequence.
    pub fn with_sup_norm(mut self, sup: SupNorm) -> Self {
        self.sup = sup;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn index_set(&self) -> IndexSet {
        self.index_set
    }

    pub fn tag(&self) -> StructureTag {
        match &self.kind {
            Kind::Diagonal(_) => StructureTag::Diagonal,
            Kind::BlockRepeated(_) => StructureTag::BlockRepeated,
            Kind::Perturbed { deltas, .. } => StructureTag::Perturbed {
                declared_l1: deltas.spent(0),
            },
            Kind::Exponential(_) => StructureTag::Exponential,
            Kind::Finite { .. } => StructureTag::Generic,
        }
    }

    pub fn sup_norm(&self) -> SupNorm {
        self.sup
    }

    /// Base sequence and deltas of a perturbed sequence.
    pub fn perturbation(&self) -> Option<(&VectorSequence, &DeltaRule)> {
        match &self.kind {
            Kind::Perturbed { base, deltas } => Some((base, deltas)),
            _ => None,
        }
    }

    pub fn exponential_system(&self) -> Option<&ExponentialSystem> {
        match &self.kind {
            Kind::Exponential(s) => Some(s),
            Kind::Perturbed { base, .. } => base.exponential_system(),
            _ => None,
        }
    }

    /// `c_n` of a diagonal sequence.
    pub fn diagonal_coefficient(&self, n: usize) -> Option<f64> {
        match &self.kind {
            Kind::Diagonal(c) => Some(c(n)),
            _ => None,
        }
    }

    /// Block multiplicity of a block-repeated sequence.
    pub fn multiplicity(&self, k: usize) -> Option<usize> {
        match &self.kind {
            Kind::BlockRepeated(m) => Some(m(k)),
            Kind::Perturbed { base, .. } => base.multiplicity(k),
            _ => None,
        }
    }

    /// Ambient dimension of the truncation at `scale`.
    pub fn space_dim(&self, scale: usize) -> usize {
        match &self.kind {
            Kind::Diagonal(_) | Kind::BlockRepeated(_) => scale,
            Kind::Perturbed { base, .. } => base.space_dim(scale),
            Kind::Exponential(s) => s.grid(),
            Kind::Finite { dim, .. } => *dim,
        }
    }

    /// Number of entries in the truncation at `scale`.
    pub fn entry_count(&self, scale: usize) -> usize {
        match &self.kind {
            Kind::Diagonal(_) => scale,
            Kind::BlockRepeated(m) => (0..scale).map(|k| m(k)).sum(),
            Kind::Perturbed { base, .. } => base.entry_count(scale),
            Kind::Exponential(_) => 2 * scale + 1,
            Kind::Finite { vectors, .. } => scale.min(vectors.len()),
        }
    }

    /// Scale whose truncation has exactly `entries` entries, if one exists.
    pub fn scale_for_entries(&self, entries: usize) -> Result<usize> {
        match &self.kind {
            Kind::Diagonal(_) => Ok(entries),
            Kind::Finite { vectors, .. } => {
                if entries > vectors.len() {
                    Err(Error::InvalidArgument(format!(
                        "family has only {} vectors",
                        vectors.len()
                    )))
                } else {
                    Ok(entries)
                }
            }
            Kind::BlockRepeated(m) => {
                let mut total = 0;
                let mut k = 0;
                while total < entries {
                    total += m(k);
                    k += 1;
                }
                if total == entries {
                    Ok(k)
                } else {
                    Err(Error::MidBlockTruncation {
                        entries,
                        block: k - 1,
                    })
                }
            }
            Kind::Perturbed { base, .. } => base.scale_for_entries(entries),
            Kind::Exponential(_) => {
                if entries % 2 == 1 {
                    Ok(entries / 2)
                } else {
                    Err(Error::InvalidArgument(format!(
                        "integer-indexed families are truncated symmetrically; {entries} entries is even"
                    )))
                }
            }
        }
    }

    /// Calls `visit(pos, index, element)` for every entry of the truncation at `scale`, in order.
    pub fn for_each(
        &self,
        scale: usize,
        mut visit: impl FnMut(usize, i64, &SparseVector),
    ) -> Result<()> {
        let dim = self.space_dim(scale);
        self.generate(scale, dim, &mut visit)
    }

    fn generate(
        &self,
        scale: usize,
        dim: usize,
        visit: &mut dyn FnMut(usize, i64, &SparseVector),
    ) -> Result<()> {
        match &self.kind {
            Kind::Diagonal(c) => {
                for n in 0..scale {
                    let v = c(n);
                    if !(v > 0.0) || !v.is_finite() {
                        return Err(Error::NonPositiveCoefficient { index: n, value: v });
                    }
                    visit(n, n as i64, &SparseVector::single(n, C64::new(v, 0.0)));
                }
            }
            Kind::BlockRepeated(m) => {
                let mut pos = 0;
                for k in 0..scale {
                    let e = SparseVector::unit(k);
                    for _ in 0..m(k) {
                        visit(pos, pos as i64, &e);
                        pos += 1;
                    }
                }
            }
            Kind::Perturbed { base, deltas } => {
                base.generate(scale, dim, &mut |pos, idx, v| {
                    let h = v.plus(&deltas.delta(pos).restricted(dim));
                    visit(pos, idx, &h);
                })?;
            }
            Kind::Exponential(sys) => {
                for pos in 0..2 * scale + 1 {
                    let n = self.index_set.index_at(pos);
                    visit(pos, n, &sys.element(n));
                }
            }
            Kind::Finite { vectors, .. } => {
                for (pos, v) in vectors.iter().take(scale).enumerate() {
                    visit(pos, pos as i64, &SparseVector::from_dense(&v.0));
                }
            }
        }
        Ok(())
    }

    /// All entries at `scale` collected into a truncation frame.
    pub fn truncate(&self, scale: usize) -> Result<TruncationFrame> {
        if scale == 0 {
            return Err(Error::InvalidArgument(
                "truncation scale must be at least 1".into(),
            ));
        }
        let dim = self.space_dim(scale);
        let count = self.entry_count(scale);
        let mut indices = Vec::with_capacity(count);
        let mut elements = Vec::with_capacity(count);
        self.for_each(scale, |_, idx, v| {
            indices.push(idx);
            elements.push(v.clone());
        })?;
        Ok(TruncationFrame::from_parts(scale, dim, indices, elements))
    }

    /// Truncation after exactly `entries` entries; block sequences reject mid-block cuts.
    pub fn truncate_entries(&self, entries: usize) -> Result<TruncationFrame> {
        let scale = self.scale_for_entries(entries)?;
        self.truncate(scale)
    }

    /// `‖f_n‖` for every entry at `scale`.
    pub fn norms(&self, scale: usize) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.entry_count(scale));
        self.for_each(scale, |_, _, v| out.push(v.norm()))?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_order_is_symmetric() {
        let idx: Vec<i64> = (0..7).map(|p| IndexSet::Integer.index_at(p)).collect();
        assert_eq!(idx, vec![0, 1, -1, 2, -2, 3, -3]);
    }

    #[test]
    fn repeated_basis_first_entries() {
        let s = VectorSequence::repeated_basis();
        let mut coords = Vec::new();
        s.for_each(3, |_, _, v| coords.push(v.entries()[0].0))
            .unwrap();
        assert_eq!(coords, vec![0, 1, 1, 2, 2, 2]);
        assert_eq!(s.entry_count(3), 6);
        assert_eq!(s.tag(), StructureTag::BlockRepeated);
    }

    #[test]
    fn mid_block_truncation_is_rejected() {
        let s = VectorSequence::repeated_basis();
        assert!(s.truncate_entries(6).is_ok());
        assert_eq!(
            s.truncate_entries(5).unwrap_err(),
            Error::MidBlockTruncation {
                entries: 5,
                block: 2
            }
        );
    }

    #[test]
    fn nonpositive_coefficient_rejected() {
        let err =
            VectorSequence::scaled_basis("bad", |n| if n == 3 { 0.0 } else { 1.0 }).unwrap_err();
        assert_eq!(
            err,
            Error::NonPositiveCoefficient {
                index: 3,
                value: 0.0
            }
        );
    }

    #[test]
    fn scaled_bases() {
        let s = VectorSequence::scaled_linear();
        assert_eq!(s.norms(4).unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.sup_norm(), SupNorm::Unbounded);
        let r = VectorSequence::scaled_reciprocal();
        assert_eq!(r.norms(3).unwrap(), vec![1.0, 0.5, 1.0 / 3.0]);
    }

    #[test]
    fn geometric_deltas_budget() {
        let d = DeltaRule::geometric(0.4, 0);
        assert!((d.spent(10) - 0.4).abs() < 1e-15);
        assert!((d.horizon_l1(3) - 0.4 * (0.5 + 0.25 + 0.125)).abs() < 1e-15);
    }

    #[test]
    fn exponential_phase_is_exact_on_grid() {
        let sys = ExponentialSystem::new(vec![1.0; 8]).unwrap();
        let z = sys.phase(3, 1);
        let x = 1.5 / 8.0;
        let expect = C64::from_polar(1.0, 2.0 * PI * 3.0 * x);
        assert!((z - expect).norm() < 1e-14);
        assert!(ExponentialSystem::new(vec![1.0; 7]).is_err());
    }
}

//! ℓ¹ stability of frame reconstruction.
//!
//! If `{f_n}` reconstructs with `B` and `sup ‖f_n‖ = M`, every family `{h_n}`
//! with `Σ ‖f_n − h_n‖ < √(M² + 1/‖B‖) − M` reconstructs too, with operator
//! `(T⁻¹)* B` where `T f = Σ ⟨f, B h_n⟩ h_n`. Non-frames stay non-frames.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{growth_exponent, power_law};
use crate::linalg::{svd, ComplexMatrix, Lu, C64, DEFAULT_RANK_TOL};
use crate::report::{Check, PropertyReport, ScanTable};
use crate::sequences::{ReconstructionOperator, SupNorm, VectorSequence};

/// Largest admissible divergence-exponent gap between a base sequence and its perturbation.
pub const EXPONENT_MATCH_TOL: f64 = 0.1;
/// Caps that the witness Bessel sums must eventually exceed.
pub const PERSISTENCE_CAPS: [f64; 3] = [10.0, 100.0, 1000.0];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationBudget {
    pub m: f64,
    pub b_norm: f64,
    pub budget: f64,
    pub spent: f64,
}

impl PerturbationBudget {
    pub fn admissible(&self) -> bool {
        self.spent < self.budget
    }

    /// `λ(2M + λ)‖B‖` at `λ = budget`; equals one by construction.
    pub fn tightness(&self) -> f64 {
        self.budget * (2.0 * self.m + self.budget) * self.b_norm
    }
}

/// `√(M² + 1/‖B‖) − M`, evaluated as `(1/‖B‖) / (√(M² + 1/‖B‖) + M)` to avoid cancellation.
pub fn paley_wiener_budget(m: f64, b_norm: f64) -> Result<f64> {
    if m.is_infinite() {
        return Err(Error::UnboundedSequence);
    }
    if !(m >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "sup norm must be nonnegative, got {m}"
        )));
    }
    if m == 0.0 {
        return Err(Error::DegenerateBase);
    }
    if !(b_norm > 0.0) || !b_norm.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "operator norm must be positive and finite, got {b_norm}"
        )));
    }
    let inv = 1.0 / b_norm;
    Ok(inv / ((m * m + inv).sqrt() + m))
}

/// Budget of `h` relative to its base and the base's operator at `scale`.
pub fn budget_for(
    base: &VectorSequence,
    op: &ReconstructionOperator,
    h: &VectorSequence,
    scale: usize,
) -> Result<PerturbationBudget> {
    let m = match base.sup_norm() {
        SupNorm::Bounded(m) => m,
        SupNorm::Unbounded => return Err(Error::UnboundedSequence),
        SupNorm::Unknown => base.norms(scale)?.into_iter().fold(0.0, f64::max),
    };
    let b_norm = op.norm(base.space_dim(scale))?;
    let budget = paley_wiener_budget(m, b_norm)?;
    let spent = match h.perturbation() {
        Some((_, deltas)) => deltas.spent(h.entry_count(scale)),
        None => 0.0,
    };
    Ok(PerturbationBudget {
        m,
        b_norm,
        budget,
        spent,
    })
}

/// The perturbed operator together with the diagnostics of the `T` inversion.
#[derive(Clone, Debug)]
pub struct PerturbedOperator {
    pub operator: ReconstructionOperator,
    pub budget: PerturbationBudget,
    /// Spectral condition number of `T_N`.
    pub condition: f64,
    /// Hermitian residual of `(T_N⁻¹)* B_N` before symmetrisation.
    pub asymmetry: f64,
}

/// `(T_N⁻¹)* B_N` with `T_N f = Σ ⟨f, B h_n⟩ h_n`, inverted by a direct solve.
pub fn perturbed_reconstruction_operator(
    base: &VectorSequence,
    op: &ReconstructionOperator,
    h: &VectorSequence,
    scale: usize,
) -> Result<PerturbedOperator> {
    let budget = budget_for(base, op, h, scale)?;
    if !budget.admissible() {
        return Err(Error::InadmissiblePerturbation {
            spent: budget.spent,
            budget: budget.budget,
        });
    }
    let tf = h.truncate(scale)?;
    let dim = tf.dim();
    let b = op.matrix(dim)?;
    // ⟨f, B h_n⟩ = ⟨B* f, h_n⟩, so T = S_h B*.
    let t = tf.frame_op().matmul(&b.adjoint())?;
    let condition = svd(&t).condition_number();
    if !(condition.is_finite() && condition * DEFAULT_RANK_TOL < 1.0) {
        return Err(Error::IllConditioned { cond: condition });
    }
    let t_inv = match Lu::new(&t) {
        Ok(lu) => lu.inverse(),
        Err(_) => {
            return Err(Error::IllConditioned {
                cond: f64::INFINITY,
            })
        }
    };
    let raw = t_inv.adjoint().matmul(&b)?;
    let asymmetry = raw.hermitian_residual();
    let operator = ReconstructionOperator::dense(
        format!("perturbed({}, {scale})", h.name()),
        raw.hermitian_part(),
    )?;
    Ok(PerturbedOperator {
        operator,
        budget,
        condition,
        asymmetry,
    })
}

/// Witness `f_k ∝ (k+1)^{−α}` on coordinates, unit norm in `ℂ^dim`.
pub fn power_witness(dim: usize, alpha: f64) -> Vec<C64> {
    let raw: Vec<f64> = (0..dim).map(|k| (k as f64 + 1.0).powf(-alpha)).collect();
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    raw.into_iter().map(|x| C64::new(x / norm, 0.0)).collect()
}

/// Cumulative `Σ |⟨f, f_n⟩|²` at the end of each scale in `dims`, streamed at the largest one.
pub fn witness_sums(seq: &VectorSequence, f: &[C64], dims: &[usize]) -> Result<Vec<f64>> {
    let last = *dims
        .last()
        .ok_or_else(|| Error::InvalidArgument("empty scan".into()))?;
    if f.len() != seq.space_dim(last) {
        return Err(Error::DimensionMismatch {
            expected: seq.space_dim(last),
            found: f.len(),
        });
    }
    let ends: Vec<usize> = dims.iter().map(|&d| seq.entry_count(d)).collect();
    // Coordinates beyond a smaller scale's dimension are dropped at that scale.
    let dims_of: Vec<usize> = dims.iter().map(|&d| seq.space_dim(d)).collect();
    let mut sums = vec![0.0; dims.len()];
    seq.for_each(last, |pos, _, v| {
        for (i, (&end, &dim)) in ends.iter().zip(&dims_of).enumerate() {
            if pos < end {
                let c: C64 = v
                    .entries()
                    .iter()
                    .filter(|(k, _)| *k < dim)
                    .map(|&(k, x)| f[k] * x.conj())
                    .sum();
                sums[i] += c.norm_sqr();
            }
        }
    })?;
    Ok(sums)
}

/// First scanned scale at which `sums` exceeds `cap`, or the power-law extrapolation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapCrossing {
    pub cap: f64,
    pub scale: f64,
    pub extrapolated: bool,
}

pub fn cap_crossing(dims: &[usize], sums: &[f64], cap: f64) -> Option<CapCrossing> {
    if let Some(i) = sums.iter().position(|s| *s > cap) {
        return Some(CapCrossing {
            cap,
            scale: dims[i] as f64,
            extrapolated: false,
        });
    }
    let xs: Vec<f64> = dims.iter().map(|&d| d as f64).collect();
    let (a, b) = power_law(&xs, sums)?;
    if !(b > 0.0) {
        return None;
    }
    Some(CapCrossing {
        cap,
        scale: ((cap.ln() - a) / b).exp(),
        extrapolated: true,
    })
}

/// Tracks witness Bessel sums for a non-Bessel base and its perturbation.
pub fn non_frame_persistence(
    base: &VectorSequence,
    h: &VectorSequence,
    alpha: f64,
    dims: &[usize],
) -> Result<PropertyReport> {
    let anchor = "perturbation-stability";
    if dims.len() < 2 || dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!(
            "need at least two ascending scales, got {dims:?}"
        )));
    }
    let last = *dims.last().unwrap();
    let f = power_witness(base.space_dim(last), alpha);
    let base_sums = witness_sums(base, &f, dims)?;
    let h_sums = witness_sums(h, &f, dims)?;
    let xs: Vec<f64> = dims.iter().map(|&d| d as f64).collect();
    let e_base = growth_exponent(&xs, &base_sums);
    let e_h = growth_exponent(&xs, &h_sums);

    let mut report = PropertyReport::new(format!(
        "non-frame persistence: {} vs {}",
        base.name(),
        h.name()
    ));
    report.push(
        Check::flag(
            "base-witness-diverges",
            anchor,
            e_base > crate::analysis::BOUNDED_EXPONENT,
        )
        .with_note(format!("exponent {e_base:.4}"))
        .observe(),
    );
    report.push(
        Check::new(
            "divergence-exponent-match",
            anchor,
            (e_h - e_base).abs(),
            EXPONENT_MATCH_TOL,
        )
        .with_note(format!("base {e_base:.4}, perturbed {e_h:.4}")),
    );
    for cap in PERSISTENCE_CAPS {
        let crossing = cap_crossing(dims, &h_sums, cap);
        let note = match crossing {
            Some(c) if !c.extrapolated => format!("exceeded at scale {}", c.scale),
            Some(c) => format!("extrapolated crossing near scale {:.3e}", c.scale),
            None => "no crossing predicted".to_string(),
        };
        report.push(
            Check::flag(format!("exceeds-cap-{cap}"), anchor, crossing.is_some()).with_note(note),
        );
    }
    let mut table = ScanTable::new("persistence", &["dim", "base_sum", "perturbed_sum"]);
    for (i, &d) in dims.iter().enumerate() {
        table.push(vec![d as f64, base_sums[i], h_sums[i]]);
    }
    report.tables.push(table);
    report.verdict = if e_h > crate::analysis::BOUNDED_EXPONENT {
        "not-a-frame".into()
    } else {
        "inconclusive".into()
    };
    Ok(report)
}

/// Budget values over a grid, columns `M, B_norm, budget`.
pub fn budget_table(ms: &[f64], b_norms: &[f64]) -> Result<ScanTable> {
    let mut t = ScanTable::new("budget", &["M", "B_norm", "budget"]);
    for &m in ms {
        for &b in b_norms {
            t.push(vec![m, b, paley_wiener_budget(m, b)?]);
        }
    }
    Ok(t)
}

/// Dense `T_N` for inspection.
pub fn t_operator(
    op: &ReconstructionOperator,
    h: &VectorSequence,
    scale: usize,
) -> Result<ComplexMatrix> {
    let tf = h.truncate(scale)?;
    tf.frame_op().matmul(&op.matrix(tf.dim())?.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{DeltaRule, SparseVector};

    #[test]
    fn budget_values() {
        let b = paley_wiener_budget(1.0, 1.0).unwrap();
        assert!((b - (2f64.sqrt() - 1.0)).abs() <= 2.0 * f64::EPSILON);
        assert!((paley_wiener_budget(1.0, 1.0 / 3.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(
            paley_wiener_budget(f64::INFINITY, 1.0),
            Err(Error::UnboundedSequence)
        );
        assert_eq!(paley_wiener_budget(0.0, 1.0), Err(Error::DegenerateBase));
    }

    #[test]
    fn unbounded_base_has_no_budget() {
        let base = VectorSequence::scaled_linear();
        let op = ReconstructionOperator::scaled_linear_inverse_square();
        assert_eq!(
            budget_for(&base, &op, &base, 4).unwrap_err(),
            Error::UnboundedSequence
        );
    }

    #[test]
    fn zero_perturbation_returns_base_operator() {
        let base = VectorSequence::repeated_basis();
        let op = ReconstructionOperator::repeated_basis_inverse();
        let h = base.perturb(DeltaRule::zero()).unwrap();
        let p = perturbed_reconstruction_operator(&base, &op, &h, 6).unwrap();
        let diff = (&p.operator.matrix(6).unwrap() - &op.matrix(6).unwrap()).max_abs();
        assert!(diff < 1e-14);
    }

    #[test]
    fn over_budget_is_rejected() {
        let base = VectorSequence::repeated_basis();
        let op = ReconstructionOperator::repeated_basis_inverse();
        let h = base.perturb(DeltaRule::geometric(1.0, 0)).unwrap();
        let err = perturbed_reconstruction_operator(&base, &op, &h, 6).unwrap_err();
        assert!(matches!(err, Error::InadmissiblePerturbation { .. }));
    }

    #[test]
    fn single_delta_on_orthonormal_base() {
        let base = VectorSequence::orthonormal();
        let op = ReconstructionOperator::identity();
        let h = base
            .perturb(DeltaRule::single(
                0,
                SparseVector::single(1, C64::new(0.3, 0.0)),
            ))
            .unwrap();
        let p = perturbed_reconstruction_operator(&base, &op, &h, 4).unwrap();
        // S_h = I + u u* − e1 e1* with u = e0 + 0.3 e1, inverted in closed form on the 2×2 block.
        let s = ComplexMatrix::from_row_major(
            2,
            2,
            vec![
                C64::new(1.0, 0.0),
                C64::new(0.3, 0.0),
                C64::new(0.3, 0.0),
                C64::new(1.09, 0.0),
            ],
        )
        .unwrap();
        let det = 1.09 - 0.09;
        let m = p.operator.matrix(4).unwrap();
        assert!((m[(0, 0)].re - s[(1, 1)].re / det).abs() < 1e-14);
        assert!((m[(0, 1)].re + 0.3 / det).abs() < 1e-14);
        assert!((m[(3, 3)].re - 1.0).abs() < 1e-14);
    }
}

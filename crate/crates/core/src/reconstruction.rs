//! The reconstruction test `f = Σ ⟨f, B f_n⟩ f_n` and the batteries built on it.
//!
//! Every check is evaluated on a truncation. Partial sums follow the index
//! set's summation order (symmetric for `ℤ`), and scans over several scales
//! separate "reconstructs at every scale with a bounded operator" from
//! "reconstructs only with operators whose norm diverges".

use serde::{Deserialize, Serialize};

use crate::analysis::{bounds_scan_frames, is_parseval, BOUNDED_EXPONENT};
use crate::error::{Error, Result};
use crate::fit::growth_exponent;
use crate::linalg::random::test_vectors;
use crate::linalg::{
    inverse, op_norm, pinv, svd, ComplexMatrix, ComplexVector, C64, DEFAULT_RANK_TOL, PSD_TOL,
};
use crate::report::{Check, PropertyReport, ScanTable};
use crate::sequences::{ReconstructionOperator, StructureTag, TruncationFrame, VectorSequence};

/// Norm growth exponent above which a candidate operator is declared diverging.
pub const DIVERGENCE_EXPONENT: f64 = 0.1;
/// Minimum number of scan points before a divergence verdict is issued.
pub const MIN_DIVERGENCE_POINTS: usize = 4;
/// Rounding allowance for the two frame-type inequalities, relative to their right-hand side.
pub const INEQUALITY_SLACK_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Reconstructs,
    Fails,
    DivergingCandidate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Reconstructs => "reconstructs",
            Verdict::Fails => "fails",
            Verdict::DivergingCandidate => "diverging-candidate",
        }
    }
}

/// Outcome of the reconstruction test at one scale, or aggregated over a scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FRVerdict {
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub b_norm: f64,
    pub b_min_eig: f64,
    pub stable_across_dims: bool,
    pub verdict: Verdict,
    pub tol: f64,
}

/// `‖Σ_n ⟨f, B f_n⟩ f_n − f‖`, with `⟨f, B f_n⟩` read as `⟨B* f, f_n⟩`.
pub fn fr_residual(
    tf: &TruncationFrame,
    op: &ReconstructionOperator,
    f: &ComplexVector,
) -> Result<f64> {
    let g = op.apply_adjoint(&f.0)?;
    let c = tf.analyze(&g.0)?;
    Ok(tf.synthesize(&c)?.distance(f))
}

fn validate(
    tf: &TruncationFrame,
    op: &ReconstructionOperator,
    vectors: &[ComplexVector],
    tol: f64,
) -> Result<()> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if vectors.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one test vector is required".into(),
        ));
    }
    op.check_dim(tf.dim())?;
    if let Some(v) = vectors.iter().find(|v| v.dim() != tf.dim()) {
        return Err(Error::DimensionMismatch {
            expected: tf.dim(),
            found: v.dim(),
        });
    }
    Ok(())
}

/// Reconstruction test at a single scale.
pub fn does_frame_reconstruction(
    seq: &VectorSequence,
    op: &ReconstructionOperator,
    vectors: &[ComplexVector],
    scale: usize,
    tol: f64,
) -> Result<FRVerdict> {
    let tf = seq.truncate(scale)?;
    fr_at(&tf, op, vectors, tol)
}

/// Reconstruction test on a prepared truncation.
pub fn fr_at(
    tf: &TruncationFrame,
    op: &ReconstructionOperator,
    vectors: &[ComplexVector],
    tol: f64,
) -> Result<FRVerdict> {
    validate(tf, op, vectors, tol)?;
    let residuals = vectors
        .iter()
        .map(|f| fr_residual(tf, op, f))
        .collect::<Result<Vec<_>>>()?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let b_norm = op.norm(tf.dim())?;
    // Non-Hermitian candidates have no meaningful smallest eigenvalue.
    let b_min_eig = op.min_eigenvalue(tf.dim()).unwrap_or(f64::NAN);
    let verdict = if max_residual <= tol {
        Verdict::Reconstructs
    } else {
        Verdict::Fails
    };
    Ok(FRVerdict {
        residuals,
        max_residual,
        b_norm,
        b_min_eig,
        stable_across_dims: true,
        verdict,
        tol,
    })
}

/// Per-scale verdicts plus the aggregated one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FRScan {
    pub dims: Vec<usize>,
    pub per_dim: Vec<FRVerdict>,
    pub norm_exponent: f64,
    pub aggregate: FRVerdict,
}

impl FRScan {
    /// Columns `dim, max_residual, b_norm, b_min_eig`.
    pub fn table(&self, name: &str) -> ScanTable {
        let mut t = ScanTable::new(name, &["dim", "max_residual", "b_norm", "b_min_eig"]);
        for (d, v) in self.dims.iter().zip(&self.per_dim) {
            t.push(vec![*d as f64, v.max_residual, v.b_norm, v.b_min_eig]);
        }
        t
    }
}

/// Runs the test across ascending scales with an operator chosen per scale.
///
/// The aggregate verdict is `diverging-candidate` when `‖B_N‖` grows with a
/// fitted exponent above [`DIVERGENCE_EXPONENT`] over at least
/// [`MIN_DIVERGENCE_POINTS`] scales, even if every scale reconstructs.
pub fn fr_scan(
    seq: &VectorSequence,
    mut operator_at: impl FnMut(usize) -> Result<ReconstructionOperator>,
    dims: &[usize],
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<FRScan> {
    if dims.is_empty() || dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!(
            "scan dims must be strictly ascending, got {dims:?}"
        )));
    }
    let mut per_dim = Vec::with_capacity(dims.len());
    let mut matrices: Vec<ComplexMatrix> = Vec::new();
    for &d in dims {
        let tf = seq.truncate(d)?;
        let op = operator_at(d)?;
        let vectors = test_vectors(seed, tf.dim(), trials);
        per_dim.push(fr_at(&tf, &op, &vectors, tol)?);
        if tf.dim() <= 512 {
            matrices.push(op.matrix(tf.dim())?);
        }
    }
    let xs: Vec<f64> = dims.iter().map(|&d| d as f64).collect();
    let norms: Vec<f64> = per_dim.iter().map(|v| v.b_norm).collect();
    let norm_exponent = growth_exponent(&xs, &norms);
    // Leading blocks of consecutive candidates agree when the candidate entries settle.
    let stable = matrices.windows(2).all(|w| {
        let n = w[0].rows().min(w[1].rows());
        let diff = (&w[0].leading_block(n) - &w[1].leading_block(n)).max_abs();
        diff <= tol * w[1].max_abs().max(1.0)
    });
    let last = per_dim.last().unwrap();
    let max_residual = per_dim.iter().map(|v| v.max_residual).fold(0.0, f64::max);
    let verdict = if dims.len() >= MIN_DIVERGENCE_POINTS && norm_exponent > DIVERGENCE_EXPONENT {
        Verdict::DivergingCandidate
    } else if max_residual <= tol {
        Verdict::Reconstructs
    } else {
        Verdict::Fails
    };
    let aggregate = FRVerdict {
        residuals: per_dim.iter().map(|v| v.max_residual).collect(),
        max_residual,
        b_norm: last.b_norm,
        b_min_eig: last.b_min_eig,
        stable_across_dims: stable,
        verdict,
        tol,
    };
    Ok(FRScan {
        dims: dims.to_vec(),
        per_dim,
        norm_exponent,
        aggregate,
    })
}

/// How a candidate operator is obtained at each scale.
#[derive(Clone, Debug)]
pub enum CandidateOperator {
    /// A fixed operator, used as is.
    Given(ReconstructionOperator),
    /// Symmetrised pseudo-inverse of the truncated frame operator.
    Synthesized,
    /// `f_n ↦ S_G⁻¹ f_n / ‖f_n‖²` with `G` the normalised family.
    NormalizedBasisDual,
}

impl CandidateOperator {
    pub fn at(&self, seq: &VectorSequence, scale: usize) -> Result<ReconstructionOperator> {
        match self {
            CandidateOperator::Given(op) => Ok(op.clone()),
            CandidateOperator::Synthesized => construct_b(seq, scale),
            CandidateOperator::NormalizedBasisDual => normalized_basis_candidate(seq, scale),
        }
    }
}

/// `B_N = (S_N⁺ + S_N⁺*)/2`. Fails when the truncated family does not span.
pub fn construct_b(seq: &VectorSequence, scale: usize) -> Result<ReconstructionOperator> {
    let tf = seq.truncate(scale)?;
    construct_b_for(&tf).map(|m| {
        ReconstructionOperator::dense(format!("synthesized({}, {scale})", seq.name()), m)
            .expect("pseudo-inverse of a square matrix is square")
    })
}

/// Symmetrised pseudo-inverse of `tf`'s frame operator.
pub fn construct_b_for(tf: &TruncationFrame) -> Result<ComplexMatrix> {
    let s = tf.frame_op();
    let rank = svd(s).rank(DEFAULT_RANK_TOL);
    if rank < tf.dim() {
        return Err(Error::RankDeficient {
            dim: tf.dim(),
            rank,
        });
    }
    Ok(pinv(s, DEFAULT_RANK_TOL)?.hermitian_part())
}

/// `‖S_N B_N − I‖` in the max-entry norm.
pub fn right_inverse_residual(tf: &TruncationFrame, b: &ComplexMatrix) -> Result<f64> {
    let prod = tf.frame_op().matmul(b)?;
    Ok((&prod - &ComplexMatrix::identity(tf.dim())).max_abs())
}

/// Candidate `B` determined by `B f_n = S_G⁻¹ f_n / ‖f_n‖²`, where `S_G` is the
/// frame operator of `{f_n/‖f_n‖}`. Requires a square invertible truncation.
pub fn normalized_basis_candidate(
    seq: &VectorSequence,
    scale: usize,
) -> Result<ReconstructionOperator> {
    let tf = seq.truncate(scale)?;
    if tf.len() != tf.dim() {
        return Err(Error::InvalidArgument(format!(
            "basis candidate needs as many entries as dimensions, got {} in {}",
            tf.len(),
            tf.dim()
        )));
    }
    let normalized = tf.rescale(|_, norm| 1.0 / norm);
    let sg_inv = inverse(normalized.frame_op())?;
    let f = tf.synthesis();
    let f_inv = inverse(&f)?;
    let d2: Vec<f64> = tf
        .elements()
        .iter()
        .map(|e| 1.0 / e.norm().powi(2))
        .collect();
    let scaled = f.matmul(&ComplexMatrix::from_diagonal(&d2))?;
    let b = sg_inv.matmul(&scaled)?.matmul(&f_inv)?.hermitian_part();
    ReconstructionOperator::dense(format!("basis-candidate({}, {scale})", seq.name()), b)
}

/// `‖B_N − V_N‖` for two operators that both reconstruct at the scale.
pub fn uniqueness_residual(
    seq: &VectorSequence,
    b: &ReconstructionOperator,
    v: &ReconstructionOperator,
    scale: usize,
) -> Result<f64> {
    let dim = seq.space_dim(scale);
    Ok(op_norm(&(&b.matrix(dim)? - &v.matrix(dim)?)))
}

/// Slack of the two frame-type inequalities for one vector:
/// `‖B‖‖f‖² − Σ|⟨f, B f_n⟩|²` and `Σ|⟨f, f_n⟩|² − ‖f‖²/‖B‖`.
pub fn inequality_slacks(
    tf: &TruncationFrame,
    op: &ReconstructionOperator,
    f: &ComplexVector,
) -> Result<(f64, f64)> {
    let b_norm = op.norm(tf.dim())?;
    let f2 = f.norm().powi(2);
    let g = op.apply_adjoint(&f.0)?;
    let upper: f64 = tf.analyze(&g.0)?.iter().map(|c| c.norm_sqr()).sum();
    let lower: f64 = tf.analyze(&f.0)?.iter().map(|c| c.norm_sqr()).sum();
    Ok((b_norm * f2 - upper, lower - f2 / b_norm))
}

/// The five structural consequences of reconstruction, checked at one scale.
pub fn reconstruction_properties(
    seq: &VectorSequence,
    op: &ReconstructionOperator,
    scale: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<PropertyReport> {
    let anchor = "reconstruction-properties";
    let tf = seq.truncate(scale)?;
    let dim = tf.dim();
    let vectors = test_vectors(seed, dim, trials);
    validate(&tf, op, &vectors, tol)?;
    let mut report = PropertyReport::new(format!(
        "reconstruction properties: {} at scale {scale}",
        seq.name()
    ));

    let b_norm = op.norm(dim)?;
    let herm = op.hermitian_residual(dim)?;
    let min_eig = if herm <= PSD_TOL {
        op.min_eigenvalue(dim)?
    } else {
        f64::NAN
    };
    let psd_residual = if min_eig.is_nan() {
        f64::INFINITY
    } else {
        (-min_eig).max(0.0) / b_norm
    };
    report.push(
        Check::new(
            "b-positive-semidefinite",
            anchor,
            psd_residual.max(herm),
            PSD_TOL,
        )
        .with_note(format!(
            "min eigenvalue {min_eig:.6e}, Hermitian residual {herm:.3e}"
        )),
    );
    report.push(
        Check::flag("b-injective", anchor, min_eig > 0.0)
            .with_note(format!("min eigenvalue {min_eig:.6e}")),
    );

    // Both dual series, each summed on its own path.
    let mut dual = 0.0f64;
    for f in &vectors {
        let sf = tf.apply_frame_op(&f.0)?;
        let left = op.apply(&sf.0)?;
        let bf = op.apply(&f.0)?;
        let right = tf.apply_frame_op(&bf.0)?;
        dual = dual.max(left.distance(f)).max(right.distance(f));
    }
    report.push(Check::new("dual-series", anchor, dual, tol).with_seed(seed));

    let mut table = ScanTable::new("inequality-slack", &["trial", "upper_slack", "lower_slack"]);
    let mut worst_upper = f64::NEG_INFINITY;
    let mut worst_lower = f64::NEG_INFINITY;
    for (i, f) in vectors.iter().enumerate() {
        let (su, sl) = inequality_slacks(&tf, op, f)?;
        let f2 = f.norm().powi(2);
        worst_upper = worst_upper.max(-su / (b_norm * f2));
        worst_lower = worst_lower.max(-sl / (f2 / b_norm));
        table.push(vec![i as f64, su, sl]);
    }
    report.push(
        Check::new(
            "b-family-bessel",
            anchor,
            worst_upper.max(0.0),
            INEQUALITY_SLACK_TOL,
        )
        .with_seed(seed)
        .with_note(format!("largest relative violation {worst_upper:.3e}")),
    );
    report.push(
        Check::new(
            "lower-frame-inequality",
            anchor,
            worst_lower.max(0.0),
            INEQUALITY_SLACK_TOL,
        )
        .with_seed(seed)
        .with_note(format!("largest relative violation {worst_lower:.3e}")),
    );

    let parseval = match op.sqrt(dim) {
        Ok(root) => is_parseval(&tf.map(&root)?, tol)?.residual,
        Err(_) => f64::INFINITY,
    };
    report.push(Check::new("root-family-parseval", anchor, parseval, tol));
    report.tables.push(table);
    report.verdict = if report.passed() {
        "all-properties-hold".into()
    } else {
        "property-violated".into()
    };
    Ok(report)
}

/// Finite proxies for the four conditions under which reconstruction forces a frame.
pub fn frame_criteria(
    seq: &VectorSequence,
    op: &ReconstructionOperator,
    dims: &[usize],
) -> Result<PropertyReport> {
    let anchor = "frame-criteria";
    let mut report =
        PropertyReport::new(format!("frame criteria: {} with {}", seq.name(), op.name()));
    let frames = dims
        .iter()
        .map(|&d| seq.truncate(d))
        .collect::<Result<Vec<_>>>()?;
    let scan = bounds_scan_frames(dims, &frames)?;
    let xs: Vec<f64> = dims.iter().map(|&d| d as f64).collect();

    let mut b_min = Vec::new();
    let mut b_norm = Vec::new();
    let mut family_lower = Vec::new();
    let mut image_norms = Vec::new();
    let mut table = ScanTable::new(
        "frame-criteria",
        &["dim", "B_upper", "b_min_eig", "bf_lower", "min_bf_norm"],
    );
    for (tf, (&d, upper)) in frames.iter().zip(dims.iter().zip(&scan.upper)) {
        let dim = tf.dim();
        let mapped = tf.map(op)?;
        let lower = mapped.frame_spectrum()?[0].max(0.0);
        let min_norm = mapped
            .elements()
            .iter()
            .map(|e| e.norm())
            .fold(f64::INFINITY, f64::min);
        let me = op.min_eigenvalue(dim)?;
        b_min.push(me);
        b_norm.push(op.norm(dim)?);
        family_lower.push(lower);
        image_norms.push(min_norm);
        table.push(vec![d as f64, *upper, me, lower, min_norm]);
    }
    let bounded_below =
        |v: &[f64]| v.iter().all(|x| *x > 0.0) && growth_exponent(&xs, v) >= -BOUNDED_EXPONENT;
    let c1 = scan.bessel_like();
    let c2 = bounded_below(&b_min);
    let c3 = bounded_below(&family_lower);
    let c4 = bounded_below(&image_norms);
    report.push(
        Check::flag("bessel", anchor, c1)
            .with_note(format!("upper bound exponent {:.4}", scan.growth_exponent))
            .observe(),
    );
    report.push(
        Check::flag("b-closed-range", anchor, c2)
            .with_note(format!(
                "min eigenvalue exponent {:.4}",
                growth_exponent(&xs, &b_min)
            ))
            .observe(),
    );
    report.push(
        Check::flag("b-family-lower-bound", anchor, c3)
            .with_note(format!(
                "exponent {:.4}",
                growth_exponent(&xs, &family_lower)
            ))
            .observe(),
    );
    report.push(
        Check::flag("b-image-norms-bounded-below", anchor, c4)
            .with_note(format!(
                "exponent {:.4}",
                growth_exponent(&xs, &image_norms)
            ))
            .observe(),
    );
    // Reconstruction always forces A_N ≥ 1/‖B_N‖.
    let worst = scan
        .lower
        .iter()
        .zip(&b_norm)
        .map(|(a, b)| (1.0 / b - a).max(0.0))
        .fold(0.0, f64::max);
    report.push(Check::new("lower-bound-from-operator", anchor, worst, 1e-9));
    let certified = c1 && c2 && c3 && c4;
    if certified {
        report.push(Check::flag(
            "certificate-implies-bounded-upper",
            anchor,
            scan.growth_exponent <= BOUNDED_EXPONENT,
        ));
    }
    report.verdict = if certified {
        "frame-certificate".into()
    } else {
        "no-frame-certificate".into()
    };
    report.tables.push(scan.table("bounds"));
    report.tables.push(table);
    Ok(report)
}

/// Compares `inf ‖f_n‖ > 0` against the reconstruction verdict of the
/// normalised-basis candidate, for diagonal sequences.
pub fn schauder_classifier(
    seq: &VectorSequence,
    dims: &[usize],
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<PropertyReport> {
    let anchor = "schauder-classification";
    if seq.tag() != StructureTag::Diagonal {
        return Err(Error::UnsupportedStructure {
            expected: "diagonal",
            found: seq.tag().name().into(),
        });
    }
    let mut report = PropertyReport::new(format!("basis classification: {}", seq.name()));
    let xs: Vec<f64> = dims.iter().map(|&d| d as f64).collect();
    let infs: Vec<f64> = dims
        .iter()
        .map(|&d| Ok(seq.norms(d)?.into_iter().fold(f64::INFINITY, f64::min)))
        .collect::<Result<_>>()?;
    let inf_exponent = growth_exponent(&xs, &infs);
    let inf_test = infs.iter().all(|x| *x > 0.0) && inf_exponent >= -BOUNDED_EXPONENT;
    report.push(
        Check::flag("inf-norm-positive", anchor, inf_test)
            .with_note(format!(
                "inf over horizon {:.6e}, exponent {inf_exponent:.4}",
                infs.last().unwrap()
            ))
            .observe(),
    );
    let scan = fr_scan(
        seq,
        |d| normalized_basis_candidate(seq, d),
        dims,
        trials,
        seed,
        tol,
    )?;
    let fr = scan.aggregate.verdict == Verdict::Reconstructs;
    report.push(
        Check::flag("candidate-reconstructs", anchor, fr)
            .with_note(format!(
                "verdict {}, norm exponent {:.4}",
                scan.aggregate.verdict.as_str(),
                scan.norm_exponent
            ))
            .observe(),
    );
    report.push(Check::flag("classifier-agreement", anchor, inf_test == fr));
    report.verdict = scan.aggregate.verdict.as_str().into();
    report.tables.push(scan.table("candidate-scan"));
    Ok(report)
}

/// Checks that `{f_n/‖f_n‖}` and `{‖f_n‖ B f_n}` are dual frames at truncation
/// and compares with the structural finite-union test.
pub fn normalized_dual_check(
    seq: &VectorSequence,
    op: &ReconstructionOperator,
    dims: &[usize],
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<PropertyReport> {
    let anchor = "normalized-duals";
    let mut report = PropertyReport::new(format!("normalized dual pair: {}", seq.name()));
    let frames = dims
        .iter()
        .map(|&d| seq.truncate(d))
        .collect::<Result<Vec<_>>>()?;
    let mut normalized = Vec::new();
    let mut weighted = Vec::new();
    let mut residual = 0.0f64;
    for tf in &frames {
        if let Some(n) = tf.elements().iter().position(|e| e.norm() == 0.0) {
            return Err(Error::ZeroVector {
                index: tf.indices()[n],
            });
        }
        let g = tf.rescale(|_, norm| 1.0 / norm);
        let h = tf.map(op)?.rescale(|n, _| tf.elements()[n].norm());
        for f in test_vectors(seed, tf.dim(), trials) {
            let c = h.analyze(&f.0)?;
            residual = residual.max(g.synthesize(&c)?.distance(&f));
        }
        normalized.push(g);
        weighted.push(h);
    }
    let g_scan = bounds_scan_frames(dims, &normalized)?;
    let h_scan = bounds_scan_frames(dims, &weighted)?;
    let reconstructs = residual <= tol;
    report.push(
        Check::new("normalized-pair-reconstructs", anchor, residual, tol)
            .with_seed(seed)
            .observe(),
    );
    report.push(
        Check::flag("normalized-family-bessel", anchor, g_scan.bessel_like())
            .with_note(format!("exponent {:.4}", g_scan.growth_exponent))
            .observe(),
    );
    report.push(
        Check::flag("weighted-family-bessel", anchor, h_scan.bessel_like())
            .with_note(format!("exponent {:.4}", h_scan.growth_exponent))
            .observe(),
    );
    let dual = reconstructs && g_scan.bessel_like() && h_scan.bessel_like();
    report.push(Check::flag("dual-frames", anchor, dual).observe());

    let horizon = *dims.last().unwrap();
    let finite_union = match seq.tag() {
        StructureTag::Diagonal => Some((true, "single unconditional basis".to_string())),
        StructureTag::BlockRepeated => {
            let mults: Vec<f64> = dims
                .iter()
                .map(|&d| seq.multiplicity(d - 1).unwrap_or(1) as f64)
                .collect();
            let xs: Vec<f64> = dims.iter().map(|&d| d as f64).collect();
            let bounded = growth_exponent(&xs, &mults) <= BOUNDED_EXPONENT;
            let note = if bounded {
                format!(
                    "multiplicity bounded by {} over the horizon",
                    (0..horizon)
                        .filter_map(|k| seq.multiplicity(k))
                        .max()
                        .unwrap_or(1)
                )
            } else {
                "not a finite union: multiplicity unbounded".to_string()
            };
            Some((bounded, note))
        }
        _ => None,
    };
    match finite_union {
        Some((fu, note)) => {
            report.push(
                Check::flag("finite-union", anchor, fu)
                    .with_note(note)
                    .observe(),
            );
            report.push(Check::flag("dual-iff-finite-union", anchor, fu == dual));
        }
        None => report.push(
            Check::flag("finite-union", anchor, false)
                .with_note("not determined for untagged sequences")
                .observe(),
        ),
    }
    report.verdict = if dual {
        "dual-frames".into()
    } else {
        "not-dual-frames".into()
    };
    report.tables.push(g_scan.table("normalized-bounds"));
    report.tables.push(h_scan.table("weighted-bounds"));
    Ok(report)
}

/// Unit vector `e_k` as a complex vector.
pub fn unit(dim: usize, k: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(dim);
    v[k] = C64::new(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_basis_reconstructs_unit_vector() {
        let seq = VectorSequence::scaled_linear();
        let b = ReconstructionOperator::scaled_linear_inverse_square();
        let v = does_frame_reconstruction(&seq, &b, &[unit(4, 3)], 4, 1e-12).unwrap();
        assert_eq!(v.max_residual, 0.0);
        assert_eq!(v.verdict, Verdict::Reconstructs);
    }

    #[test]
    fn dimension_mismatch_is_a_contract_error() {
        let seq = VectorSequence::orthonormal();
        let b = ReconstructionOperator::dense("i3", ComplexMatrix::identity(3)).unwrap();
        let err = does_frame_reconstruction(&seq, &b, &[unit(4, 0)], 4, 1e-9).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn synthesized_candidate_inverts_frame_operator() {
        let seq = VectorSequence::scaled_linear();
        let b = construct_b(&seq, 4).unwrap().matrix(4).unwrap();
        assert!(
            (&b - &ComplexMatrix::from_diagonal(&[1.0, 0.25, 1.0 / 9.0, 0.0625])).max_abs() < 1e-15
        );
        let err = construct_b(
            &VectorSequence::finite("short", 3, vec![unit(3, 0)]).unwrap(),
            1,
        )
        .unwrap_err();
        assert_eq!(err, Error::RankDeficient { dim: 3, rank: 1 });
    }

    #[test]
    fn basis_candidate_matches_closed_forms() {
        let b = normalized_basis_candidate(&VectorSequence::scaled_reciprocal(), 4).unwrap();
        let m = b.matrix(4).unwrap();
        assert!((&m - &ComplexMatrix::from_diagonal(&[1.0, 4.0, 9.0, 16.0])).max_abs() < 1e-12);
    }

    #[test]
    fn tight_inequality_at_first_unit_vector() {
        let seq = VectorSequence::scaled_linear();
        let b = ReconstructionOperator::scaled_linear_inverse_square();
        let tf = seq.truncate(8).unwrap();
        let (_, lower) = inequality_slacks(&tf, &b, &unit(8, 0)).unwrap();
        assert_eq!(lower, 0.0);
    }

    #[test]
    fn classifier_rejects_non_diagonal() {
        let err = schauder_classifier(&VectorSequence::repeated_basis(), &[2, 4], 1, 0, 1e-9)
            .unwrap_err();
        assert!(matches!(err, Error::UnsupportedStructure { .. }));
    }
}

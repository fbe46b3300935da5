//! Frame-theoretic measurements on truncations.
//!
//! Finite truncations are always frames of their span, so every statement
//! about an infinite sequence is read off the behaviour of a quantity across
//! a scan of truncation scales: a bounded upper frame bound signals a Bessel
//! sequence, a diverging one signals its failure.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{growth_exponent, tail_exponent};
use crate::linalg::random::seeded_rng;
use crate::linalg::{inverse, ComplexVector, C64, ZERO};
use crate::report::{Check, PropertyReport, ScanTable};
use crate::sequences::{ReconstructionOperator, SupNorm, TruncationFrame, VectorSequence};

/// Exponent at or below which a scanned quantity counts as bounded.
pub const BOUNDED_EXPONENT: f64 = 0.05;
/// Riesz proxy: Gram condition numbers must grow with exponent below this.
pub const RIESZ_CONDITION_EXPONENT: f64 = 0.1;
/// Relative residual below which an element is taken to lie in the span of its predecessors.
/// Its square matches the relative Gram rank tolerance `1e−12`.
pub const DEPENDENCE_TOL: f64 = 1e-6;

/// `(A, B)`: extreme eigenvalues of the frame operator. `A` is clamped at zero.
pub fn frame_bounds(tf: &TruncationFrame) -> Result<(f64, f64)> {
    let spec = tf.frame_spectrum()?;
    let lower = spec.first().copied().unwrap_or(0.0).max(0.0);
    let upper = spec.last().copied().unwrap_or(0.0);
    Ok((lower, upper))
}

/// Frame bounds across ascending truncation scales.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameBoundsScan {
    pub dims: Vec<usize>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub growth_exponent: f64,
    pub lower_infimum: f64,
}

impl FrameBoundsScan {
    pub fn condition(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| if *a > 0.0 { b / a } else { f64::INFINITY })
            .collect()
    }

    /// Upper bounds stay bounded across the scan.
    pub fn bessel_like(&self) -> bool {
        self.growth_exponent <= BOUNDED_EXPONENT
    }

    /// Columns `dim, A, B, cond`.
    pub fn table(&self, name: &str) -> ScanTable {
        let mut t = ScanTable::new(name, &["dim", "A", "B", "cond"]);
        for (i, cond) in self.condition().into_iter().enumerate() {
            t.push(vec![
                self.dims[i] as f64,
                self.lower[i],
                self.upper[i],
                cond,
            ]);
        }
        t
    }
}

fn check_ascending(dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) || dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!(
            "scan dims must be positive and strictly ascending, got {dims:?}"
        )));
    }
    Ok(())
}

pub fn bounds_scan(seq: &VectorSequence, dims: &[usize]) -> Result<FrameBoundsScan> {
    check_ascending(dims)?;
    let frames = dims
        .iter()
        .map(|&d| seq.truncate(d))
        .collect::<Result<Vec<_>>>()?;
    bounds_scan_frames(dims, &frames)
}

/// Scan over already built truncations, `frames[i]` at scale `dims[i]`.
pub fn bounds_scan_frames(dims: &[usize], frames: &[TruncationFrame]) -> Result<FrameBoundsScan> {
    let mut lower = Vec::with_capacity(dims.len());
    let mut upper = Vec::with_capacity(dims.len());
    for tf in frames {
        let (a, b) = frame_bounds(tf)?;
        lower.push(a);
        upper.push(b);
    }
    let xs: Vec<f64> = dims.iter().map(|&d| d as f64).collect();
    Ok(FrameBoundsScan {
        dims: dims.to_vec(),
        growth_exponent: growth_exponent(&xs, &upper),
        lower_infimum: lower.iter().copied().fold(f64::INFINITY, f64::min),
        lower,
        upper,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParsevalCheck {
    /// `‖S − I‖` in operator norm.
    pub residual: f64,
    pub passed: bool,
}

pub fn is_parseval(tf: &TruncationFrame, tol: f64) -> Result<ParsevalCheck> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let residual = tf
        .frame_spectrum()?
        .iter()
        .map(|l| (l - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(ParsevalCheck {
        residual,
        passed: residual <= tol,
    })
}

/// Index of the first element lying in the span of its predecessors.
pub fn first_dependent_index(tf: &TruncationFrame) -> Option<usize> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for n in 0..tf.len() {
        let f = tf.element(n).0;
        let size = crate::linalg::norm(&f);
        if size == 0.0 {
            return Some(n);
        }
        let mut r = f;
        // Two passes of modified Gram–Schmidt keep the residual orthogonal to working precision.
        for _ in 0..2 {
            for q in &basis {
                let c = crate::linalg::inner(&r, q);
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= c * qi;
                }
            }
        }
        let rn = crate::linalg::norm(&r);
        if rn <= DEPENDENCE_TOL * size {
            return Some(n);
        }
        basis.push(r.into_iter().map(|x| x / rn).collect());
    }
    None
}

/// Vectors `g_k` with `⟨f_n, g_k⟩ = δ_{nk}`, from the inverse Gram matrix.
pub fn biorthogonal_system(tf: &TruncationFrame) -> Result<Vec<ComplexVector>> {
    if let Some(index) = first_dependent_index(tf) {
        return Err(Error::NotABasis { index });
    }
    let ginv = inverse(tf.gram())?;
    let count = tf.len();
    // g_k = Σ_m conj(G⁻¹[m][k]) f_m.
    (0..count)
        .map(|k| {
            let coeffs: Vec<C64> = (0..count).map(|m| ginv[(m, k)].conj()).collect();
            tf.synthesize(&coeffs)
        })
        .collect()
}

/// Largest `|⟨f_n, g_k⟩ − δ_{nk}|` over both index orders.
pub fn biorthogonality_residual(tf: &TruncationFrame, duals: &[ComplexVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for (n, e) in tf.elements().iter().enumerate() {
        for (k, g) in duals.iter().enumerate() {
            let delta = if n == k { 1.0 } else { 0.0 };
            let forward = e.inner_from(&g.0).conj();
            let backward = e.inner_from(&g.0);
            worst = worst
                .max((forward - delta).norm())
                .max((backward - delta).norm());
        }
    }
    worst
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnconditionalityReport {
    pub scale: usize,
    pub trials: usize,
    /// Largest `‖Σ_{π} − Σ_{id}‖` of the full sums.
    pub terminal_deviation: f64,
    /// Largest `‖P_j^π − P_j^{id}‖` over all trials and prefix lengths `j`.
    pub max_excursion: f64,
    pub f_norm: f64,
}

/// Compares the reconstruction series `Σ ⟨f, B f_n⟩ f_n` summed in identity order
/// against seeded random reorderings of the same terms.
pub fn unconditionality_test(
    seq: &VectorSequence,
    op: &ReconstructionOperator,
    f: &ComplexVector,
    scale: usize,
    trials: usize,
    seed: u64,
) -> Result<UnconditionalityReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "at least one permutation trial is required".into(),
        ));
    }
    let tf = seq.truncate(scale)?;
    if f.dim() != tf.dim() {
        return Err(Error::DimensionMismatch {
            expected: tf.dim(),
            found: f.dim(),
        });
    }
    let g = op.apply_adjoint(&f.0)?;
    let coeffs: Vec<C64> = tf.elements().iter().map(|e| e.inner_from(&g.0)).collect();
    let identity_sum = tf.synthesize(&coeffs)?;

    let count = tf.len();
    let mut terminal: f64 = 0.0;
    let mut excursion: f64 = 0.0;
    for trial in 0..trials {
        let mut rng = seeded_rng(seed, trial as u64);
        let mut perm: Vec<usize> = (0..count).collect();
        perm.shuffle(&mut rng);
        // Difference D_j = P_j^π − P_j^id, with its squared norm tracked per touched coordinate.
        let mut diff = vec![ZERO; tf.dim()];
        let mut sq = 0.0;
        for (j, &p) in perm.iter().enumerate() {
            for (e, c, sign) in [
                (&tf.elements()[p], coeffs[p], 1.0),
                (&tf.elements()[j], coeffs[j], -1.0),
            ] {
                for &(k, v) in e.entries() {
                    sq -= diff[k].norm_sqr();
                    diff[k] += c * v * sign;
                    sq += diff[k].norm_sqr();
                }
            }
            excursion = excursion.max(sq.max(0.0).sqrt());
        }
        terminal = terminal.max(permuted_sum(&tf, &coeffs, &perm).distance(&identity_sum));
    }
    Ok(UnconditionalityReport {
        scale,
        trials,
        terminal_deviation: terminal,
        max_excursion: excursion,
        f_norm: f.norm(),
    })
}

fn permuted_sum(tf: &TruncationFrame, coeffs: &[C64], perm: &[usize]) -> ComplexVector {
    let mut acc = vec![ZERO; tf.dim()];
    for &p in perm {
        tf.elements()[p].axpy_into(coeffs[p], &mut acc);
    }
    ComplexVector(acc)
}

/// Norm bounds and Riesz-criterion proxies across a scan.
///
/// With `pair` supplied, the series `Σ ‖⟨f, f_n⟩ B f_n‖²` is also tracked for the
/// fixed witness `f_k = (k+1)^{−1}` with seeded unimodular phases; it stays bounded
/// for unconditional reconstruction pairs.
pub fn gohberg_checks(
    seq: &VectorSequence,
    dims: &[usize],
    pair: Option<&ReconstructionOperator>,
    seed: u64,
) -> Result<PropertyReport> {
    check_ascending(dims)?;
    let anchor = "riesz-criterion";
    let mut report =
        PropertyReport::new(format!("norm bounds and Riesz criterion: {}", seq.name()));
    let xs: Vec<f64> = dims.iter().map(|&d| d as f64).collect();
    let mut infs = Vec::new();
    let mut sups = Vec::new();
    let mut conds = Vec::new();
    let mut pair_sums = Vec::new();
    let mut table = ScanTable::new(
        "norm-bounds",
        &["dim", "inf_norm", "sup_norm", "gram_cond", "pair_sum"],
    );

    let max_dim = seq.space_dim(*dims.last().unwrap());
    let mut rng = seeded_rng(seed, max_dim as u64);
    let witness: Vec<C64> = (0..max_dim)
        .map(|k| crate::measures::unit_phase(rng.random::<f64>()) / (k as f64 + 1.0))
        .collect();
    for &d in dims {
        let tf = seq.truncate(d)?;
        let norms: Vec<f64> = tf.elements().iter().map(|e| e.norm()).collect();
        let inf = norms.iter().copied().fold(f64::INFINITY, f64::min);
        let sup = norms.iter().copied().fold(0.0, f64::max);
        let cond = if first_dependent_index(&tf).is_some() {
            f64::INFINITY
        } else {
            let eig = crate::linalg::hermitian_eigenvalues(tf.gram())?;
            eig.last().unwrap() / eig[0]
        };
        let pair_sum = match pair {
            Some(op) => {
                let f = &witness[..tf.dim()];
                let mut total = 0.0;
                for e in tf.elements() {
                    let c = e.inner_from(f);
                    total += c.norm_sqr() * op.apply_sparse(e, tf.dim())?.norm().powi(2);
                }
                total
            }
            None => f64::NAN,
        };
        table.push(vec![d as f64, inf, sup, cond, pair_sum]);
        infs.push(inf);
        sups.push(sup);
        conds.push(cond);
        pair_sums.push(pair_sum);
    }

    let inf_exponent = growth_exponent(&xs, &infs);
    let sup_exponent = growth_exponent(&xs, &sups);
    let inf_min = infs.iter().copied().fold(f64::INFINITY, f64::min);
    let below = inf_min > 0.0 && inf_exponent >= -BOUNDED_EXPONENT;
    let above = !matches!(seq.sup_norm(), SupNorm::Unbounded) && sup_exponent <= BOUNDED_EXPONENT;
    report.push(
        Check::flag("norm-bounded-below", anchor, below)
            .with_note(format!(
                "inf ‖f_n‖ = {inf_min:.6e}, exponent {inf_exponent:.4}"
            ))
            .observe(),
    );
    report.push(
        Check::flag("norm-bounded-above", anchor, above)
            .with_note(format!(
                "sup ‖f_n‖ = {:.6e}, exponent {sup_exponent:.4}",
                sups.last().unwrap()
            ))
            .observe(),
    );
    let cond_exponent = growth_exponent(&xs, &conds);
    let riesz = below
        && above
        && conds.iter().all(|c| c.is_finite())
        && cond_exponent < RIESZ_CONDITION_EXPONENT;
    report.push(
        Check::flag("riesz-proxy", anchor, riesz)
            .with_note(format!("Gram condition exponent {cond_exponent:.4}"))
            .observe(),
    );
    if pair.is_some() {
        let e = tail_exponent(&xs, &pair_sums);
        report.push(
            Check::flag("pair-square-sum-bounded", anchor, e <= BOUNDED_EXPONENT)
                .with_seed(seed)
                .with_note(format!(
                    "exponent {e:.4}, final {:.6e}",
                    pair_sums.last().unwrap()
                ))
                .observe(),
        );
    }
    report.verdict = if riesz {
        "riesz".into()
    } else if below && above {
        "norm-bounded".into()
    } else {
        "not-norm-bounded".into()
    };
    report.tables.push(table);
    Ok(report)
}

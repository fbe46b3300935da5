//! Exponentials `{e^{2πinx}}_{n∈ℤ}` in `L²(w dx)` with `B` = multiplication by `1/w`.
//!
//! On the midpoint grid `⟨f, B e_n⟩_w` is exactly the Lebesgue Fourier
//! coefficient of `f`, so the reconstruction series is the classical symmetric
//! partial sum. The weight decides everything else: whether the system is
//! Bessel, a frame, unconditional or a Riesz basis.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{BOUNDED_EXPONENT, RIESZ_CONDITION_EXPONENT};
use crate::error::{Error, Result};
use crate::fit::{growth_exponent, tail_exponent};
use crate::linalg::random::seeded_rng;
use crate::linalg::{hermitian_eig, op_norm, ComplexMatrix, C64};
use crate::measures::midpoints;
use crate::measures::weights::{a2_constant, WeightModel};
use crate::reconstruction::fr_residual;
use crate::report::{Check, PropertyReport, ScanTable};
use crate::sequences::{ExponentialSystem, ReconstructionOperator, VectorSequence};

/// Required precision of `⟨e_n, B e_k⟩ = δ_{nk}` on the grid.
pub const BIORTHOGONALITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentialCheckConfig {
    pub grid: usize,
    /// Symmetric truncation orders `M` (indices `−M..=M`).
    pub orders: Vec<usize>,
    /// Seeded sign patterns for the unconditionality estimate and random targets.
    pub trials: usize,
    pub seed: u64,
    pub a2_depth: u32,
}

impl Default for ExponentialCheckConfig {
    fn default() -> Self {
        ExponentialCheckConfig {
            grid: 4096,
            orders: vec![4, 8, 16, 32, 64],
            trials: 8,
            seed: 0,
            a2_depth: 12,
        }
    }
}

/// A named real target function on `[0, 1)`.
pub type NamedTarget = (&'static str, fn(f64) -> f64);

/// Smooth periodic targets used for the residual-decrease check.
pub fn smooth_targets() -> Vec<NamedTarget> {
    fn parabola(x: f64) -> f64 {
        x * (1.0 - x)
    }
    fn sine_cubed(x: f64) -> f64 {
        (std::f64::consts::PI * x).sin().powi(3)
    }
    vec![("parabola", parabola), ("sine-cubed", sine_cubed)]
}

/// Hermitian Toeplitz matrix `T[n][m] = (1/Q) Σ_j v_j e^{2πi(n−m)x_j}` over indices `−M..=M`.
pub fn toeplitz(system: &ExponentialSystem, values: &[f64], m: usize) -> ComplexMatrix {
    let q = system.grid();
    let k = 2 * m + 1;
    let moments: Vec<C64> = (0..2 * k - 1)
        .map(|d| {
            let lag = d as i64 - (k as i64 - 1);
            values
                .iter()
                .enumerate()
                .map(|(j, v)| system.phase(lag, j) * *v)
                .sum::<C64>()
                / q as f64
        })
        .collect();
    ComplexMatrix::from_fn(k, k, |a, b| moments[a + k - 1 - b])
}

fn max_sign_multiplier(g: &ComplexMatrix, trials: usize, seed: u64, order: usize) -> Result<f64> {
    let eig = hermitian_eig(g)?;
    let root = eig.reconstruct_with(|x| x.max(0.0).sqrt());
    let inv_root = eig.reconstruct_with(|x| 1.0 / x.sqrt());
    let mut rng = seeded_rng(seed, order as u64);
    let mut worst: f64 = 1.0;
    for _ in 0..trials {
        let signs: Vec<f64> = (0..g.rows())
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();
        let d = ComplexMatrix::from_diagonal(&signs);
        worst = worst.max(op_norm(&root.matmul(&d)?.matmul(&inv_root)?));
    }
    Ok(worst)
}

/// Full check of the exponential system in `L²(w dx)` at grid resolution.
pub fn exponential_fr_check(
    w: &WeightModel,
    cfg: &ExponentialCheckConfig,
) -> Result<PropertyReport> {
    let anchor = "weighted-exponential-classification";
    w.validate()?;
    let floor = w.floor();
    if !(floor > 0.0) {
        return Err(Error::NotBoundedBelow { floor });
    }
    if cfg.orders.len() < 2 || cfg.orders.windows(2).any(|o| o[0] >= o[1]) {
        return Err(Error::InvalidArgument(format!(
            "need at least two ascending orders, got {:?}",
            cfg.orders
        )));
    }
    let m_max = *cfg.orders.last().unwrap();
    if 2 * m_max + 1 > cfg.grid {
        return Err(Error::InvalidArgument(format!(
            "order {m_max} exceeds what a grid of {} resolves",
            cfg.grid
        )));
    }
    let system = w.system(cfg.grid)?;
    let samples = system.weights().to_vec();
    let seq = VectorSequence::exponentials(format!("exponentials({w:?})"), system.clone());
    let b = ReconstructionOperator::multiplication(
        "inverse-weight",
        samples.iter().map(|v| 1.0 / v).collect(),
    );
    let mut report = PropertyReport::new(format!("weighted exponentials: {w:?}"));
    let measured_floor = samples.iter().copied().fold(f64::INFINITY, f64::min);
    report.push(
        Check::flag(
            "bounded-below",
            anchor,
            measured_floor >= floor * (1.0 - 1e-12),
        )
        .with_note(format!(
            "declared floor {floor:.6e}, sampled minimum {measured_floor:.6e}"
        ))
        .observe(),
    );

    // Biorthogonality through the generic operator path.
    let tf = seq.truncate(m_max)?;
    let mapped = tf.map(&b)?;
    let mut bio: f64 = 0.0;
    for (n, e) in tf.elements().iter().enumerate() {
        let dense = e.to_dense(cfg.grid);
        for (k, be) in mapped.elements().iter().enumerate() {
            let delta = if n == k { 1.0 } else { 0.0 };
            bio = bio.max((be.inner_from(&dense.0) - delta).norm());
        }
    }
    report.push(Check::new(
        "biorthogonality",
        anchor,
        bio,
        BIORTHOGONALITY_TOL,
    ));

    // Reconstruction residuals for smooth targets across orders.
    let xs_grid = midpoints(cfg.grid);
    let targets = smooth_targets();
    let mut columns = vec!["M"];
    columns.extend(targets.iter().map(|t| t.0));
    let mut fr_table = ScanTable::new("fr-residuals", &columns);
    let mut per_target: Vec<Vec<f64>> = vec![Vec::new(); targets.len()];
    let frames: Vec<_> = cfg.orders.iter().map(|&m| tf.prefix(2 * m + 1)).collect();
    for (i, tfm) in frames.iter().enumerate() {
        let mut row = vec![cfg.orders[i] as f64];
        for (t, (_, g)) in targets.iter().enumerate() {
            let f = system.embed(
                &xs_grid
                    .iter()
                    .map(|x| C64::new(g(*x), 0.0))
                    .collect::<Vec<_>>(),
            );
            let r = fr_residual(tfm, &b, &f)?;
            per_target[t].push(r);
            row.push(r);
        }
        fr_table.push(row);
    }
    let decreasing = per_target
        .iter()
        .all(|rs| rs.windows(2).all(|p| p[1] < p[0]));
    report.push(
        Check::flag("fr-residual-decreasing", anchor, decreasing)
            .with_note(format!(
                "final residuals {:?}",
                per_target
                    .iter()
                    .map(|r| format!("{:.3e}", r.last().unwrap()))
                    .collect::<Vec<_>>()
            ))
            .observe(),
    );
    let schauder_fr = bio <= BIORTHOGONALITY_TOL && decreasing;

    // Gram matrices of {e_n} and {e_n / w}.
    let inv: Vec<f64> = samples.iter().map(|v| 1.0 / v).collect();
    let xs: Vec<f64> = cfg.orders.iter().map(|&m| (2 * m + 1) as f64).collect();
    let mut bounds = ScanTable::new(
        "exponential-bounds",
        &[
            "M",
            "lambda_min",
            "lambda_max",
            "cond",
            "dual_lambda_max",
            "sign_multiplier",
        ],
    );
    let (mut lmin, mut lmax, mut cond, mut dual_max, mut signs) =
        (vec![], vec![], vec![], vec![], vec![]);
    for &m in &cfg.orders {
        let g = toeplitz(&system, &samples, m);
        let h = toeplitz(&system, &inv, m);
        let ge = crate::linalg::hermitian_eigenvalues(&g)?;
        let he = crate::linalg::hermitian_eigenvalues(&h)?;
        let s = max_sign_multiplier(&g, cfg.trials, cfg.seed, m)?;
        let (a, bb) = (ge[0], *ge.last().unwrap());
        bounds.push(vec![m as f64, a, bb, bb / a, *he.last().unwrap(), s]);
        lmin.push(a);
        lmax.push(bb);
        cond.push(bb / a);
        dual_max.push(*he.last().unwrap());
        signs.push(s);
    }
    let bounded = |v: &[f64]| tail_exponent(&xs, v) <= BOUNDED_EXPONENT;
    let bounded_below =
        |v: &[f64]| v.iter().all(|x| *x > 0.0) && tail_exponent(&xs, v) >= -BOUNDED_EXPONENT;
    let semi_lower: Vec<f64> = lmax.iter().map(|l| 1.0 / l).collect();

    // Sampled supremum of w under grid refinement.
    let qs: Vec<usize> = (0..4)
        .map(|s| cfg.grid >> (3 - s))
        .filter(|q| *q >= 2)
        .collect();
    let sups: Vec<f64> = qs
        .iter()
        .map(|&q| w.samples(q).into_iter().fold(0.0, f64::max))
        .collect();
    let g_bounded = w.singular_points().is_empty()
        && growth_exponent(&qs.iter().map(|q| *q as f64).collect::<Vec<_>>(), &sups)
            <= BOUNDED_EXPONENT;

    let items = [
        ("bessel", bounded(&lmax), tail_exponent(&xs, &lmax)),
        (
            "dual-lower-semi-frame",
            bounded_below(&semi_lower),
            tail_exponent(&xs, &semi_lower),
        ),
        ("unconditional", bounded(&signs), tail_exponent(&xs, &signs)),
        (
            "frame",
            bounded(&lmax) && bounded_below(&lmin),
            tail_exponent(&xs, &lmin),
        ),
        (
            "dual-frame",
            bounded(&dual_max) && bounded_below(&semi_lower),
            tail_exponent(&xs, &dual_max),
        ),
        ("weight-bounded", g_bounded, *sups.last().unwrap()),
        (
            "riesz",
            tail_exponent(&xs, &cond) < RIESZ_CONDITION_EXPONENT,
            tail_exponent(&xs, &cond),
        ),
    ];
    for (name, holds, value) in items {
        report.push(
            Check::flag(name, anchor, holds)
                .with_note(format!("diagnostic {value:.4}"))
                .observe(),
        );
    }
    let all_equal = items.iter().all(|i| i.1 == items[0].1);
    report.push(Check::flag("equivalences-agree", anchor, all_equal));

    let a2 = a2_constant(w, cfg.a2_depth)?;
    report.push(
        Check::flag("a2-condition", anchor, !a2.divergent)
            .with_note(format!("sup {:.6e}, slope {:.4}", a2.sup, a2.slope))
            .observe(),
    );
    report.push(Check::flag("schauder-fr", anchor, schauder_fr).observe());
    report.push(Check::flag(
        "classification-agrees",
        anchor,
        schauder_fr == (floor > 0.0 && !a2.divergent),
    ));

    report.verdict = match (schauder_fr, items[0].1 && all_equal) {
        (true, true) => "riesz",
        (true, false) => "schauder-fr-not-riesz",
        (false, _) => "no-schauder-fr",
    }
    .into();
    report.tables.push(fr_table);
    report.tables.push(bounds);
    report.tables.push(a2.table());
    Ok(report)
}

/// Largest `|⟨e_n, e_k/w⟩_w − ⟨e_n, e_k⟩_dx|` over `|n|, |k| ≤ m` on the grid.
pub fn weight_cancellation_residual(system: &ExponentialSystem, m: usize) -> f64 {
    let q = system.grid();
    let w = system.weights();
    let idx: Vec<i64> = (0..2 * m + 1)
        .map(|p| crate::sequences::IndexSet::Integer.index_at(p))
        .collect();
    let mut worst: f64 = 0.0;
    for &n in &idx {
        for &k in &idx {
            let mut weighted = C64::new(0.0, 0.0);
            let mut plain = C64::new(0.0, 0.0);
            for (j, wj) in w.iter().enumerate() {
                let z = system.phase(n, j) * system.phase(k, j).conj();
                weighted += z * ((wj / q as f64) / wj);
                plain += z / q as f64;
            }
            worst = worst.max((weighted - plain).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toeplitz_of_constant_weight_is_identity() {
        let sys = ExponentialSystem::new(vec![1.0; 64]).unwrap();
        let g = toeplitz(&sys, sys.weights(), 4);
        assert!((&g - &ComplexMatrix::identity(9)).max_abs() < 1e-14);
    }

    #[test]
    fn cancellation_holds_for_rough_weights() {
        let w = WeightModel::Step {
            split: 0.3,
            low: 1e-3,
            high: 5.0,
        };
        let sys = w.system(64).unwrap();
        assert!(weight_cancellation_residual(&sys, 4) < 1e-15);
    }

    #[test]
    fn zero_floor_is_rejected() {
        let w = WeightModel::PowerSingularity {
            center: 0.5,
            exponent: 0.5,
            scale: 1.0,
        };
        assert!(w.floor() > 0.0);
        let err = exponential_fr_check(
            &WeightModel::Constant { value: -1.0 },
            &ExponentialCheckConfig::default(),
        );
        assert!(err.is_err());
    }
}

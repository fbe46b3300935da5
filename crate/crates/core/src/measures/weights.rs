//! Weights on `[0, 1)`, their A₂ constant and classical Fourier partial sums in `L²(w dx)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::growth_exponent;
use crate::linalg::{C64, ZERO};
use crate::measures::midpoints;
use crate::report::ScanTable;
use crate::sequences::ExponentialSystem;

/// A₂ products at or above this count as divergent even without growth.
pub const A2_CAP: f64 = 1e6;
/// Log–log slope of the A₂ supremum against resolution above which it is declared divergent.
pub const A2_SLOPE_THRESHOLD: f64 = 0.1;
/// Midpoint samples per dyadic interval.
pub const A2_SAMPLES: usize = 256;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeightModel {
    Constant {
        value: f64,
    },
    /// `scale · |x − center|^{−exponent}` with `0 ≤ exponent < 1`.
    PowerSingularity {
        center: f64,
        exponent: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    /// `low` on `[0, split)`, `high` on `[split, 1)`.
    Step {
        split: f64,
        low: f64,
        high: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl WeightModel {
    pub fn constant(value: f64) -> Self {
        WeightModel::Constant { value }
    }

    /// `|x − ½|^{−½}`.
    pub fn inverse_sqrt_at_half() -> Self {
        WeightModel::PowerSingularity {
            center: 0.5,
            exponent: 0.5,
            scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            WeightModel::Constant { value } => value > 0.0 && value.is_finite(),
            WeightModel::PowerSingularity {
                center,
                exponent,
                scale,
            } => {
                (0.0..=1.0).contains(&center)
                    && (0.0..1.0).contains(&exponent)
                    && scale > 0.0
                    && scale.is_finite()
            }
            WeightModel::Step { split, low, high } => {
                (0.0..=1.0).contains(&split)
                    && low > 0.0
                    && high > 0.0
                    && low.is_finite()
                    && high.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid weight {self:?}")))
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            WeightModel::Constant { value } => value,
            WeightModel::PowerSingularity {
                center,
                exponent,
                scale,
            } => scale * (x - center).abs().powf(-exponent),
            WeightModel::Step { split, low, high } => {
                if x < split {
                    low
                } else {
                    high
                }
            }
        }
    }

    /// Analytic infimum over `[0, 1)`.
    pub fn floor(&self) -> f64 {
        match *self {
            WeightModel::Constant { value } => value,
            WeightModel::PowerSingularity {
                center,
                exponent,
                scale,
            } => scale * center.max(1.0 - center).powf(-exponent),
            WeightModel::Step { low, high, .. } => low.min(high),
        }
    }

    /// Points where the weight is unbounded.
    pub fn singular_points(&self) -> Vec<f64> {
        match *self {
            WeightModel::PowerSingularity {
                center, exponent, ..
            } if exponent > 0.0 => vec![center],
            _ => Vec::new(),
        }
    }

    /// Samples at the `q` midpoints `(j + ½)/q`.
    pub fn samples(&self, q: usize) -> Vec<f64> {
        midpoints(q).into_iter().map(|x| self.eval(x)).collect()
    }

    pub fn system(&self, q: usize) -> Result<ExponentialSystem> {
        self.validate()?;
        ExponentialSystem::new(self.samples(q))
    }
}

/// Dyadic A₂ scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct A2Scan {
    pub depths: Vec<u32>,
    /// Largest `(avg w)(avg 1/w)` over the intervals of each depth.
    pub depth_sup: Vec<f64>,
    pub sup: f64,
    pub slope: f64,
    pub infinite_factor: bool,
    pub divergent: bool,
}

impl A2Scan {
    /// Log–log slope of the per-depth supremum over depths `lo..=hi`.
    pub fn window_slope(&self, lo: u32, hi: u32) -> f64 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = self
            .depths
            .iter()
            .zip(&self.depth_sup)
            .filter(|(d, _)| (lo..=hi).contains(*d))
            .map(|(d, s)| (2f64.powi(*d as i32), *s))
            .unzip();
        growth_exponent(&xs, &ys)
    }

    /// Columns `depth, sup`.
    pub fn table(&self) -> ScanTable {
        let mut t = ScanTable::new("a2", &["depth", "sup"]);
        for (d, s) in self.depths.iter().zip(&self.depth_sup) {
            t.push(vec![*d as f64, *s]);
        }
        t
    }
}

/// `sup_I (avg_I w)(avg_I 1/w)` over dyadic intervals up to `max_depth`, each
/// interval sampled at its own [`A2_SAMPLES`] midpoints.
///
/// Divergent when the cumulative supremum grows with slope above
/// [`A2_SLOPE_THRESHOLD`] against resolution, reaches [`A2_CAP`], or some
/// factor is not finite.
pub fn a2_constant(w: &WeightModel, max_depth: u32) -> Result<A2Scan> {
    a2_constant_sampled(w, max_depth, A2_SAMPLES)
}

pub fn a2_constant_sampled(w: &WeightModel, max_depth: u32, samples: usize) -> Result<A2Scan> {
    if max_depth < 4 {
        return Err(Error::InvalidArgument(format!(
            "max_depth must be at least 4, got {max_depth}"
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument(
            "at least one sample per interval is required".into(),
        ));
    }
    w.validate()?;
    let mut depth_sup = Vec::new();
    let mut infinite_factor = false;
    for depth in 0..=max_depth {
        let count = 1u64 << depth;
        let len = 1.0 / count as f64;
        let mut best: f64 = 0.0;
        for i in 0..count {
            let a = i as f64 * len;
            let (mut sw, mut sinv) = (0.0, 0.0);
            for s in 0..samples {
                let x = a + (s as f64 + 0.5) * len / samples as f64;
                let v = w.eval(x);
                sw += v;
                sinv += 1.0 / v;
            }
            let product = (sw / samples as f64) * (sinv / samples as f64);
            if !product.is_finite() {
                infinite_factor = true;
            }
            best = best.max(product);
        }
        depth_sup.push(best);
    }
    let depths: Vec<u32> = (0..=max_depth).collect();
    let cumulative: Vec<f64> = depth_sup
        .iter()
        .scan(0.0f64, |m, s| {
            *m = m.max(*s);
            Some(*m)
        })
        .collect();
    let xs: Vec<f64> = depths.iter().map(|d| 2f64.powi(*d as i32)).collect();
    let slope = growth_exponent(&xs, &cumulative);
    let sup = *cumulative.last().unwrap();
    let divergent = infinite_factor || sup >= A2_CAP || slope > A2_SLOPE_THRESHOLD;
    Ok(A2Scan {
        depths,
        depth_sup,
        sup,
        slope,
        infinite_factor,
        divergent,
    })
}

/// Fourier partial sum on the grid and its weighted residual.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialSum {
    pub values: Vec<C64>,
    /// `∫ |S_M f − f|² w dx` by midpoint quadrature.
    pub weighted_residual: f64,
}

/// Lebesgue Fourier coefficients `(1/Q) Σ_j f(x_j) e^{−2πinx_j}` for `|n| ≤ m`, in symmetric order.
pub fn fourier_coefficients(system: &ExponentialSystem, f: &[C64], m: usize) -> Vec<(i64, C64)> {
    let q = system.grid();
    (0..2 * m + 1)
        .map(|pos| {
            let n = crate::sequences::IndexSet::Integer.index_at(pos);
            let c: C64 = f
                .iter()
                .enumerate()
                .map(|(j, v)| v * system.phase(n, j).conj())
                .sum();
            (n, c / q as f64)
        })
        .collect()
}

/// `S_M f = Σ_{|n| ≤ M} f̂(n) e^{2πinx}` on the midpoint grid of `f.len()` points.
pub fn weighted_partial_sum(w: &WeightModel, f: &[C64], m: usize) -> Result<PartialSum> {
    let system = w.system(f.len())?;
    Ok(partial_sum_on(&system, f, m))
}

pub fn partial_sum_on(system: &ExponentialSystem, f: &[C64], m: usize) -> PartialSum {
    let q = system.grid();
    let coeffs = fourier_coefficients(system, f, m);
    let mut values = vec![ZERO; q];
    for (n, c) in coeffs {
        for (j, v) in values.iter_mut().enumerate() {
            *v += c * system.phase(n, j);
        }
    }
    let weighted_residual = values
        .iter()
        .zip(f)
        .zip(system.weights())
        .map(|((s, fv), w)| (s - fv).norm_sqr() * w)
        .sum::<f64>()
        / q as f64;
    PartialSum {
        values,
        weighted_residual,
    }
}

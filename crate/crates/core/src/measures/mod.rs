//! Finite Borel measures on `[0, 1)` and the exponential systems they carry.
//!
//! - Fourier coefficients: exact atomic sums, midpoint quadrature for
//!   densities, and the self-similar product for the middle-thirds Cantor measure.
//! - Rajchman scans: decay profile of `|μ̂(n)|` with the witness subsequence `3^k`.
//! - [`kaczmarz`]: the Kaczmarz iteration for `{e^{2πinx}}` in `L²(μ)` and its
//!   auxiliary sequence.
//! - [`weights`]: weights on a midpoint grid, the A₂ constant and Fourier partial sums.
//! - [`exponential`]: exponentials in `L²(w dx)` reconstructing with `B = 1/w`.

pub mod exponential;
pub mod kaczmarz;
pub mod weights;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::report::ScanTable;

pub use exponential::{exponential_fr_check, ExponentialCheckConfig};
pub use kaczmarz::{kaczmarz_auxiliary, kaczmarz_run, KaczmarzHistory};
pub use weights::{a2_constant, weighted_partial_sum, A2Scan, PartialSum, WeightModel};

/// Recursion stops once the remaining angle `2π|ξ|/3^k` falls below this.
pub const CANTOR_ANGLE_CUTOFF: f64 = 1e-4;

/// A finite Borel measure on `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MeasureModel {
    Atomic {
        points: Vec<f64>,
        weights: Vec<f64>,
    },
    /// Density sampled at the midpoints `(j + ½)/Q` of an even grid.
    Density {
        values: Vec<f64>,
    },
    /// Middle-thirds Cantor measure; `level` sets its atomic expansion.
    Cantor {
        level: u32,
    },
}

impl MeasureModel {
    pub fn atomic(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() || points.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "atomic measure needs matching nonempty points and weights, got {} and {}",
                points.len(),
                weights.len()
            )));
        }
        if let Some(x) = points.iter().find(|x| !(0.0..1.0).contains(*x)) {
            return Err(Error::InvalidArgument(format!(
                "atom {x} lies outside [0, 1)"
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "atom weight {w} must be nonnegative"
            )));
        }
        Ok(MeasureModel::Atomic { points, weights })
    }

    pub fn density(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || !values.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "density grid must be even and positive, got {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "density value {v} must be nonnegative"
            )));
        }
        Ok(MeasureModel::Density { values })
    }

    /// Lebesgue measure as the constant density on `q` midpoints.
    pub fn lebesgue(q: usize) -> Result<Self> {
        Self::density(vec![1.0; q])
    }

    /// Density `g` sampled on `q` midpoints.
    pub fn density_from(q: usize, g: impl Fn(f64) -> f64) -> Result<Self> {
        Self::density(midpoints(q).into_iter().map(g).collect())
    }

    pub fn cantor(level: u32) -> Self {
        MeasureModel::Cantor { level }
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            MeasureModel::Atomic { weights, .. } => weights.iter().sum(),
            MeasureModel::Density { values } => values.iter().sum::<f64>() / values.len() as f64,
            MeasureModel::Cantor { .. } => 1.0,
        }
    }

    /// Atoms and weights; the Cantor measure expands to `2^level` atoms at
    /// the left endpoints `Σ aᵢ·2/3^i` of its level-`level` intervals.
    pub fn atoms(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            MeasureModel::Atomic { points, weights } => Some((points.clone(), weights.clone())),
            MeasureModel::Cantor { level } => Some(cantor_atoms(*level)),
            MeasureModel::Density { .. } => None,
        }
    }

    /// `μ̂(ξ) = ∫ e^{−2πiξx} dμ(x)`.
    pub fn transform(&self, xi: f64) -> C64 {
        match self {
            MeasureModel::Atomic { points, weights } => points
                .iter()
                .zip(weights)
                .map(|(x, w)| unit_phase(-xi * x) * *w)
                .sum(),
            MeasureModel::Density { values } => {
                let q = values.len() as f64;
                values
                    .iter()
                    .enumerate()
                    .map(|(j, g)| unit_phase(-xi * (j as f64 + 0.5) / q) * (*g / q))
                    .sum()
            }
            MeasureModel::Cantor { .. } => cantor_transform(xi),
        }
    }

    pub fn fourier_coefficient(&self, n: i64) -> C64 {
        self.transform(n as f64)
    }
}

/// `e^{2πit}`, with `t` reduced modulo one first.
pub fn unit_phase(t: f64) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * t.rem_euclid(1.0))
}

/// Midpoints `(j + ½)/q`.
pub fn midpoints(q: usize) -> Vec<f64> {
    (0..q).map(|j| (j as f64 + 0.5) / q as f64).collect()
}

pub fn cantor_atoms(level: u32) -> (Vec<f64>, Vec<f64>) {
    let count = 1usize << level;
    let denom = 3f64.powi(level as i32);
    let weight = 1.0 / count as f64;
    let points = (0..count)
        .map(|bits| {
            // Digit i (1-based, most significant first) is 2·(bit level−i).
            let mut numerator: u64 = 0;
            for i in 0..level {
                let digit = (bits >> (level - 1 - i)) & 1;
                numerator = numerator * 3 + 2 * digit as u64;
            }
            numerator as f64 / denom
        })
        .collect();
    (points, vec![weight; count])
}

/// `μ̂(ξ) = e^{−2πiξ/3} cos(2πξ/3) μ̂(ξ/3)`, unrolled until the angle drops
/// below [`CANTOR_ANGLE_CUTOFF`]; the remaining factor is `e^{−πit}` at the final argument `t`.
pub fn cantor_transform(xi: f64) -> C64 {
    let mut t = xi;
    let mut modulus = 1.0;
    let mut phase_turns = 0.0;
    while 2.0 * PI * t.abs() >= CANTOR_ANGLE_CUTOFF {
        t /= 3.0;
        modulus *= (2.0 * PI * t).cos();
        phase_turns -= t.rem_euclid(1.0);
    }
    // Tail: the rest of the product is e^{−πit} up to a cosine factor within θ²/2 of one.
    phase_turns -= 0.5 * t;
    unit_phase(phase_turns) * modulus
}

/// `|μ̂(n)|` profile and the `3^k` witness subsequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RajchmanScan {
    pub profile: Vec<f64>,
    /// Maximum of `|μ̂|` over each dyadic window `[2^j, 2^{j+1})`.
    pub window_max: Vec<(u64, f64)>,
    /// `|μ̂(3^k)|` for `k = 0..=WITNESS_DEPTH`.
    pub witness: Vec<f64>,
    pub witness_spread: f64,
    pub verdict: String,
}

/// Deepest power of three in the witness subsequence.
pub const WITNESS_DEPTH: u32 = 8;
/// Relative spread of `|μ̂(3^k)|` below which the witness subsequence counts as constant.
pub const WITNESS_CONSTANT_TOL: f64 = 1e-8;
/// Coefficients below this are treated as quadrature noise.
pub const QUADRATURE_FLOOR: f64 = 1e-12;

impl RajchmanScan {
    /// Columns `index, value`.
    pub fn table(&self) -> ScanTable {
        let mut t = ScanTable::new("rajchman-profile", &["index", "value"]);
        for (n, v) in self.profile.iter().enumerate() {
            t.push(vec![n as f64, *v]);
        }
        t
    }
}

/// Decay profile of `|μ̂(n)|` for `0 ≤ n ≤ n_max`.
///
/// The verdict is `not-rajchman` when the `3^k` subsequence is constant and
/// nonzero, or when the last dyadic window is no smaller than half the first.
pub fn rajchman_scan(mu: &MeasureModel, n_max: u64) -> Result<RajchmanScan> {
    if n_max < 10 {
        return Err(Error::InvalidArgument(format!(
            "n_max must be at least 10, got {n_max}"
        )));
    }
    let profile: Vec<f64> = (0..=n_max)
        .map(|n| mu.fourier_coefficient(n as i64).norm())
        .collect();
    let mut window_max = Vec::new();
    let mut start = 1u64;
    while start <= n_max {
        let end = (2 * start).min(n_max + 1);
        let m = profile[start as usize..end as usize]
            .iter()
            .copied()
            .fold(0.0, f64::max);
        window_max.push((start, m));
        start *= 2;
    }
    let witness: Vec<f64> = (0..=WITNESS_DEPTH)
        .map(|k| mu.fourier_coefficient(3i64.pow(k)).norm())
        .collect();
    let w0 = witness[0];
    let witness_spread =
        witness.iter().map(|w| (w - w0).abs()).fold(0.0, f64::max) / w0.max(f64::MIN_POSITIVE);
    let constant_witness = w0 > QUADRATURE_FLOOR && witness_spread <= WITNESS_CONSTANT_TOL;
    let first = window_max.first().map(|w| w.1).unwrap_or(0.0);
    let last = window_max.last().map(|w| w.1).unwrap_or(0.0);
    let persistent = last > QUADRATURE_FLOOR && last >= 0.5 * first;
    let verdict = if constant_witness || persistent {
        "not-rajchman"
    } else {
        "decaying"
    };
    Ok(RajchmanScan {
        profile,
        window_max,
        witness,
        witness_spread,
        verdict: verdict.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_atoms_match_ternary_digits() {
        let (p, w) = cantor_atoms(2);
        assert_eq!(p, vec![0.0, 2.0 / 9.0, 6.0 / 9.0, 8.0 / 9.0]);
        assert_eq!(w, vec![0.25; 4]);
    }

    #[test]
    fn zero_coefficient_is_total_mass() {
        assert_eq!(
            MeasureModel::cantor(4).fourier_coefficient(0),
            C64::new(1.0, 0.0)
        );
        let mu = MeasureModel::density_from(64, |x| 1.0 + x).unwrap();
        assert!((mu.fourier_coefficient(0).re - 1.5).abs() < 1e-14);
    }

    #[test]
    fn cantor_first_coefficient_independent_product() {
        // Direct product of 60 factors, far below the cutoff angle.
        let mut z = C64::new(1.0, 0.0);
        for k in 1..=60 {
            let t = 1.0 / 3f64.powi(k);
            z *= C64::from_polar(1.0, -2.0 * PI * t) * (2.0 * PI * t).cos();
        }
        assert!((cantor_transform(1.0) - z).norm() < 1e-8);
    }

    #[test]
    fn lebesgue_coefficients_vanish() {
        let mu = MeasureModel::lebesgue(64).unwrap();
        for n in 1..32 {
            assert!(mu.fourier_coefficient(n).norm() < 1e-14);
        }
        assert_eq!(rajchman_scan(&mu, 20).unwrap().verdict, "decaying");
    }
}

//! Kaczmarz iteration for `φ_n = e^{2πinx}` in `L²(μ)` of an atomic probability measure.
//!
//! `L²(μ)` is the weighted coordinate space over the atoms, so every identity
//! here is exact linear algebra with no smoothing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, ZERO};
use crate::measures::{unit_phase, MeasureModel};

/// Largest allowed deviation of the total mass from one.
pub const MASS_TOL: f64 = 1e-12;

/// An atomic probability measure with its exponentials sampled at the atoms.
#[derive(Clone, Debug)]
pub struct AtomicSpace {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl AtomicSpace {
    pub fn new(mu: &MeasureModel) -> Result<Self> {
        let (points, weights) = mu.atoms().ok_or_else(|| {
            Error::InvalidArgument("Kaczmarz iteration needs an atomic measure".into())
        })?;
        let mass: f64 = weights.iter().sum();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::Normalization { mass });
        }
        Ok(AtomicSpace { points, weights })
    }

    pub fn dim(&self) -> usize {
        self.points.len()
    }

    /// `φ_n` evaluated at the atoms.
    pub fn exponential(&self, n: i64) -> Vec<C64> {
        self.points
            .iter()
            .map(|x| unit_phase(n as f64 * x))
            .collect()
    }

    /// `⟨u, v⟩_μ = Σ w_j u_j conj(v_j)`.
    pub fn inner(&self, u: &[C64], v: &[C64]) -> C64 {
        u.iter()
            .zip(v)
            .zip(&self.weights)
            .map(|((a, b), w)| a * b.conj() * *w)
            .sum()
    }

    pub fn norm(&self, u: &[C64]) -> f64 {
        self.inner(u, u).re.max(0.0).sqrt()
    }

    /// Frame operator `Σ g g*` of a family, in orthonormal coordinates `√w_j u_j`.
    pub fn frame_operator(&self, family: &[Vec<C64>]) -> ComplexMatrix {
        let d = self.dim();
        let roots: Vec<f64> = self.weights.iter().map(|w| w.sqrt()).collect();
        let mut s = ComplexMatrix::zeros(d, d);
        for g in family {
            let u: Vec<C64> = g.iter().zip(&roots).map(|(x, r)| x * *r).collect();
            for i in 0..d {
                if u[i] == ZERO {
                    continue;
                }
                for j in 0..d {
                    s[(i, j)] += u[i] * u[j].conj();
                }
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KaczmarzHistory {
    pub sweep: Vec<i64>,
    /// `‖f − x_n‖_μ` after each step.
    pub residuals: Vec<f64>,
    pub iterate: Vec<C64>,
    pub f_norm: f64,
}

impl KaczmarzHistory {
    /// Largest relative increase between consecutive residuals (zero when monotone).
    pub fn worst_increase(&self) -> f64 {
        self.residuals
            .windows(2)
            .map(|w| (w[1] - w[0]) / w[0].max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }

    /// First step whose residual is below `fraction · ‖f‖`.
    pub fn first_below(&self, fraction: f64) -> Option<usize> {
        self.residuals
            .iter()
            .position(|r| *r < fraction * self.f_norm)
    }
}

/// `x₀ = ⟨f, φ₀⟩φ₀`, `x_n = x_{n−1} + ⟨f − x_{n−1}, φ_n⟩φ_n` along `sweep`.
pub fn kaczmarz_run(mu: &MeasureModel, f: &[C64], sweep: &[i64]) -> Result<KaczmarzHistory> {
    let space = AtomicSpace::new(mu)?;
    kaczmarz_on(&space, f, sweep)
}

pub fn kaczmarz_on(space: &AtomicSpace, f: &[C64], sweep: &[i64]) -> Result<KaczmarzHistory> {
    if f.len() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: f.len(),
        });
    }
    let mut err = f.to_vec();
    let mut residuals = Vec::with_capacity(sweep.len());
    for &n in sweep {
        let phi = space.exponential(n);
        let c = space.inner(&err, &phi);
        for (e, p) in err.iter_mut().zip(&phi) {
            *e -= c * p;
        }
        residuals.push(space.norm(&err));
    }
    let iterate = f.iter().zip(&err).map(|(a, e)| a - e).collect();
    Ok(KaczmarzHistory {
        sweep: sweep.to_vec(),
        residuals,
        iterate,
        f_norm: space.norm(f),
    })
}

/// `g₀ = φ₀`, `g_n = φ_n − Σ_{i<n} ⟨φ_n, φ_i⟩ g_i` for the sweep `0, 1, …, n_max`.
pub fn kaczmarz_auxiliary(mu: &MeasureModel, n_max: usize) -> Result<Vec<Vec<C64>>> {
    let space = AtomicSpace::new(mu)?;
    Ok(auxiliary_on(
        &space,
        &(0..=n_max as i64).collect::<Vec<_>>(),
    ))
}

pub fn auxiliary_on(space: &AtomicSpace, sweep: &[i64]) -> Vec<Vec<C64>> {
    let phis: Vec<Vec<C64>> = sweep.iter().map(|&n| space.exponential(n)).collect();
    let mut gs: Vec<Vec<C64>> = Vec::with_capacity(phis.len());
    for (n, phi) in phis.iter().enumerate() {
        let mut g = phi.clone();
        for i in 0..n {
            let c = space.inner(phi, &phis[i]);
            for (x, y) in g.iter_mut().zip(&gs[i]) {
                *x -= c * y;
            }
        }
        gs.push(g);
    }
    gs
}

/// `Σ_{n ≤ N} ⟨f, g_n⟩ φ_n` for every prefix length `N = 1..=len`, at the requested prefix lengths.
pub fn auxiliary_expansion(
    space: &AtomicSpace,
    sweep: &[i64],
    gs: &[Vec<C64>],
    f: &[C64],
    at: &[usize],
) -> Vec<Vec<C64>> {
    let mut acc = vec![ZERO; space.dim()];
    let mut out = Vec::with_capacity(at.len());
    for (k, (&n, g)) in sweep.iter().zip(gs).enumerate() {
        let c = space.inner(f, g);
        for (a, p) in acc.iter_mut().zip(space.exponential(n)) {
            *a += c * p;
        }
        if at.contains(&(k + 1)) {
            out.push(acc.clone());
        }
    }
    out
}

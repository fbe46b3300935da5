//! One-sided (Hestenes) Jacobi SVD and the operators built on it.

use crate::error::{Error, Result};
use crate::linalg::eigen::hermitian_eig;
use crate::linalg::matrix::{ComplexMatrix, C64, ZERO};

/// Default relative cut-off below which singular values are treated as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

/// Relative floor for negative eigenvalues still accepted as PSD rounding.
pub const PSD_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 80;

#[derive(Clone, Debug)]
pub struct Svd {
    /// `rows × k` with orthonormal columns (columns for zero singular values are zero).
    pub u: ComplexMatrix,
    /// Descending.
    pub singular_values: Vec<f64>,
    /// `cols × k`.
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn rank(&self, rank_tol: f64) -> usize {
        let cut = rank_tol * self.max();
        self.singular_values
            .iter()
            .filter(|&&s| s > cut && s > 0.0)
            .count()
    }

    /// `σ_max / σ_min`, infinite when any singular value vanishes.
    pub fn condition_number(&self) -> f64 {
        let min = self.singular_values.last().copied().unwrap_or(0.0);
        if min == 0.0 {
            f64::INFINITY
        } else {
            self.max() / min
        }
    }
}

/// Thin SVD `m = U Σ V*`.
pub fn svd(m: &ComplexMatrix) -> Svd {
    if m.rows() < m.cols() {
        let t = svd(&m.adjoint());
        return Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        };
    }
    let (rows, cols) = (m.rows(), m.cols());
    // Work column-major: columns of A and V as vectors.
    let mut a: Vec<Vec<C64>> = (0..cols)
        .map(|j| (0..rows).map(|i| m[(i, j)]).collect())
        .collect();
    let mut v: Vec<Vec<C64>> = (0..cols)
        .map(|j| {
            let mut e = vec![ZERO; cols];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();
    let eps = f64::EPSILON;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..cols.saturating_sub(1) {
            for j in i + 1..cols {
                let (alpha, beta, gamma) = {
                    let (ci, cj) = (&a[i], &a[j]);
                    let mut al = 0.0;
                    let mut be = 0.0;
                    let mut ga = ZERO;
                    for k in 0..rows {
                        al += ci[k].norm_sqr();
                        be += cj[k].norm_sqr();
                        ga += ci[k].conj() * cj[k];
                    }
                    (al, be, ga)
                };
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let ph = phase.conj();
                rotate(&mut a, i, j, c, s, ph);
                rotate(&mut v, i, j, c, s, ph);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<(f64, usize)> = a
        .iter()
        .enumerate()
        .map(|(j, col)| (col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(), j))
        .collect();
    sv.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut u = ComplexMatrix::zeros(rows, cols);
    let mut vm = ComplexMatrix::zeros(cols, cols);
    for (k, &(s, j)) in sv.iter().enumerate() {
        for r in 0..rows {
            u[(r, k)] = if s > 0.0 { a[j][r] / s } else { ZERO };
        }
        for r in 0..cols {
            vm[(r, k)] = v[j][r];
        }
    }
    Svd {
        u,
        singular_values: sv.iter().map(|x| x.0).collect(),
        v: vm,
    }
}

// x_i ← c x_i − s e^{-iφ} x_j ; x_j ← s x_i + c e^{-iφ} x_j
fn rotate(cols: &mut [Vec<C64>], i: usize, j: usize, c: f64, s: f64, ph: C64) {
    let (left, right) = cols.split_at_mut(j);
    let (ci, cj) = (&mut left[i], &mut right[0]);
    for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
        let xi = *x;
        let yj = *y * ph;
        *x = xi * c - yj * s;
        *y = xi * s + yj * c;
    }
}

/// Moore–Penrose pseudo-inverse; singular values `≤ rank_tol · σ_max` are dropped.
pub fn pinv(m: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    if !(rank_tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "rank_tol must be positive, got {rank_tol}"
        )));
    }
    let d = svd(m);
    let cut = rank_tol * d.max();
    let (rows, cols) = (m.rows(), m.cols());
    let k = d.singular_values.len();
    let mut out = ComplexMatrix::zeros(cols, rows);
    for (idx, &s) in d.singular_values.iter().enumerate().take(k) {
        if s <= cut || s == 0.0 {
            continue;
        }
        let inv = 1.0 / s;
        for i in 0..cols {
            let vi = d.v[(i, idx)] * inv;
            if vi == ZERO {
                continue;
            }
            for j in 0..rows {
                out[(i, j)] += vi * d.u[(j, idx)].conj();
            }
        }
    }
    Ok(out)
}

/// Spectral norm (largest singular value).
pub fn op_norm(m: &ComplexMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    svd(m).max()
}

/// Hermitian PSD square root.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = hermitian_eig(m)?;
    let max = e.max().max(0.0);
    if e.min() < -PSD_TOL * max {
        return Err(Error::NotPsd {
            min_eig: e.min(),
            max_eig: e.max(),
        });
    }
    Ok(e.reconstruct_with(|x| x.max(0.0).sqrt()))
}

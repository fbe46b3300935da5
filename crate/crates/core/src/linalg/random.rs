//! Seeded random inputs: complex Gaussian coordinates on a ChaCha stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::matrix::{ComplexMatrix, ComplexVector, C64};

/// Deterministic generator for `(seed, stream)`; distinct streams never overlap.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

pub fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> ComplexVector {
    ComplexVector((0..dim).map(|_| gaussian(rng)).collect())
}

/// Unit-norm complex Gaussian vector.
pub fn random_unit_vector(rng: &mut ChaCha8Rng, dim: usize) -> ComplexVector {
    loop {
        let v = random_vector(rng, dim);
        if v.norm() > 0.0 {
            return v.normalized();
        }
    }
}

/// `count` unit test vectors for dimension `dim`, reproducible from `(seed, dim)`.
pub fn test_vectors(seed: u64, dim: usize, count: usize) -> Vec<ComplexVector> {
    let mut rng = seeded_rng(seed, dim as u64);
    (0..count)
        .map(|_| random_unit_vector(&mut rng, dim))
        .collect()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    random_matrix(rng, n, n).hermitian_part()
}

/// `A* A` for a square Gaussian `A`.
pub fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let a = random_matrix(rng, n, n);
    (&a.adjoint() * &a).hermitian_part()
}

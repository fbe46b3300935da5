//! Closed-form and independently computed reference values.

use std::f64::consts::PI;

use framerecon::analysis::{bounds_scan, frame_bounds};
use framerecon::linalg::random::{random_matrix, random_psd, seeded_rng};
use framerecon::linalg::{hermitian_eigenvalues, op_norm, psd_sqrt, ComplexMatrix, C64};
use framerecon::measures::kaczmarz::{auxiliary_on, AtomicSpace};
use framerecon::measures::{a2_constant, cantor_transform, MeasureModel, WeightModel};
use framerecon::perturbation::{perturbed_reconstruction_operator, witness_sums};
use framerecon::reconstruction::{
    construct_b, frame_criteria, normalized_dual_check, reconstruction_properties,
    schauder_classifier,
};
use framerecon::sequences::{DeltaRule, SparseVector};
use framerecon::{ReconstructionOperator, VectorSequence};

/// Frame operator by direct summation of outer products.
fn summed_frame_operator(seq: &VectorSequence, scale: usize) -> ComplexMatrix {
    let tf = seq.truncate(scale).unwrap();
    let d = tf.dim();
    let mut s = ComplexMatrix::zeros(d, d);
    for n in 0..tf.len() {
        let v = tf.element(n);
        for i in 0..d {
            for j in 0..d {
                s[(i, j)] += v.0[i] * v.0[j].conj();
            }
        }
    }
    s
}

/// Largest singular value by power iteration on `A*A`.
fn power_iteration_norm(a: &ComplexMatrix) -> f64 {
    let ata = a.adjoint().matmul(a).unwrap();
    let mut v: Vec<C64> = (0..a.cols())
        .map(|i| C64::new(1.0 + i as f64, 0.5))
        .collect();
    let mut lambda = 0.0;
    for _ in 0..2000 {
        let w = ata.matvec(&v).unwrap().0;
        lambda = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        v = w.into_iter().map(|x| x / lambda).collect();
    }
    lambda.sqrt()
}

#[test]
fn repeated_basis_frame_operator_by_direct_summation() {
    let seq = VectorSequence::repeated_basis();
    let direct = summed_frame_operator(&seq, 3);
    assert_eq!(direct, ComplexMatrix::from_diagonal(&[1.0, 2.0, 3.0]));
    assert_eq!(seq.truncate(3).unwrap().frame_op(), &direct);
    assert_eq!(frame_bounds(&seq.truncate(3).unwrap()).unwrap(), (1.0, 3.0));
}

#[test]
fn scaled_linear_upper_bounds_are_squares() {
    let dims = [4, 8, 16, 32];
    let scan = bounds_scan(&VectorSequence::scaled_linear(), &dims).unwrap();
    for (&n, b) in dims.iter().zip(&scan.upper) {
        assert_eq!(*b, (n * n) as f64);
    }
    assert!((scan.growth_exponent - 2.0).abs() <= 0.05);
}

#[test]
fn repeated_basis_upper_bound_is_block_count() {
    let dims = [2, 4, 8, 16];
    let scan = bounds_scan(&VectorSequence::repeated_basis(), &dims).unwrap();
    assert_eq!(scan.upper, vec![2.0, 4.0, 8.0, 16.0]);
    assert!((scan.growth_exponent - 1.0).abs() <= 1e-12);
}

#[test]
fn synthesized_operators_match_closed_forms() {
    let b = construct_b(&VectorSequence::scaled_linear(), 4)
        .unwrap()
        .matrix(4)
        .unwrap();
    let expected = ComplexMatrix::from_diagonal(&[1.0, 0.25, 1.0 / 9.0, 1.0 / 16.0]);
    assert!((&b - &expected).max_abs() <= 1e-15);

    let b = construct_b(&VectorSequence::scaled_reciprocal(), 4)
        .unwrap()
        .matrix(4)
        .unwrap();
    assert!((&b - &ComplexMatrix::from_diagonal(&[1.0, 4.0, 9.0, 16.0])).max_abs() <= 1e-12);

    let seq = VectorSequence::repeated_basis();
    let b = construct_b(&seq, 10).unwrap().matrix(10).unwrap();
    let reference = ReconstructionOperator::repeated_basis_inverse()
        .matrix(10)
        .unwrap();
    assert!((&b - &reference).max_abs() <= 1e-9);
}

#[test]
fn repeated_basis_properties_at_ten_blocks() {
    let seq = VectorSequence::repeated_basis();
    let op = ReconstructionOperator::repeated_basis_inverse();
    let report = reconstruction_properties(&seq, &op, 10, 100, 0, 1e-9).unwrap();
    assert!(report.passed(), "{:?}", report.failures());
}

#[test]
fn scaled_linear_fails_every_frame_proxy() {
    let seq = VectorSequence::scaled_linear();
    let op = ReconstructionOperator::scaled_linear_inverse_square();
    let report = frame_criteria(&seq, &op, &[8, 16, 32, 64, 128]).unwrap();
    for name in [
        "bessel",
        "b-closed-range",
        "b-family-lower-bound",
        "b-image-norms-bounded-below",
    ] {
        assert!(
            !report.check(name).unwrap().recomputed_pass(),
            "{name} should fail"
        );
    }
    assert_eq!(report.verdict, "no-frame-certificate");
    assert!(report.passed());
}

#[test]
fn reciprocal_scaling_has_a_diverging_candidate() {
    let report = schauder_classifier(
        &VectorSequence::scaled_reciprocal(),
        &[8, 16, 32, 64],
        5,
        0,
        1e-6,
    )
    .unwrap();
    assert!(!report.check("inf-norm-positive").unwrap().recomputed_pass());
    assert_eq!(report.verdict, "diverging-candidate");
    assert!(report.passed());
}

#[test]
fn normalized_duals_of_the_two_families() {
    // ‖f_n‖ B f_n = e_n for the scaled-linear family, so both sides are the unit basis.
    let seq = VectorSequence::scaled_linear();
    let op = ReconstructionOperator::scaled_linear_inverse_square();
    let r = normalized_dual_check(&seq, &op, &[4, 8, 16], 5, 0, 1e-10).unwrap();
    assert_eq!(r.verdict, "dual-frames");

    let seq = VectorSequence::repeated_basis();
    let op = ReconstructionOperator::repeated_basis_inverse();
    let r = normalized_dual_check(&seq, &op, &[4, 8, 16, 32], 5, 0, 1e-10).unwrap();
    assert_eq!(r.verdict, "not-dual-frames");
    assert!(!r.check("finite-union").unwrap().recomputed_pass());
    assert!(r.passed());
}

#[test]
fn witness_sums_are_harmonic_for_the_repeated_basis() {
    // f_k ∝ 1/(k+1) meets e_k (k+1) times, so Σ (k+1)|f_k|² is a harmonic sum.
    let dims = [4, 16, 64, 256];
    let last = 256;
    let raw: Vec<f64> = (0..last).map(|k| 1.0 / (k as f64 + 1.0)).collect();
    let norm2: f64 = raw.iter().map(|x| x * x).sum();
    let f: Vec<C64> = raw
        .iter()
        .map(|x| C64::new(x / norm2.sqrt(), 0.0))
        .collect();
    let sums = witness_sums(&VectorSequence::repeated_basis(), &f, &dims).unwrap();
    for (&k, s) in dims.iter().zip(&sums) {
        let harmonic: f64 = (1..=k).map(|j| 1.0 / j as f64).sum();
        assert!((s - harmonic / norm2).abs() <= 1e-12 * s, "scale {k}");
    }
}

#[test]
fn single_delta_operator_inverts_the_perturbed_frame_operator() {
    let base = VectorSequence::orthonormal();
    let h = base
        .perturb(DeltaRule::single(
            0,
            SparseVector::single(0, C64::new(0.3, 0.0)),
        ))
        .unwrap();
    let p = perturbed_reconstruction_operator(&base, &ReconstructionOperator::identity(), &h, 6)
        .unwrap();
    // h_0 = 1.3 e_0, so the frame operator is diag(1.69, 1, …) and B must be its inverse.
    let mut expected = vec![1.0; 6];
    expected[0] = 1.0 / 1.69;
    let b = p.operator.matrix(6).unwrap();
    assert!((&b - &ComplexMatrix::from_diagonal(&expected)).max_abs() <= 1e-14);
}

#[test]
fn cantor_coefficients_against_a_direct_product() {
    for n in 0..=20i64 {
        let mut direct = C64::new(1.0, 0.0);
        for k in 1..=80 {
            let t = n as f64 / 3f64.powi(k);
            direct *= C64::from_polar(1.0, -2.0 * PI * t) * (2.0 * PI * t).cos();
        }
        assert!(
            (cantor_transform(n as f64) - direct).norm() <= 1e-10,
            "n {n}"
        );
        assert!(
            (cantor_transform(3.0 * n as f64) - cantor_transform(n as f64)).norm() <= 1e-10,
            "n {n}"
        );
    }
    let mu = MeasureModel::cantor(8);
    assert!(
        (mu.fourier_coefficient(1).norm() - mu.fourier_coefficient(3i64.pow(8)).norm()).abs()
            <= 1e-12
    );
}

#[test]
fn a2_scan_separates_singular_and_degenerate_weights() {
    let stable = a2_constant(&WeightModel::inverse_sqrt_at_half(), 12).unwrap();
    assert!(!stable.divergent);
    let window = &stable.depth_sup[8..=12];
    assert!(window
        .iter()
        .all(|s| (s - window[0]).abs() <= 1e-9 * window[0]));

    let step = a2_constant(
        &WeightModel::Step {
            split: 0.5,
            low: 1e-8,
            high: 1.0,
        },
        12,
    )
    .unwrap();
    assert!(step.divergent, "sup {}", step.sup);
}

#[test]
fn auxiliary_family_approaches_a_parseval_frame() {
    let space = AtomicSpace::new(&MeasureModel::cantor(6)).unwrap();
    let mut previous_lower = f64::NEG_INFINITY;
    for n in [100usize, 200, 400, 800] {
        let sweep: Vec<i64> = (0..n as i64).collect();
        let eig =
            hermitian_eigenvalues(&space.frame_operator(&auxiliary_on(&space, &sweep))).unwrap();
        let (lower, upper) = (eig[0], *eig.last().unwrap());
        assert!(upper <= 1.0 + 1e-9, "upper {upper} at {n}");
        assert!(lower >= previous_lower - 1e-9, "lower bound fell at {n}");
        previous_lower = lower;
    }
    assert!(previous_lower > 0.3);
}

#[test]
fn operator_norm_matches_power_iteration() {
    let a = random_matrix(&mut seeded_rng(11, 0), 8, 8);
    let reference = power_iteration_norm(&a);
    assert!((op_norm(&a) - reference).abs() <= 1e-6 * reference);
}

#[test]
fn psd_square_root_squares_back() {
    let m = random_psd(&mut seeded_rng(12, 0), 8);
    let r = psd_sqrt(&m).unwrap();
    assert!((&r.matmul(&r).unwrap() - &m).max_abs() <= 1e-9 * m.max_abs());
}

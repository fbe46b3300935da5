//! The dense complex toolbox underneath: eigen, SVD, pseudo-inverse, square root.
//!
//! `cargo run --example linear_algebra`

use framerecon::linalg::random::{random_hermitian, random_matrix, random_psd, seeded_rng};
use framerecon::linalg::{hermitian_eig, op_norm, pinv, psd_sqrt, svd, ComplexMatrix};

fn main() -> framerecon::Result<()> {
    let mut rng = seeded_rng(0, 0);

    let h = random_hermitian(&mut rng, 8);
    let eig = hermitian_eig(&h)?;
    let rebuilt = eig.reconstruct_with(|x| x);
    println!("eigenvalues {:.4?}", eig.values);
    println!(
        "  ‖V diag(λ) V* − H‖max = {:.2e}",
        (&rebuilt - &h).max_abs()
    );

    let a = random_matrix(&mut rng, 6, 4);
    let s = svd(&a);
    let p = pinv(&a, 1e-12)?;
    let proj = a.matmul(&p)?;
    println!(
        "singular values {:.4?}, condition {:.3}",
        s.singular_values,
        s.condition_number()
    );
    println!(
        "  A A⁺ idempotent to {:.2e}, Hermitian to {:.2e}",
        (&proj.matmul(&proj)? - &proj).max_abs(),
        proj.hermitian_residual()
    );

    let m = random_psd(&mut rng, 8);
    let r = psd_sqrt(&m)?;
    println!(
        "  ‖R² − M‖max = {:.2e}, ‖M‖ = {:.4}",
        (&r.matmul(&r)? - &m).max_abs(),
        op_norm(&m)
    );
    println!("  ‖I₃‖ = {}", op_norm(&ComplexMatrix::identity(3)));
    Ok(())
}

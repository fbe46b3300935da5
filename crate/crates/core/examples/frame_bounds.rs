//! Frame bounds of the shipped families across truncation scales.
//!
//! `cargo run --example frame_bounds`

use framerecon::analysis::{bounds_scan, is_parseval};
use framerecon::{ReconstructionOperator, VectorSequence};

fn main() -> framerecon::Result<()> {
    let dims = [4, 8, 16, 32, 64];
    for seq in [
        VectorSequence::orthonormal(),
        VectorSequence::scaled_linear(),
        VectorSequence::repeated_basis(),
    ] {
        let scan = bounds_scan(&seq, &dims)?;
        println!("{}", seq.name());
        println!("  {:>6} {:>12} {:>12} {:>12}", "scale", "A", "B", "B/A");
        for (i, cond) in scan.condition().iter().enumerate() {
            println!(
                "  {:>6} {:>12.6} {:>12.6} {:>12.4}",
                dims[i], scan.lower[i], scan.upper[i], cond
            );
        }
        println!(
            "  upper-bound growth exponent {:.4}, bessel-like {}",
            scan.growth_exponent,
            scan.bessel_like()
        );
    }

    // The repeated basis is not Bessel, yet {√B f_n} is Parseval.
    let seq = VectorSequence::repeated_basis();
    let tf = seq.truncate(20)?;
    let root = ReconstructionOperator::repeated_basis_inverse().sqrt(tf.dim())?;
    let check = is_parseval(&tf.map(&root)?, 1e-10)?;
    println!(
        "root family of the repeated basis: Parseval residual {:.3e}",
        check.residual
    );
    Ok(())
}

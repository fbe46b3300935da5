//! Normalised dual pairs and the classification of scaled bases.
//!
//! `cargo run --example basis_classification`

use framerecon::reconstruction::{normalized_dual_check, schauder_classifier};
use framerecon::{ReconstructionOperator, VectorSequence};

fn main() -> framerecon::Result<()> {
    let dims = [8, 16, 32, 64];
    for power in [1.5, 0.0, -1.0] {
        let seq = VectorSequence::power_basis(power);
        let r = schauder_classifier(&seq, &dims, 5, 0, 1e-8)?;
        let inf = r.check("inf-norm-positive").unwrap();
        println!(
            "c_n = (n+1)^{power:<4}: inf ‖f_n‖ > 0 is {:<5} verdict {}",
            inf.passed, r.verdict
        );
    }

    // Bounded multiplicity keeps the normalised pair dual; unbounded does not.
    let bounded = VectorSequence::block_repeated("twice", |_| 2)?;
    let op = ReconstructionOperator::diagonal("half", |_| 0.5);
    println!(
        "{}: {}",
        bounded.name(),
        normalized_dual_check(&bounded, &op, &dims, 5, 0, 1e-10)?.verdict
    );
    let seq = VectorSequence::repeated_basis();
    let op = ReconstructionOperator::repeated_basis_inverse();
    let r = normalized_dual_check(&seq, &op, &[4, 8, 16, 32], 5, 0, 1e-10)?;
    println!("{}: {}", seq.name(), r.verdict);
    Ok(())
}

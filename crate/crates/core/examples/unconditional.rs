//! Reordering the reconstruction series, and the norm-bound proxies for a Riesz basis.
//!
//! `cargo run --example unconditional`

use framerecon::analysis::{gohberg_checks, unconditionality_test};
use framerecon::linalg::random::{random_unit_vector, seeded_rng};
use framerecon::{ReconstructionOperator, VectorSequence};

fn main() -> framerecon::Result<()> {
    let seq = VectorSequence::repeated_basis();
    let op = ReconstructionOperator::repeated_basis_inverse();
    for blocks in [8, 16, 32] {
        let dim = seq.space_dim(blocks);
        let f = random_unit_vector(&mut seeded_rng(0, dim as u64), dim);
        let u = unconditionality_test(&seq, &op, &f, blocks, 20, 0)?;
        println!(
            "{blocks:>3} blocks: reordered sums differ by {:.2e}, largest partial-sum excursion {:.3}",
            u.terminal_deviation, u.max_excursion
        );
    }

    let dims = [8, 16, 32, 64];
    for seq in [
        VectorSequence::orthonormal(),
        VectorSequence::scaled_linear(),
    ] {
        let r = gohberg_checks(&seq, &dims, None, 0)?;
        println!("{}: {}", seq.name(), r.verdict);
        for c in &r.checks {
            println!("  {:<28} holds {:<5} {}", c.name, c.passed, c.note);
        }
    }
    Ok(())
}

//! The reconstruction test `f = Σ ⟨f, B f_n⟩ f_n` for two non-frames.
//!
//! `cargo run --example reconstruction`

use framerecon::linalg::random::test_vectors;
use framerecon::reconstruction::{does_frame_reconstruction, fr_scan};
use framerecon::{ReconstructionOperator, VectorSequence};

fn main() -> framerecon::Result<()> {
    let cases = [
        (
            VectorSequence::scaled_linear(),
            ReconstructionOperator::scaled_linear_inverse_square(),
        ),
        (
            VectorSequence::repeated_basis(),
            ReconstructionOperator::repeated_basis_inverse(),
        ),
    ];
    for (seq, op) in &cases {
        println!("{} with {}", seq.name(), op.name());
        let scan = fr_scan(seq, |_| Ok(op.clone()), &[4, 16, 64], 100, 0, 1e-10)?;
        for (d, v) in scan.dims.iter().zip(&scan.per_dim) {
            println!(
                "  scale {d:>3}: max residual {:.3e}, ‖B‖ {:.3}, min eig {:.3e}",
                v.max_residual, v.b_norm, v.b_min_eig
            );
        }
        println!("  verdict {}", scan.aggregate.verdict.as_str());
    }

    // A wrong operator fails the test at the first scale.
    let seq = VectorSequence::scaled_linear();
    let vectors = test_vectors(0, 8, 10);
    let v = does_frame_reconstruction(
        &seq,
        &ReconstructionOperator::identity(),
        &vectors,
        8,
        1e-10,
    )?;
    println!(
        "scaled-linear with the identity: max residual {:.3e}, verdict {}",
        v.max_residual,
        v.verdict.as_str()
    );
    Ok(())
}

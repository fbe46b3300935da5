//! Building `B` from the truncated frame operator, and spotting when it diverges.
//!
//! `cargo run --example synthesized_operator`

use framerecon::reconstruction::{construct_b, fr_scan, right_inverse_residual};
use framerecon::{ReconstructionOperator, VectorSequence};

fn main() -> framerecon::Result<()> {
    let seq = VectorSequence::scaled_linear();
    let synthesized = construct_b(&seq, 64)?.matrix(64)?;
    let closed_form = ReconstructionOperator::scaled_linear_inverse_square().matrix(64)?;
    println!(
        "scaled-linear at 64: max entry gap to diag(1/(n+1)²) {:.3e}",
        (&synthesized - &closed_form).max_abs()
    );
    println!(
        "  ‖S B − I‖ = {:.3e}",
        right_inverse_residual(&seq.truncate(64)?, &synthesized)?
    );

    // Each truncation reconstructs, but the candidates blow up like N².
    let seq = VectorSequence::scaled_reciprocal();
    let dims = [8, 16, 32, 64, 128];
    let scan = fr_scan(&seq, |d| construct_b(&seq, d), &dims, 10, 0, 1e-6)?;
    for (d, v) in dims.iter().zip(&scan.per_dim) {
        println!(
            "scaled-reciprocal at {d:>3}: ‖B_N‖ {:>10.1}, residual {:.2e}",
            v.b_norm, v.max_residual
        );
    }
    println!(
        "norm exponent {:.3}, verdict {}",
        scan.norm_exponent,
        scan.aggregate.verdict.as_str()
    );
    Ok(())
}

//! Testing a hand-written finite family with a synthesized operator.
//!
//! `cargo run --example custom_family`

use framerecon::analysis::{first_dependent_index, frame_bounds};
use framerecon::linalg::random::test_vectors;
use framerecon::reconstruction::{construct_b, does_frame_reconstruction};
use framerecon::{ComplexVector, VectorSequence};

fn main() -> framerecon::Result<()> {
    // Mercedes-Benz frame in ℝ² plus a repeated vector.
    let s = 3f64.sqrt() / 2.0;
    let vectors = [[0.0, 1.0], [-s, -0.5], [s, -0.5], [0.0, 1.0]]
        .iter()
        .map(|v| ComplexVector::from_real(v))
        .collect();
    let seq = VectorSequence::finite("mercedes-plus-one", 2, vectors)?;
    let tf = seq.truncate(4)?;
    let (a, b) = frame_bounds(&tf)?;
    println!(
        "bounds ({a:.4}, {b:.4}), first dependent entry {:?}",
        first_dependent_index(&tf)
    );

    let op = construct_b(&seq, 4)?;
    let b = op.matrix(2)?;
    for i in 0..2 {
        println!("B row {i}: {:+.4} {:+.4}", b[(i, 0)].re, b[(i, 1)].re);
    }
    let v = does_frame_reconstruction(&seq, &op, &test_vectors(0, 2, 50), 4, 1e-12)?;
    println!(
        "max residual {:.2e}, verdict {}",
        v.max_residual,
        v.verdict.as_str()
    );
    Ok(())
}

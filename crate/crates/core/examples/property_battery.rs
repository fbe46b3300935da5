//! Structural consequences of reconstruction, and when they force a frame.
//!
//! `cargo run --example property_battery`

use framerecon::reconstruction::{frame_criteria, reconstruction_properties};
use framerecon::{PropertyReport, ReconstructionOperator, VectorSequence};

fn show(report: &PropertyReport) {
    println!("{} -> {}", report.title, report.verdict);
    for c in &report.checks {
        let status = if c.passed { "ok  " } else { "FAIL" };
        println!(
            "  {status} {:<34} {:>10.3e} <= {:<8.1e} {:?} {}",
            c.name, c.residual, c.threshold, c.role, c.note
        );
    }
}

fn main() -> framerecon::Result<()> {
    let seq = VectorSequence::scaled_linear();
    let op = ReconstructionOperator::scaled_linear_inverse_square();
    show(&reconstruction_properties(&seq, &op, 64, 100, 0, 1e-10)?);
    show(&frame_criteria(&seq, &op, &[8, 16, 32, 64, 128])?);

    // Power 0 is the orthonormal basis: every proxy holds.
    let seq = VectorSequence::power_basis(0.0);
    show(&frame_criteria(
        &seq,
        &ReconstructionOperator::identity(),
        &[8, 16, 32, 64],
    )?);
    Ok(())
}

//! Small ℓ¹ perturbations keep reconstruction, and keep a non-frame a non-frame.
//!
//! `cargo run --example perturbation`

use framerecon::linalg::random::test_vectors;
use framerecon::perturbation::{
    budget_table, non_frame_persistence, paley_wiener_budget, perturbed_reconstruction_operator,
};
use framerecon::reconstruction::fr_residual;
use framerecon::sequences::DeltaRule;
use framerecon::{ReconstructionOperator, VectorSequence};

fn main() -> framerecon::Result<()> {
    println!(
        "budget at M = ‖B‖ = 1: {:.16} (√2 − 1 = {:.16})",
        paley_wiener_budget(1.0, 1.0)?,
        2f64.sqrt() - 1.0
    );
    let table = budget_table(&[0.5, 1.0, 2.0], &[0.5, 1.0, 4.0])?;
    print!("{}", table.to_csv());

    let base = VectorSequence::repeated_basis();
    let op = ReconstructionOperator::repeated_basis_inverse();
    let h = base.perturb(DeltaRule::geometric(0.4, 0))?;
    for blocks in [3, 10, 20] {
        let p = perturbed_reconstruction_operator(&base, &op, &h, blocks)?;
        let tf = h.truncate(blocks)?;
        let worst = test_vectors(0, tf.dim(), 20)
            .iter()
            .map(|f| fr_residual(&tf, &p.operator, f))
            .try_fold(0.0f64, |m, r| r.map(|r| m.max(r)))?;
        println!(
            "{blocks:>3} blocks: spent {:.4} of {:.4}, cond(T) {:.3}, residual {worst:.2e}",
            p.budget.spent, p.budget.budget, p.condition
        );
    }

    let report = non_frame_persistence(&base, &h, 0.55, &[64, 128, 256, 512, 1024])?;
    println!("persistence: {}", report.verdict);
    for c in &report.checks {
        println!("  {:<28} {}", c.name, c.note);
    }
    Ok(())
}

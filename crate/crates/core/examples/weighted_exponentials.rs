//! Exponentials in `L²(w dx)`: reconstruction, Riesz property and the A₂ condition.
//!
//! `cargo run --release --example weighted_exponentials`

use framerecon::measures::exponential::{exponential_fr_check, ExponentialCheckConfig};
use framerecon::measures::{a2_constant, WeightModel};

fn main() -> framerecon::Result<()> {
    let cfg = ExponentialCheckConfig {
        grid: 2048,
        ..ExponentialCheckConfig::default()
    };
    let weights = [
        WeightModel::constant(1.0),
        WeightModel::Step {
            split: 0.5,
            low: 0.25,
            high: 4.0,
        },
        WeightModel::inverse_sqrt_at_half(),
    ];
    for w in &weights {
        let a2 = a2_constant(w, 12)?;
        let report = exponential_fr_check(w, &cfg)?;
        println!("{w:?}");
        println!(
            "  A₂ supremum {:.6} (divergent {}), verdict {}",
            a2.sup, a2.divergent, report.verdict
        );
        for c in report.checks.iter().filter(|c| !c.note.is_empty()) {
            println!("    {:<24} holds {:<5} {}", c.name, c.passed, c.note);
        }
    }
    Ok(())
}

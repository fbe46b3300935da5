//! Fourier coefficients of the middle-thirds Cantor measure and why it is not Rajchman.
//!
//! `cargo run --example cantor_measure`

use framerecon::measures::{cantor_atoms, rajchman_scan, unit_phase, MeasureModel};

fn main() -> framerecon::Result<()> {
    let mu = MeasureModel::cantor(8);
    for k in 0..=8u32 {
        let n = 3i64.pow(k);
        let c = mu.fourier_coefficient(n);
        println!(
            "μ̂({n:>5}) = {:+.12} {:+.12}i, |μ̂| = {:.12}",
            c.re,
            c.im,
            c.norm()
        );
    }

    // Level-12 atoms sit at left endpoints; shifting to centres recovers the exact values.
    let level = 12;
    let (points, weights) = cantor_atoms(level);
    let atomic = MeasureModel::atomic(points, weights)?;
    let shift = 0.5 / 3f64.powi(level as i32);
    let worst = (-100i64..=100)
        .map(|n| {
            (mu.fourier_coefficient(n)
                - atomic.fourier_coefficient(n) * unit_phase(-(n as f64) * shift))
            .norm()
        })
        .fold(0.0, f64::max);
    println!("level-{level} quadrature vs exact recursion over |n| ≤ 100: {worst:.3e}");

    let scan = rajchman_scan(&mu, 1000)?;
    for (start, m) in &scan.window_max {
        println!("  max |μ̂| on [{start}, {}): {m:.6}", 2 * start);
    }
    println!("verdict {}", scan.verdict);
    let lebesgue = rajchman_scan(&MeasureModel::lebesgue(256)?, 100)?;
    println!("Lebesgue on a 256-point grid: {}", lebesgue.verdict);
    Ok(())
}

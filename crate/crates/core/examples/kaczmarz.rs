//! Kaczmarz iteration with exponentials on Cantor atoms.
//!
//! `cargo run --release --example kaczmarz`

use framerecon::linalg::random::{gaussian, seeded_rng};
use framerecon::measures::kaczmarz::{auxiliary_expansion, auxiliary_on, kaczmarz_on, AtomicSpace};
use framerecon::measures::MeasureModel;
use framerecon::C64;

fn main() -> framerecon::Result<()> {
    let space = AtomicSpace::new(&MeasureModel::cantor(8))?;
    let sweep: Vec<i64> = (0..2000).collect();
    let checkpoints = [1, 10, 100, 500, 1000, 2000];

    let mut rng = seeded_rng(0, 0);
    let random: Vec<C64> = (0..space.dim()).map(|_| gaussian(&mut rng)).collect();
    let smooth: Vec<C64> = space
        .points
        .iter()
        .map(|x| C64::new(x * (1.0 - x), 0.0))
        .collect();
    for (name, f) in [("gaussian", &random), ("x(1-x)", &smooth)] {
        let h = kaczmarz_on(&space, f, &sweep)?;
        let profile: Vec<String> = checkpoints
            .iter()
            .map(|&n| format!("{:.3}", h.residuals[n - 1] / h.f_norm))
            .collect();
        println!(
            "{name:<9} ‖f − x_n‖/‖f‖ at {checkpoints:?}: {}",
            profile.join(" ")
        );
        println!("          worst step increase {:.1e}", h.worst_increase());
    }

    // The iterate equals Σ ⟨f, g_n⟩ φ_n with the auxiliary sequence {g_n}.
    let depth = 200;
    let gs = auxiliary_on(&space, &sweep[..depth]);
    let x = auxiliary_expansion(&space, &sweep[..depth], &gs, &random, &[depth]).remove(0);
    let k = kaczmarz_on(&space, &random, &sweep[..depth])?;
    let gap = x
        .iter()
        .zip(&k.iterate)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!("iterate vs auxiliary expansion after {depth} steps: {gap:.2e}");
    Ok(())
}

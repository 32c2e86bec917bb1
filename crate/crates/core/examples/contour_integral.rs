//! Integrates the one-row integrand on a circle around all its poles and
//! compares with the closed-form polynomial.

use macdonald_cn::contour::{compare_with_closed_forms, PhiSpec, MIN_NODES};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> macdonald_cn::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let spec = PhiSpec::sample(2, 2, 2, 0.3, &mut rng)?;
    let cmp = compare_with_closed_forms(&spec, None, MIN_NODES)?;
    println!("radius {:.4}", cmp.integral.radius);
    for (nodes, value) in &cmp.integral.history {
        println!("  {nodes:>6} nodes: {value:.15}");
    }
    println!("closed form:      {:.15}", cmp.polynomial_value);
    println!("residue sum:      {:.15}", cmp.residue_sum);
    println!(
        "relative error {:.2e} / {:.2e}",
        cmp.residual_vs_polynomial, cmp.residual_vs_residues
    );
    Ok(())
}

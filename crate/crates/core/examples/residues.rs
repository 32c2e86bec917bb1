//! Per-pole contributions from the closed residue formulas, for each
//! variable and both branches.

use macdonald_cn::onerow::{residue_solution, residue_total, Branch};
use num_complex::Complex64;

fn main() -> macdonald_cn::Result<()> {
    let (lambda, k, q) = (3, 2, 0.4);
    let y = [Complex64::new(0.9, 0.3), Complex64::new(-0.4, 1.1)];
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..y.len() {
        for branch in [Branch::Plus, Branch::Minus] {
            let r = residue_solution(i, branch, lambda, k, q, &y)?;
            println!("y{} {branch:?}: {r:.12}", i + 1);
            sum += r;
        }
    }
    println!("sum   {sum:.12}");
    println!("total {:.12}", residue_total(lambda, k, q, &y)?);
    Ok(())
}

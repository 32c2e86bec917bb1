//! Gaussian coefficients (t; q)_i / (q; q)_i with t = q^k, and the operator
//! eigenvalues of one-row partitions. Coefficients are printed in v = q^(1/2).

use macdonald_cn::qfield::{eigenvalue_c, gauss_coeff};
use macdonald_cn::weyl::Partition;

fn main() -> macdonald_cn::Result<()> {
    for k in 1..=3 {
        println!("k = {k}");
        for i in 0..=4 {
            println!("  g({i}) = {}", gauss_coeff(k, i)?);
        }
    }
    let (n, k) = (2, 2);
    for lambda in 0..=3 {
        let c = eigenvalue_c(&Partition::row(lambda), n, k)?;
        println!("c_({lambda}) in {n} variables, k = {k}: {c}");
    }
    Ok(())
}

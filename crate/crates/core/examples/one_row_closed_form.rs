//! The closed-form one-row polynomial, checked against the eigen-solver and
//! printed as the JSON term list.

use macdonald_cn::onerow::{cycle_integral_polynomial, integral_normalization, one_row_polynomial};
use macdonald_cn::operator::solve_p;
use macdonald_cn::weyl::Partition;

fn main() -> macdonald_cn::Result<()> {
    let (lambda, n, k) = (2, 2, 2);
    let p = one_row_polynomial(lambda, n, k)?;
    println!("{}", p.pretty());
    assert_eq!(p, solve_p(&Partition::row(lambda), n, k)?);
    println!("agrees with the eigen-solver");

    // the integral itself has ring coefficients
    let scaled = cycle_integral_polynomial(lambda, n, k)?;
    println!(
        "integral normalization: {}",
        integral_normalization(lambda, k)?
    );
    println!("{}", scaled.to_json_string());
    Ok(())
}

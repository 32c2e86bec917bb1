//! Applies the operator E to orbit sums m_mu and expands the image back in
//! the monomial basis. The expansion is triangular in the dominance order.

use macdonald_cn::operator::{apply_e, expand_in_monomials};
use macdonald_cn::qfield::eigenvalue_c;
use macdonald_cn::weyl::{orbit_monomial, Partition};

fn main() -> macdonald_cn::Result<()> {
    let (n, k) = (2, 2);
    for parts in [vec![1], vec![2], vec![1, 1], vec![2, 1]] {
        let mu = Partition::new(parts)?;
        let image = apply_e(&orbit_monomial(&mu, n)?, k)?;
        println!("E m_{:?}:", mu.parts());
        for (nu, c) in expand_in_monomials(&image)?.iter().rev() {
            println!("  m_{:?}: {c}", nu.parts());
        }
        println!("  (eigenvalue {})", eigenvalue_c(&mu, n, k)?);
    }
    Ok(())
}

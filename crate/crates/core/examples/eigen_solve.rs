//! Builds P_mu for arbitrary partitions from the operator alone, by solving
//! the triangular eigen-system in the monomial basis.

use macdonald_cn::operator::{apply_e_rational, expand_in_monomials, EigenSolver};
use macdonald_cn::qfield::{eigenvalue_c, VFrac};
use macdonald_cn::weyl::Partition;

fn main() -> macdonald_cn::Result<()> {
    let solver = EigenSolver::new();
    let (n, k) = (2, 1);
    for parts in [vec![1, 1], vec![2], vec![2, 1]] {
        let mu = Partition::new(parts)?;
        let p = solver.solve_p(&mu, n, k)?;
        println!("P_{:?} (n = {n}, k = {k}):", mu.parts());
        for (nu, c) in expand_in_monomials(&p)?.iter().rev() {
            println!("  m_{:?}: {c}", nu.parts());
        }
        let c = VFrac::from(eigenvalue_c(&mu, n, k)?);
        assert_eq!(apply_e_rational(&p, k)?, p.scale(&c));
    }
    println!("every E P = c P check passed");
    Ok(())
}

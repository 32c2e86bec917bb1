//! The change-of-variable relation between the integral and its x -> q x
//! shift, plus a circle that misses the poles, where it must fail.

use macdonald_cn::contour::{verify_shift_identity, PhiSpec, MIN_NODES};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> macdonald_cn::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let spec = PhiSpec::sample(3, 2, 2, 0.35, &mut rng)?;
    let good = verify_shift_identity(&spec, None, MIN_NODES)?;
    println!(
        "enclosing circle: lhs {:.12} rhs {:.12} pass {}",
        good.lhs, good.rhs, good.pass
    );
    let bad = verify_shift_identity(&spec, Some(0.9 * spec.min_pole_modulus()), MIN_NODES)?;
    println!(
        "inner circle:     lhs {:.3e} rhs {:.3e} pass {}",
        bad.lhs, bad.rhs, bad.pass
    );
    Ok(())
}

//! Runs every identity check, including the restricted-root variant of the
//! C_n group sum, which only holds in one variable.

use macdonald_cn::identities::{run, CheckConfig, Identity};

fn main() -> macdonald_cn::Result<()> {
    let cfg = CheckConfig {
        n: 2,
        k: 2,
        trials: 100,
        seed: 11,
        exact: true,
        lambda_max: 6,
    };
    for id in Identity::DEFAULT_SET
        .into_iter()
        .chain([Identity::PoincareCPartial])
    {
        let r = run(id, &cfg)?;
        println!(
            "{:<22} max diff {:.2e} exact {:<12} {}",
            r.identity,
            r.max_abs_diff,
            format!("{:?}", r.exact),
            if r.pass { "ok" } else { "FAIL" }
        );
    }
    Ok(())
}

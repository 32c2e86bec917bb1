//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::time::Instant;

use macdonald_cn::contour::{
    contour_integral, normalization_value, relative_diff, verify_shift_identity, PhiSpec, MIN_NODES,
};
use macdonald_cn::identities::{self, qbinomial_check, CheckConfig, Identity};
use macdonald_cn::onerow::{one_row_polynomial, residue_total};
use macdonald_cn::operator::{apply_e, apply_e_rational, expand_in_monomials, solve_p};
use macdonald_cn::qfield::{eigenvalue_c, VFrac, VPoly};
use macdonald_cn::weyl::{dominance_leq, orbit_monomial, partitions_bounded, Partition};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn eigen_relation() -> Outcome {
    let mut cases = 0;
    for lambda in 0..=4 {
        for n in 1..=3 {
            for k in 1..=2 {
                let p = one_row_polynomial(lambda, n, k).map_err(|e| e.to_string())?;
                let c = eigenvalue_c(&Partition::row(lambda), n, k).map_err(|e| e.to_string())?;
                let lhs = apply_e_rational(&p, k).map_err(|e| e.to_string())?;
                check(lhs == p.scale(&VFrac::from(c)), || {
                    format!("E P != c P at lambda={lambda} n={n} k={k}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases exact"))
}

fn oracle_agreement() -> Outcome {
    let mut cases = 0;
    for lambda in 0..=4 {
        for n in 1..=2 {
            for k in 1..=2 {
                let a = one_row_polynomial(lambda, n, k).map_err(|e| e.to_string())?;
                let b = solve_p(&Partition::row(lambda), n, k).map_err(|e| e.to_string())?;
                check(a == b, || {
                    format!("closed form and eigen-solve differ at lambda={lambda} n={n} k={k}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases exact"))
}

fn specs(count: u64) -> Vec<PhiSpec> {
    (0..count)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            PhiSpec::sample(2, 2, 2, 0.3, &mut rng).unwrap()
        })
        .collect()
}

fn normalization_numerics() -> Outcome {
    let want = normalization_value(2, 2, 0.3).map_err(|e| e.to_string())?;
    let p = one_row_polynomial(2, 2, 2).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for spec in specs(10) {
        let integral = contour_integral(&spec, None, MIN_NODES)
            .map_err(|e| e.to_string())?
            .value;
        let ratio = integral / p.eval_numeric(0.3, spec.y()).map_err(|e| e.to_string())?;
        worst = worst.max(relative_diff(ratio, want));
    }
    check(worst < 1e-8, || format!("max relative error {worst:e}"))?;
    Ok(format!("10 seeds, max relative error {worst:.2e}"))
}

fn residue_closed_forms() -> Outcome {
    let mut worst = 0.0f64;
    for spec in specs(10) {
        let integral = contour_integral(&spec, None, MIN_NODES)
            .map_err(|e| e.to_string())?
            .value;
        let residues = residue_total(2, 2, 0.3, spec.y()).map_err(|e| e.to_string())?;
        worst = worst.max(relative_diff(integral, residues));
    }
    check(worst < 1e-8, || format!("max relative error {worst:e}"))?;
    Ok(format!("10 seeds, max relative error {worst:.2e}"))
}

fn rational_identities() -> Outcome {
    let ids = [
        Identity::SignSum,
        Identity::SignSumX,
        Identity::SignSumXLimit,
        Identity::SignSumXResidue,
        Identity::PoincareC,
        Identity::PoincareA,
    ];
    let mut worst: Vec<(Identity, f64)> = ids.iter().map(|&i| (i, 0.0)).collect();
    for n in 1..=3 {
        for k in 1..=3 {
            for (id, w) in worst.iter_mut() {
                let cfg = CheckConfig {
                    n,
                    k,
                    trials: 100,
                    seed: 1000 + 10 * n as u64 + k as u64,
                    exact: false,
                    lambda_max: 0,
                };
                let r = identities::run(*id, &cfg).map_err(|e| e.to_string())?;
                check(r.pass, || {
                    format!(
                        "{} failed at n={n} k={k}: {:e}, witness {}",
                        r.identity,
                        r.max_abs_diff,
                        serde_json::to_string(&r.witness).unwrap()
                    )
                })?;
                *w = w.max(r.max_abs_diff);
            }
        }
    }
    let summary: Vec<String> = worst
        .iter()
        .map(|(id, w)| format!("{}={w:.1e}", id.name()))
        .collect();
    Ok(summary.join(" "))
}

fn qbinomial() -> Outcome {
    for k in 1..=3 {
        let r = qbinomial_check(k, 6).map_err(|e| e.to_string())?;
        check(r.pass, || format!("mismatch at k={k}"))?;
    }
    Ok("k <= 3, degrees <= 6 exact".into())
}

fn triangularity() -> Outcome {
    let mut cases = 0;
    for n in 1..=3 {
        for mu in partitions_bounded(n, 4, 4) {
            let m = orbit_monomial(&mu, n).map_err(|e| e.to_string())?;
            for k in 1..=2 {
                let image = apply_e(&m, k).map_err(|e| e.to_string())?;
                let exp = expand_in_monomials(&image).map_err(|e| e.to_string())?;
                for nu in exp.keys() {
                    check(
                        dominance_leq(nu, &mu, n).map_err(|e| e.to_string())?,
                        || format!("E m_{mu:?} has m_{nu:?} (n={n} k={k})"),
                    )?;
                }
                let c = eigenvalue_c(&mu, n, k).map_err(|e| e.to_string())?;
                check(exp.get(&mu) == Some(&c), || {
                    format!("wrong leading coefficient for {mu:?} n={n} k={k}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases"))
}

fn shift_identity() -> Outcome {
    let params = [
        (0, 1, 1, 0.3),
        (2, 1, 2, 0.4),
        (2, 2, 2, 0.3),
        (3, 2, 1, 0.5),
        (1, 3, 2, 0.6),
        (4, 2, 3, 0.35),
    ];
    let mut worst = 0.0f64;
    for (seed, &(lambda, n, k, q)) in params.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
        let spec = PhiSpec::sample(lambda, n, k, q, &mut rng).map_err(|e| e.to_string())?;
        let r = verify_shift_identity(&spec, None, MIN_NODES).map_err(|e| e.to_string())?;
        check(r.pass, || {
            format!(
                "failed at lambda={lambda} n={n} k={k}: {:e}",
                r.relative_difference
            )
        })?;
        worst = worst.max(r.relative_difference);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let spec = PhiSpec::sample(2, 2, 2, 0.3, &mut rng).map_err(|e| e.to_string())?;
    let control = verify_shift_identity(&spec, Some(0.9 * spec.min_pole_modulus()), MIN_NODES)
        .map_err(|e| e.to_string())?;
    check(!control.pass, || "negative control passed".into())?;
    Ok(format!(
        "{} specs, max relative difference {worst:.2e}; control off by {:.2e}",
        params.len(),
        control.relative_difference
    ))
}

fn monic() -> Outcome {
    for lambda in 0..=6 {
        for n in 1..=3 {
            for k in 1..=3 {
                let p = one_row_polynomial(lambda, n, k).map_err(|e| e.to_string())?;
                let mut e = vec![0i64; n];
                e[0] = lambda as i64;
                check(p.coeff(&e) == VFrac::from(VPoly::one()), || {
                    format!(
                        "leading coefficient {} at lambda={lambda} n={n} k={k}",
                        p.coeff(&e)
                    )
                })?;
            }
        }
    }
    Ok("lambda <= 6, n <= 3, k <= 3".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 exact eigen-relation", eigen_relation),
        ("2 closed form vs eigen-solve", oracle_agreement),
        ("3 integral normalization", normalization_numerics),
        ("4 residue closed forms", residue_closed_forms),
        ("5 rational identities", rational_identities),
        ("6 q-binomial", qbinomial),
        ("7 triangularity", triangularity),
        ("8 change of variable", shift_identity),
        ("9 monic leading term", monic),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} ({secs:.1}s)"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} ({secs:.1}s)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

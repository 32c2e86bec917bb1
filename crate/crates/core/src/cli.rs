//! Command-line front end. Every command returns an [`Outcome`] instead of
//! printing, so the binary stays a thin wrapper and tests can call it
//! in-process.
//!
//! Exit codes: 0 success, 2 bad arguments, 3 mathematical mismatch,
//! 4 quadrature did not converge.

use std::ffi::OsString;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::contour::{
    compare_with_closed_forms, normalization_value, relative_diff, PhiSpec, MIN_NODES,
};
use crate::error::Error;
use crate::identities::{self, CheckConfig, Identity};
use crate::laurent::LaurentPoly;
use crate::onerow::one_row_polynomial;
use crate::operator::{apply_e_rational, solve_p};
use crate::qfield::{eigenvalue_c, VFrac};
use crate::weyl::{orbit_monomial, Partition};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_NO_CONVERGENCE: i32 = 4;

/// Relative tolerance of the `contour` command's comparisons.
pub const CONTOUR_TOL: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(
    name = "macdonald-cn",
    version,
    about = "One-row Macdonald polynomials of type C_n"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the one-row polynomial P_(lambda) in n variables.
    Poly(PolyArgs),
    /// Check E P = c P exactly.
    Eigencheck(EigencheckArgs),
    /// Integrate the one-row integrand numerically and compare with the closed forms.
    Contour(ContourArgs),
    /// Check the rational-function identities at random points.
    VerifyIdentities(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Corollary,
    Eigensolve,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Pretty,
}

#[derive(clap::Args, Debug)]
pub struct PolyArgs {
    #[arg(long)]
    pub lambda: usize,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
    pub n: u64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: u32,
    #[arg(long, value_enum, default_value = "corollary")]
    pub method: Method,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(clap::Args, Debug)]
pub struct EigencheckArgs {
    #[arg(long)]
    pub lambda: usize,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
    pub n: u64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: u32,
    /// Add m_(lambda+1) to the polynomial first; the check must then fail.
    #[arg(long)]
    pub perturb: bool,
}

#[derive(clap::Args, Debug)]
pub struct ContourArgs {
    #[arg(long)]
    pub lambda: usize,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
    pub n: u64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: u32,
    #[arg(long, default_value_t = 0.3)]
    pub q: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Circle radius; defaults to one enclosing every pole.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Initial node count, doubled until convergence.
    #[arg(long, default_value_t = MIN_NODES)]
    pub nodes: usize,
}

#[derive(clap::Args, Debug)]
pub struct VerifyArgs {
    /// Identity name, or `all` for the standard set.
    #[arg(long, default_value = "all")]
    pub identity: String,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=6))]
    pub n: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: u32,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also run the exact common-denominator check where available.
    #[arg(long)]
    pub exact: bool,
    /// Degree bound for the q-binomial check.
    #[arg(long, default_value_t = 6)]
    pub lambda_max: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self::with_code(EXIT_OK, stdout)
    }

    fn with_code(code: i32, stdout: String) -> Self {
        Self {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(err: &Error) -> Self {
        Self {
            code: exit_code(err),
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_)
        | Error::BadIndex { .. }
        | Error::DimensionMismatch(..)
        | Error::ZeroVariable(_)
        | Error::PoleProximity { .. } => EXIT_USAGE,
        Error::NoConvergence { .. } => EXIT_NO_CONVERGENCE,
        _ => EXIT_MISMATCH,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

pub fn run(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::Poly(a) => cmd_poly(&a),
        Command::Eigencheck(a) => cmd_eigencheck(&a),
        Command::Contour(a) => cmd_contour(&a),
        Command::VerifyIdentities(a) => cmd_verify_identities(&a),
    };
    result.unwrap_or_else(|e| Outcome::error(&e))
}

fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn poly_json(lambda: usize, n: usize, k: u32, method: &str, p: &LaurentPoly<VFrac>) -> Value {
    let (numer, denom) = p.clear_denominators();
    json!({
        "lambda": lambda,
        "n": n,
        "k": k,
        "method": method,
        "denominator": denom,
        "terms": numer.to_json(),
    })
}

pub fn cmd_poly(a: &PolyArgs) -> crate::Result<Outcome> {
    let n = a.n as usize;
    let build = |m: Method| match m {
        Method::Eigensolve => solve_p(&Partition::row(a.lambda), n, a.k),
        _ => one_row_polynomial(a.lambda, n, a.k),
    };
    let (p, agree) = match a.method {
        Method::Both => {
            let p = build(Method::Corollary)?;
            let other = build(Method::Eigensolve)?;
            let agree = p == other;
            (p, Some(agree))
        }
        m => (build(m)?, None),
    };
    let method = match a.method {
        Method::Corollary => "corollary",
        Method::Eigensolve => "eigensolve",
        Method::Both => "both",
    };
    let stdout = match a.format {
        Format::Json => {
            let mut v = poly_json(a.lambda, n, a.k, method, &p);
            if let Some(agree) = agree {
                v["agree"] = json!(agree);
            }
            to_json_line(&v)
        }
        Format::Pretty => {
            let mut s = p.pretty();
            s.push('\n');
            if agree == Some(false) {
                s.push_str("# corollary and eigensolve disagree\n");
            }
            s
        }
    };
    let code = if agree == Some(false) {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    };
    Ok(Outcome::with_code(code, stdout))
}

#[derive(Serialize)]
struct Difference {
    y_exp: Vec<i64>,
    lhs: String,
    rhs: String,
}

pub fn cmd_eigencheck(a: &EigencheckArgs) -> crate::Result<Outcome> {
    let n = a.n as usize;
    let mut p = one_row_polynomial(a.lambda, n, a.k)?;
    if a.perturb {
        p = &p + &orbit_monomial(&Partition::row(a.lambda + 1), n)?.to_fractions();
    }
    let c = eigenvalue_c(&Partition::row(a.lambda), n, a.k)?;
    let lhs = apply_e_rational(&p, a.k)?;
    let rhs = p.scale(&VFrac::from(c.clone()));
    let diff = &lhs - &rhs;
    let first = diff.terms_desc().next().map(|(e, _)| Difference {
        y_exp: e.clone(),
        lhs: lhs.coeff(e).to_string(),
        rhs: rhs.coeff(e).to_string(),
    });
    let pass = first.is_none();
    let report = json!({
        "lambda": a.lambda,
        "n": n,
        "k": a.k,
        "perturb": a.perturb,
        "eigenvalue": c,
        "terms_checked": lhs.len().max(rhs.len()),
        "pass": pass,
        "first_difference": first,
    });
    Ok(Outcome::with_code(
        if pass { EXIT_OK } else { EXIT_MISMATCH },
        to_json_line(&report),
    ))
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn cmd_contour(a: &ContourArgs) -> crate::Result<Outcome> {
    let n = a.n as usize;
    if !(a.q > 0.0 && a.q < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "q = {} outside (0, 1)",
            a.q
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let spec = PhiSpec::sample(a.lambda, n, a.k, a.q, &mut rng)?;
    let cmp = compare_with_closed_forms(&spec, a.radius, a.nodes)?;
    let p_value = one_row_polynomial(a.lambda, n, a.k)?.eval_numeric(a.q, spec.y())?;
    let normalization = normalization_value(a.lambda, a.k, a.q)?;
    let normalization_residual = relative_diff(cmp.integral.value / p_value, normalization);
    let pass = cmp.residual_vs_polynomial < CONTOUR_TOL
        && cmp.residual_vs_residues < CONTOUR_TOL
        && normalization_residual < CONTOUR_TOL;
    let report = json!({
        "lambda": a.lambda,
        "n": n,
        "k": a.k,
        "q": a.q,
        "seed": a.seed,
        "y": spec.y().iter().copied().map(pair).collect::<Vec<_>>(),
        "value_re": cmp.integral.value.re,
        "value_im": cmp.integral.value.im,
        "nodes_used": cmp.integral.nodes_used,
        "radius": cmp.integral.radius,
        "polynomial_value": pair(cmp.polynomial_value),
        "residue_sum": pair(cmp.residue_sum),
        "residual_vs_polynomial": cmp.residual_vs_polynomial,
        "residual_vs_residues": cmp.residual_vs_residues,
        "normalization": pair(normalization),
        "residual_vs_normalization": normalization_residual,
        "pass": pass,
    });
    Ok(Outcome::with_code(
        if pass { EXIT_OK } else { EXIT_MISMATCH },
        to_json_line(&report),
    ))
}

pub fn cmd_verify_identities(a: &VerifyArgs) -> crate::Result<Outcome> {
    let selected: Vec<Identity> = if a.identity == "all" {
        Identity::DEFAULT_SET.to_vec()
    } else {
        let id = Identity::from_name(&a.identity)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown identity {:?}", a.identity)))?;
        vec![id]
    };
    let cfg = CheckConfig {
        n: a.n as usize,
        k: a.k,
        trials: a.trials as usize,
        seed: a.seed,
        exact: a.exact,
        lambda_max: a.lambda_max,
    };
    let reports = selected
        .into_iter()
        .map(|id| identities::run(id, &cfg))
        .collect::<crate::Result<Vec<_>>>()?;
    let pass = reports.iter().all(|r| r.pass);
    Ok(Outcome::with_code(
        if pass { EXIT_OK } else { EXIT_MISMATCH },
        to_json_line(&reports),
    ))
}

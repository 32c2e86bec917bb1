//! Checks of the rational-function identities behind the eigenfunction
//! property, usable as test oracles and from the command line.
//!
//! Numeric mode evaluates both sides at seeded random points (a nonzero
//! rational function cannot vanish on a random sample). Exact mode puts all
//! terms over a common denominator and requires the numerator to vanish.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::contour::sample_y;
use crate::error::{Error, Result};
use crate::laurent::{
    sum_over_common_denominator, Binomial, FactoredDenominator, LaurentPoly, RationalTerm,
};
use crate::operator::{coefficient_exponents, sign_vectors};
use crate::qfield::{gauss_coeff, VPoly};
use crate::weyl::{symmetric_group, weyl_group_c, SignedPermutation};

pub const IDENTITY_TOL: f64 = 1e-10;
pub const LIMIT_TOL: f64 = 1e-4;
pub const LIMIT_X: f64 = 1e6;
pub const RESIDUE_TOL: f64 = 1e-5;
pub const RESIDUE_STEP: f64 = 1e-6;
/// Sample points closer than this to a denominator zero are redrawn.
const SAMPLE_GUARD: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `sum_a prod (1 - t y^{a.}) / (1 - y^{a.}) = prod_i (1 + t^i)`.
    SignSum,
    /// The sign sum with the extra `x`-dependent factors, against its
    /// two-term closed form.
    SignSumX,
    /// The `x -> infinity` limit of both sides of [`Identity::SignSumX`].
    SignSumXLimit,
    /// Residue of [`Identity::SignSumX`] at `x = t y_1` against its closed
    /// form.
    SignSumXResidue,
    /// Weyl group sum over `W(C_n)` with every positive root
    /// `e_i + e_j, e_i - e_j, e_i`.
    PoincareC,
    /// The same sum with only the roots `e_i + e_j` and `e_i`.
    PoincareCPartial,
    /// Symmetric group sum over the roots `e_i - e_j`.
    PoincareA,
    /// Gaussian coefficients against the expansion of `1 / (z; q)_k`.
    QBinomial,
}

impl Identity {
    pub const DEFAULT_SET: [Identity; 7] = [
        Identity::SignSum,
        Identity::SignSumX,
        Identity::SignSumXLimit,
        Identity::SignSumXResidue,
        Identity::PoincareC,
        Identity::PoincareA,
        Identity::QBinomial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::SignSum => "sign-sum",
            Identity::SignSumX => "sign-sum-x",
            Identity::SignSumXLimit => "sign-sum-x-limit",
            Identity::SignSumXResidue => "sign-sum-x-residue",
            Identity::PoincareC => "poincare-c",
            Identity::PoincareCPartial => "poincare-c-partial",
            Identity::PoincareA => "poincare-a",
            Identity::QBinomial => "q-binomial",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [
            Identity::SignSum,
            Identity::SignSumX,
            Identity::SignSumXLimit,
            Identity::SignSumXResidue,
            Identity::PoincareC,
            Identity::PoincareCPartial,
            Identity::PoincareA,
            Identity::QBinomial,
        ]
        .into_iter()
        .find(|i| i.name() == s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub q: f64,
    pub y: Vec<[f64; 2]>,
    pub x: Option<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub n: usize,
    pub k: u32,
    pub trials: usize,
    pub seed: u64,
    pub max_abs_diff: f64,
    pub pass: bool,
    /// Outcome of the exact check, when it was run.
    pub exact: Option<bool>,
    /// Sample point with the largest discrepancy.
    pub witness: Option<Witness>,
}

#[derive(Clone, Copy, Debug)]
pub struct CheckConfig {
    pub n: usize,
    pub k: u32,
    pub trials: usize,
    pub seed: u64,
    pub exact: bool,
    /// Largest degree compared by the q-binomial check.
    pub lambda_max: usize,
}

pub fn run(identity: Identity, cfg: &CheckConfig) -> Result<IdentityReport> {
    if cfg.n == 0 || cfg.k == 0 || cfg.trials == 0 {
        return Err(Error::InvalidArgument(
            "need n, k and trials all at least 1".into(),
        ));
    }
    match identity {
        Identity::SignSum => sign_sum_check(cfg),
        Identity::SignSumX => sign_sum_x_check(cfg),
        Identity::SignSumXLimit => sign_sum_x_limit_check(cfg),
        Identity::SignSumXResidue => sign_sum_x_residue_check(cfg),
        Identity::PoincareC | Identity::PoincareCPartial | Identity::PoincareA => {
            poincare_check(identity, cfg)
        }
        Identity::QBinomial => qbinomial_check(cfg.k, cfg.lambda_max),
    }
}

fn to_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn witness(q: f64, y: &[Complex64], x: Option<Complex64>) -> Witness {
    Witness {
        q,
        y: y.iter().copied().map(to_pair).collect(),
        x: x.map(to_pair),
    }
}

/// Runs `trials` evaluations of `diff` at random `(q, y, x)`, skipping draws
/// the closure rejects (returns `None`).
fn sample_max<F>(cfg: &CheckConfig, with_x: bool, mut diff: F) -> (f64, Option<Witness>)
where
    F: FnMut(f64, &[Complex64], Complex64) -> Option<f64>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0.0f64;
    let mut worst_at = None;
    let mut done = 0;
    let mut draws = 0;
    while done < cfg.trials {
        draws += 1;
        assert!(
            draws <= 1000 * cfg.trials,
            "sample guard rejected every draw"
        );
        let q = rng.gen_range(0.2..0.8);
        let y = sample_y(&mut rng, cfg.n);
        let x = Complex64::from_polar(
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let Some(d) = diff(q, &y, x) else {
            continue;
        };
        done += 1;
        if d >= worst || worst_at.is_none() {
            worst = d;
            worst_at = Some(witness(q, &y, with_x.then_some(x)));
        }
    }
    (worst, worst_at)
}

fn guarded_ratio(num: Complex64, den: Complex64) -> Option<Complex64> {
    ratio_with_guard(num, den, SAMPLE_GUARD)
}

fn ratio_with_guard(num: Complex64, den: Complex64, guard: f64) -> Option<Complex64> {
    (den.norm() >= guard && den.norm() > 0.0).then(|| num / den)
}

fn powers(y: &[Complex64], signs: &[i8]) -> Vec<Complex64> {
    y.iter()
        .zip(signs)
        .map(|(z, &s)| z.powi(s as i32))
        .collect()
}

/// `sum_a prod_{i<j} (1 - t y_i^{a_i} y_j^{a_j})/(1 - y_i^{a_i} y_j^{a_j}) prod_i (1 - t y_i^{2a_i})/(1 - y_i^{2a_i})`,
/// `None` near a pole.
pub fn sign_sum_lhs(t: f64, y: &[Complex64]) -> Option<Complex64> {
    sign_sum_x_lhs_inner(t, y, None, SAMPLE_GUARD)
}

fn sign_sum_x_lhs_inner(
    t: f64,
    y: &[Complex64],
    x: Option<Complex64>,
    guard: f64,
) -> Option<Complex64> {
    let n = y.len();
    let mut total = Complex64::new(0.0, 0.0);
    for signs in sign_vectors(n) {
        let p = powers(y, &signs);
        let mut term = Complex64::new(1.0, 0.0);
        for i in 0..n {
            for j in i + 1..n {
                let m = p[i] * p[j];
                term *= guarded_ratio(1.0 - t * m, 1.0 - m)?;
            }
            let sq = p[i] * p[i];
            term *= guarded_ratio(1.0 - t * sq, 1.0 - sq)?;
            if let Some(x) = x {
                term *= ratio_with_guard(1.0 - p[i] / x, 1.0 - t * p[i] / x, guard)?;
            }
        }
        total += term;
    }
    Some(total)
}

pub fn sign_sum_x_lhs(t: f64, y: &[Complex64], x: Complex64) -> Option<Complex64> {
    sign_sum_x_lhs_inner(t, y, Some(x), SAMPLE_GUARD)
}

fn sign_sum_x_lhs_near_pole(t: f64, y: &[Complex64], x: Complex64) -> Option<Complex64> {
    sign_sum_x_lhs_inner(t, y, Some(x), 0.0)
}

fn prod_one_plus_t(t: f64, upto: usize) -> f64 {
    (1..=upto).map(|i| 1.0 + t.powi(i as i32)).product()
}

/// `prod_{i<n} (1 + t^i) {1 + t^n prod_i (1 - y_i/x)(1 - y_i^{-1}/x) / ((1 - t y_i/x)(1 - t y_i^{-1}/x))}`.
pub fn sign_sum_x_rhs(t: f64, y: &[Complex64], x: Complex64) -> Option<Complex64> {
    sign_sum_x_rhs_inner(t, y, x, SAMPLE_GUARD)
}

fn sign_sum_x_rhs_near_pole(t: f64, y: &[Complex64], x: Complex64) -> Option<Complex64> {
    sign_sum_x_rhs_inner(t, y, x, 0.0)
}

fn sign_sum_x_rhs_inner(t: f64, y: &[Complex64], x: Complex64, guard: f64) -> Option<Complex64> {
    let n = y.len();
    let mut prod = Complex64::new(1.0, 0.0);
    for z in y {
        let (a, b) = (z / x, 1.0 / (z * x));
        prod *= ratio_with_guard((1.0 - a) * (1.0 - b), (1.0 - t * a) * (1.0 - t * b), guard)?;
    }
    Some(prod_one_plus_t(t, n - 1) * (1.0 + t.powi(n as i32) * prod))
}

/// Closed form of the residue of `sign_sum_x_lhs(x) dx/x` at `x = t y_1`.
pub fn sign_sum_x_residue_closed_form(t: f64, y: &[Complex64]) -> Option<Complex64> {
    let n = y.len();
    let y1 = y[0];
    let mut v =
        t.powi(1 - n as i32) * (1.0 - 1.0 / t) * guarded_ratio(1.0 - t * y1 * y1, 1.0 - y1 * y1)?;
    v *= prod_one_plus_t(t, n - 1);
    for z in &y[1..] {
        v *= guarded_ratio(
            (1.0 - t * y1 * z) * (1.0 - t * y1 / z),
            (1.0 - y1 * z) * (1.0 - y1 / z),
        )?;
    }
    Some(v)
}

fn sign_sum_check(cfg: &CheckConfig) -> Result<IdentityReport> {
    let (max, w) = sample_max(cfg, false, |q, y, _| {
        let t = q.powi(cfg.k as i32);
        Some((sign_sum_lhs(t, y)? - prod_one_plus_t(t, cfg.n)).norm())
    });
    let exact = cfg
        .exact
        .then(|| exact_sign_sum(cfg.n, cfg.k))
        .transpose()?;
    Ok(report(Identity::SignSum, cfg, max, IDENTITY_TOL, exact, w))
}

fn sign_sum_x_check(cfg: &CheckConfig) -> Result<IdentityReport> {
    let (max, w) = sample_max(cfg, true, |q, y, x| {
        let t = q.powi(cfg.k as i32);
        Some((sign_sum_x_lhs(t, y, x)? - sign_sum_x_rhs(t, y, x)?).norm())
    });
    let exact = cfg
        .exact
        .then(|| exact_sign_sum_x(cfg.n, cfg.k))
        .transpose()?;
    Ok(report(Identity::SignSumX, cfg, max, IDENTITY_TOL, exact, w))
}

fn sign_sum_x_limit_check(cfg: &CheckConfig) -> Result<IdentityReport> {
    let (max, w) = sample_max(cfg, true, |q, y, x| {
        let t = q.powi(cfg.k as i32);
        let far = x / x.norm() * LIMIT_X;
        let limit = prod_one_plus_t(t, cfg.n);
        let l = (sign_sum_x_lhs(t, y, far)? - limit).norm();
        let r = (sign_sum_x_rhs(t, y, far)? - limit).norm();
        Some(l.max(r))
    });
    Ok(report(
        Identity::SignSumXLimit,
        cfg,
        max,
        LIMIT_TOL,
        None,
        w,
    ))
}

/// The residue at `x0 = t y_1` is estimated as `(x - x0) f(x) / x` averaged
/// over `x = x0 (1 ± RESIDUE_STEP)`; the reported difference is relative to
/// the closed form.
fn sign_sum_x_residue_check(cfg: &CheckConfig) -> Result<IdentityReport> {
    let (max, w) = sample_max(cfg, false, |q, y, _| {
        let t = q.powi(cfg.k as i32);
        let x0 = t * y[0];
        // the other poles of the x-dependent factors must stay away from x0
        for (i, z) in y.iter().enumerate() {
            for p in [t * z, t / z] {
                if (i != 0 || (p - x0).norm() > 1e-12) && (p - x0).norm() < SAMPLE_GUARD {
                    return None;
                }
            }
        }
        sign_sum_lhs(t, y)?;
        let closed = sign_sum_x_residue_closed_form(t, y)?;
        let mut worst = 0.0f64;
        for f in [
            sign_sum_x_lhs_near_pole as fn(f64, &[Complex64], Complex64) -> Option<Complex64>,
            sign_sum_x_rhs_near_pole,
        ] {
            let mut est = Complex64::new(0.0, 0.0);
            for h in [RESIDUE_STEP, -RESIDUE_STEP] {
                let x = x0 * (1.0 + h);
                est += (x - x0) * f(t, y, x)? / x * 0.5;
            }
            worst = worst.max((est - closed).norm() / closed.norm().max(1e-300));
        }
        Some(worst)
    });
    Ok(report(
        Identity::SignSumXResidue,
        cfg,
        max,
        RESIDUE_TOL,
        None,
        w,
    ))
}

fn report(
    identity: Identity,
    cfg: &CheckConfig,
    max: f64,
    tol: f64,
    exact: Option<bool>,
    witness: Option<Witness>,
) -> IdentityReport {
    IdentityReport {
        identity: identity.name().to_string(),
        n: cfg.n,
        k: cfg.k,
        trials: cfg.trials,
        seed: cfg.seed,
        max_abs_diff: max,
        pass: max < tol && exact != Some(false),
        exact,
        witness,
    }
}

/// Positive roots used by each Weyl group sum.
fn positive_roots(identity: Identity, n: usize) -> Vec<Vec<i64>> {
    let unit = |i: usize| {
        let mut e = vec![0; n];
        e[i] = 1;
        e
    };
    let mut roots = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (unit(i), unit(j));
            if matches!(identity, Identity::PoincareC | Identity::PoincareCPartial) {
                roots.push(a.iter().zip(&b).map(|(x, y)| x + y).collect());
            }
            if matches!(identity, Identity::PoincareC | Identity::PoincareA) {
                roots.push(a.iter().zip(&b).map(|(x, y)| x - y).collect());
            }
        }
    }
    if matches!(identity, Identity::PoincareC | Identity::PoincareCPartial) {
        roots.extend((0..n).map(unit));
    }
    roots
}

fn group_for(identity: Identity, n: usize) -> Vec<SignedPermutation> {
    match identity {
        Identity::PoincareA => symmetric_group(n)
            .into_iter()
            .map(|perm| SignedPermutation {
                perm,
                signs: vec![1; n],
            })
            .collect(),
        _ => weyl_group_c(n),
    }
}

/// Right-hand side polynomial in `t`: `prod_i (1 - t^{2i})/(1 - t)` for the
/// `C_n` sums, `prod_i (1 - t^i)/(1 - t)` for `A_{n-1}`.
fn poincare_rhs(identity: Identity, n: usize, k: u32) -> VPoly {
    let step = if identity == Identity::PoincareA {
        1
    } else {
        2
    };
    let mut out = VPoly::one();
    for i in 1..=n {
        let geometric =
            (0..step * i).fold(VPoly::zero(), |acc, j| &acc + &VPoly::t(k).pow(j as u32));
        out = &out * &geometric;
    }
    out
}

fn poincare_check(identity: Identity, cfg: &CheckConfig) -> Result<IdentityReport> {
    let n = cfg.n;
    let roots = positive_roots(identity, n);
    let group = group_for(identity, n);
    let images: Vec<Vec<Vec<i64>>> = group
        .iter()
        .map(|w| roots.iter().map(|r| w.act_on_exponent(r)).collect())
        .collect();
    let rhs = poincare_rhs(identity, n, cfg.k);

    let (max, w) = sample_max(cfg, false, |q, y, _| {
        let t = q.powi(cfg.k as i32);
        let mut total = Complex64::new(0.0, 0.0);
        for image in &images {
            let mut term = Complex64::new(1.0, 0.0);
            for e in image {
                let m: Complex64 = e.iter().zip(y).map(|(&a, z)| z.powi(a as i32)).product();
                term *= guarded_ratio(1.0 - t * m, 1.0 - m)?;
            }
            total += term;
        }
        let want = rhs.eval(Complex64::new(q.sqrt(), 0.0));
        Some((total - want).norm())
    });

    let exact = if cfg.exact {
        let mut terms: Vec<RationalTerm> = images
            .iter()
            .map(|image| RationalTerm {
                numer: FactoredDenominator::new(
                    n,
                    image.iter().map(|e| t_factor(cfg.k, e.clone())).collect(),
                )
                .expect("dimension")
                .expand(),
                denom: image
                    .iter()
                    .map(|e| Binomial::plain(e.clone()).expect("root"))
                    .collect(),
            })
            .collect();
        terms.push(RationalTerm {
            numer: LaurentPoly::constant(n, -rhs),
            denom: Vec::new(),
        });
        Some(vanishes(n, &terms)?)
    } else {
        None
    };
    Ok(report(identity, cfg, max, IDENTITY_TOL, exact, w))
}

fn t_factor(k: u32, alpha: Vec<i64>) -> Binomial {
    Binomial::new(VPoly::t(k), alpha).expect("monomial")
}

/// Whether a sum of rational terms is identically zero.
fn vanishes(n: usize, terms: &[RationalTerm]) -> Result<bool> {
    match sum_over_common_denominator(n, terms) {
        Ok(p) => Ok(p.is_zero()),
        Err(Error::NotDivisible { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

fn exact_sign_sum(n: usize, k: u32) -> Result<bool> {
    let mut terms: Vec<RationalTerm> = sign_vectors(n)
        .into_iter()
        .map(|signs| {
            let exps = coefficient_exponents(&signs);
            RationalTerm {
                numer: FactoredDenominator::new(
                    n,
                    exps.iter().map(|e| t_factor(k, e.clone())).collect(),
                )
                .expect("dimension")
                .expand(),
                denom: exps
                    .into_iter()
                    .map(|e| Binomial::plain(e).expect("nonzero"))
                    .collect(),
            }
        })
        .collect();
    let rhs = (1..=n).fold(VPoly::one(), |acc, i| {
        &acc * &(&VPoly::one() + &VPoly::t(k).pow(i as u32))
    });
    terms.push(RationalTerm {
        numer: LaurentPoly::constant(n, -rhs),
        denom: Vec::new(),
    });
    vanishes(n, &terms)
}

/// Exact form of the `x`-dependent identity in `n + 1` variables, `x` last.
fn exact_sign_sum_x(n: usize, k: u32) -> Result<bool> {
    let dim = n + 1;
    let lift = |e: &[i64], xe: i64| -> Vec<i64> {
        let mut v = e.to_vec();
        v.push(xe);
        v
    };
    let mut terms = Vec::new();
    for signs in sign_vectors(n) {
        let exps = coefficient_exponents(&signs);
        let mut numer: Vec<Binomial> = exps.iter().map(|e| t_factor(k, lift(e, 0))).collect();
        let mut denom: Vec<Binomial> = exps
            .iter()
            .map(|e| Binomial::plain(lift(e, 0)).expect("nonzero"))
            .collect();
        for (i, &s) in signs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = s as i64;
            numer.push(Binomial::plain(lift(&e, -1))?);
            denom.push(t_factor(k, lift(&e, -1)));
        }
        terms.push(RationalTerm {
            numer: FactoredDenominator::new(dim, numer)?.expand(),
            denom,
        });
    }
    let head = (1..n).fold(VPoly::one(), |acc, i| {
        &acc * &(&VPoly::one() + &VPoly::t(k).pow(i as u32))
    });
    terms.push(RationalTerm {
        numer: LaurentPoly::constant(dim, -&head),
        denom: Vec::new(),
    });
    let mut numer = Vec::new();
    let mut denom = Vec::new();
    for i in 0..n {
        for s in [1i64, -1] {
            let mut e = vec![0; n];
            e[i] = s;
            numer.push(Binomial::plain(lift(&e, -1))?);
            denom.push(t_factor(k, lift(&e, -1)));
        }
    }
    let scale = -&(&head * &VPoly::t(k).pow(n as u32));
    terms.push(RationalTerm {
        numer: FactoredDenominator::new(dim, numer)?.expand().scale(&scale),
        denom,
    });
    vanishes(dim, &terms)
}

/// Compares `sum_{i <= lambda} g(i) z^i` with the truncated expansion of
/// `prod_{m < k} 1/(1 - q^m z)` for every `lambda <= lambda_max`.
pub fn qbinomial_check(k: u32, lambda_max: usize) -> Result<IdentityReport> {
    let len = lambda_max + 1;
    let mut series = vec![VPoly::zero(); len];
    series[0] = VPoly::one();
    for m in 0..k {
        // multiply by the geometric series of q^m z
        let ratio = VPoly::q_pow(m as i64);
        for i in 1..len {
            let prev = series[i - 1].clone();
            series[i] = &series[i] + &(&prev * &ratio);
        }
    }
    let mut ok = true;
    for (i, s) in series.iter().enumerate() {
        ok &= gauss_coeff(k, i)? == *s;
    }
    Ok(IdentityReport {
        identity: Identity::QBinomial.name().to_string(),
        n: 0,
        k,
        trials: len,
        seed: 0,
        max_abs_diff: if ok { 0.0 } else { 1.0 },
        pass: ok,
        exact: Some(ok),
        witness: None,
    })
}

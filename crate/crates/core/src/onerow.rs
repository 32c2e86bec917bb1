//! Closed forms for the one-row polynomials `P_(lambda,0,...,0)`.
//!
//! The integral of the 1-form around a cycle enclosing every pole equals
//!
//! ```text
//! sum_{i_1 + ... + i_{2n} = lambda}  prod_m g(i_m)  y_1^{i_1 - i_{2n}} y_2^{i_2 - i_{2n-1}} ... y_n^{i_n - i_{n+1}}
//! ```
//!
//! with `g(i) = (t;q)_i / (q;q)_i`, and `P` is that sum divided by
//! `g(lambda)`. The per-pole-cluster residues are finite sums evaluated
//! numerically.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::qfield::{gauss_coeff, poch_complex, poch_finite, VFrac, VPoly};

/// Weak compositions of `total` into `parts` parts, lexicographically
/// ascending.
#[derive(Clone, Debug)]
pub struct Compositions {
    current: Option<Vec<usize>>,
}

pub fn composition_enumerate(total: usize, parts: usize) -> Compositions {
    let current = match parts {
        0 if total == 0 => Some(Vec::new()),
        0 => None,
        _ => {
            let mut v = vec![0; parts];
            v[parts - 1] = total;
            Some(v)
        }
    };
    Compositions { current }
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let last = out.len().saturating_sub(1);
        let mut tail = out.get(last).copied().unwrap_or(0);
        // rightmost position that can take one unit from the tail
        let mut next = out.clone();
        for i in (0..last).rev() {
            if tail > 0 {
                next[i] += 1;
                for x in next.iter_mut().take(last).skip(i + 1) {
                    *x = 0;
                }
                next[last] = tail - 1;
                self.current = Some(next);
                break;
            }
            tail += out[i];
        }
        Some(out)
    }
}

/// Exponent of `y` contributed by a composition: `y_j` gets
/// `i_j - i_{2n+1-j}`.
fn composition_exponent(c: &[usize], n: usize) -> Vec<i64> {
    (0..n)
        .map(|j| c[j] as i64 - c[2 * n - 1 - j] as i64)
        .collect()
}

/// The polynomial value of the contour integral around every pole:
/// `g(lambda) * P_(lambda)`, with all coefficients in the ring.
pub fn cycle_integral_polynomial(lambda: usize, n: usize, k: u32) -> Result<LaurentPoly<VPoly>> {
    check_shape(n, k)?;
    let table: Vec<VPoly> = (0..=lambda)
        .map(|i| gauss_coeff(k, i))
        .collect::<Result<_>>()?;

    // depth-first over the 2n slots with running products, so each
    // Gaussian product is built once per prefix
    fn walk(
        slot: usize,
        remaining: usize,
        parts: &mut Vec<usize>,
        prefix: &VPoly,
        table: &[VPoly],
        n: usize,
        out: &mut LaurentPoly<VPoly>,
    ) {
        if slot + 1 == 2 * n {
            parts.push(remaining);
            let coeff = prefix * &table[remaining];
            out.add_term(composition_exponent(parts, n), coeff);
            parts.pop();
            return;
        }
        for i in 0..=remaining {
            parts.push(i);
            let next = prefix * &table[i];
            walk(slot + 1, remaining - i, parts, &next, table, n, out);
            parts.pop();
        }
    }

    let mut out = LaurentPoly::zero(n);
    walk(
        0,
        lambda,
        &mut Vec::with_capacity(2 * n),
        &VPoly::one(),
        &table,
        n,
        &mut out,
    );
    Ok(out)
}

/// `P_(lambda,0,...,0)` in closed form.
pub fn one_row_polynomial(lambda: usize, n: usize, k: u32) -> Result<LaurentPoly<VFrac>> {
    let sum = cycle_integral_polynomial(lambda, n, k)?;
    let norm = gauss_coeff(k, lambda)?;
    Ok(sum.map_coeffs(|c| {
        VFrac::new(c.clone(), norm.clone()).expect("Gaussian coefficient is nonzero")
    }))
}

/// `(t;q)_lambda / (q;q)_lambda`: the cycle integral divided by `P`.
pub fn integral_normalization(lambda: usize, k: u32) -> Result<VFrac> {
    check_shape(1, k)?;
    VFrac::new(
        poch_finite(&VPoly::t(k), lambda),
        poch_finite(&VPoly::q_pow(1), lambda),
    )
}

fn check_shape(n: usize, k: u32) -> Result<()> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument(format!(
            "need n >= 1 and k >= 1, got n={n} k={k}"
        )));
    }
    Ok(())
}

/// Which cluster of poles a residue cycle encloses: `y_i q^m` (`Plus`) or
/// `y_i^{-1} q^m` (`Minus`), `0 <= m < k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

/// Smallest modulus a denominator factor may have.
pub const POLE_GUARD: f64 = 1e-9;

struct Guarded(Complex64);

impl Guarded {
    fn factor(&mut self, z: Complex64, what: &str) -> Result<()> {
        if z.norm() <= POLE_GUARD {
            return Err(Error::PoleProximity {
                what: what.to_string(),
                guard: POLE_GUARD,
            });
        }
        self.0 *= z;
        Ok(())
    }
}

/// The integral over the small cycle around one pole cluster, from its
/// closed form (a finite sum over `l < k`).
pub fn residue_solution(
    i: usize,
    branch: Branch,
    lambda: usize,
    k: u32,
    q: f64,
    y: &[Complex64],
) -> Result<Complex64> {
    let n = y.len();
    check_shape(n, k)?;
    if i >= n {
        return Err(Error::BadIndex { index: i, n });
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidArgument(format!("q = {q} outside (0, 1)")));
    }
    if let Some(j) = y.iter().position(|z| z.norm() == 0.0) {
        return Err(Error::ZeroVariable(j + 1));
    }
    let k = k as usize;
    let t = q.powi(k as i32);
    let yi = y[i];
    let one = Complex64::new(1.0, 0.0);

    // `pair(j)` gives the two Pochhammer arguments of the prefactor and the
    // two (numerator, denominator) base ratios of the l-sum for index j.
    let (lead, ratio_args): (Complex64, Vec<(Complex64, Complex64)>) = match branch {
        Branch::Plus => (
            yi.powi(lambda as i32),
            (0..n).map(|j| (yi / y[j], yi * y[j])).collect(),
        ),
        Branch::Minus => (
            yi.powi(-(lambda as i32)),
            (0..n).map(|j| (y[j] / yi, one / (yi * y[j]))).collect(),
        ),
    };

    let mut den = Guarded(poch_complex(Complex64::new(q, 0.0), q, k - 1));
    for (j, &yj) in y.iter().enumerate() {
        let (first, second) = match branch {
            Branch::Plus => (yj / yi, one / (yj * yi)),
            Branch::Minus => (yi / yj, yj * yi),
        };
        if j != i {
            den.factor(poch_complex(first, q, k), "prefactor")?;
        }
        den.factor(poch_complex(second, q, k), "prefactor")?;
    }

    let base = t.powi(2 * n as i32) * q.powi(lambda as i32);
    let mut sum = Complex64::new(0.0, 0.0);
    for l in 0..k {
        let mut term = Complex64::new(base.powi(l as i32), 0.0);
        for &(a, b) in &ratio_args {
            let mut d = Guarded(one);
            d.factor(poch_complex(q * a, q, l), "sum denominator")?;
            d.factor(poch_complex(q * b, q, l), "sum denominator")?;
            term *= poch_complex(q * a / t, q, l) * poch_complex(q * b / t, q, l) / d.0;
        }
        sum += term;
    }
    Ok(lead * sum / den.0)
}

/// Sum of [`residue_solution`] over every index and both branches.
pub fn residue_total(lambda: usize, k: u32, q: f64, y: &[Complex64]) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..y.len() {
        for branch in [Branch::Plus, Branch::Minus] {
            total += residue_solution(i, branch, lambda, k, q, y)?;
        }
    }
    Ok(total)
}

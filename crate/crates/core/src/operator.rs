//! The type `C_n` Macdonald operator
//!
//! ```text
//! E = sum_{a in {±1}^n} prod_{i<j} (1 - t y_i^{a_i} y_j^{a_j}) / (1 - y_i^{a_i} y_j^{a_j})
//!                       prod_i   (1 - t y_i^{2 a_i}) / (1 - y_i^{2 a_i})  T_{y_i}^{a_i/2}
//! ```
//!
//! acting exactly on `W(C_n)`-invariant Laurent polynomials, and the
//! triangular eigen-solve that produces `P_mu` from its defining properties.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::laurent::{
    sum_over_common_denominator, Binomial, FactoredDenominator, LaurentPoly, RationalTerm,
};
use crate::qfield::{Coeff, VFrac, VPoly};
use crate::weyl::{is_weyl_invariant, lower_partitions, orbit_monomial, Partition};

/// One summand of the operator: a sign vector and its rational coefficient.
#[derive(Clone, Debug)]
pub struct OperatorTerm {
    pub signs: Vec<i8>,
    pub numerator: LaurentPoly<VPoly>,
    pub denominator: FactoredDenominator,
}

/// All sign vectors in `{+1, -1}^n`, `+1` first.
pub fn sign_vectors(n: usize) -> Vec<Vec<i8>> {
    (0u64..(1 << n))
        .map(|mask| {
            (0..n)
                .map(|i| if mask >> (n - 1 - i) & 1 == 1 { -1 } else { 1 })
                .collect()
        })
        .collect()
}

/// Root-like exponent vectors paired with the coefficient factors of one
/// sign vector: `a_i e_i + a_j e_j` for `i < j`, then `2 a_i e_i`.
pub(crate) fn coefficient_exponents(signs: &[i8]) -> Vec<Vec<i64>> {
    let n = signs.len();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let mut e = vec![0; n];
            e[i] = signs[i] as i64;
            e[j] = signs[j] as i64;
            out.push(e);
        }
    }
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 2 * signs[i] as i64;
        out.push(e);
    }
    out
}

pub fn operator_terms(n: usize, k: u32) -> Vec<OperatorTerm> {
    sign_vectors(n)
        .into_iter()
        .map(|signs| {
            let exps = coefficient_exponents(&signs);
            let numer_factors: Vec<Binomial> = exps
                .iter()
                .map(|e| Binomial::new(VPoly::t(k), e.clone()).expect("monomial"))
                .collect();
            let numerator = FactoredDenominator::new(n, numer_factors)
                .expect("dimension")
                .expand();
            let denom = exps
                .into_iter()
                .map(|e| Binomial::plain(e).expect("nonzero exponent"))
                .collect();
            OperatorTerm {
                signs,
                numerator,
                denominator: FactoredDenominator::new(n, denom).expect("dimension"),
            }
        })
        .collect()
}

/// Applies `E` to a `W(C_n)`-invariant polynomial.
///
/// All `2^n` summands are put over one common denominator and divided out
/// exactly; a remainder means the input or the arithmetic is wrong.
pub fn apply_e(f: &LaurentPoly<VPoly>, k: u32) -> Result<LaurentPoly<VPoly>> {
    if !is_weyl_invariant(f) {
        return Err(Error::NotSymmetric);
    }
    let n = f.n();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "operator needs at least one variable".into(),
        ));
    }
    let terms: Vec<RationalTerm> = operator_terms(n, k)
        .into_par_iter()
        .map(|term| -> Result<RationalTerm> {
            let mut shifted = f.clone();
            for (i, &s) in term.signs.iter().enumerate() {
                shifted = shifted.half_shift(i, s)?;
            }
            Ok(RationalTerm {
                numer: &term.numerator * &shifted,
                denom: term.denominator.factors().to_vec(),
            })
        })
        .collect::<Result<_>>()?;
    sum_over_common_denominator(n, &terms)
}

/// `E` on a polynomial with rational coefficients, by clearing the scalar
/// denominator first (`E` is linear over coefficients).
pub fn apply_e_rational(f: &LaurentPoly<VFrac>, k: u32) -> Result<LaurentPoly<VFrac>> {
    let (numer, den) = f.clear_denominators();
    let image = apply_e(&numer, k)?;
    Ok(image.map_coeffs(|c| VFrac::new(c.clone(), den.clone()).expect("nonzero denominator")))
}

/// Coordinates of an invariant polynomial in the orbit-sum basis `m_nu`.
///
/// Each orbit point appears once in `m_nu`, so the coordinate is the
/// coefficient of the dominant exponent; the reconstruction check rejects
/// non-invariant input.
pub fn expand_in_monomials<C: Coeff>(f: &LaurentPoly<C>) -> Result<BTreeMap<Partition, C>> {
    let n = f.n();
    let mut out = BTreeMap::new();
    let mut rebuilt = LaurentPoly::<C>::zero(n);
    for (e, c) in f.terms() {
        if Partition::is_dominant(e) {
            let nu = Partition::from_exponent(e);
            let m = orbit_monomial(&nu, n)?.map_coeffs(|x| C::from_vpoly(x.clone()));
            rebuilt = &rebuilt + &m.scale(c);
            out.insert(nu, c.clone());
        }
    }
    if rebuilt != *f {
        return Err(Error::NotSymmetric);
    }
    Ok(out)
}

/// Sum of `coeff * m_nu`.
pub fn from_monomials<C: Coeff>(
    n: usize,
    expansion: &BTreeMap<Partition, C>,
) -> Result<LaurentPoly<C>> {
    let mut out = LaurentPoly::zero(n);
    for (nu, c) in expansion {
        let m = orbit_monomial(nu, n)?.map_coeffs(|x| C::from_vpoly(x.clone()));
        out = &out + &m.scale(c);
    }
    Ok(out)
}

type Expansion = BTreeMap<Partition, VPoly>;

/// Builds `P_mu` as the monic eigenfunction of `E` that is triangular in the
/// `m_nu` basis. Images `E m_nu` are memoized per `(nu, n, k)`; the cache is
/// shared across threads and concurrent calls agree.
#[derive(Default)]
pub struct EigenSolver {
    memo: Mutex<HashMap<(Partition, usize, u32), Expansion>>,
}

impl EigenSolver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Coordinates of `E m_nu` in the monomial basis.
    pub fn image_of_monomial(&self, nu: &Partition, n: usize, k: u32) -> Result<Expansion> {
        let key = (nu.clone(), n, k);
        if let Some(hit) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(hit.clone());
        }
        let image = apply_e(&orbit_monomial(nu, n)?, k)?;
        let expansion = expand_in_monomials(&image)?;
        self.memo
            .lock()
            .expect("memo lock")
            .insert(key, expansion.clone());
        Ok(expansion)
    }

    pub fn solve_p(&self, mu: &Partition, n: usize, k: u32) -> Result<LaurentPoly<VFrac>> {
        let lower = lower_partitions(mu, n)?;
        let mut basis = vec![mu.clone()];
        basis.extend(lower.iter().cloned());

        let images: Vec<Expansion> = basis
            .par_iter()
            .map(|nu| self.image_of_monomial(nu, n, k))
            .collect::<Result<_>>()?;
        for (nu, image) in basis.iter().zip(&images) {
            if let Some(bad) = image.keys().find(|rho| !basis.contains(rho)) {
                return Err(Error::NotTriangular {
                    mu: nu.parts().to_vec(),
                    nu: bad.parts().to_vec(),
                });
            }
        }

        let entry = |row: usize, col: &Partition| -> VFrac {
            VFrac::from(images[row].get(col).cloned().unwrap_or_else(VPoly::zero))
        };
        let c_mu = entry(0, mu);

        // unknowns in graded order; each only sees those already solved
        let mut coeffs: Vec<VFrac> = Vec::with_capacity(lower.len());
        for (idx, rho) in lower.iter().enumerate() {
            let mut rhs = entry(0, rho);
            for (jdx, a) in coeffs.iter().enumerate() {
                rhs = &rhs + &(a * &entry(jdx + 1, rho));
            }
            let gap = &c_mu - &entry(idx + 1, rho);
            if gap.is_zero() {
                return Err(Error::DegenerateEigenvalue {
                    mu: mu.parts().to_vec(),
                    nu: rho.parts().to_vec(),
                });
            }
            coeffs.push(rhs.div(&gap)?);
        }

        let mut expansion = BTreeMap::new();
        expansion.insert(mu.clone(), <VFrac as Coeff>::one());
        for (rho, a) in lower.into_iter().zip(coeffs) {
            if !a.is_zero() {
                expansion.insert(rho, a);
            }
        }
        from_monomials(n, &expansion)
    }
}

/// [`EigenSolver::solve_p`] with a fresh cache.
pub fn solve_p(mu: &Partition, n: usize, k: u32) -> Result<LaurentPoly<VFrac>> {
    EigenSolver::new().solve_p(mu, n, k)
}

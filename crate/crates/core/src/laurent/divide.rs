//! Binomial denominators `1 - c y^alpha` and exact division by them.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use super::{Exponent, LaurentPoly};
use crate::error::{Error, Result};
use crate::qfield::{Coeff, VPoly};

/// The factor `1 - c * y^alpha`, `c` a nonzero monomial in `v`.
#[derive(Clone, PartialEq, Eq)]
pub struct Binomial {
    coeff: VPoly,
    alpha: Exponent,
}

impl Binomial {
    pub fn new(coeff: VPoly, alpha: Exponent) -> Result<Self> {
        if coeff.as_monomial().is_none() {
            return Err(Error::InvalidArgument(format!(
                "binomial coefficient must be a nonzero monomial, got {coeff}"
            )));
        }
        if alpha.iter().all(|&a| a == 0) && coeff.is_one() {
            return Err(Error::InvalidArgument("the factor 1 - 1 is zero".into()));
        }
        Ok(Self { coeff, alpha })
    }

    /// `1 - y^alpha`.
    pub fn plain(alpha: Exponent) -> Result<Self> {
        Self::new(VPoly::one(), alpha)
    }

    pub fn coeff(&self) -> &VPoly {
        &self.coeff
    }

    pub fn alpha(&self) -> &[i64] {
        &self.alpha
    }

    pub fn to_poly<C: Coeff>(&self, n: usize) -> Result<LaurentPoly<C>> {
        if self.alpha.len() != n {
            return Err(Error::DimensionMismatch(n, self.alpha.len()));
        }
        let mut p = LaurentPoly::one(n);
        p.add_term(self.alpha.clone(), C::from_vpoly(-&self.coeff));
        Ok(p)
    }

    /// Writes `self = unit * canon` where the first nonzero entry of
    /// `canon.alpha` is positive; `unit` is `(scalar, y-exponent)`.
    pub fn canonical(&self) -> (VPoly, Exponent, Binomial) {
        let lead = self.alpha.iter().find(|&&a| a != 0).copied().unwrap_or(0);
        if lead >= 0 {
            return (VPoly::one(), vec![0; self.alpha.len()], self.clone());
        }
        // 1 - c y^a = -c y^a (1 - c^{-1} y^{-a})
        let inv = self.coeff.monomial_inverse().expect("monomial coefficient");
        let canon = Binomial {
            coeff: inv,
            alpha: self.alpha.iter().map(|a| -a).collect(),
        };
        (-&self.coeff, self.alpha.clone(), canon)
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1 - ({}) y^{:?})", self.coeff, self.alpha)
    }
}

impl fmt::Debug for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A product of binomial factors, kept unexpanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredDenominator {
    n: usize,
    factors: Vec<Binomial>,
}

impl FactoredDenominator {
    pub fn new(n: usize, factors: Vec<Binomial>) -> Result<Self> {
        if let Some(b) = factors.iter().find(|b| b.alpha.len() != n) {
            return Err(Error::DimensionMismatch(n, b.alpha.len()));
        }
        Ok(Self { n, factors })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            factors: Vec::new(),
        }
    }

    pub fn factors(&self) -> &[Binomial] {
        &self.factors
    }

    pub fn expand<C: Coeff>(&self) -> LaurentPoly<C> {
        self.factors
            .iter()
            .fold(LaurentPoly::one(self.n), |acc, b| {
                &acc * &b.to_poly(self.n).expect("dimension checked")
            })
    }
}

pub(super) fn exact_divide<C: Coeff>(
    p: &LaurentPoly<C>,
    d: &FactoredDenominator,
) -> Result<LaurentPoly<C>> {
    if p.n != d.n {
        return Err(Error::DimensionMismatch(p.n, d.n));
    }
    let mut acc = p.clone();
    for b in &d.factors {
        acc = divide_binomial(&acc, b)?;
    }
    Ok(acc)
}

fn divide_binomial<C: Coeff>(p: &LaurentPoly<C>, b: &Binomial) -> Result<LaurentPoly<C>> {
    let not_divisible = || Error::NotDivisible {
        factor: b.to_string(),
    };
    let Some(lead_idx) = b.alpha.iter().position(|&a| a != 0) else {
        let scalar = &VPoly::one() - &b.coeff;
        let mut out = LaurentPoly::zero(p.n);
        for (e, c) in &p.terms {
            out.add_term(e.clone(), c.div_vpoly(&scalar).ok_or_else(not_divisible)?);
        }
        return Ok(out);
    };

    let (unit_scalar, unit_exp, canon) = b.canonical();
    let p = if unit_exp.iter().any(|&a| a != 0) || !unit_scalar.is_one() {
        let inv = unit_scalar.monomial_inverse().expect("unit");
        let neg: Exponent = unit_exp.iter().map(|a| -a).collect();
        p.shift_exponents(&neg).scale_vpoly(&inv)
    } else {
        p.clone()
    };
    let step = canon.alpha[lead_idx];
    let c = &canon.coeff;

    // Terms split into lines e0 + j*alpha; on each line this is synthetic
    // division of a univariate polynomial in z = y^alpha by 1 - c z.
    let mut lines: BTreeMap<Exponent, BTreeMap<i64, &C>> = BTreeMap::new();
    for (e, coeff) in &p.terms {
        let j = e[lead_idx].div_euclid(step);
        let rep: Exponent = e.iter().zip(&canon.alpha).map(|(x, a)| x - j * a).collect();
        lines.entry(rep).or_default().insert(j, coeff);
    }

    let mut out = LaurentPoly::zero(p.n);
    for (rep, line) in lines {
        let lo = *line.keys().next().expect("nonempty line");
        let hi = *line.keys().next_back().expect("nonempty line");
        let mut prev = C::zero();
        for j in lo..hi {
            let cur = match line.get(&j) {
                Some(a) => (*a).add_ref(&prev.scale(c)),
                None => prev.scale(c),
            };
            if !cur.is_zero() {
                let e = rep
                    .iter()
                    .zip(&canon.alpha)
                    .map(|(x, a)| x + j * a)
                    .collect();
                out.add_term(e, cur.clone());
            }
            prev = cur;
        }
        let top = line[&hi].add_ref(&prev.scale(c));
        if !top.is_zero() {
            return Err(not_divisible());
        }
    }
    Ok(out)
}

/// `numer / (product of denom)`.
#[derive(Clone, Debug)]
pub struct RationalTerm {
    pub numer: LaurentPoly<VPoly>,
    pub denom: Vec<Binomial>,
}

/// Sums rational terms by bringing them over the least common multiple of
/// their (canonicalized) binomial denominators and dividing exactly.
///
/// Fails with `NotDivisible` when the sum is not a Laurent polynomial.
pub fn sum_over_common_denominator(n: usize, terms: &[RationalTerm]) -> Result<LaurentPoly<VPoly>> {
    let mut canon_terms = Vec::with_capacity(terms.len());
    for t in terms {
        if t.numer.n() != n {
            return Err(Error::DimensionMismatch(n, t.numer.n()));
        }
        let mut numer = t.numer.clone();
        let mut denom = Vec::with_capacity(t.denom.len());
        for b in &t.denom {
            if b.alpha.len() != n {
                return Err(Error::DimensionMismatch(n, b.alpha.len()));
            }
            let (scalar, exp, canon) = b.canonical();
            if !scalar.is_one() {
                let inv = scalar.monomial_inverse().expect("unit");
                let neg: Exponent = exp.iter().map(|a| -a).collect();
                numer = numer.shift_exponents(&neg).scale_vpoly(&inv);
            }
            denom.push(canon);
        }
        canon_terms.push((numer, denom));
    }

    let mut lcm: Vec<(Binomial, usize)> = Vec::new();
    for (_, denom) in &canon_terms {
        for (b, count) in multiplicities(denom) {
            match lcm.iter_mut().find(|(x, _)| *x == b) {
                Some(slot) => slot.1 = slot.1.max(count),
                None => lcm.push((b, count)),
            }
        }
    }

    let numerators: Vec<LaurentPoly<VPoly>> = canon_terms
        .par_iter()
        .map(|(numer, denom)| {
            let own = multiplicities(denom);
            let mut acc = numer.clone();
            for (b, total) in &lcm {
                let have = own.iter().find(|(x, _)| x == b).map_or(0, |(_, c)| *c);
                let bp: LaurentPoly<VPoly> = b.to_poly(n).expect("dimension checked");
                for _ in have..*total {
                    acc = &acc * &bp;
                }
            }
            acc
        })
        .collect();

    let mut total = LaurentPoly::zero(n);
    for p in &numerators {
        total = &total + p;
    }
    let factors = lcm
        .into_iter()
        .flat_map(|(b, c)| std::iter::repeat_n(b, c))
        .collect();
    total.exact_divide(&FactoredDenominator::new(n, factors)?)
}

fn multiplicities(list: &[Binomial]) -> Vec<(Binomial, usize)> {
    let mut out: Vec<(Binomial, usize)> = Vec::new();
    for b in list {
        match out.iter_mut().find(|(x, _)| x == b) {
            Some(slot) => slot.1 += 1,
            None => out.push((b.clone(), 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_extracts_unit() {
        // 1 - y^{-1} = -y^{-1} (1 - y)
        let b = Binomial::plain(vec![-1]).unwrap();
        let (s, e, canon) = b.canonical();
        assert_eq!(s, VPoly::from_int(-1));
        assert_eq!(e, vec![-1]);
        assert_eq!(canon, Binomial::plain(vec![1]).unwrap());
        let lhs: LaurentPoly = b.to_poly(1).unwrap();
        let rhs = canon
            .to_poly(1)
            .unwrap()
            .shift_exponents(&e)
            .scale_vpoly(&s);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn n1_two_term_sum() {
        // (1 - t y^2)/(1 - y^2) + (1 - t y^-2)/(1 - y^-2) = 1 + t
        let k = 2;
        let terms: Vec<RationalTerm> = [1i64, -1]
            .iter()
            .map(|&a| RationalTerm {
                numer: Binomial::new(VPoly::t(k), vec![2 * a])
                    .unwrap()
                    .to_poly(1)
                    .unwrap(),
                denom: vec![Binomial::plain(vec![2 * a]).unwrap()],
            })
            .collect();
        let s = sum_over_common_denominator(1, &terms).unwrap();
        assert_eq!(s, LaurentPoly::constant(1, &VPoly::one() + &VPoly::t(k)));
    }

    #[test]
    fn non_polynomial_sum_is_reported() {
        let terms = vec![RationalTerm {
            numer: LaurentPoly::one(1),
            denom: vec![Binomial::plain(vec![1]).unwrap()],
        }];
        assert!(matches!(
            sum_over_common_denominator(1, &terms),
            Err(Error::NotDivisible { .. })
        ));
    }

    #[test]
    fn scalar_factor_divides_coefficients() {
        let b = Binomial::new(VPoly::q_pow(1), vec![0, 0]).unwrap();
        let p: LaurentPoly = LaurentPoly::constant(2, VPoly::from_q_coeffs(&[1, 0, -1]));
        let d = FactoredDenominator::new(2, vec![b]).unwrap();
        assert_eq!(
            p.exact_divide(&d).unwrap(),
            LaurentPoly::constant(2, VPoly::from_q_coeffs(&[1, 1]))
        );
        assert!(Binomial::plain(vec![0]).is_err());
    }
}

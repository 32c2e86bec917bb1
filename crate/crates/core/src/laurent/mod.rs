//! Multivariate Laurent polynomials in `y_1, ..., y_n`.
//!
//! Variables are indexed from 0 in the API (`y_1` is index 0). Exponent
//! vectors are stored densely; `n` stays small for everything in this crate.

mod divide;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qfield::{Coeff, QAlgebra, VFrac, VPoly};

pub use divide::{sum_over_common_denominator, Binomial, FactoredDenominator, RationalTerm};

pub type Exponent = Vec<i64>;

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly<C = VPoly> {
    n: usize,
    terms: BTreeMap<Exponent, C>,
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, C::one())
    }

    pub fn constant(n: usize, c: C) -> Self {
        Self::monomial(vec![0; n], c)
    }

    pub fn monomial(exp: Exponent, c: C) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    /// The variable `y_{i+1}`.
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(e, C::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, C)>>(n: usize, iter: I) -> Result<Self> {
        let mut p = Self::zero(n);
        for (e, c) in iter {
            if e.len() != n {
                return Err(Error::DimensionMismatch(n, e.len()));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic order of exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &C)> {
        self.terms.iter()
    }

    /// Terms in the serialization order (descending lexicographic).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Exponent, &C)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, exp: &[i64]) -> C {
        self.terms.get(exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn get(&self, exp: &[i64]) -> Option<&C> {
        self.terms.get(exp)
    }

    pub(crate) fn add_term(&mut self, exp: Exponent, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add_ref(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::BadIndex {
                index: i,
                n: self.n,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.neg_ref());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.mul_ref(cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        let mut out = Self::zero(self.n);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.mul_ref(c));
        }
        out
    }

    pub fn scale_vpoly(&self, c: &VPoly) -> Self {
        let mut out = Self::zero(self.n);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.scale(c));
        }
        out
    }

    /// Multiplies by the monomial `y^shift`.
    pub fn shift_exponents(&self, shift: &[i64]) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn map_exponents<F: Fn(&[i64]) -> Exponent>(&self, f: F) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(f(e), c.clone());
        }
        out
    }

    pub fn map_coeffs<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> LaurentPoly<D> {
        let mut out = LaurentPoly::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// `T_{y_i}^{±1/2}`: substitutes `y_i -> q^{±1/2} y_i`.
    pub fn half_shift(&self, i: usize, sign: i8) -> Result<Self> {
        self.check_index(i)?;
        let s = match sign {
            1 => 1,
            -1 => -1,
            _ => return Err(Error::InvalidArgument(format!("shift sign {sign}"))),
        };
        Ok(Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.shift_v(s * e[i])))
                .collect(),
        })
    }

    /// `y_i -> y_i^{-1}`.
    pub fn invert_variable(&self, i: usize) -> Result<Self> {
        self.check_index(i)?;
        Ok(self.map_exponents(|e| {
            let mut e = e.to_vec();
            e[i] = -e[i];
            e
        }))
    }

    pub fn swap_variables(&self, i: usize, j: usize) -> Result<Self> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self.map_exponents(|e| {
            let mut e = e.to_vec();
            e.swap(i, j);
            e
        }))
    }

    pub fn exact_divide(&self, d: &FactoredDenominator) -> Result<Self> {
        divide::exact_divide(self, d)
    }

    /// Evaluates at `v = sqrt(q)` (positive root) and the given `y`.
    pub fn eval_numeric(&self, q: f64, y: &[Complex64]) -> Result<Complex64> {
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "q = {q} has no positive square root"
            )));
        }
        self.eval_at_v(Complex64::new(q.sqrt(), 0.0), y)
    }

    pub fn eval_at_v(&self, v: Complex64, y: &[Complex64]) -> Result<Complex64> {
        if y.len() != self.n {
            return Err(Error::DimensionMismatch(self.n, y.len()));
        }
        if let Some(i) = y.iter().position(|z| *z == Complex64::new(0.0, 0.0)) {
            return Err(Error::ZeroVariable(i + 1));
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mono: Complex64 = e.iter().zip(y).map(|(&a, z)| z.powi(a as i32)).product();
            total += c.eval(v) * mono;
        }
        Ok(total)
    }

    /// One `c * y1^a1 ... yn^an` line per term, descending lexicographic.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms_desc()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .map(|(i, a)| format!("y{}^{}", i + 1, a))
                    .collect();
                format!("({c}) * {}", vars.join(" "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl LaurentPoly<VPoly> {
    pub fn to_fractions(&self) -> LaurentPoly<VFrac> {
        self.map_coeffs(|c| VFrac::from(c.clone()))
    }

    /// JSON term list, descending lexicographic by `y_exp`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.json_terms()).expect("term list serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.json_terms()).expect("term list serializes")
    }

    fn json_terms(&self) -> Vec<JsonTerm<'_>> {
        self.terms_desc()
            .map(|(e, c)| JsonTerm { y_exp: e, coeff: c })
            .collect()
    }
}

impl LaurentPoly<VFrac> {
    /// Splits into `numerator / denominator` with a scalar common denominator.
    pub fn clear_denominators(&self) -> (LaurentPoly<VPoly>, VPoly) {
        let mut lcm = VPoly::one();
        for c in self.terms.values() {
            let d = c.denom();
            let g = lcm.gcd(d);
            lcm = &lcm * &d.div_exact(&g).expect("gcd divides");
        }
        let numer = self.map_coeffs(|c| {
            let factor = lcm.div_exact(c.denom()).expect("lcm is a multiple");
            c.numer() * &factor
        });
        (numer, lcm)
    }

    /// The polynomial itself when every coefficient is a ring element.
    pub fn to_vpoly(&self) -> Option<LaurentPoly<VPoly>> {
        let mut out = LaurentPoly::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.as_vpoly()?.clone());
        }
        Some(out)
    }
}

#[derive(Serialize)]
struct JsonTerm<'a> {
    y_exp: &'a Exponent,
    coeff: &'a VPoly,
}

impl<C: Coeff> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().rev()).finish()
    }
}

impl<C: Coeff> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty().replace('\n', " + "))
    }
}

impl<C: Coeff> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        self.checked_add(rhs).expect("variable counts must match")
    }
}

impl<C: Coeff> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        self.checked_sub(rhs).expect("variable counts must match")
    }
}

impl<C: Coeff> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        self.checked_mul(rhs).expect("variable counts must match")
    }
}

impl<C: Coeff> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        self.map_coeffs(|c| c.neg_ref())
    }
}

impl<C: Coeff> QAlgebra for LaurentPoly<C> {
    fn one_like(&self) -> Self {
        Self::one(self.n)
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn shift_v(&self, e: i64) -> Self {
        self.map_coeffs(|c| c.shift_v(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::{gauss_coeff, poch_finite};
    use num_rational::BigRational;
    use proptest::prelude::*;

    type P = LaurentPoly<VPoly>;

    fn y(n: usize, i: usize) -> P {
        P::var(n, i)
    }

    fn yinv(n: usize, i: usize) -> P {
        let mut e = vec![0; n];
        e[i] = -1;
        P::monomial(e, VPoly::one())
    }

    fn c(x: i64) -> VPoly {
        VPoly::from_int(x)
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&y(1, 0) * &yinv(1, 0), P::one(1));
        let p = &y(2, 0) + &P::constant(2, c(3));
        assert!((&p + &p.scale(&c(-1))).is_zero());
        let one = P::one(1);
        let lhs = &(&one - &y(1, 0)) * &(&one + &y(1, 0));
        let y2 = P::monomial(vec![2], VPoly::one());
        assert_eq!(lhs, &one - &y2);
        assert!(y(1, 0).checked_add(&y(2, 0)).is_err());
    }

    #[test]
    fn half_shift_examples() {
        let p = y(1, 0);
        assert_eq!(
            p.half_shift(0, 1).unwrap(),
            P::monomial(vec![1], VPoly::v_pow(1))
        );
        let m = P::monomial(vec![-2], VPoly::one());
        assert_eq!(
            m.half_shift(0, 1).unwrap(),
            P::monomial(vec![-2], VPoly::v_pow(-2))
        );
        let q = &(&y(2, 0) * &y(2, 1)) + &yinv(2, 1);
        assert_eq!(q.half_shift(1, 1).unwrap().half_shift(1, -1).unwrap(), q);
        assert!(q.half_shift(2, 1).is_err());
    }

    #[test]
    fn invert_variable_examples() {
        let s = &y(1, 0) + &yinv(1, 0);
        assert_eq!(s.invert_variable(0).unwrap(), s);
        let sq = P::monomial(vec![2], VPoly::one());
        assert_eq!(
            sq.invert_variable(0).unwrap(),
            P::monomial(vec![-2], VPoly::one())
        );
        let q = &(&y(2, 0) * &y(2, 1)) + &P::constant(2, c(5));
        assert_eq!(q.invert_variable(1).unwrap().invert_variable(1).unwrap(), q);
    }

    #[test]
    fn exact_divide_examples() {
        let one = P::one(1);
        let y2 = P::monomial(vec![2], VPoly::one());
        let y4 = P::monomial(vec![4], VPoly::one());
        let f = FactoredDenominator::new(1, vec![Binomial::new(VPoly::one(), vec![2]).unwrap()])
            .unwrap();
        assert_eq!((&one - &y2).exact_divide(&f).unwrap(), one.clone());
        assert_eq!((&one - &y4).exact_divide(&f).unwrap(), &one + &y2);
        let g = FactoredDenominator::new(1, vec![Binomial::new(VPoly::one(), vec![1]).unwrap()])
            .unwrap();
        assert!(matches!(
            (&one + &y(1, 0)).exact_divide(&g),
            Err(Error::NotDivisible { .. })
        ));
    }

    #[test]
    fn eval_examples() {
        let s = &y(1, 0) + &yinv(1, 0);
        let v = s.eval_numeric(0.3, &[Complex64::new(2.0, 0.0)]).unwrap();
        assert!((v - Complex64::new(2.5, 0.0)).norm() < 1e-15);
        let one = P::one(2);
        assert_eq!(
            one.eval_numeric(0.7, &[Complex64::new(3.0, 1.0); 2])
                .unwrap(),
            Complex64::new(1.0, 0.0)
        );
        let g = P::constant(0, gauss_coeff(2, 2).unwrap());
        assert!((g.eval_numeric(0.5, &[]).unwrap() - Complex64::new(1.75, 0.0)).norm() < 1e-15);
        assert!(matches!(
            s.eval_numeric(0.3, &[Complex64::new(0.0, 0.0)]),
            Err(Error::ZeroVariable(1))
        ));
    }

    #[test]
    fn pochhammer_in_laurent_ring() {
        // (y; q)_2 = 1 - (1 + q) y + q y^2
        let p = poch_finite(&y(1, 0), 2);
        let expect = P::from_terms(
            1,
            [
                (vec![0], c(1)),
                (vec![1], -VPoly::from_q_coeffs(&[1, 1])),
                (vec![2], VPoly::q_pow(1)),
            ],
        )
        .unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn json_is_descending_lex() {
        let p = P::from_terms(
            2,
            [
                (vec![-1, 0], c(1)),
                (
                    vec![1, -1],
                    VPoly::monomial(BigRational::new(1.into(), 2.into()), -1),
                ),
                (vec![1, 2], c(2)),
            ],
        )
        .unwrap();
        assert_eq!(
            p.to_json_string(),
            r#"[{"y_exp":[1,2],"coeff":[[0,"2/1"]]},{"y_exp":[1,-1],"coeff":[[-1,"1/2"]]},{"y_exp":[-1,0],"coeff":[[0,"1/1"]]}]"#
        );
    }

    #[test]
    fn clearing_denominators() {
        let frac = VFrac::new(VPoly::one(), VPoly::from_q_coeffs(&[1, -1])).unwrap();
        let frac2 = VFrac::new(VPoly::one(), VPoly::from_q_coeffs(&[1, 0, -1])).unwrap();
        let p = LaurentPoly::from_terms(1, [(vec![1], frac), (vec![0], frac2)]).unwrap();
        let (num, den) = p.clear_denominators();
        assert_eq!(den, VPoly::from_q_coeffs(&[1, 0, -1]));
        assert_eq!(num.coeff(&[1]), VPoly::from_q_coeffs(&[1, 1]));
        assert_eq!(num.coeff(&[0]), VPoly::one());
        assert!(p.to_vpoly().is_none());
    }

    fn arb_vpoly() -> impl Strategy<Value = VPoly> {
        prop::collection::vec((-3i64..=3, -3i64..=3), 0..3).prop_map(|ts| {
            VPoly::from_terms(
                ts.into_iter()
                    .map(|(e, c)| (e, BigRational::from_integer(c.into()))),
            )
        })
    }

    fn arb_poly(n: usize) -> impl Strategy<Value = P> {
        prop::collection::vec((prop::collection::vec(-2i64..=2, n), arb_vpoly()), 0..5)
            .prop_map(move |ts| P::from_terms(n, ts).unwrap())
    }

    fn arb_binomial(n: usize) -> impl Strategy<Value = Binomial> {
        (
            prop::collection::vec(-2i64..=2, n),
            -2i64..=2,
            prop::sample::select(vec![-2i64, -1, 1, 3]),
        )
            .prop_filter("nonzero exponent", |(a, _, _)| a.iter().any(|&x| x != 0))
            .prop_map(|(a, e, s)| {
                Binomial::new(VPoly::monomial(BigRational::from_integer(s.into()), e), a).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn ring_axioms(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn divide_undoes_multiply(p in arb_poly(2), f in arb_binomial(2)) {
            let d = FactoredDenominator::new(2, vec![f.clone()]).unwrap();
            let prod = &p * &f.to_poly(2).unwrap();
            prop_assert_eq!(prod.exact_divide(&d).unwrap(), p);
        }

        #[test]
        fn evaluation_is_multiplicative(
            a in arb_poly(2), b in arb_poly(2),
            q in 0.05f64..0.95, r in prop::collection::vec((0.6f64..1.5, 0.0..std::f64::consts::TAU), 2)
        ) {
            let y: Vec<Complex64> = r.iter().map(|&(m, t)| Complex64::from_polar(m, t)).collect();
            let lhs = (&a * &b).eval_numeric(q, &y).unwrap();
            let rhs = a.eval_numeric(q, &y).unwrap() * b.eval_numeric(q, &y).unwrap();
            let scale = 1.0 + lhs.norm().max(rhs.norm());
            prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
        }
    }
}

//! Exact coefficient arithmetic in `v = q^{1/2}`.
//!
//! Every coefficient that appears in the operator, its eigenvalues and the
//! one-row polynomials is a rational function of `q` with `t = q^k`. Working
//! in the single variable `v` (`q = v^2`, `t = v^{2k}`) keeps the half-integer
//! powers `q^{±1/2}` produced by the half shifts inside an ordinary Laurent
//! polynomial ring with rational coefficients.
//!
//! [`VPoly`] is that ring, [`VFrac`] its field of fractions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::weyl::Partition;

/// Coefficient ring interface shared by [`VPoly`] and [`VFrac`].
///
/// Laurent polynomials in `y` are generic over this trait so the same
/// shift/divide/evaluate machinery serves both polynomial and rational
/// coefficients.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_vpoly(p: VPoly) -> Self;
    fn scale(&self, p: &VPoly) -> Self;
    /// Multiplies by `v^e`.
    fn shift_v(&self, e: i64) -> Self;
    /// Exact division by a ring element, `None` if it does not divide.
    fn div_vpoly(&self, p: &VPoly) -> Option<Self>;
    /// Substitutes a numeric value for `v`.
    fn eval(&self, v: Complex64) -> Complex64;
}

/// Anything `(a; q)_m` can be formed in: a commutative ring that contains
/// the coefficient ring, so `1 - a q^i` makes sense.
pub trait QAlgebra: Clone {
    fn one_like(&self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn shift_v(&self, e: i64) -> Self;
}

/// Laurent polynomial in `v = q^{1/2}` with rational coefficients.
///
/// Zero coefficients are never stored, so derived equality is exact.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VPoly {
    terms: BTreeMap<i64, BigRational>,
}

impl VPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    pub fn monomial(c: BigRational, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    /// `v^e`.
    pub fn v_pow(e: i64) -> Self {
        Self::monomial(BigRational::one(), e)
    }

    /// `q^e = v^{2e}`.
    pub fn q_pow(e: i64) -> Self {
        Self::v_pow(2 * e)
    }

    /// `t = q^k`.
    pub fn t(k: u32) -> Self {
        Self::q_pow(k as i64)
    }

    /// Builds from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in iter {
            out.add_term(e, &c);
        }
        out
    }

    /// Dense integer coefficients in powers of `q`, lowest first.
    pub fn from_q_coeffs(coeffs: &[i64]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (2 * i as i64, BigRational::from_integer(c.into()))),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        self.terms
            .get(&exp)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `Some((c, e))` if this is the single term `c v^e`.
    pub fn as_monomial(&self) -> Option<(&BigRational, i64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(&e, c)| (c, e))
        } else {
            None
        }
    }

    fn add_term(&mut self, exp: i64, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn scale_rational(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&e, a)| (e, a * c)).collect(),
        }
    }

    pub fn shift(&self, e: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&x, c)| (x + e, c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a unit (a nonzero monomial).
    pub fn monomial_inverse(&self) -> Option<Self> {
        let (c, e) = self.as_monomial()?;
        Some(Self::monomial(c.recip(), -e))
    }

    /// Splits off the lowest power of `v`: `self = v^shift * dense(v)`
    /// with `dense[0] != 0`.
    fn to_dense(&self) -> (i64, Vec<BigRational>) {
        let Some(lo) = self.min_exp() else {
            return (0, Vec::new());
        };
        let hi = self.max_exp().unwrap_or(lo);
        let mut dense = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (&e, c) in &self.terms {
            dense[(e - lo) as usize] = c.clone();
        }
        (lo, dense)
    }

    fn from_dense(shift: i64, dense: &[BigRational]) -> Self {
        Self::from_terms(
            dense
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (shift + i as i64, c.clone())),
        )
    }

    /// Exact quotient in the Laurent ring, `None` if a remainder is left.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (ps, p) = self.to_dense();
        let (ds, d) = divisor.to_dense();
        let (quot, rem) = dense_divrem(&p, &d);
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_dense(ps - ds, &quot))
    }

    /// Monic-at-lowest-term greatest common divisor; units of the Laurent
    /// ring (monomials) are stripped.
    pub fn gcd(&self, other: &Self) -> Self {
        let (_, a) = self.to_dense();
        let (_, b) = other.to_dense();
        let g = dense_gcd(a, b);
        if g.is_empty() {
            return Self::zero();
        }
        let lead = g[0].clone();
        let g: Vec<BigRational> = g.into_iter().map(|c| c / &lead).collect();
        Self::from_dense(0, &g)
    }

    pub fn eval(&self, v: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(&e, c)| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0) * v.powi(e as i32))
            .sum()
    }

    /// `(exponent, "p/q")` pairs in ascending exponent order.
    pub fn to_pairs(&self) -> Vec<(i64, String)> {
        self.terms
            .iter()
            .map(|(&e, c)| (e, rational_to_string(c)))
            .collect()
    }

    pub fn from_pairs(pairs: &[(i64, String)]) -> Result<Self> {
        let mut out = Self::zero();
        for (e, s) in pairs {
            out.add_term(*e, &parse_rational(s)?);
        }
        Ok(out)
    }
}

fn dense_divrem(p: &[BigRational], d: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = p.to_vec();
    while rem.last().is_some_and(|c| c.is_zero()) {
        rem.pop();
    }
    let mut d = d.to_vec();
    while d.last().is_some_and(|c| c.is_zero()) {
        d.pop();
    }
    let dl = d.len();
    if rem.len() < dl {
        return (Vec::new(), rem);
    }
    let lead = d[dl - 1].clone();
    let mut quot = vec![BigRational::zero(); rem.len() - dl + 1];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dl - 1] / &lead;
        if !c.is_zero() {
            for (j, dj) in d.iter().enumerate() {
                rem[i + j] -= &c * dj;
            }
        }
        quot[i] = c;
    }
    rem.truncate(dl - 1);
    while rem.last().is_some_and(|c| c.is_zero()) {
        rem.pop();
    }
    (quot, rem)
}

fn dense_gcd(mut a: Vec<BigRational>, mut b: Vec<BigRational>) -> Vec<BigRational> {
    let trim = |v: &mut Vec<BigRational>| {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let (_, r) = dense_divrem(&a, &b);
        a = b;
        b = r;
        // keep the remainders monic so the rationals stay small
        if let Some(l) = b.last().cloned() {
            for c in b.iter_mut() {
                *c /= &l;
            }
        }
    }
    a
}

pub fn rational_to_string(c: &BigRational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("malformed rational {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = p.trim().parse().map_err(|_| bad())?;
    let q: BigInt = q.trim().parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

impl Serialize for VPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for VPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<(i64, String)>::deserialize(d)?;
        VPoly::from_pairs(&pairs).map_err(D::Error::custom)
    }
}

fn fmt_rational_factor(c: &BigRational, first: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let neg = c.is_negative();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, "{}", if neg { " - " } else { " + " })?;
    }
    let a = c.abs();
    if a.is_integer() {
        write!(f, "{}", a.numer())
    } else {
        write!(f, "{}/{}", a.numer(), a.denom())
    }
}

impl fmt::Display for VPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            let unit = c.abs().is_one();
            if e == 0 || !unit {
                fmt_rational_factor(c, i == 0, f)?;
                if e != 0 {
                    write!(f, "*")?;
                }
            } else if c.is_negative() {
                write!(f, "{}", if i == 0 { "-" } else { " - " })?;
            } else if i > 0 {
                write!(f, " + ")?;
            }
            match e {
                0 => {}
                1 => write!(f, "v")?,
                _ => write!(f, "v^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for VPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VPoly({self})")
    }
}

impl Add for &VPoly {
    type Output = VPoly;
    fn add(self, rhs: &VPoly) -> VPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &VPoly {
    type Output = VPoly;
    fn sub(self, rhs: &VPoly) -> VPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, &-c);
        }
        out
    }
}

impl Mul for &VPoly {
    type Output = VPoly;
    fn mul(self, rhs: &VPoly) -> VPoly {
        let mut out = VPoly::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &rhs.terms {
                out.add_term(a + b, &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &VPoly {
    type Output = VPoly;
    fn neg(self) -> VPoly {
        VPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

forward_owned!(VPoly);

impl Coeff for VPoly {
    fn zero() -> Self {
        VPoly::zero()
    }
    fn one() -> Self {
        VPoly::one()
    }
    fn is_zero(&self) -> bool {
        VPoly::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_vpoly(p: VPoly) -> Self {
        p
    }
    fn scale(&self, p: &VPoly) -> Self {
        self * p
    }
    fn shift_v(&self, e: i64) -> Self {
        self.shift(e)
    }
    fn div_vpoly(&self, p: &VPoly) -> Option<Self> {
        self.div_exact(p)
    }
    fn eval(&self, v: Complex64) -> Complex64 {
        VPoly::eval(self, v)
    }
}

impl QAlgebra for VPoly {
    fn one_like(&self) -> Self {
        VPoly::one()
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn shift_v(&self, e: i64) -> Self {
        self.shift(e)
    }
}

/// Element of the fraction field `Q(v)`, kept reduced: numerator and
/// denominator coprime, denominator a polynomial in `v` with constant term 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VFrac {
    num: VPoly,
    den: VPoly,
}

impl VFrac {
    pub fn new(num: VPoly, den: VPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: VPoly, den: VPoly) -> Self {
        if num.is_zero() {
            return Self::from(VPoly::zero());
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).expect("gcd divides numerator");
        let den = den.div_exact(&g).expect("gcd divides denominator");
        // move the unit part of the denominator into the numerator
        let lo = den.min_exp().unwrap_or(0);
        let lead = den.coeff(lo);
        let unit = VPoly::monomial(lead.recip(), -lo);
        Self {
            num: &num * &unit,
            den: &den * &unit,
        }
    }

    pub fn numer(&self) -> &VPoly {
        &self.num
    }

    pub fn denom(&self) -> &VPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The underlying ring element when the denominator is 1.
    pub fn as_vpoly(&self) -> Option<&VPoly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }
}

impl From<VPoly> for VFrac {
    fn from(p: VPoly) -> Self {
        Self {
            num: p,
            den: VPoly::one(),
        }
    }
}

impl fmt::Display for VFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for VFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VFrac({self})")
    }
}

impl Add for &VFrac {
    type Output = VFrac;
    fn add(self, rhs: &VFrac) -> VFrac {
        if self.den == rhs.den {
            return VFrac::reduced(&self.num + &rhs.num, self.den.clone());
        }
        VFrac::reduced(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &VFrac {
    type Output = VFrac;
    fn sub(self, rhs: &VFrac) -> VFrac {
        self + &(-rhs)
    }
}

impl Mul for &VFrac {
    type Output = VFrac;
    fn mul(self, rhs: &VFrac) -> VFrac {
        VFrac::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &VFrac {
    type Output = VFrac;
    fn neg(self) -> VFrac {
        VFrac {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

forward_owned!(VFrac);

impl Coeff for VFrac {
    fn zero() -> Self {
        VFrac::from(VPoly::zero())
    }
    fn one() -> Self {
        VFrac::from(VPoly::one())
    }
    fn is_zero(&self) -> bool {
        VFrac::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_vpoly(p: VPoly) -> Self {
        VFrac::from(p)
    }
    fn scale(&self, p: &VPoly) -> Self {
        VFrac::reduced(&self.num * p, self.den.clone())
    }
    fn shift_v(&self, e: i64) -> Self {
        VFrac {
            num: self.num.shift(e),
            den: self.den.clone(),
        }
    }
    fn div_vpoly(&self, p: &VPoly) -> Option<Self> {
        VFrac::new(self.num.clone(), &self.den * p).ok()
    }
    fn eval(&self, v: Complex64) -> Complex64 {
        self.num.eval(v) / self.den.eval(v)
    }
}

impl QAlgebra for VFrac {
    fn one_like(&self) -> Self {
        <VFrac as Coeff>::one()
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn shift_v(&self, e: i64) -> Self {
        Coeff::shift_v(self, e)
    }
}

/// `(a; q)_m = (1 - a)(1 - a q) ... (1 - a q^{m-1})`.
pub fn poch_finite<R: QAlgebra>(a: &R, m: usize) -> R {
    let one = a.one_like();
    let mut acc = one.clone();
    for i in 0..m {
        acc = acc.times(&one.minus(&a.shift_v(2 * i as i64)));
    }
    acc
}

/// Numeric `(a; q)_m`.
pub fn poch_complex(a: Complex64, q: f64, m: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut qi = 1.0;
    for _ in 0..m {
        acc *= Complex64::new(1.0, 0.0) - a * qi;
        qi *= q;
    }
    acc
}

/// The Gaussian coefficient `(q^k; q)_i / (q; q)_i`, a polynomial in `q`.
pub fn gauss_coeff(k: u32, i: usize) -> Result<VPoly> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let num = poch_finite(&VPoly::t(k), i);
    let den = poch_finite(&VPoly::q_pow(1), i);
    num.div_exact(&den).ok_or_else(|| Error::NotDivisible {
        factor: format!("(q;q)_{i}"),
    })
}

/// Eigenvalue `c_mu = q^{-|mu|/2} prod_i (1 + q^{mu_i} t^{n-i+1})` of the
/// operator on `P_mu`.
pub fn eigenvalue_c(mu: &Partition, n: usize, k: u32) -> Result<VPoly> {
    let parts = mu.padded(n)?;
    let size: usize = parts.iter().sum();
    let mut c = VPoly::v_pow(-(size as i64));
    for (i, &m) in parts.iter().enumerate() {
        let e = 2 * m as i64 + 2 * k as i64 * (n - i) as i64;
        c = &c * &(&VPoly::one() + &VPoly::v_pow(e));
    }
    Ok(c)
}

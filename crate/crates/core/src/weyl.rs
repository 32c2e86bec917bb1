//! Partitions, the hyperoctahedral group `W(C_n)` and the dominance order.
//!
//! The dominance order comes from the simple roots of `C_n`,
//! `alpha_i = e_i - e_{i+1}` for `i < n` and `alpha_n = 2 e_n`. Writing
//! `mu - nu = sum c_i alpha_i` and solving coordinate by coordinate gives
//! `c_i = d_1 + ... + d_i` for `i < n` and `c_n = (d_1 + ... + d_n) / 2`
//! where `d = mu - nu`. So `nu <= mu` exactly when every proper partial sum
//! of `d` is non-negative and the full sum is non-negative and even.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{Exponent, LaurentPoly};
use crate::qfield::{Coeff, VPoly};

/// Weakly decreasing sequence of non-negative integers. Trailing zeros are
/// dropped, so `(2, 0)` and `(2)` are the same partition.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// The one-row partition `(lambda, 0, ..., 0)`.
    pub fn row(lambda: usize) -> Self {
        Self::new(vec![lambda]).expect("single part")
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Parts padded with zeros to length `n`.
    pub fn padded(&self, n: usize) -> Result<Vec<usize>> {
        if self.parts.len() > n {
            return Err(Error::InvalidArgument(format!(
                "partition {self} has more than {n} parts"
            )));
        }
        let mut v = self.parts.clone();
        v.resize(n, 0);
        Ok(v)
    }

    pub fn exponent(&self, n: usize) -> Result<Exponent> {
        Ok(self.padded(n)?.into_iter().map(|a| a as i64).collect())
    }

    /// Sorted absolute values of an exponent vector: the dominant
    /// representative of its orbit.
    pub fn from_exponent(e: &[i64]) -> Self {
        let mut parts: Vec<usize> = e.iter().map(|a| a.unsigned_abs() as usize).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts).expect("sorted")
    }

    /// Whether the exponent vector is itself a padded partition.
    pub fn is_dominant(e: &[i64]) -> bool {
        e.iter().all(|&a| a >= 0) && e.windows(2).all(|w| w[0] >= w[1])
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Orbit of `mu` under signed permutations, each point once, sorted.
pub fn orbit(mu: &Partition, n: usize) -> Result<Vec<Exponent>> {
    let base = mu.exponent(n)?;
    let mut out = BTreeSet::new();
    for perm in distinct_permutations(&base) {
        let nonzero: Vec<usize> = (0..n).filter(|&i| perm[i] != 0).collect();
        for mask in 0u64..(1 << nonzero.len()) {
            let mut e = perm.clone();
            for (bit, &i) in nonzero.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    e[i] = -e[i];
                }
            }
            out.insert(e);
        }
    }
    Ok(out.into_iter().collect())
}

fn distinct_permutations(base: &[i64]) -> Vec<Vec<i64>> {
    let mut sorted = base.to_vec();
    sorted.sort_unstable();
    let mut out = vec![sorted.clone()];
    // lexicographic successor until exhausted
    loop {
        let Some(i) = (0..sorted.len().saturating_sub(1))
            .rev()
            .find(|&i| sorted[i] < sorted[i + 1])
        else {
            return out;
        };
        let j = (i + 1..sorted.len())
            .rev()
            .find(|&j| sorted[j] > sorted[i])
            .expect("exists");
        sorted.swap(i, j);
        sorted[i + 1..].reverse();
        out.push(sorted.clone());
    }
}

/// The orbit sum `m_mu`.
pub fn orbit_monomial(mu: &Partition, n: usize) -> Result<LaurentPoly<VPoly>> {
    LaurentPoly::from_terms(n, orbit(mu, n)?.into_iter().map(|e| (e, VPoly::one())))
}

/// `nu <= mu` in the `C_n` dominance order (reflexive).
pub fn dominance_leq(nu: &Partition, mu: &Partition, n: usize) -> Result<bool> {
    let nu = nu.padded(n)?;
    let mu = mu.padded(n)?;
    let mut partial: i64 = 0;
    for i in 0..n {
        partial += mu[i] as i64 - nu[i] as i64;
        if i + 1 < n && partial < 0 {
            return Ok(false);
        }
    }
    Ok(partial >= 0 && partial % 2 == 0)
}

/// Partitions with at most `n` parts, all parts at most `max_part`, and
/// size at most `max_size`.
pub fn partitions_bounded(n: usize, max_part: usize, max_size: usize) -> Vec<Partition> {
    fn go(
        n: usize,
        max_part: usize,
        budget: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Partition>,
    ) {
        out.push(Partition::new(prefix.clone()).expect("decreasing by construction"));
        if prefix.len() == n {
            return;
        }
        for p in 1..=max_part.min(budget) {
            prefix.push(p);
            go(n, p, budget - p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, max_part, max_size, &mut Vec::new(), &mut out);
    out
}

/// Size descending, then lexicographically descending. A linear extension
/// of the dominance order, greatest first.
pub fn graded_order(a: &Partition, b: &Partition) -> Ordering {
    b.size().cmp(&a.size()).then_with(|| b.parts.cmp(&a.parts))
}

/// All `nu < mu` (strict), in [`graded_order`].
pub fn lower_partitions(mu: &Partition, n: usize) -> Result<Vec<Partition>> {
    mu.padded(n)?;
    let max_part = mu.parts.first().copied().unwrap_or(0);
    let mut out = Vec::new();
    for nu in partitions_bounded(n, max_part, mu.size()) {
        if nu != *mu && dominance_leq(&nu, mu, n)? {
            out.push(nu);
        }
    }
    out.sort_by(graded_order);
    Ok(out)
}

/// Element of `W(C_n)`: `(w y)_i = y_{perm[i]}^{signs[i]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
    pub signs: Vec<i64>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    /// Image of an exponent vector under the induced action on monomials:
    /// `w(y^e) = y^{w e}`.
    pub fn act_on_exponent(&self, e: &[i64]) -> Exponent {
        let mut out = vec![0; e.len()];
        for i in 0..e.len() {
            out[self.perm[i]] += self.signs[i] * e[i];
        }
        out
    }

    pub fn act<C: Coeff>(&self, p: &LaurentPoly<C>) -> LaurentPoly<C> {
        p.map_exponents(|e| self.act_on_exponent(e))
    }
}

/// All `2^n n!` signed permutations.
pub fn weyl_group_c(n: usize) -> Vec<SignedPermutation> {
    let mut out = Vec::new();
    for perm in symmetric_group(n) {
        for mask in 0u64..(1 << n) {
            let signs = (0..n)
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            out.push(SignedPermutation {
                perm: perm.clone(),
                signs,
            });
        }
    }
    out
}

/// All `n!` permutations of `0..n`.
pub fn symmetric_group(n: usize) -> Vec<Vec<usize>> {
    let base: Vec<i64> = (0..n as i64).collect();
    distinct_permutations(&base)
        .into_iter()
        .map(|p| p.into_iter().map(|x| x as usize).collect())
        .collect()
}

/// Invariance under the generators of `W(C_n)`: adjacent swaps and the
/// inversion of the last variable.
pub fn is_weyl_invariant<C: Coeff>(p: &LaurentPoly<C>) -> bool {
    let n = p.n();
    if n == 0 {
        return true;
    }
    if p.invert_variable(n - 1).ok().as_ref() != Some(p) {
        return false;
    }
    (0..n - 1).all(|i| p.swap_variables(i, i + 1).ok().as_ref() == Some(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(part(&[2, 0, 0]), part(&[2]));
        assert!(part(&[1, 1]).padded(1).is_err());
        assert_eq!(serde_json::to_string(&part(&[3, 1])).unwrap(), "[3,1]");
        assert!(serde_json::from_str::<Partition>("[1,3]").is_err());
    }

    #[test]
    fn orbit_monomial_examples() {
        assert_eq!(
            orbit_monomial(&Partition::empty(), 3).unwrap(),
            LaurentPoly::one(3)
        );
        let m1 = orbit_monomial(&part(&[1]), 2).unwrap();
        let expect = LaurentPoly::from_terms(
            2,
            [vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]
                .into_iter()
                .map(|e| (e, VPoly::one())),
        )
        .unwrap();
        assert_eq!(m1, expect);
        let m11 = orbit_monomial(&part(&[1, 1]), 2).unwrap();
        assert_eq!(m11.len(), 4);
        assert!(m11
            .terms()
            .all(|(e, c)| e.iter().all(|a| a.abs() == 1) && *c == VPoly::one()));
    }

    #[test]
    fn orbit_monomials_are_invariant_under_whole_group() {
        for n in 1..=3 {
            let group = weyl_group_c(n);
            assert_eq!(group.len(), (1..=n).product::<usize>() << n);
            for mu in partitions_bounded(n, 3, 4) {
                let m = orbit_monomial(&mu, n).unwrap();
                assert!(is_weyl_invariant(&m));
                for w in &group {
                    assert_eq!(w.act(&m), m);
                }
            }
        }
    }

    fn factorial(n: usize) -> usize {
        (1..=n).product()
    }

    #[test]
    fn orbit_sizes_match_formula() {
        for n in 1..=4 {
            for mu in partitions_bounded(n, 4, 4) {
                let parts = mu.padded(n).unwrap();
                let nonzero = parts.iter().filter(|&&p| p != 0).count();
                let mut mult = std::collections::BTreeMap::new();
                for p in &parts {
                    *mult.entry(*p).or_insert(0usize) += 1;
                }
                let denom: usize = mult.values().map(|&m| factorial(m)).product();
                let expected = (1usize << nonzero) * factorial(n) / denom;
                assert_eq!(orbit(&mu, n).unwrap().len(), expected, "{mu} n={n}");
            }
        }
    }

    /// Cone membership by searching non-negative root coefficients.
    fn in_cone_brute_force(nu: &Partition, mu: &Partition, n: usize) -> bool {
        let d: Vec<i64> = mu
            .padded(n)
            .unwrap()
            .iter()
            .zip(nu.padded(n).unwrap())
            .map(|(a, b)| *a as i64 - b as i64)
            .collect();
        let bound = 8i64;
        let mut c = vec![0i64; n];
        loop {
            let mut v = vec![0i64; n];
            for i in 0..n {
                if i + 1 < n {
                    v[i] += c[i];
                    v[i + 1] -= c[i];
                } else {
                    v[i] += 2 * c[i];
                }
            }
            if v == d {
                return true;
            }
            let mut j = 0;
            loop {
                if j == n {
                    return false;
                }
                c[j] += 1;
                if c[j] <= bound {
                    break;
                }
                c[j] = 0;
                j += 1;
            }
        }
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_leq(&part(&[0, 0]), &part(&[2, 0]), 2).unwrap());
        assert!(!dominance_leq(&part(&[1, 0]), &part(&[2, 0]), 2).unwrap());
        assert!(dominance_leq(&part(&[1, 1]), &part(&[2, 0]), 2).unwrap());
        assert!(in_cone_brute_force(&part(&[1, 1]), &part(&[2, 0]), 2));
    }

    #[test]
    fn dominance_matches_brute_force_cone() {
        for n in 1..=3 {
            let all = partitions_bounded(n, 6, 6);
            for a in &all {
                for b in &all {
                    assert_eq!(
                        dominance_leq(a, b, n).unwrap(),
                        in_cone_brute_force(a, b, n),
                        "{a} <= {b}, n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn dominance_is_a_partial_order() {
        for n in 1..=3 {
            let all = partitions_bounded(n, 6, 6);
            let leq = |a: &Partition, b: &Partition| dominance_leq(a, b, n).unwrap();
            for a in &all {
                assert!(leq(a, a));
                for b in &all {
                    if leq(a, b) && leq(b, a) {
                        assert_eq!(a, b);
                    }
                    for c in &all {
                        if leq(a, b) && leq(b, c) {
                            assert!(leq(a, c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn graded_order_extends_dominance() {
        for n in 1..=3 {
            let all = partitions_bounded(n, 5, 5);
            for a in &all {
                for b in &all {
                    if a != b && dominance_leq(a, b, n).unwrap() {
                        assert_eq!(graded_order(b, a), Ordering::Less);
                    }
                }
            }
        }
    }

    #[test]
    fn lower_partition_examples() {
        for n in 1..=4 {
            assert!(lower_partitions(&part(&[1]), n).unwrap().is_empty());
            assert!(lower_partitions(&Partition::empty(), n).unwrap().is_empty());
        }
        assert_eq!(
            lower_partitions(&part(&[2]), 2).unwrap(),
            vec![part(&[1, 1]), Partition::empty()]
        );
    }

    #[test]
    fn lower_partitions_match_exhaustive_scan() {
        for n in 1..=3 {
            for mu in partitions_bounded(n, 4, 4) {
                let scan: BTreeSet<Partition> = partitions_bounded(n, 10, 10)
                    .into_iter()
                    .filter(|nu| *nu != mu && in_cone_brute_force(nu, &mu, n))
                    .collect();
                let got: BTreeSet<Partition> =
                    lower_partitions(&mu, n).unwrap().into_iter().collect();
                assert_eq!(got, scan, "{mu} n={n}");
            }
        }
    }

    #[test]
    fn invariance_detector() {
        let y1: LaurentPoly = LaurentPoly::var(2, 0);
        assert!(!is_weyl_invariant(&y1));
        let s = &y1 + &y1.invert_variable(0).unwrap();
        assert!(!is_weyl_invariant(&s));
        assert!(is_weyl_invariant(
            &orbit_monomial(&part(&[2, 1]), 2).unwrap()
        ));
    }
}

//! Floating-point contour integration of the 1-form
//!
//! ```text
//! Phi = x^lambda prod_j 1 / ((y_j/x; q)_k (y_j^{-1}/x; q)_k) dx/x
//! ```
//!
//! and pointwise application of the difference operator. These routines do
//! not touch the exact layer; they corroborate it.
//!
//! Integrals are `(1/2 pi i)` times the contour integral over the circle
//! `|x| = radius`, computed with the trapezoid rule. For rational integrands
//! on a circle clear of the poles the error decays geometrically in the
//! node count.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::onerow::{cycle_integral_polynomial, integral_normalization, residue_total};
use crate::operator::sign_vectors;
use crate::qfield::{poch_complex, Coeff};

pub const MIN_NODES: usize = 64;
pub const MAX_NODES: usize = 1 << 16;
pub const CONVERGENCE_TOL: f64 = 1e-10;
/// Default contour radius is `(1 + DEFAULT_MARGIN)` times the largest pole
/// modulus.
pub const DEFAULT_MARGIN: f64 = 0.1;
pub const POLE_GUARD: f64 = 1e-9;

/// Parameters of the 1-form with its pole set.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiSpec {
    lambda: usize,
    k: u32,
    q: f64,
    y: Vec<Complex64>,
    poles: Vec<Complex64>,
}

impl PhiSpec {
    pub fn new(lambda: usize, k: u32, q: f64, y: Vec<Complex64>) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidArgument(format!("q = {q} outside (0, 1)")));
        }
        if k == 0 || y.is_empty() {
            return Err(Error::InvalidArgument(
                "need k >= 1 and at least one variable".into(),
            ));
        }
        if let Some(j) = y.iter().position(|z| z.norm() == 0.0 || !z.is_finite()) {
            return Err(Error::ZeroVariable(j + 1));
        }
        let mut poles = Vec::with_capacity(2 * k as usize * y.len());
        for z in &y {
            for m in 0..k as i32 {
                let qm = q.powi(m);
                poles.push(z * qm);
                poles.push(qm / z);
            }
        }
        Ok(Self {
            lambda,
            k,
            q,
            y,
            poles,
        })
    }

    /// Random point with `|y_j|` in `[0.7, 1.4]`, resampled until distinct
    /// poles are at least `1e-3` apart.
    pub fn sample<R: Rng>(lambda: usize, n: usize, k: u32, q: f64, rng: &mut R) -> Result<Self> {
        loop {
            let spec = Self::new(lambda, k, q, sample_y(rng, n))?;
            if spec.min_pole_separation() >= 1e-3 {
                return Ok(spec);
            }
        }
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn y(&self) -> &[Complex64] {
        &self.y
    }

    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    pub fn with_y(&self, y: Vec<Complex64>) -> Result<Self> {
        Self::new(self.lambda, self.k, self.q, y)
    }

    pub fn max_pole_modulus(&self) -> f64 {
        self.poles.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    pub fn min_pole_modulus(&self) -> f64 {
        self.poles
            .iter()
            .map(|p| p.norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_pole_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (a, p) in self.poles.iter().enumerate() {
            for r in &self.poles[a + 1..] {
                best = best.min((p - r).norm());
            }
        }
        best
    }

    pub fn default_radius(&self) -> f64 {
        (1.0 + DEFAULT_MARGIN) * self.max_pole_modulus()
    }

    fn check_clear_of_poles(&self, x: Complex64) -> Result<()> {
        if self.poles.iter().any(|p| (x - p).norm() < POLE_GUARD) {
            return Err(Error::PoleProximity {
                what: format!("integrand at x = {x}"),
                guard: POLE_GUARD,
            });
        }
        Ok(())
    }

    /// Coefficient of `dx`: `x^{lambda-1} prod_j 1/((y_j/x;q)_k (y_j^{-1}/x;q)_k)`.
    pub fn integrand(&self, x: Complex64) -> Result<Complex64> {
        self.check_clear_of_poles(x)?;
        let k = self.k as usize;
        let mut den = Complex64::new(1.0, 0.0);
        for z in &self.y {
            den *= poch_complex(z / x, self.q, k) * poch_complex(1.0 / (z * x), self.q, k);
        }
        Ok(x.powi(self.lambda as i32 - 1) / den)
    }
}

pub fn sample_y<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            Complex64::from_polar(
                rng.gen_range(0.7..=1.4),
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect()
}

/// Result of a circle quadrature.
#[derive(Clone, Debug, Serialize)]
pub struct Quadrature {
    pub value: Complex64,
    pub nodes_used: usize,
    pub radius: f64,
    /// `(nodes, value)` for each refinement level.
    pub history: Vec<(usize, Complex64)>,
}

fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// `(1/2 pi i) ∮ f(x) dx` on `|x| = radius` by trapezoid rule, doubling the
/// node count until two successive values agree to [`CONVERGENCE_TOL`].
///
/// Agreement is measured relative to the larger of the value and the mean
/// of `|f(x) x|`, since cancellation below that scale is not resolvable.
pub fn integrate_on_circle<F>(f: F, radius: f64, nodes: usize) -> Result<Quadrature>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius {radius}")));
    }
    if nodes < MIN_NODES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_NODES} nodes, got {nodes}"
        )));
    }
    // samples of f(x) x at angles (2j + offset) pi / count
    let sample = |count: usize, step: usize, offset: usize| -> Result<(Complex64, f64)> {
        let vals: Vec<Complex64> = (0..count)
            .into_par_iter()
            .map(|j| {
                let theta =
                    std::f64::consts::TAU * (step * j + offset) as f64 / (step * count) as f64;
                let x = Complex64::from_polar(radius, theta);
                Ok(f(x)? * x)
            })
            .collect::<Result<_>>()?;
        let mean = pairwise_sum(&vals) / count as f64;
        let scale = vals.iter().map(|v| v.norm()).sum::<f64>() / count as f64;
        Ok((mean, scale))
    };

    let (mut value, mut scale) = sample(nodes, 1, 0)?;
    let mut count = nodes;
    let mut history = vec![(count, value)];
    while count < MAX_NODES {
        let (odd, odd_scale) = sample(count, 2, 1)?;
        let next = (value + odd) * 0.5;
        scale = 0.5 * (scale + odd_scale);
        count *= 2;
        history.push((count, next));
        let diff = (next - value).norm();
        log::debug!("quadrature nodes={count} value={next} change={diff:e}");
        let previous = value;
        value = next;
        if diff <= CONVERGENCE_TOL * next.norm().max(scale) {
            return Ok(Quadrature {
                value,
                nodes_used: count,
                radius,
                history,
            });
        }
        if count >= MAX_NODES {
            return Err(Error::NoConvergence {
                nodes: count,
                last: value,
                previous,
            });
        }
    }
    Err(Error::NoConvergence {
        nodes: count,
        last: value,
        previous: value,
    })
}

/// `(1/2 pi i) ∮ Phi` on `|x| = radius` (default: enclosing every pole).
pub fn contour_integral(spec: &PhiSpec, radius: Option<f64>, nodes: usize) -> Result<Quadrature> {
    let radius = radius.unwrap_or_else(|| spec.default_radius());
    integrate_on_circle(|x| spec.integrand(x), radius, nodes)
}

/// Coefficient of the `a`-th summand of the operator at `y`.
fn operator_coefficient(signs: &[i8], t: f64, y: &[Complex64]) -> Result<Complex64> {
    let n = y.len();
    let p: Vec<Complex64> = (0..n).map(|i| y[i].powi(signs[i] as i32)).collect();
    let mut c = Complex64::new(1.0, 0.0);
    let mut guarded = |num: Complex64, den: Complex64| -> Result<()> {
        let d = 1.0 - den;
        if d.norm() < POLE_GUARD {
            return Err(Error::PoleProximity {
                what: "operator coefficient".into(),
                guard: POLE_GUARD,
            });
        }
        c *= (1.0 - t * num) / d;
        Ok(())
    };
    for i in 0..n {
        for j in i + 1..n {
            guarded(p[i] * p[j], p[i] * p[j])?;
        }
    }
    for z in &p {
        guarded(z * z, z * z)?;
    }
    Ok(c)
}

/// `(E F)(y)` for a numeric function `F`, shifting `y_i -> q^{±1/2} y_i`.
pub fn numeric_apply_e<F>(f: F, k: u32, q: f64, y: &[Complex64]) -> Result<Complex64>
where
    F: Fn(&[Complex64]) -> Result<Complex64>,
{
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidArgument(format!("q = {q} outside (0, 1)")));
    }
    let t = q.powi(k as i32);
    let half = q.sqrt();
    let mut total = Complex64::new(0.0, 0.0);
    for signs in sign_vectors(y.len()) {
        let coeff = operator_coefficient(&signs, t, y)?;
        let shifted: Vec<Complex64> = y
            .iter()
            .zip(&signs)
            .map(|(z, &s)| if s > 0 { z * half } else { z / half })
            .collect();
        total += coeff * f(&shifted)?;
    }
    Ok(total)
}

/// Both sides of the change-of-variable relation
/// `∮ Phi = q^{-lambda} ∮ prod_i (1 - y_i/x)(1 - y_i^{-1}/x) / ((1 - t y_i/x)(1 - t y_i^{-1}/x)) Phi`.
#[derive(Clone, Debug, Serialize)]
pub struct ShiftCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub relative_difference: f64,
    pub pass: bool,
}

pub const SHIFT_TOL: f64 = 1e-8;

pub fn verify_shift_identity(
    spec: &PhiSpec,
    radius: Option<f64>,
    nodes: usize,
) -> Result<ShiftCheck> {
    let radius = radius.unwrap_or_else(|| spec.default_radius());
    let t = spec.q.powi(spec.k as i32);
    let scale = spec.q.powi(-(spec.lambda as i32));
    let lhs = integrate_on_circle(|x| spec.integrand(x), radius, nodes)?.value;
    let rhs = integrate_on_circle(
        |x| {
            let mut factor = Complex64::new(scale, 0.0);
            for z in &spec.y {
                let (a, b) = (z / x, 1.0 / (z * x));
                factor *= (1.0 - a) * (1.0 - b) / ((1.0 - t * a) * (1.0 - t * b));
            }
            Ok(factor * spec.integrand(x)?)
        },
        radius,
        nodes,
    )?
    .value;
    let relative_difference = relative_diff(lhs, rhs);
    Ok(ShiftCheck {
        lhs,
        rhs,
        relative_difference,
        pass: relative_difference < SHIFT_TOL,
    })
}

pub fn relative_diff(a: Complex64, b: Complex64) -> f64 {
    let d = (a - b).norm();
    if d == 0.0 {
        0.0
    } else {
        d / a.norm().max(b.norm())
    }
}

/// The contour integral compared with the closed-form polynomial and with
/// the sum of residue closed forms.
#[derive(Clone, Debug, Serialize)]
pub struct ClosedFormComparison {
    pub integral: Quadrature,
    /// `normalization * P(y)`.
    pub polynomial_value: Complex64,
    pub residue_sum: Complex64,
    pub residual_vs_polynomial: f64,
    pub residual_vs_residues: f64,
}

pub fn compare_with_closed_forms(
    spec: &PhiSpec,
    radius: Option<f64>,
    nodes: usize,
) -> Result<ClosedFormComparison> {
    let integral = contour_integral(spec, radius, nodes)?;
    let poly = cycle_integral_polynomial(spec.lambda, spec.n(), spec.k)?;
    let polynomial_value = poly.eval_numeric(spec.q, &spec.y)?;
    let residue_sum = residue_total(spec.lambda, spec.k, spec.q, &spec.y)?;
    Ok(ClosedFormComparison {
        residual_vs_polynomial: relative_diff(integral.value, polynomial_value),
        residual_vs_residues: relative_diff(integral.value, residue_sum),
        integral,
        polynomial_value,
        residue_sum,
    })
}

/// `normalization(lambda, k)` evaluated at `q`.
pub fn normalization_value(lambda: usize, k: u32, q: f64) -> Result<Complex64> {
    Ok(integral_normalization(lambda, k)?.eval(Complex64::new(q.sqrt(), 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::onerow::one_row_polynomial;
    use crate::qfield::eigenvalue_c;
    use crate::weyl::Partition;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn spec_validation() {
        assert!(PhiSpec::new(0, 1, 1.5, vec![c(2.0)]).is_err());
        assert!(PhiSpec::new(0, 1, 0.0, vec![c(2.0)]).is_err());
        assert!(PhiSpec::new(0, 1, 0.5, vec![c(0.0)]).is_err());
        assert!(PhiSpec::new(0, 0, 0.5, vec![c(2.0)]).is_err());
        let s = PhiSpec::new(0, 2, 0.5, vec![c(2.0)]).unwrap();
        assert_eq!(s.poles().len(), 4);
        assert!((s.max_pole_modulus() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn integrand_examples() {
        // large |x|: the Pochhammer factors tend to 1
        let s = PhiSpec::new(0, 2, 0.3, vec![c(1.2), Complex64::new(0.3, 0.9)]).unwrap();
        let x = c(1e7);
        assert!((s.integrand(x).unwrap() * x - 1.0).norm() < 1e-6);

        let y = Complex64::new(1.3, -0.2);
        let s = PhiSpec::new(0, 1, 0.4, vec![y]).unwrap();
        let x = Complex64::new(0.4, 0.7);
        let direct = x / ((x - y) * (x - 1.0 / y));
        assert!((s.integrand(x).unwrap() - direct).norm() < 1e-14);
        assert!(matches!(s.integrand(y), Err(Error::PoleProximity { .. })));

        let a = PhiSpec::new(2, 2, 0.4, vec![c(1.1), Complex64::new(0.2, 0.8)]).unwrap();
        let b = PhiSpec::new(2, 2, 0.4, vec![Complex64::new(0.2, 0.8), c(1.1)]).unwrap();
        let x = Complex64::new(-0.3, 1.9);
        assert!((a.integrand(x).unwrap() - b.integrand(x).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn two_pole_integral_is_one() {
        // residues of x / ((x - 2)(x - 1/2)) at 2 and 1/2 sum to 1
        let s = PhiSpec::new(0, 1, 0.3, vec![c(2.0)]).unwrap();
        let y = c(2.0);
        let hand = y / (y - 1.0 / y) + (1.0 / y) / (1.0 / y - y);
        assert!((hand - 1.0).norm() < 1e-15);
        let at3 = contour_integral(&s, Some(3.0), MIN_NODES).unwrap();
        let at5 = contour_integral(&s, Some(5.0), MIN_NODES).unwrap();
        assert!((at3.value - 1.0).norm() < 1e-10);
        assert!((at3.value - at5.value).norm() < 1e-10);
    }

    #[test]
    fn argument_checks() {
        let s = PhiSpec::new(0, 1, 0.3, vec![c(2.0)]).unwrap();
        assert!(contour_integral(&s, Some(3.0), 32).is_err());
        assert!(contour_integral(&s, Some(-1.0), 64).is_err());
    }

    #[test]
    fn radius_independence() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let s = PhiSpec::sample(2, 2, 2, 0.3, &mut rng).unwrap();
            let a = contour_integral(&s, None, MIN_NODES).unwrap().value;
            let b = contour_integral(&s, Some(2.0 * s.default_radius()), MIN_NODES)
                .unwrap()
                .value;
            assert!(relative_diff(a, b) < 1e-10);
        }
    }

    #[test]
    fn matches_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let s = PhiSpec::sample(2, 2, 2, 0.3, &mut rng).unwrap();
            let cmp = compare_with_closed_forms(&s, None, MIN_NODES).unwrap();
            assert!(cmp.residual_vs_polynomial < 1e-8);
            assert!(cmp.residual_vs_residues < 1e-8);
            let p = one_row_polynomial(2, 2, 2)
                .unwrap()
                .eval_numeric(0.3, s.y())
                .unwrap();
            let ratio = cmp.integral.value / p;
            assert!(relative_diff(ratio, normalization_value(2, 2, 0.3).unwrap()) < 1e-8);
        }
    }

    #[test]
    fn numeric_operator_on_constants() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=3 {
            for k in 1..=2 {
                let q = 0.45;
                let y = sample_y(&mut rng, n);
                let got = numeric_apply_e(|_| Ok(c(1.0)), k, q, &y).unwrap();
                let t = q.powi(k as i32);
                let want: f64 = (1..=n).map(|i| 1.0 + t.powi(i as i32)).product();
                assert!((got - want).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn numeric_operator_on_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (lambda, n, k, q) = (3, 2, 2, 0.3f64);
        let p = one_row_polynomial(lambda, n, k).unwrap();
        let eig = eigenvalue_c(&Partition::row(lambda), n, k)
            .unwrap()
            .eval(c(q.sqrt()));
        for _ in 0..5 {
            let y = sample_y(&mut rng, n);
            let lhs = numeric_apply_e(|z| p.eval_numeric(q, z), k, q, &y).unwrap();
            let rhs = eig * p.eval_numeric(q, &y).unwrap();
            assert!(relative_diff(lhs, rhs) < 1e-9);
        }
    }

    #[test]
    fn shift_identity_and_negative_control() {
        let s = PhiSpec::new(1, 1, 0.5, vec![c(1.3)]).unwrap();
        assert!(verify_shift_identity(&s, None, MIN_NODES).unwrap().pass);
        let s0 = PhiSpec::new(0, 2, 0.4, vec![Complex64::new(0.9, 0.5)]).unwrap();
        let chk = verify_shift_identity(&s0, None, MIN_NODES).unwrap();
        assert!(chk.pass, "{chk:?}");
        let inside = 0.9 * s.min_pole_modulus();
        let bad = verify_shift_identity(&s, Some(inside), MIN_NODES).unwrap();
        assert!(!bad.pass);
    }

    #[test]
    fn quadrature_converges_geometrically() {
        // contour close to the poles so the decay is visible over several levels
        let s = PhiSpec::new(2, 2, 0.3, vec![Complex64::new(1.25, 0.3), c(0.9)]).unwrap();
        let radius = 1.02 * s.max_pole_modulus();
        let reference = cycle_integral_polynomial(2, 2, 2)
            .unwrap()
            .eval_numeric(0.3, s.y())
            .unwrap();
        let q = contour_integral(&s, Some(radius), MIN_NODES).unwrap();
        let errs: Vec<f64> = q
            .history
            .iter()
            .map(|(_, v)| (v - reference).norm() / reference.norm())
            .filter(|e| *e > 1e-12)
            .collect();
        assert!(errs.len() >= 3, "{errs:?}");
        // geometric decay squares the error per doubling; a power law would
        // only divide it by a constant
        for w in errs.windows(2) {
            assert!(w[1].ln() < 1.5 * w[0].ln(), "{errs:?}");
        }
    }

    #[test]
    fn pairwise_summation_is_deterministic() {
        let s = PhiSpec::new(3, 2, 0.3, vec![Complex64::new(1.1, 0.4), c(0.8)]).unwrap();
        let a = contour_integral(&s, None, 256).unwrap();
        let b = contour_integral(&s, None, 256).unwrap();
        assert_eq!(a.value, b.value);
    }
}

//! The interpolation `f(t) = σ₂(tΛ_α + (1−t)A₀)` behind the shifted-cone dichotomy,
//! plus the pinching, Einstein-constant and splitting arithmetic for the kernel-2 case.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::symcone::{dichotomy_check, elementary_symmetric, shift_threshold, Dichotomy, Geometry, Spectrum};

/// `|Σ_{i≤k} λ_i|` below which the closed form for `f''(0)` is accepted.
pub const HYPOTHESIS_TOLERANCE: f64 = 1e-10;
/// Spacing for finite differences in `t`.
pub const T_STEP: f64 = 1e-4;

/// A spectrum rescaled to total `N − k`, with the reference endpoint for index `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationProblem {
    lambda: Vec<f64>,
    k: usize,
    alpha: f64,
    a: f64,
    b: f64,
    scale: f64,
}

impl InterpolationProblem {
    /// Rescales by `(N − k)/T`; `T ≤ 0` is rejected.
    pub fn new(spectrum: &Spectrum, k: usize) -> Result<Self> {
        let n = spectrum.len();
        if n < 3 {
            return Err(Error::Domain(format!("spectrum length {n} leaves no admissible k")));
        }
        check_range("k", k, 1, n - 2)?;
        let total = spectrum.total();
        if !(total > 0.0) {
            return Err(Error::Domain(format!("eigenvalue sum {total} must be positive to normalize")));
        }
        let target = (n - k) as f64;
        let scale = target / total;
        let lambda: Vec<f64> = spectrum.values().iter().map(|v| v * scale).collect();
        let alpha = shift_threshold(n, k, Geometry::Riemannian)?.alpha;
        let a = -alpha * target;
        Ok(Self {
            lambda,
            k,
            alpha,
            a,
            b: a + 1.0,
            scale,
        })
    }

    pub fn size(&self) -> usize {
        self.lambda.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Normalized eigenvalues, ascending.
    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Factor applied to the input spectrum.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `(a, b)` of the reference endpoint.
    pub fn endpoint_levels(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// `A₀ = (a, …, a, b, …, b)` with `k` copies of `a`.
    pub fn endpoint(&self) -> Vec<f64> {
        let n = self.size();
        (0..n).map(|i| if i < self.k { self.a } else { self.b }).collect()
    }

    /// `Λ_α = Λ − α(N − k)·1` (the normalized total is `N − k`).
    pub fn shifted(&self) -> Vec<f64> {
        let off = self.alpha * (self.size() - self.k) as f64;
        self.lambda.iter().map(|v| v - off).collect()
    }

    fn head_sum(&self) -> f64 {
        self.lambda[..self.k].iter().sum()
    }

    /// `Λ_α` lies in the closed cone `Γ̄₂⁺`, up to `tolerance`.
    pub fn certified(&self, tolerance: f64) -> bool {
        let s = self.shifted();
        let s1: f64 = s.iter().sum();
        let s2 = elementary_symmetric(&s, 2).unwrap_or(f64::NEG_INFINITY);
        s1 >= -tolerance && s2 >= -tolerance
    }
}

pub fn f_value(p: &InterpolationProblem, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} is outside [0, 1]")));
    }
    let point: Vec<f64> = p
        .shifted()
        .iter()
        .zip(p.endpoint())
        .map(|(l, a)| t * l + (1.0 - t) * a)
        .collect();
    elementary_symmetric(&point, 2)
}

/// `f'(0) = λ₁ + ⋯ + λ_k`.
pub fn f_prime_zero(p: &InterpolationProblem) -> f64 {
    p.head_sum()
}

/// `f''(0) = −Σ_{i≤k} λ_i² − Σ_{j>k} (λ_j − 1)²`, stated under `λ₁ + ⋯ + λ_k = 0`.
pub fn f_double_prime_zero(p: &InterpolationProblem) -> Result<f64> {
    let head = p.head_sum();
    if head.abs() > HYPOTHESIS_TOLERANCE {
        return Err(Error::Hypothesis(format!(
            "closed form for f''(0) needs λ₁ + ⋯ + λ_k = 0, got {head:.3e}"
        )));
    }
    let k = p.k;
    let h: f64 = p.lambda[..k].iter().map(|l| l * l).sum();
    let t: f64 = p.lambda[k..].iter().map(|l| (l - 1.0) * (l - 1.0)).sum();
    Ok(-h - t)
}

/// Second-order one-sided difference `(−3f(0) + 4f(h) − f(2h)) / 2h`.
pub fn fd_first_derivative(p: &InterpolationProblem, h: f64) -> Result<f64> {
    let (f0, f1, f2) = (f_value(p, 0.0)?, f_value(p, h)?, f_value(p, 2.0 * h)?);
    Ok((-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h))
}

/// `(f(0) − 2f(h) + f(2h)) / h²`; exact for the quadratic `f` up to roundoff.
pub fn fd_second_derivative(p: &InterpolationProblem, h: f64) -> Result<f64> {
    let (f0, f1, f2) = (f_value(p, 0.0)?, f_value(p, h)?, f_value(p, 2.0 * h)?);
    Ok((f0 - 2.0 * f1 + f2) / (h * h))
}

/// Fits a quadratic through `t = 0, ½, 1` and returns its error at `t`.
pub fn quadratic_fit_residual(p: &InterpolationProblem, t: f64) -> Result<f64> {
    let (y0, y1, y2) = (f_value(p, 0.0)?, f_value(p, 0.5)?, f_value(p, 1.0)?);
    let l0 = (t - 0.5) * (t - 1.0) / 0.5;
    let l1 = t * (t - 1.0) / -0.25;
    let l2 = t * (t - 0.5) / 0.5;
    Ok(f_value(p, t)? - (y0 * l0 + y1 * l1 + y2 * l2))
}

/// Sectional bounds for the pinched Einstein quotient: `((1 − 4/n)a, a)` in the
/// Riemannian case, `((1 − 2/n)a, a)` for holomorphic bisectional curvature.
pub fn pinching_bounds(n: usize, a: f64, kind: Geometry) -> Result<(f64, f64)> {
    check_positive(a)?;
    let nf = check_dimension(n, kind)? as f64;
    let c = match kind {
        Geometry::Riemannian => 4.0,
        Geometry::Kahler => 2.0,
    };
    Ok(((1.0 - c / nf) * a, a))
}

/// `(n² − n − 4)a/n`, or `a(n − 2/n)` for Kähler.
pub fn einstein_constant(n: usize, a: f64, kind: Geometry) -> Result<f64> {
    check_positive(a)?;
    let nf = check_dimension(n, kind)? as f64;
    Ok(match kind {
        Geometry::Riemannian => (nf * nf - nf - 4.0) * a / nf,
        Geometry::Kahler => a * (nf - 2.0 / nf),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Splitting {
    pub product: usize,
    pub admissible: bool,
}

/// `m(n − m)` for a product splitting and whether it fits the kernel-2 budget
/// (at most 2 real, 1 Kähler).
pub fn splitting_bound(n: usize, m: usize, kind: Geometry) -> Result<Splitting> {
    if n < 2 {
        return Err(Error::Range {
            what: "n",
            value: n as i64,
            lo: 2,
            hi: i64::MAX,
        });
    }
    check_range("m", m, 1, n - 1)?;
    let product = m * (n - m);
    let budget = match kind {
        Geometry::Riemannian => 2,
        Geometry::Kahler => 1,
    };
    Ok(Splitting {
        product,
        admissible: product <= budget,
    })
}

fn check_positive(a: f64) -> Result<()> {
    if a.is_finite() && a > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("a must be positive, got {a}")))
    }
}

fn check_dimension(n: usize, kind: Geometry) -> Result<usize> {
    let lo = match kind {
        Geometry::Riemannian => 3,
        Geometry::Kahler => 2,
    };
    if n < lo {
        return Err(Error::Range {
            what: "n",
            value: n as i64,
            lo: lo as i64,
            hi: i64::MAX,
        });
    }
    Ok(n)
}

/// Worst-case statistics over a batch of random certified problems.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub size: usize,
    pub k: usize,
    pub problems: usize,
    /// Problems that satisfied the `f''` hypothesis (degenerate constructions).
    pub hypothesis_problems: usize,
    pub max_f0: f64,
    pub max_first_derivative_error: f64,
    pub max_second_derivative_error: f64,
    pub min_f_on_grid: f64,
    pub max_quadratic_residual: f64,
    pub violations: usize,
    /// Certified problems with `f'(0) ≈ 0` whose spectrum missed the degenerate profile.
    pub profile_mismatches: usize,
}

impl BatchReport {
    pub fn passes(&self) -> bool {
        self.max_f0 <= 1e-12
            && self.max_first_derivative_error <= 1e-6
            && self.max_second_derivative_error <= 1e-5
            && self.min_f_on_grid >= -1e-10
            && self.max_quadratic_residual <= 1e-10
            && self.violations == 0
            && self.profile_mismatches == 0
    }
}

/// Random point of `Γ̄₂⁺` lifted to a spectrum whose `α_k`-shift is that point.
fn random_certified<G: Rng + ?Sized>(size: usize, alpha: f64, rng: &mut G) -> Vec<f64> {
    loop {
        let spread = rng.random_range(0.0..1.5);
        let mu: Vec<f64> = (0..size)
            .map(|_| 1.0 + spread * rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        let s1: f64 = mu.iter().sum();
        let s2 = elementary_symmetric(&mu, 2).unwrap_or(-1.0);
        if s1 > 0.0 && s2 >= 0.0 {
            // Σλ = T and λ − αT = μ give T = Σμ / (1 − αN).
            let t = s1 / (1.0 - alpha * size as f64);
            return mu.iter().map(|m| m + alpha * t).collect();
        }
    }
}

/// Zero head and equal tail, then a random positive rescaling.
fn random_degenerate<G: Rng + ?Sized>(size: usize, k: usize, rng: &mut G) -> Vec<f64> {
    let c = rng.random_range(0.1..10.0);
    (0..size).map(|i| if i < k { 0.0 } else { c }).collect()
}

/// Checks `count` random certified problems of operator size `size` at index `k`.
/// One in ten is a degenerate profile, which is where the `f''` hypothesis holds.
pub fn verify_batch<G: Rng + ?Sized>(size: usize, k: usize, count: usize, rng: &mut G) -> Result<BatchReport> {
    if size < 3 {
        return Err(Error::Domain(format!("operator size {size} leaves no admissible k")));
    }
    check_range("k", k, 1, size - 2)?;
    let alpha = shift_threshold(size, k, Geometry::Riemannian)?.alpha;
    let mut rep = BatchReport {
        size,
        k,
        min_f_on_grid: f64::INFINITY,
        ..BatchReport::default()
    };
    for idx in 0..count {
        let values = if idx % 10 == 0 {
            random_degenerate(size, k, rng)
        } else {
            random_certified(size, alpha, rng)
        };
        let p = InterpolationProblem::new(&Spectrum::new(values)?, k)?;
        rep.problems += 1;
        rep.max_f0 = rep.max_f0.max(f_value(&p, 0.0)?.abs());
        let fp = f_prime_zero(&p);
        rep.max_first_derivative_error = rep
            .max_first_derivative_error
            .max((fp - fd_first_derivative(&p, T_STEP)?).abs());
        if let Ok(fpp) = f_double_prime_zero(&p) {
            rep.hypothesis_problems += 1;
            rep.max_second_derivative_error = rep
                .max_second_derivative_error
                .max((fpp - fd_second_derivative(&p, T_STEP)?).abs());
        }
        for i in 0..=100 {
            rep.min_f_on_grid = rep.min_f_on_grid.min(f_value(&p, i as f64 / 100.0)?);
        }
        rep.max_quadratic_residual = rep
            .max_quadratic_residual
            .max(quadratic_fit_residual(&p, 0.3)?.abs());
        let spectrum = Spectrum::new(p.lambda().to_vec())?;
        if dichotomy_check(&spectrum, k, 1e-9)? == Dichotomy::Violation {
            rep.violations += 1;
        }
        if fp.abs() <= 1e-9 && !matches_degenerate_profile(p.lambda(), k, 1e-8) {
            rep.profile_mismatches += 1;
        }
    }
    Ok(rep)
}

/// First `k` entries zero and the rest equal (to `1` after normalization).
pub fn matches_degenerate_profile(lambda: &[f64], k: usize, tolerance: f64) -> bool {
    let tail = lambda[k];
    lambda[..k].iter().all(|l| l.abs() <= tolerance) && lambda[k..].iter().all(|l| (l - tail).abs() <= tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn problem(v: &[f64], k: usize) -> InterpolationProblem {
        InterpolationProblem::new(&Spectrum::new(v.to_vec()).unwrap(), k).unwrap()
    }

    #[test]
    fn endpoint_is_on_the_boundary() {
        for n in 3..=10 {
            for k in 1..=(n - 2) {
                let p = problem(&vec![1.0; n], k);
                assert_abs_diff_eq!(elementary_symmetric(&p.endpoint(), 2).unwrap(), 0.0, epsilon = 1e-12);
                assert_abs_diff_eq!(p.lambda().iter().sum::<f64>(), (n - k) as f64, epsilon = 1e-12);
                assert_abs_diff_eq!(f_value(&p, 0.0).unwrap(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_case_has_flat_f() {
        let p = problem(&[0.0, 0.0, 1.0, 1.0, 1.0, 1.0], 2);
        assert_eq!(f_prime_zero(&p), 0.0);
        assert_abs_diff_eq!(f_double_prime_zero(&p).unwrap(), 0.0);
        for t in [0.0, 0.3, 1.0] {
            assert_abs_diff_eq!(f_value(&p, t).unwrap(), 0.0, epsilon = 1e-12);
        }
        assert!(f_value(&p, 1.0).unwrap() >= -1e-12);
    }

    #[test]
    fn hypothesis_case_with_negative_head() {
        let p = problem(&[-0.5, 0.5, 1.0, 1.0, 1.0, 1.0], 2);
        assert_eq!(p.scale(), 1.0);
        assert_eq!(f_prime_zero(&p), 0.0);
        // −(0.25 + 0.25) − 0, by the closed form.
        assert_abs_diff_eq!(f_double_prime_zero(&p).unwrap(), -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(fd_second_derivative(&p, T_STEP).unwrap(), -0.5, epsilon = 1e-5);
        assert!(!p.certified(1e-12));
    }

    #[test]
    fn hypothesis_is_enforced() {
        let p = problem(&[0.2, 0.5, 1.0, 1.0, 1.3], 2);
        assert!(matches!(f_double_prime_zero(&p), Err(Error::Hypothesis(_))));
        assert_abs_diff_eq!(f_prime_zero(&p), fd_first_derivative(&p, T_STEP).unwrap(), epsilon = 1e-6);
    }

    #[test]
    fn argument_errors() {
        let p = problem(&[0.2, 0.5, 1.0, 1.0, 1.3], 2);
        assert!(f_value(&p, 1.5).is_err());
        assert!(f_value(&p, -0.1).is_err());
        let s = Spectrum::new(vec![-1.0, 0.0, 0.5]).unwrap();
        assert!(matches!(InterpolationProblem::new(&s, 1), Err(Error::Domain(_))));
        let s = Spectrum::new(vec![1.0; 4]).unwrap();
        assert!(matches!(InterpolationProblem::new(&s, 3), Err(Error::Range { .. })));
    }

    #[test]
    fn pinching_einstein_splitting_examples() {
        assert_eq!(pinching_bounds(5, 1.0, Geometry::Riemannian).unwrap(), (1.0 - 0.8, 1.0));
        assert_eq!(pinching_bounds(2, 1.0, Geometry::Kahler).unwrap(), (0.0, 1.0));
        assert_eq!(pinching_bounds(4, 3.0, Geometry::Riemannian).unwrap(), (0.0, 3.0));
        assert!(pinching_bounds(2, 1.0, Geometry::Riemannian).is_err());
        assert!(pinching_bounds(3, 0.0, Geometry::Riemannian).is_err());
        assert_eq!(einstein_constant(4, 1.0, Geometry::Riemannian).unwrap(), 2.0);
        assert_eq!(einstein_constant(2, 1.0, Geometry::Kahler).unwrap(), 1.0);
        for n in 3..12 {
            let a = 0.7;
            let nf = n as f64;
            assert_abs_diff_eq!(
                einstein_constant(n, a, Geometry::Riemannian).unwrap(),
                a * (nf - 1.0 - 4.0 / nf),
                epsilon = 1e-13
            );
        }
        assert_eq!(
            splitting_bound(3, 2, Geometry::Riemannian).unwrap(),
            Splitting { product: 2, admissible: true }
        );
        assert_eq!(
            splitting_bound(4, 2, Geometry::Riemannian).unwrap(),
            Splitting { product: 4, admissible: false }
        );
        assert_eq!(
            splitting_bound(2, 1, Geometry::Kahler).unwrap(),
            Splitting { product: 1, admissible: true }
        );
        assert!(splitting_bound(3, 3, Geometry::Riemannian).is_err());
        assert!(splitting_bound(3, 0, Geometry::Riemannian).is_err());
    }

    #[test]
    fn small_batch_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, k) in [(3, 1), (6, 2), (6, 4), (10, 3)] {
            let rep = verify_batch(n, k, 500, &mut rng).unwrap();
            assert!(rep.passes(), "{rep:?}");
            assert_eq!(rep.problems, 500);
            assert!(rep.hypothesis_problems >= 50);
        }
    }
}

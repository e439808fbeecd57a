//! Elementary symmetric functions and the (shifted) cones `Γ_j⁺`.
//!
//! A spectrum `Λ = (λ_1, …, λ_N)` lies in `Γ_j⁺` when `σ_1(Λ), …, σ_j(Λ)` are all
//! positive. The shifted point is `Λ_α = Λ − α·T·(1, …, 1)` with `T = Σ λ_i`, and the
//! thresholds
//!
//! ```text
//! α_k = 1/N − (1/N)·sqrt(k / ((N−1)(N−k)))
//! ```
//!
//! (with `N` replaced by `n²` in the Kähler case) are exactly the shifts that put the
//! profile `(0, …, 0, 1, …, 1)` with `k` zeros on the `σ_2 = 0` boundary.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};

/// Default absolute tolerance on σ values when classifying cone membership.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Eigenvalues of a curvature operator, sorted ascending, with their cached sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Spectrum {
    values: Vec<f64>,
    total: f64,
}

impl Spectrum {
    /// Sorts `values` (stably) and caches the total.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Argument("spectrum must have at least one eigenvalue".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Argument(format!("non-finite eigenvalue {bad}")));
        }
        values.sort_by(f64::total_cmp);
        let total = values.iter().sum();
        Ok(Self { values, total })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `T = Σ λ_i`; half the scalar curvature in the Riemannian reading.
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|v| v * factor).collect())
    }
}

impl TryFrom<Vec<f64>> for Spectrum {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<Spectrum> for Vec<f64> {
    fn from(s: Spectrum) -> Self {
        s.values
    }
}

/// Which curvature operator a threshold was calibrated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    Riemannian,
    Kahler,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShiftKind {
    /// `α_k` for an operator of size `N`.
    Riemannian { size: usize, k: usize },
    /// `β_k` for complex dimension `n` (operator size `n²`).
    Kahler { n: usize, k: usize },
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftParameter {
    pub alpha: f64,
    pub kind: ShiftKind,
}

impl ShiftParameter {
    pub fn explicit(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::Domain(format!("shift must be a non-negative real, got {alpha}")));
        }
        Ok(Self {
            alpha,
            kind: ShiftKind::Explicit,
        })
    }

    pub fn zero() -> Self {
        Self {
            alpha: 0.0,
            kind: ShiftKind::Explicit,
        }
    }
}

/// `σ_j(values)` by the one-row recurrence `e_j ← e_j + v·e_{j−1}`.
pub fn elementary_symmetric(values: &[f64], j: usize) -> Result<f64> {
    check_range("j", j, 0, values.len())?;
    Ok(elementary_symmetric_upto(values, j)[j])
}

/// `[σ_0, σ_1, …, σ_j]`, `j` clamped to the vector length.
pub fn elementary_symmetric_upto(values: &[f64], j: usize) -> Vec<f64> {
    let j = j.min(values.len());
    let mut e = vec![0.0; j + 1];
    e[0] = 1.0;
    for (count, &v) in values.iter().enumerate() {
        // Only degrees up to count+1 can be nonzero after this element.
        let top = j.min(count + 1);
        for d in (1..=top).rev() {
            e[d] += v * e[d - 1];
        }
    }
    e
}

/// `α_k` (Riemannian, `dim_param = N`) or `β_k` (Kähler, `dim_param = n`).
pub fn shift_threshold(dim_param: usize, k: usize, kind: Geometry) -> Result<ShiftParameter> {
    let size = match kind {
        Geometry::Riemannian => {
            if dim_param < 3 {
                return Err(Error::Domain(format!(
                    "operator size N = {dim_param} must be at least 3"
                )));
            }
            dim_param
        }
        Geometry::Kahler => {
            if dim_param < 2 {
                return Err(Error::Domain(format!(
                    "complex dimension n = {dim_param} must be at least 2"
                )));
            }
            dim_param * dim_param
        }
    };
    check_range("k", k, 1, size - 1)?;
    let nf = size as f64;
    let kf = k as f64;
    let root = (kf / ((nf - 1.0) * (nf - kf))).sqrt();
    let alpha = if k == size - 1 { 0.0 } else { (1.0 - root) / nf };
    let kind = match kind {
        Geometry::Riemannian => ShiftKind::Riemannian { size, k },
        Geometry::Kahler => ShiftKind::Kahler { n: dim_param, k },
    };
    Ok(ShiftParameter { alpha, kind })
}

/// `Λ − α·T·(1, …, 1)`.
pub fn shift(spectrum: &Spectrum, alpha: &ShiftParameter) -> Spectrum {
    let offset = alpha.alpha * spectrum.total;
    let values: Vec<f64> = spectrum.values.iter().map(|v| v - offset).collect();
    let total = values.iter().sum();
    // A uniform offset keeps the order, so no re-sort.
    Spectrum { values, total }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConeStatus {
    Outside,
    Boundary,
    Interior,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeVerdict {
    pub status: ConeStatus,
    /// `σ_1, …, σ_j`.
    pub sigmas: Vec<f64>,
    pub tolerance: f64,
}

impl ConeVerdict {
    pub fn from_sigmas(sigmas: Vec<f64>, tolerance: f64) -> Self {
        let status = if sigmas.iter().all(|&s| s > tolerance) {
            ConeStatus::Interior
        } else if sigmas.iter().all(|&s| s >= -tolerance) {
            ConeStatus::Boundary
        } else {
            ConeStatus::Outside
        };
        Self {
            status,
            sigmas,
            tolerance,
        }
    }

    /// Membership in the closed cone.
    pub fn in_closure(&self) -> bool {
        self.status != ConeStatus::Outside
    }
}

/// Classifies `spectrum` against `Γ_j⁺` (no shift is applied here).
pub fn cone_membership(spectrum: &Spectrum, j: usize, tolerance: f64) -> Result<ConeVerdict> {
    check_range("j", j, 1, spectrum.len())?;
    check_tolerance(tolerance)?;
    let sigmas = elementary_symmetric_upto(&spectrum.values, j)[1..].to_vec();
    Ok(ConeVerdict::from_sigmas(sigmas, tolerance))
}

/// `λ_1 + ⋯ + λ_k` over the sorted spectrum.
pub fn k_smallest_sum(spectrum: &Spectrum, k: usize) -> Result<f64> {
    check_range("k", k, 1, spectrum.len())?;
    Ok(spectrum.values[..k].iter().sum())
}

/// Pointwise outcome of the `Γ̄_2⁺(α_k)` dichotomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dichotomy {
    /// `λ_1 + ⋯ + λ_k > 0`.
    StrictlyPositiveSum,
    /// `λ_1 = ⋯ = λ_k = 0` and the remaining eigenvalues are equal and non-negative.
    DegenerateEqualTail,
    /// Neither alternative holds. Never produced by a spectrum that really lies in
    /// `Γ̄_2⁺(α_k)`.
    Violation,
}

pub fn dichotomy_check(spectrum: &Spectrum, k: usize, tolerance: f64) -> Result<Dichotomy> {
    let n = spectrum.len();
    if n < 3 {
        return Err(Error::Domain(format!("spectrum length {n} leaves no admissible k")));
    }
    check_range("k", k, 1, n - 2)?;
    check_tolerance(tolerance)?;
    let v = &spectrum.values;
    if v[..k].iter().sum::<f64>() > tolerance {
        return Ok(Dichotomy::StrictlyPositiveSum);
    }
    let head_zero = v[..k].iter().all(|x| x.abs() <= tolerance);
    let tail = &v[k..];
    let tail_constant = tail[tail.len() - 1] - tail[0] <= tolerance;
    let tail_nonneg = tail[0] >= -tolerance;
    if head_zero && tail_constant && tail_nonneg {
        Ok(Dichotomy::DegenerateEqualTail)
    } else {
        Ok(Dichotomy::Violation)
    }
}

fn check_tolerance(tolerance: f64) -> Result<()> {
    if tolerance.is_finite() && tolerance > 0.0 {
        Ok(())
    } else {
        Err(Error::Argument(format!("tolerance must be positive, got {tolerance}")))
    }
}

//! Verdicts from shifted-cone evidence over sampled points.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::symcone::{cone_membership, shift, shift_threshold, ConeStatus, ConeVerdict, Geometry, ShiftParameter, Spectrum};

pub const COMPACTNESS_CAVEAT: &str = "compactness: user-asserted, not verified";

pub fn sampling_caveat(points: usize) -> String {
    let plural = if points == 1 { "" } else { "s" };
    format!(
        "sampling-only: membership checked at {points} sampled point{plural}; a finite sample cannot certify the condition at every point"
    )
}

/// Spectra at sampled points and their `Γ₂⁺` verdicts after the `α_k` (or `β_k`) shift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub geometry: Geometry,
    /// Real dimension (Riemannian) or complex dimension (Kähler).
    pub n: usize,
    pub compact: bool,
    pub k: usize,
    pub tolerance: f64,
    pub shift: ShiftParameter,
    pub spectra: Vec<Spectrum>,
    pub verdicts: Vec<ConeVerdict>,
}

fn operator_size(geometry: Geometry, n: usize) -> usize {
    match geometry {
        Geometry::Riemannian => n * (n - 1) / 2,
        Geometry::Kahler => n * n,
    }
}

fn shifted_verdict(s: &Spectrum, shift_param: &ShiftParameter, tolerance: f64) -> Result<ConeVerdict> {
    cone_membership(&shift(s, shift_param), 2, tolerance)
}

impl Evidence {
    /// Computes the shifted verdicts from `spectra`.
    pub fn new(geometry: Geometry, n: usize, compact: bool, k: usize, spectra: Vec<Spectrum>, tolerance: f64) -> Result<Self> {
        let lo = match geometry {
            Geometry::Riemannian => 3,
            Geometry::Kahler => 2,
        };
        if n < lo {
            return Err(Error::Domain(format!("dimension {n} is below {lo} for {geometry:?} evidence")));
        }
        let size = operator_size(geometry, n);
        if spectra.is_empty() {
            return Err(Error::Argument("evidence needs at least one sampled point".into()));
        }
        if let Some((i, s)) = spectra.iter().enumerate().find(|(_, s)| s.len() != size) {
            return Err(Error::Argument(format!(
                "mixed dimensions: spectrum {i} has length {}, expected {size}",
                s.len()
            )));
        }
        let dim_param = match geometry {
            Geometry::Riemannian => size,
            Geometry::Kahler => n,
        };
        let shift_param = shift_threshold(dim_param, k, geometry)?;
        let verdicts = spectra
            .iter()
            .map(|s| shifted_verdict(s, &shift_param, tolerance))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            geometry,
            n,
            compact,
            k,
            tolerance,
            shift: shift_param,
            spectra,
            verdicts,
        })
    }

    /// Every stored verdict must match a recomputation from its spectrum exactly.
    pub fn check_consistency(&self) -> Result<()> {
        if self.verdicts.len() != self.spectra.len() {
            return Err(Error::Consistency(format!(
                "{} verdicts for {} spectra",
                self.verdicts.len(),
                self.spectra.len()
            )));
        }
        for (i, (s, v)) in self.spectra.iter().zip(&self.verdicts).enumerate() {
            if &shifted_verdict(s, &self.shift, self.tolerance)? != v {
                return Err(Error::Consistency(format!("stored verdict at point {i} does not match its spectrum")));
            }
        }
        Ok(())
    }

    pub fn points(&self) -> usize {
        self.spectra.len()
    }

    fn worst_status(&self) -> ConeStatus {
        self.verdicts.iter().map(|v| v.status).min().unwrap_or(ConeStatus::Outside)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    SphericalSpaceForm,
    #[serde(rename = "S2xS1 or RP2xS1")]
    S2xS1OrRP2xS1,
    Flat,
    KPositive,
    BiholomorphicCPn,
    CP1xCP1,
    FlatTorus,
    NoConclusion,
}

impl Conclusion {
    pub fn label(self) -> &'static str {
        match self {
            Conclusion::SphericalSpaceForm => "SphericalSpaceForm",
            Conclusion::S2xS1OrRP2xS1 => "S2xS1 or RP2xS1",
            Conclusion::Flat => "Flat",
            Conclusion::KPositive => "KPositive",
            Conclusion::BiholomorphicCPn => "BiholomorphicCPn",
            Conclusion::CP1xCP1 => "CP1xCP1",
            Conclusion::FlatTorus => "FlatTorus",
            Conclusion::NoConclusion => "NoConclusion",
        }
    }
}

pub const THEOREM_SPHERE: &str =
    "shifted-cone sphere theorem: Γ₂⁺(α₂) on a compact manifold gives a spherical space form (via 2-positivity, Böhm–Wilking)";
pub const THEOREM_TRICHOTOMY: &str =
    "shifted-cone closure trichotomy: Γ̄₂⁺(α₂) gives a spherical space form, S²×S¹ or ℝP²×S¹ (n = 3), or a flat manifold";
pub const THEOREM_K_POSITIVE: &str =
    "shifted-cone k-positivity: Γ₂⁺(α_k) forces a k-positive curvature operator and the listed Betti numbers vanish";
pub const THEOREM_CPN: &str =
    "Kähler shifted-cone theorem: Γ₂⁺(β₂) on a compact Kähler manifold forces it to be biholomorphic to ℂPⁿ (via orthogonal bisectional positivity)";
pub const THEOREM_KAHLER_TRICHOTOMY: &str =
    "Kähler closure trichotomy: Γ̄₂⁺(β₂) forces biholomorphism to ℂPⁿ, ℂP¹×ℂP¹ (n = 2), or a flat torus";
pub const THEOREM_KAHLER_K_POSITIVE: &str =
    "Kähler shifted-cone k-positivity: Γ₂⁺(β_k) forces a k-positive Kähler curvature operator";
pub const THEOREM_NONE: &str = "no theorem applies: some sampled point lies outside the shifted cone closure";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub conclusion: Conclusion,
    pub theorem: String,
    pub k: usize,
    pub points_checked: usize,
    pub caveats: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vanishing_betti: Option<Vec<usize>>,
}

impl Verdict {
    /// 2 for the open-cone theorems, 1 for a closure trichotomy branch, 0 otherwise.
    pub fn strength(&self) -> u8 {
        if self.conclusion == Conclusion::NoConclusion {
            0
        } else if self.theorem == THEOREM_TRICHOTOMY || self.theorem == THEOREM_KAHLER_TRICHOTOMY {
            1
        } else {
            2
        }
    }
}

fn verdict(e: &Evidence, conclusion: Conclusion, theorem: &str, extra: Vec<String>) -> Verdict {
    let mut caveats = vec![sampling_caveat(e.points()), COMPACTNESS_CAVEAT.to_string()];
    caveats.extend(extra);
    Verdict {
        conclusion,
        theorem: theorem.to_string(),
        k: e.k,
        points_checked: e.points(),
        caveats,
        vanishing_betti: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Profile {
    /// `λ₁ + λ₂ > tol`.
    PositivePair,
    Zero,
    /// `λ₁ = λ₂ = 0` and the rest equal to a positive constant.
    Degenerate,
    Other,
}

fn profile(s: &Spectrum, tol: f64) -> Profile {
    let v = s.values();
    let scale = v.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let t = tol * scale;
    if v[0] + v[1] > t {
        return Profile::PositivePair;
    }
    if v.iter().all(|x| x.abs() <= t) {
        return Profile::Zero;
    }
    let tail = &v[2..];
    let head_zero = v[0].abs() <= t && v[1].abs() <= t;
    let tail_equal = tail[tail.len() - 1] - tail[0] <= t;
    if head_zero && tail_equal && tail[0] > t {
        Profile::Degenerate
    } else {
        Profile::Other
    }
}

fn check_preconditions(e: &Evidence, geometry: Geometry) -> Result<()> {
    if e.geometry != geometry {
        return Err(Error::Precondition(format!("evidence is {:?}, not {geometry:?}", e.geometry)));
    }
    if !e.compact {
        return Err(Error::Precondition(
            "compactness is not asserted; the cone theorems apply only to compact manifolds".into(),
        ));
    }
    check_range("k", e.k, 1, operator_size(geometry, e.n) - 1)?;
    e.check_consistency()
}

/// Closure branch shared by both geometries.
fn closure_branch(
    e: &Evidence,
    positive: (Conclusion, &str),
    zero: Conclusion,
    degenerate: Option<Conclusion>,
    theorem: &str,
) -> Verdict {
    let profiles: Vec<Profile> = e.spectra.iter().map(|s| profile(s, e.tolerance)).collect();
    if profiles.contains(&Profile::PositivePair) {
        return verdict(e, positive.0, theorem, vec![positive.1.to_string()]);
    }
    if profiles.iter().all(|p| *p == Profile::Zero) {
        return verdict(e, zero, theorem, vec!["branch: curvature operator vanishes at every sampled point".into()]);
    }
    if profiles.iter().all(|p| *p == Profile::Degenerate) {
        if let Some(c) = degenerate {
            return verdict(e, c, theorem, vec!["branch: kernel of dimension 2 with constant tail at every sampled point".into()]);
        }
        return verdict(
            e,
            Conclusion::NoConclusion,
            theorem,
            vec!["degenerate kernel-2 profile observed in a dimension not covered by the trichotomy".into()],
        );
    }
    verdict(
        e,
        Conclusion::NoConclusion,
        theorem,
        vec!["sampled points mix zero, degenerate or unexpected profiles; no single branch is observed".into()],
    )
}

pub fn classify_riemannian(e: &Evidence) -> Result<Verdict> {
    check_preconditions(e, Geometry::Riemannian)?;
    let worst = e.worst_status();
    if worst == ConeStatus::Outside {
        return Ok(verdict(e, Conclusion::NoConclusion, THEOREM_NONE, vec![]));
    }
    if e.k == 2 {
        if worst == ConeStatus::Interior {
            return Ok(verdict(e, Conclusion::SphericalSpaceForm, THEOREM_SPHERE, vec![]));
        }
        let deg = (e.n == 3).then_some(Conclusion::S2xS1OrRP2xS1);
        return Ok(closure_branch(
            e,
            (Conclusion::SphericalSpaceForm, "branch: 2-nonnegative and 2-positive at some sampled point"),
            Conclusion::Flat,
            deg,
            THEOREM_TRICHOTOMY,
        ));
    }
    if worst == ConeStatus::Interior {
        let b = betti_vanishing(e.n, e.k);
        let mut v = verdict(e, Conclusion::KPositive, THEOREM_K_POSITIVE, b.caveat.into_iter().collect());
        v.vanishing_betti = Some(b.indices);
        return Ok(v);
    }
    Ok(verdict(
        e,
        Conclusion::NoConclusion,
        THEOREM_NONE,
        vec![format!("boundary points at k = {}: only the open cone is covered for k ≠ 2", e.k)],
    ))
}

pub fn classify_kahler(e: &Evidence) -> Result<Verdict> {
    check_preconditions(e, Geometry::Kahler)?;
    let worst = e.worst_status();
    if worst == ConeStatus::Outside {
        return Ok(verdict(e, Conclusion::NoConclusion, THEOREM_NONE, vec![]));
    }
    if e.k == 2 {
        if worst == ConeStatus::Interior {
            return Ok(verdict(e, Conclusion::BiholomorphicCPn, THEOREM_CPN, vec![]));
        }
        let deg = (e.n == 2).then_some(Conclusion::CP1xCP1);
        return Ok(closure_branch(
            e,
            (Conclusion::BiholomorphicCPn, "branch: 2-nonnegative and 2-positive at some sampled point"),
            Conclusion::FlatTorus,
            deg,
            THEOREM_KAHLER_TRICHOTOMY,
        ));
    }
    if worst == ConeStatus::Interior {
        return Ok(verdict(
            e,
            Conclusion::KPositive,
            THEOREM_KAHLER_K_POSITIVE,
            vec!["no Betti-number consequences are tabulated for the Kähler operator".into()],
        ));
    }
    Ok(verdict(
        e,
        Conclusion::NoConclusion,
        THEOREM_NONE,
        vec![format!("boundary points at k = {}: only the open cone is covered for k ≠ 2", e.k)],
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiVanishing {
    pub indices: Vec<usize>,
    pub caveat: Option<String>,
}

/// Indices `p` with `b_p = 0` under a `k`-positive curvature operator in dimension `n`.
pub fn betti_vanishing(n: usize, k: usize) -> BettiVanishing {
    if k == 0 || n < 2 || k > n - 1 {
        let why = if k == 0 { "k is below 1".to_string() } else { "k exceeds n−1".to_string() };
        return BettiVanishing {
            indices: vec![],
            caveat: Some(format!("{why}: no Betti numbers are known to vanish (n = {n}, k = {k})")),
        };
    }
    let half = n.div_ceil(2);
    let indices = if k <= half {
        (1..n).collect()
    } else {
        (1..=(n - k)).chain(k..n).collect()
    };
    BettiVanishing { indices, caveat: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev<S: AsRef<[f64]>>(geometry: Geometry, n: usize, k: usize, spectra: &[S]) -> Evidence {
        let spectra = spectra.iter().map(|s| Spectrum::new(s.as_ref().to_vec()).unwrap()).collect();
        Evidence::new(geometry, n, true, k, spectra, 1e-9).unwrap()
    }

    #[test]
    fn riemannian_examples() {
        let v = classify_riemannian(&ev(Geometry::Riemannian, 3, 2, &[[1.0, 1.0, 1.0]; 4])).unwrap();
        assert_eq!(v.conclusion, Conclusion::SphericalSpaceForm);
        assert_eq!(v.theorem, THEOREM_SPHERE);
        assert_eq!(v.points_checked, 4);
        assert_eq!(v.caveats.len(), 2);

        let v = classify_riemannian(&ev(Geometry::Riemannian, 3, 2, &[[0.0, 0.0, 1.0]; 3])).unwrap();
        assert_eq!(v.conclusion, Conclusion::S2xS1OrRP2xS1);
        assert_eq!(v.theorem, THEOREM_TRICHOTOMY);

        let v = classify_riemannian(&ev(Geometry::Riemannian, 3, 2, &[[0.0, 0.0, 0.0]; 2])).unwrap();
        assert_eq!(v.conclusion, Conclusion::Flat);

        let v = classify_riemannian(&ev(Geometry::Riemannian, 3, 2, &[[1.0, 1.0, 1.0], [0.0, 0.0, 1.0]])).unwrap();
        assert_eq!(v.conclusion, Conclusion::SphericalSpaceForm);
        assert_eq!(v.theorem, THEOREM_TRICHOTOMY);

        let v = classify_riemannian(&ev(Geometry::Riemannian, 4, 2, &[[0.0, 0.0, 1.0, 1.0, 1.0, 3.0]])).unwrap();
        assert_eq!(v.conclusion, Conclusion::NoConclusion);
    }

    #[test]
    fn k_positive_with_betti() {
        let v = classify_riemannian(&ev(Geometry::Riemannian, 5, 3, &[[1.0; 10]])).unwrap();
        assert_eq!(v.conclusion, Conclusion::KPositive);
        assert_eq!(v.vanishing_betti, Some(vec![1, 2, 3, 4]));
        let v = classify_riemannian(&ev(Geometry::Riemannian, 4, 5, &[[1.0; 6]])).unwrap();
        assert_eq!(v.vanishing_betti, Some(vec![]));
        assert_eq!(v.caveats.len(), 3);
    }

    #[test]
    fn kahler_examples() {
        let v = classify_kahler(&ev(Geometry::Kahler, 2, 2, &[[1.0, 1.0, 1.0, 3.0]])).unwrap();
        assert_eq!(v.conclusion, Conclusion::BiholomorphicCPn);
        let e = ev(Geometry::Kahler, 2, 2, &[[0.0, 0.0, 2.0, 2.0]]);
        assert_eq!(e.verdicts[0].status, ConeStatus::Boundary);
        assert!(e.verdicts[0].sigmas[1].abs() <= 1e-10);
        assert_eq!(classify_kahler(&e).unwrap().conclusion, Conclusion::CP1xCP1);
        let v = classify_kahler(&ev(Geometry::Kahler, 3, 2, &[[0.0; 9]])).unwrap();
        assert_eq!(v.conclusion, Conclusion::FlatTorus);
    }

    #[test]
    fn preconditions() {
        let s = vec![Spectrum::new(vec![1.0; 3]).unwrap()];
        let e = Evidence::new(Geometry::Riemannian, 3, false, 2, s.clone(), 1e-9).unwrap();
        assert!(matches!(classify_riemannian(&e), Err(Error::Precondition(_))));
        assert!(matches!(classify_kahler(&e), Err(Error::Precondition(_))));
        let mixed = vec![s[0].clone(), Spectrum::new(vec![1.0; 6]).unwrap()];
        assert!(Evidence::new(Geometry::Riemannian, 3, true, 2, mixed, 1e-9).is_err());
        assert!(Evidence::new(Geometry::Riemannian, 2, true, 1, vec![Spectrum::new(vec![1.0]).unwrap()], 1e-9).is_err());
        let mut e = Evidence::new(Geometry::Riemannian, 3, true, 2, s, 1e-9).unwrap();
        e.verdicts[0].status = ConeStatus::Outside;
        assert!(matches!(classify_riemannian(&e), Err(Error::Consistency(_))));
    }

    #[test]
    fn betti_examples() {
        assert_eq!(betti_vanishing(6, 3).indices, vec![1, 2, 3, 4, 5]);
        assert_eq!(betti_vanishing(5, 4).indices, vec![1, 4]);
        let b = betti_vanishing(5, 5);
        assert!(b.indices.is_empty());
        assert!(b.caveat.unwrap().contains("k exceeds n−1"));
    }

    #[test]
    fn deterministic_serialization() {
        let e = ev(Geometry::Riemannian, 3, 2, &[[0.0, 0.0, 1.0]; 3]);
        let a = serde_json::to_string(&classify_riemannian(&e).unwrap()).unwrap();
        let b = serde_json::to_string(&classify_riemannian(&e.clone()).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"conclusion\":\"S2xS1 or RP2xS1\""));
    }
}

//! Report documents emitted by every subcommand, as JSON or Markdown.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use curvcones::classify::Verdict;
use curvcones::symcone::{ConeStatus, Dichotomy, Geometry, ShiftParameter};
use serde::{Deserialize, Serialize};

pub const TOOL_NAME: &str = "curvcones";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

impl Default for Tool {
    fn default() -> Self {
        Self {
            name: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Cone boundary tolerance applied to `σ_j` of shifted spectra.
    pub cone: f64,
    /// Eigen-residual tolerance for operator spectra.
    pub eigen: f64,
    /// Acceptance for finite-difference evidence; charts only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd_acceptance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Convention {
    pub basis_order: String,
    pub kahler_basis: String,
    pub sign_anchor: String,
    pub spectrum_order: String,
    pub shift: String,
    pub tolerances: Tolerances,
}

impl Convention {
    pub fn new(tolerances: Tolerances) -> Self {
        Self {
            basis_order: "orthonormal 2-forms e_i∧e_j with i < j in lexicographic order (0,1), (0,2), …, (n−2,n−1)".into(),
            kahler_basis: "Hermitian u(n) basis: E_ii for each i, then for each i < j the real (E_ij + E_ji)/√2 and imaginary i(E_ij − E_ji)/√2 elements".into(),
            sign_anchor: "R(e_i, e_j, e_j, e_i) is the sectional curvature; the unit round sphere has operator equal to the identity".into(),
            spectrum_order: "eigenvalues ascending".into(),
            shift: "Λ − α·T·(1, …, 1) with T the eigenvalue sum; α_k for Riemannian operators, β_k (operator size n²) for Kähler".into(),
            tolerances,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    /// Chart coordinates; absent for homogeneous models and raw spectra.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<f64>>,
    pub spectrum: Vec<f64>,
    pub shifted: Vec<f64>,
    /// `σ_1, σ_2` of the shifted spectrum.
    pub sigmas: Vec<f64>,
    pub status: ConeStatus,
    pub k_smallest_sum: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dichotomy: Option<Dichotomy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar_curvature: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedPoint {
    pub coordinates: Vec<f64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: Tool,
    pub command: String,
    /// Every flag value that influenced the run, echoed back.
    pub flags: BTreeMap<String, serde_json::Value>,
    pub input: String,
    pub convention: Convention,
    pub geometry: Geometry,
    /// Real dimension (Riemannian) or complex dimension (Kähler), when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    pub operator_size: usize,
    pub k: usize,
    pub shift: ShiftParameter,
    pub points: Vec<PointReport>,
    #[serde(default)]
    pub skipped: Vec<SkippedPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    /// Why classification was refused, e.g. compactness not asserted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refusal: Option<String>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports hold only finite numbers and strings")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Fixed nine-digit rendering with negative zero folded to zero.
pub fn num(x: f64) -> String {
    let s = format!("{x:.9}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| num(*x)).collect();
    format!("({})", parts.join(", "))
}

fn status(s: ConeStatus) -> &'static str {
    match s {
        ConeStatus::Interior => "Interior",
        ConeStatus::Boundary => "Boundary",
        ConeStatus::Outside => "Outside",
    }
}

fn flag_value(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render_markdown(r: &Report) -> String {
    let mut out = String::new();
    let geometry = match r.geometry {
        Geometry::Riemannian => "Riemannian",
        Geometry::Kahler => "Kähler",
    };
    let _ = writeln!(out, "# {} {}: {}", r.tool.name, r.command, r.input);
    let _ = writeln!(out);
    let _ = writeln!(out, "- tool version: {}", r.tool.version);
    let _ = writeln!(out, "- geometry: {geometry}");
    if let Some(n) = r.dimension {
        let _ = writeln!(out, "- dimension: {n}");
    }
    let _ = writeln!(out, "- operator size: {}", r.operator_size);
    let _ = writeln!(out, "- k: {}", r.k);
    let _ = writeln!(out, "- shift: {}", num(r.shift.alpha));
    for (k, v) in &r.flags {
        let _ = writeln!(out, "- flag `{k}`: {}", flag_value(v));
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "## Convention");
    let _ = writeln!(out);
    let c = &r.convention;
    let _ = writeln!(out, "- basis: {}", c.basis_order);
    let _ = writeln!(out, "- Kähler basis: {}", c.kahler_basis);
    let _ = writeln!(out, "- sign: {}", c.sign_anchor);
    let _ = writeln!(out, "- order: {}", c.spectrum_order);
    let _ = writeln!(out, "- shift: {}", c.shift);
    let _ = write!(out, "- tolerances: cone {:e}, eigen {:e}", c.tolerances.cone, c.tolerances.eigen);
    if let Some(t) = c.tolerances.fd_acceptance {
        let _ = write!(out, ", FD acceptance {t:e}");
    }
    if let Some(h) = c.tolerances.fd_step {
        let _ = write!(out, ", FD step {h:e}");
    }
    let _ = writeln!(out);
    let _ = writeln!(out);
    let _ = writeln!(out, "## Points");
    let _ = writeln!(out);
    let _ = writeln!(out, "| # | coordinates | spectrum | shifted | σ₁ | σ₂ | status | k-smallest sum |");
    let _ = writeln!(out, "|---|---|---|---|---|---|---|---|");
    for (i, p) in r.points.iter().enumerate() {
        let coords = p.coordinates.as_deref().map(list).unwrap_or_else(|| "-".into());
        let s1 = p.sigmas.first().copied().map(num).unwrap_or_default();
        let s2 = p.sigmas.get(1).copied().map(num).unwrap_or_default();
        let _ = writeln!(
            out,
            "| {i} | {coords} | {} | {} | {s1} | {s2} | {} | {} |",
            list(&p.spectrum),
            list(&p.shifted),
            status(p.status),
            num(p.k_smallest_sum)
        );
    }
    if !r.skipped.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(out, "## Skipped points");
        let _ = writeln!(out);
        for s in &r.skipped {
            let _ = writeln!(out, "- {}: {}", list(&s.coordinates), s.reason);
        }
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "## Verdict");
    let _ = writeln!(out);
    match (&r.verdict, &r.refusal) {
        (Some(v), _) => {
            let _ = writeln!(out, "**{}** (k = {}, points checked: {})", v.conclusion.label(), v.k, v.points_checked);
            let _ = writeln!(out);
            let _ = writeln!(out, "- theorem: {}", v.theorem);
            if let Some(b) = &v.vanishing_betti {
                let idx: Vec<String> = b.iter().map(|p| format!("b{p}")).collect();
                let _ = writeln!(out, "- vanishing Betti numbers: {}", idx.join(", "));
            }
            for c in &v.caveats {
                let _ = writeln!(out, "- caveat: {c}");
            }
        }
        (None, Some(why)) => {
            let _ = writeln!(out, "refused: {why}");
        }
        (None, None) => {
            let _ = writeln!(out, "not classified (raw spectrum)");
        }
    }
    if !r.notes.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(out, "## Notes");
        let _ = writeln!(out);
        for n in &r.notes {
            let _ = writeln!(out, "- {n}");
        }
    }
    out
}

//! The `model`, `analyze` and `cones` subcommands as library calls.

use std::collections::BTreeMap;

use curvcones::chart::{curvature_at, MetricChart, DEFAULT_STEP};
use curvcones::classify::{classify_kahler, classify_riemannian, Evidence};
use curvcones::kahlercurv::{assemble_kahler_operator, kahler_spectrum};
use curvcones::models::{build, ModelSpec};
use curvcones::riemcurv::{assemble_operator, eigen_spectrum};
use curvcones::symcone::{
    cone_membership, dichotomy_check, k_smallest_sum, shift, shift_threshold, Geometry, ShiftParameter, Spectrum,
    DEFAULT_TOLERANCE,
};
use curvcones::Error;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::report::{Convention, PointReport, Report, SkippedPoint, Tolerances, Tool};

pub const EIGEN_TOLERANCE: f64 = 1e-10;
/// Floor on the cone tolerance for finite-difference evidence.
pub const FD_ACCEPTANCE: f64 = 1e-4;
pub const THREADS_ENV: &str = "CURVCONES_THREADS";

fn pool() -> CliResult<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a non-negative integer, got `{v}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

fn check_tol(name: &str, v: f64) -> CliResult<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{name} must be a positive real, got {v}")))
    }
}

fn point_report(
    coordinates: Option<Vec<f64>>,
    spectrum: &Spectrum,
    shift_param: &ShiftParameter,
    k: usize,
    tol: f64,
    geometry: Geometry,
    scalar: Option<f64>,
) -> CliResult<PointReport> {
    let shifted = shift(spectrum, shift_param);
    let verdict = cone_membership(&shifted, 2, tol)?;
    // The dichotomy only speaks about spectra inside the shifted closure.
    let dichotomy = match geometry {
        Geometry::Riemannian if k + 2 <= spectrum.len() && verdict.in_closure() => {
            Some(dichotomy_check(spectrum, k, tol)?)
        }
        _ => None,
    };
    Ok(PointReport {
        coordinates,
        spectrum: spectrum.values().to_vec(),
        shifted: shifted.values().to_vec(),
        sigmas: verdict.sigmas,
        status: verdict.status,
        k_smallest_sum: k_smallest_sum(spectrum, k)?,
        dichotomy,
        scalar_curvature: scalar,
    })
}

fn has_fubini_study(spec: &ModelSpec) -> bool {
    match spec {
        ModelSpec::FubiniStudy { .. } => true,
        ModelSpec::Product(a, b) => has_fubini_study(a) || has_fubini_study(b),
        _ => false,
    }
}

/// Evidence from `spectra`, then a verdict or a refusal.
fn classify(
    geometry: Geometry,
    n: usize,
    compact: bool,
    k: usize,
    spectra: Vec<Spectrum>,
    tol: f64,
) -> CliResult<(Option<curvcones::classify::Verdict>, Option<String>)> {
    let e = Evidence::new(geometry, n, compact, k, spectra, tol)?;
    let res = match geometry {
        Geometry::Riemannian => classify_riemannian(&e),
        Geometry::Kahler => classify_kahler(&e),
    };
    match res {
        Ok(v) => Ok((Some(v), None)),
        Err(Error::Precondition(why)) => Ok((None, Some(why))),
        Err(e) => Err(e.into()),
    }
}

/// Catalog model at a single point; Kähler analysis when a Fubini–Study factor is present.
pub fn cmd_model(name: &str, k: usize, tol: f64) -> CliResult<Report> {
    check_tol("tol", tol)?;
    let spec = ModelSpec::from_catalog(name).map_err(|e| CliError::Usage(format!("model `{name}`: {e}")))?;
    let tensors = build(&spec)?;
    let kahler = has_fubini_study(&spec);
    let (geometry, n, spectrum, scalar) = if kahler {
        let r = tensors
            .kahler
            .as_ref()
            .ok_or_else(|| CliError::Usage(format!("{spec} has no Kähler tensor in the catalog")))?;
        let m = assemble_kahler_operator(r);
        (Geometry::Kahler, r.dim(), kahler_spectrum(&m, EIGEN_TOLERANCE)?.spectrum, None)
    } else {
        let r = tensors
            .riemann
            .as_ref()
            .ok_or_else(|| CliError::Usage(format!("{spec} has no Riemannian tensor in the catalog")))?;
        let m = assemble_operator(r);
        (Geometry::Riemannian, r.dim(), eigen_spectrum(&m, EIGEN_TOLERANCE)?.spectrum, Some(r.scalar()))
    };
    let size = spectrum.len();
    let dim_param = match geometry {
        Geometry::Riemannian => size,
        Geometry::Kahler => n,
    };
    let shift_param = shift_threshold(dim_param, k, geometry)?;
    let point = point_report(None, &spectrum, &shift_param, k, tol, geometry, scalar)?;
    let (verdict, refusal) = classify(geometry, n, true, k, vec![spectrum], tol)?;
    let mut flags = BTreeMap::new();
    flags.insert("k".into(), json!(k));
    flags.insert("model".into(), json!(name));
    flags.insert("tol".into(), json!(tol));
    Ok(Report {
        tool: Tool::default(),
        command: "model".into(),
        flags,
        input: format!("catalog model {name} ({spec})"),
        convention: Convention::new(Tolerances {
            cone: tol,
            eigen: EIGEN_TOLERANCE,
            fd_acceptance: None,
            fd_step: None,
        }),
        geometry,
        dimension: Some(n),
        operator_size: size,
        k,
        shift: shift_param,
        points: vec![point],
        skipped: vec![],
        verdict,
        refusal,
        notes: vec!["homogeneous model: one point represents every point".into()],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzeOptions {
    pub k: usize,
    pub step: f64,
    pub tol: f64,
    pub fd_tol: f64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            k: 2,
            step: DEFAULT_STEP,
            tol: DEFAULT_TOLERANCE,
            fd_tol: FD_ACCEPTANCE,
        }
    }
}

/// Finite-difference analysis of a chart document; `label` names it in the report.
pub fn cmd_analyze(text: &str, label: &str, opts: AnalyzeOptions) -> CliResult<Report> {
    check_tol("tol", opts.tol)?;
    check_tol("fd-tol", opts.fd_tol)?;
    check_tol("step", opts.step)?;
    let chart = MetricChart::from_json(text)?;
    let n = chart.dimension();
    if n < 3 {
        return Err(CliError::Usage(format!(
            "chart dimension {n} is below 3; the shifted cones need an operator of size at least 3"
        )));
    }
    let samples = chart.sample()?;
    let outcomes: Vec<_> = pool()?.install(|| {
        samples
            .par_iter()
            .map(|p| {
                let pc = curvature_at(&chart, p, opts.step)?;
                let spec = eigen_spectrum(&assemble_operator(&pc.tensor), EIGEN_TOLERANCE)?.spectrum;
                Ok::<_, Error>((spec, pc.tensor.scalar()))
            })
            .collect()
    });
    let tol = opts.tol.max(opts.fd_tol);
    let size = n * (n - 1) / 2;
    let shift_param = shift_threshold(size, opts.k, Geometry::Riemannian)?;
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    let mut spectra = Vec::new();
    for (p, o) in samples.iter().zip(outcomes) {
        match o {
            Ok((s, scalar)) => {
                points.push(point_report(Some(p.clone()), &s, &shift_param, opts.k, tol, Geometry::Riemannian, Some(scalar))?);
                spectra.push(s);
            }
            Err(e @ (Error::PointRejected(_) | Error::Validation { .. } | Error::NoConvergence { .. })) => {
                skipped.push(SkippedPoint {
                    coordinates: p.clone(),
                    reason: e.to_string(),
                })
            }
            Err(e) => return Err(e.into()),
        }
    }
    if spectra.is_empty() {
        let first = skipped.first().map(|s| s.reason.as_str()).unwrap_or("no samples");
        return Err(CliError::Numeric(format!(
            "all {} sample points were rejected (first: {first})",
            samples.len()
        )));
    }
    let (verdict, refusal) = classify(Geometry::Riemannian, n, chart.compact(), opts.k, spectra, tol)?;
    let mut flags = BTreeMap::new();
    flags.insert("chart".into(), json!(label));
    flags.insert("fd-tol".into(), json!(opts.fd_tol));
    flags.insert("k".into(), json!(opts.k));
    flags.insert("step".into(), json!(opts.step));
    flags.insert("tol".into(), json!(opts.tol));
    let mut notes = vec![format!("effective cone tolerance max(tol, fd-tol) = {tol:e}")];
    if !skipped.is_empty() {
        notes.push(format!("{} of {} sample points skipped", skipped.len(), samples.len()));
    }
    let input = match chart.name() {
        Some(name) => format!("chart {label} ({name})"),
        None => format!("chart {label}"),
    };
    Ok(Report {
        tool: Tool::default(),
        command: "analyze".into(),
        flags,
        input,
        convention: Convention::new(Tolerances {
            cone: tol,
            eigen: EIGEN_TOLERANCE,
            fd_acceptance: Some(opts.fd_tol),
            fd_step: Some(opts.step),
        }),
        geometry: Geometry::Riemannian,
        dimension: Some(n),
        operator_size: size,
        k: opts.k,
        shift: shift_param,
        points,
        skipped,
        verdict,
        refusal,
        notes,
    })
}

/// Cone tests on a raw spectrum; Kähler when `kahler_n` is given.
pub fn cmd_cones(spectrum: &[f64], k: usize, kahler_n: Option<usize>, tol: f64) -> CliResult<Report> {
    check_tol("tol", tol)?;
    if let Some(n) = kahler_n {
        if spectrum.len() != n * n {
            return Err(CliError::Usage(format!(
                "spectrum has {} entries but --kahler-n {n} needs {}",
                spectrum.len(),
                n * n
            )));
        }
    }
    let s = Spectrum::new(spectrum.to_vec()).map_err(|e| CliError::Usage(e.to_string()))?;
    let (geometry, dim_param) = match kahler_n {
        Some(n) => (Geometry::Kahler, n),
        None => (Geometry::Riemannian, s.len()),
    };
    let shift_param = shift_threshold(dim_param, k, geometry)?;
    let point = point_report(None, &s, &shift_param, k, tol, geometry, None)?;
    let mut flags = BTreeMap::new();
    flags.insert("k".into(), json!(k));
    if let Some(n) = kahler_n {
        flags.insert("kahler-n".into(), json!(n));
    }
    flags.insert("spectrum".into(), json!(spectrum));
    flags.insert("tol".into(), json!(tol));
    Ok(Report {
        tool: Tool::default(),
        command: "cones".into(),
        flags,
        input: format!("raw spectrum of length {}", s.len()),
        convention: Convention::new(Tolerances {
            cone: tol,
            eigen: EIGEN_TOLERANCE,
            fd_acceptance: None,
            fd_step: None,
        }),
        geometry,
        dimension: kahler_n,
        operator_size: s.len(),
        k,
        shift: shift_param,
        points: vec![point],
        skipped: vec![],
        verdict: None,
        refusal: None,
        notes: vec![],
    })
}

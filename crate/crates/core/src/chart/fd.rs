//! Riemann tensor of a chart metric by central finite differences.

use nalgebra::DMatrix;

use super::MetricChart;
use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};
use crate::riemcurv::RiemannTensor;

pub const DEFAULT_STEP: f64 = 1e-3;
/// Smallest admissible metric eigenvalue.
pub const MIN_EIGENVALUE: f64 = 1e-10;
pub const MAX_CONDITION: f64 = 1e12;
/// Relative symmetry residual accepted on a finite-difference tensor.
pub const FD_VALIDATION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct PointCurvature {
    pub point: Vec<f64>,
    pub metric: DMatrix<f64>,
    /// Columns are the orthonormal frame vectors in coordinate components.
    pub frame: DMatrix<f64>,
    /// Components in that frame.
    pub tensor: RiemannTensor,
}

fn check_metric(g: &DMatrix<f64>, point: &[f64]) -> Result<()> {
    let e = symmetric_eigen(g, 1e-9)?;
    let (lo, hi) = (e.spectrum.values()[0], *e.spectrum.values().last().unwrap());
    if lo <= MIN_EIGENVALUE {
        return Err(Error::PointRejected(format!(
            "metric not positive definite at {point:?} (smallest eigenvalue {lo:.3e})"
        )));
    }
    if hi / lo > MAX_CONDITION {
        return Err(Error::PointRejected(format!(
            "metric nearly singular at {point:?} (condition number {:.3e})",
            hi / lo
        )));
    }
    Ok(())
}

/// Gram–Schmidt of the coordinate frame in coordinate order.
pub(crate) fn orthonormal_frame(g: &DMatrix<f64>) -> DMatrix<f64> {
    let n = g.nrows();
    let mut f = DMatrix::<f64>::identity(n, n);
    let ip = |a: &nalgebra::DVector<f64>, b: &nalgebra::DVector<f64>| (a.transpose() * g * b)[(0, 0)];
    for a in 0..n {
        let mut v = f.column(a).into_owned();
        for b in 0..a {
            let fb = f.column(b).into_owned();
            let c = ip(&v, &fb);
            v -= fb * c;
        }
        let norm = ip(&v, &v).sqrt();
        f.set_column(a, &(v / norm));
    }
    f
}

/// Finite-difference curvature at `point` with spacing `step`.
///
/// Points that fail evaluation, positive-definiteness, conditioning, or the domain
/// margin of `2·step` come back as [`Error::PointRejected`].
pub fn curvature_at(chart: &MetricChart, point: &[f64], step: f64) -> Result<PointCurvature> {
    let n = chart.dimension();
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Argument(format!("step must be positive, got {step}")));
    }
    if point.len() != n {
        return Err(Error::Argument(format!("point has {} coordinates, chart has {n}", point.len())));
    }
    if let Some(dom) = chart.domain() {
        for (a, (&x, r)) in point.iter().zip(dom).enumerate() {
            if x - 2.0 * step < r[0] || x + 2.0 * step > r[1] {
                return Err(Error::PointRejected(format!(
                    "stencil leaves the domain on axis {a} at {point:?} ([{}, {}], margin {})",
                    r[0],
                    r[1],
                    2.0 * step
                )));
            }
        }
    }
    let eval = |offsets: &[(usize, f64)]| -> Result<DMatrix<f64>> {
        let mut p = point.to_vec();
        for &(a, d) in offsets {
            p[a] += d;
        }
        chart
            .metric_at(&p)
            .map_err(|e| Error::PointRejected(e.to_string()))
    };
    let h = step;
    let g = eval(&[])?;
    check_metric(&g, point)?;
    let ginv = g
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::PointRejected(format!("metric not invertible at {point:?}")))?;

    let mut plus = Vec::with_capacity(n);
    let mut minus = Vec::with_capacity(n);
    for a in 0..n {
        plus.push(eval(&[(a, h)])?);
        minus.push(eval(&[(a, -h)])?);
    }
    // dg[a] = ∂_a g, d2g[a][b] = ∂_a∂_b g.
    let dg: Vec<DMatrix<f64>> = (0..n).map(|a| (&plus[a] - &minus[a]) / (2.0 * h)).collect();
    let mut d2g = vec![vec![DMatrix::<f64>::zeros(n, n); n]; n];
    for a in 0..n {
        d2g[a][a] = (&plus[a] - &g * 2.0 + &minus[a]) / (h * h);
        for b in (a + 1)..n {
            let pp = eval(&[(a, h), (b, h)])?;
            let pm = eval(&[(a, h), (b, -h)])?;
            let mp = eval(&[(a, -h), (b, h)])?;
            let mm = eval(&[(a, -h), (b, -h)])?;
            let m = (pp - pm - mp + mm) / (4.0 * h * h);
            d2g[b][a] = m.clone();
            d2g[a][b] = m;
        }
    }

    // Γ^k_ij = ½ g^{kl} (∂_i g_jl + ∂_j g_il − ∂_l g_ij)
    let mut gamma = vec![0.0; n * n * n];
    let gi = |k: usize, i: usize, j: usize| (k * n + i) * n + j;
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += ginv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                }
                gamma[gi(k, i, j)] = 0.5 * s;
            }
        }
    }

    // Fully covariant tensor from second metric derivatives plus the quadratic
    // Christoffel term, then negated to put sectional curvature on R[i][j][j][i].
    let mut coord = vec![0.0; n.pow(4)];
    for i in 0..n {
        for k in 0..n {
            for l in 0..n {
                for m in 0..n {
                    let second = 0.5
                        * (d2g[k][l][(i, m)] + d2g[i][m][(k, l)] - d2g[k][m][(i, l)] - d2g[i][l][(k, m)]);
                    let mut quad = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            quad += g[(a, b)]
                                * (gamma[gi(a, k, l)] * gamma[gi(b, i, m)] - gamma[gi(a, k, m)] * gamma[gi(b, i, l)]);
                        }
                    }
                    coord[((i * n + k) * n + l) * n + m] = -(second + quad);
                }
            }
        }
    }
    if coord.iter().any(|c| !c.is_finite()) {
        return Err(Error::PointRejected(format!("non-finite curvature at {point:?}")));
    }
    let coord = RiemannTensor::with_tolerance(n, coord, FD_VALIDATION_TOLERANCE)?;
    let frame = orthonormal_frame(&g);
    let tensor = RiemannTensor::with_tolerance(n, coord.transform(&frame), FD_VALIDATION_TOLERANCE)?;
    Ok(PointCurvature {
        point: point.to_vec(),
        metric: g,
        frame,
        tensor,
    })
}

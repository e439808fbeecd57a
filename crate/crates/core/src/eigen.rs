//! Dense symmetric eigendecomposition by cyclic Jacobi rotations.
//!
//! Operators handled here are small (N ≤ 45 for n ≤ 10), so a dense sweep-based
//! solver is plenty and keeps eigenvectors orthonormal to machine precision.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::symcone::Spectrum;

pub const MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius norm at which iteration stops, relative to `max(1, ‖M‖_F)`.
pub const OFF_DIAGONAL_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub spectrum: Spectrum,
    /// Column `α` is the unit eigenvector for `spectrum.values()[α]`.
    pub vectors: DMatrix<f64>,
    pub sweeps: usize,
}

fn off_diagonal_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues ascending, eigenvectors in matching columns.
///
/// The input is symmetrized as `(M + Mᵀ)/2` first; a residual check against `tolerance`
/// (`‖Mv − λv‖ ≤ tolerance·‖M‖_F`) is applied before returning.
pub fn symmetric_eigen(matrix: &DMatrix<f64>, tolerance: f64) -> Result<EigenDecomposition> {
    let n = matrix.nrows();
    if n == 0 || matrix.ncols() != n {
        return Err(Error::Argument(format!(
            "expected a non-empty square matrix, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    if matrix.iter().any(|x| !x.is_finite()) {
        return Err(Error::Argument("matrix has non-finite entries".into()));
    }
    let sym = (matrix + matrix.transpose()) * 0.5;
    let mut a = sym.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let scale = a.norm().max(1.0);
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= OFF_DIAGONAL_THRESHOLD * scale {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);

    let norm = sym.norm();
    for (c, &lambda) in values.iter().enumerate() {
        let col = vectors.column(c);
        let residual = (&sym * col - col * lambda).norm();
        if residual > tolerance * norm.max(f64::MIN_POSITIVE) && residual > f64::EPSILON {
            return Err(Error::Consistency(format!(
                "eigenpair {c} residual {residual:.3e} exceeds {:.1e}·‖M‖",
                tolerance
            )));
        }
    }
    Ok(EigenDecomposition {
        spectrum: Spectrum::new(values)?,
        vectors,
        sweeps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn identity_and_diagonal() {
        let e = symmetric_eigen(&DMatrix::identity(5, 5), 1e-10).unwrap();
        assert_eq!(e.spectrum.values(), &[1.0; 5]);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 0.0, 0.0]));
        let e = symmetric_eigen(&d, 1e-10).unwrap();
        assert_eq!(e.spectrum.values(), &[0.0, 0.0, 1.0]);
        assert_eq!(e.sweeps, 0);
    }

    #[test]
    fn two_by_two_closed_form() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let e = symmetric_eigen(&m, 1e-12).unwrap();
        assert_relative_eq!(e.spectrum.values()[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(e.spectrum.values()[1], 3.0, epsilon = 1e-14);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(symmetric_eigen(&DMatrix::zeros(2, 3), 1e-10).is_err());
        let mut m = DMatrix::identity(2, 2);
        m[(0, 1)] = f64::NAN;
        assert!(symmetric_eigen(&m, 1e-10).is_err());
    }

    fn sym_matrix() -> impl Strategy<Value = DMatrix<f64>> {
        (1usize..12).prop_flat_map(|n| {
            prop::collection::vec(-5.0f64..5.0, n * n).prop_map(move |v| {
                let m = DMatrix::from_vec(n, n, v);
                (&m + m.transpose()) * 0.5
            })
        })
    }

    proptest! {
        #[test]
        fn decomposition_is_orthonormal_and_exact(m in sym_matrix()) {
            let n = m.nrows();
            let e = symmetric_eigen(&m, 1e-10).unwrap();
            let vtv = e.vectors.transpose() * &e.vectors;
            prop_assert!((vtv - DMatrix::<f64>::identity(n, n)).amax() < 1e-10);
            let d = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(e.spectrum.values()));
            let recon = &e.vectors * d * e.vectors.transpose();
            prop_assert!((recon - &m).amax() < 1e-10 * m.norm().max(1.0));
            // Cross-check against nalgebra's QR-based solver.
            let mut reference: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
            reference.sort_by(f64::total_cmp);
            for (a, b) in e.spectrum.values().iter().zip(&reference) {
                prop_assert!((a - b).abs() < 1e-9 * m.norm().max(1.0));
            }
        }
    }
}

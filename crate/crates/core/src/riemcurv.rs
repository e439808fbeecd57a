//! Riemann tensors in an orthonormal frame and the curvature operator on `Λ²`.
//!
//! Sign convention: components are stored so that `R[i][j][j][i]` is the sectional
//! curvature of the `(e_i, e_j)` plane. The operator entry for the basis pair
//! `(e_i∧e_j, e_k∧e_l)` is `R[i][j][l][k]`, so its diagonal is sectional curvature and
//! the unit round sphere gives the identity. The basis `{e_i∧e_j}_{i<j}` is taken
//! orthonormal and ordered lexicographically.

use nalgebra::DMatrix;

use crate::eigen::{symmetric_eigen, EigenDecomposition};
use crate::error::{Error, Result};

/// Residual allowed by [`RiemannTensor::new`], relative to the largest component.
pub const VALIDATION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct RiemannTensor {
    n: usize,
    components: Vec<f64>,
}

impl RiemannTensor {
    /// Wraps a flat `n⁴` array (index `((i·n + j)·n + k)·n + l`) after checking the
    /// algebraic symmetries at [`VALIDATION_TOLERANCE`].
    pub fn new(n: usize, components: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(n, components, VALIDATION_TOLERANCE)
    }

    pub fn with_tolerance(n: usize, components: Vec<f64>, tolerance: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("dimension {n} carries no curvature")));
        }
        if components.len() != n.pow(4) {
            return Err(Error::Argument(format!(
                "expected {} components for n = {n}, got {}",
                n.pow(4),
                components.len()
            )));
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(Error::Argument("non-finite curvature component".into()));
        }
        let t = Self { n, components };
        t.validate(tolerance)?;
        Ok(t)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize, usize) -> f64) -> Result<Self> {
        let mut c = Vec::with_capacity(n.pow(4));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        c.push(f(i, j, k, l));
                    }
                }
            }
        }
        Self::new(n, c)
    }

    /// Constant sectional curvature `kappa`.
    pub fn constant_curvature(n: usize, kappa: f64) -> Result<Self> {
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        Self::from_fn(n, |i, j, k, l| kappa * (d(i, l) * d(j, k) - d(i, k) * d(j, l)))
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, vec![0.0; n.pow(4)])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.components[((i * n + j) * n + k) * n + l]
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Worst residuals of (antisymmetry, pair symmetry, first Bianchi), absolute.
    pub fn symmetry_residuals(&self) -> (f64, f64, f64) {
        let n = self.n;
        let (mut anti, mut pair, mut bianchi) = (0.0f64, 0.0f64, 0.0f64);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        anti = anti.max((r + self.get(j, i, k, l)).abs());
                        anti = anti.max((r + self.get(i, j, l, k)).abs());
                        pair = pair.max((r - self.get(k, l, i, j)).abs());
                        let cyc = r + self.get(i, k, l, j) + self.get(i, l, j, k);
                        bianchi = bianchi.max(cyc.abs());
                    }
                }
            }
        }
        (anti, pair, bianchi)
    }

    /// Checks the symmetries with residuals relative to `max(1, max |R|)`.
    pub fn validate(&self, tolerance: f64) -> Result<()> {
        let scale = self.max_abs().max(1.0);
        let (anti, pair, bianchi) = self.symmetry_residuals();
        for (identity, residual) in [
            ("antisymmetry", anti),
            ("pair symmetry", pair),
            ("first Bianchi identity", bianchi),
        ] {
            if residual > tolerance * scale {
                return Err(Error::Validation {
                    identity,
                    residual,
                    tolerance: tolerance * scale,
                });
            }
        }
        Ok(())
    }

    /// Components in a new frame `f_a = Σ_i frame[(i, a)] e_i`.
    pub fn transform(&self, frame: &DMatrix<f64>) -> Vec<f64> {
        let n = self.n;
        let mut cur = self.components.clone();
        // Contract one slot at a time: O(n⁵).
        for slot in 0..4 {
            let mut next = vec![0.0; n.pow(4)];
            let stride = n.pow(3 - slot as u32);
            for idx in 0..n.pow(4) {
                let digit = (idx / stride) % n;
                let base = idx - digit * stride;
                let mut s = 0.0;
                for m in 0..n {
                    s += frame[(m, digit)] * cur[base + m * stride];
                }
                next[idx] = s;
            }
            cur = next;
        }
        cur
    }

    pub fn sectional(&self, i: usize, j: usize) -> Result<f64> {
        if i == j {
            return Err(Error::Argument(format!("sectional curvature needs i ≠ j, got {i} = {j}")));
        }
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self.get(i, j, j, i))
    }

    /// `Ric_{jk} = Σ_i R[i][j][k][i]`.
    pub fn ricci(&self) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |j, k| (0..n).map(|i| self.get(i, j, k, i)).sum())
    }

    pub fn scalar(&self) -> f64 {
        self.ricci().trace()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        crate::error::check_range("index", i, 0, self.n - 1)
    }
}

/// Position of `e_i∧e_j` (`i < j`) in the lexicographic basis of `Λ²`.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// All pairs `(i, j)` with `i < j`, in basis order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureOperatorMatrix {
    n: usize,
    matrix: DMatrix<f64>,
}

impl CurvatureOperatorMatrix {
    /// Wraps an explicit symmetric `N×N` matrix for an `n`-manifold.
    pub fn from_matrix(n: usize, matrix: DMatrix<f64>) -> Result<Self> {
        let size = n * (n - 1) / 2;
        if matrix.nrows() != size || matrix.ncols() != size {
            return Err(Error::Argument(format!(
                "operator for n = {n} must be {size}x{size}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let asym = (&matrix - matrix.transpose()).amax();
        if asym > VALIDATION_TOLERANCE * matrix.amax().max(1.0) {
            return Err(Error::Validation {
                identity: "operator symmetry",
                residual: asym,
                tolerance: VALIDATION_TOLERANCE,
            });
        }
        Ok(Self { n, matrix })
    }

    pub fn manifold_dim(&self) -> usize {
        self.n
    }

    /// `N = n(n−1)/2`.
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }
}

pub fn assemble_operator(r: &RiemannTensor) -> CurvatureOperatorMatrix {
    let n = r.dim();
    let ps = pairs(n);
    let size = ps.len();
    let mut m = DMatrix::zeros(size, size);
    for (a, &(i, j)) in ps.iter().enumerate() {
        for (b, &(k, l)) in ps.iter().enumerate().skip(a) {
            let v = r.get(i, j, l, k);
            m[(a, b)] = v;
            m[(b, a)] = v;
        }
    }
    CurvatureOperatorMatrix { n, matrix: m }
}

pub fn eigen_spectrum(m: &CurvatureOperatorMatrix, tolerance: f64) -> Result<EigenDecomposition> {
    symmetric_eigen(&m.matrix, tolerance)
}

/// Squared projections of each coordinate plane onto the operator kernel.
#[derive(Debug, Clone)]
pub struct KernelProjection {
    pub n: usize,
    pub kernel_dim: usize,
    /// `Σ_{α ≤ kernel_dim} (c_{ij}^α)²`, indexed like the `Λ²` basis.
    pub weights: Vec<f64>,
    /// Full expansion coefficients `c_{ij}^α`: row = plane, column = eigenvector.
    pub coefficients: DMatrix<f64>,
}

impl KernelProjection {
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.weights[pair_index(self.n, i, j)],
            std::cmp::Ordering::Greater => self.weights[pair_index(self.n, j, i)],
            std::cmp::Ordering::Equal => 0.0,
        }
    }

    /// `Σ_i Σ_{α ≤ kernel_dim} (c_{ij}^α)²` for fixed `j`.
    pub fn column_sum(&self, j: usize) -> f64 {
        (0..self.n).map(|i| self.weight(i, j)).sum()
    }
}

pub fn kernel_coefficients(
    m: &CurvatureOperatorMatrix,
    kernel_dim: usize,
    tolerance: f64,
) -> Result<KernelProjection> {
    let size = m.size();
    if kernel_dim > size {
        return Err(Error::Consistency(format!(
            "kernel dimension {kernel_dim} exceeds operator size {size}"
        )));
    }
    let eig = eigen_spectrum(m, 1e-10)?;
    let vals = eig.spectrum.values();
    if let Some(bad) = vals[..kernel_dim].iter().find(|v| v.abs() > tolerance) {
        return Err(Error::Consistency(format!(
            "requested kernel of dimension {kernel_dim} but eigenvalue {bad:.3e} is not null"
        )));
    }
    if kernel_dim < size && vals[kernel_dim].abs() <= tolerance {
        return Err(Error::Consistency(format!(
            "kernel has dimension greater than {kernel_dim}"
        )));
    }
    let weights = (0..size)
        .map(|p| (0..kernel_dim).map(|a| eig.vectors[(p, a)].powi(2)).sum())
        .collect();
    Ok(KernelProjection {
        n: m.manifold_dim(),
        kernel_dim,
        weights,
        coefficients: eig.vectors,
    })
}

//! Kähler curvature tensors `R_{ij̄kl̄}` in a unitary frame and the Kähler curvature
//! operator on real `(1,1)`-forms.
//!
//! A `(1,1)`-form `φ = Σ A_{ij} e_i∧ē_j` is paired with itself as
//!
//! ```text
//! g(R(φ), φ) = Σ R_{i j̄ l k̄} A_{ij} conj(A_{kl})
//! ```
//!
//! which puts holomorphic sectional curvature `R_{iīiī}` on the `e_i∧ē_i` diagonal and
//! reproduces the expansions `g(R(e_i∧ē_j + e_j∧ē_i), ·) = R_{ij̄jī} + R_{ij̄ij̄} + R_{jījī} + R_{jīij̄}`.
//! Real forms correspond to Hermitian `A`; on the real orthonormal basis of Hermitian
//! matrices (diagonal units, then the real and imaginary elements for each `i < j`) the
//! operator is a real symmetric `n²×n²` matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::eigen::{symmetric_eigen, EigenDecomposition};
use crate::error::{check_range, Error, Result};

pub const VALIDATION_TOLERANCE: f64 = 1e-10;
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct KahlerCurvatureTensor {
    n: usize,
    components: Vec<Complex64>,
}

impl KahlerCurvatureTensor {
    /// `components` is indexed `((i·n + j)·n + k)·n + l` for `R_{ij̄kl̄}`.
    pub fn new(n: usize, components: Vec<Complex64>) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain("complex dimension must be positive".into()));
        }
        if components.len() != n.pow(4) {
            return Err(Error::Argument(format!(
                "expected {} components for n = {n}, got {}",
                n.pow(4),
                components.len()
            )));
        }
        if components.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::Argument("non-finite curvature component".into()));
        }
        let t = Self { n, components };
        t.validate(VALIDATION_TOLERANCE)?;
        Ok(t)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize, usize) -> Complex64) -> Result<Self> {
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

    /// Constant holomorphic sectional curvature `2c`: `R_{ij̄kl̄} = c(δ_ij δ_kl + δ_il δ_kj)`.
    pub fn fubini_study(n: usize, c: f64) -> Result<Self> {
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        Self::from_fn(n, |i, j, k, l| {
            Complex64::new(c * (d(i, j) * d(k, l) + d(i, l) * d(k, j)), 0.0)
        })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, vec![Complex64::new(0.0, 0.0); n.pow(4)])
    }

    /// A random tensor with the Kähler symmetries.
    ///
    /// Such tensors are exactly Hermitian forms on symmetric 2-tensors:
    /// `R_{ij̄kl̄} = H[{i,k}][{j,l}]` with `H` Hermitian.
    pub fn random<G: Rng + ?Sized>(n: usize, rng: &mut G) -> Result<Self> {
        let sym_pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i..n).map(move |k| (i, k))).collect();
        let s = sym_pairs.len();
        let mut g = DMatrix::<Complex64>::zeros(s, s);
        for x in g.iter_mut() {
            *x = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
        let h = &g + g.adjoint();
        let idx = |a: usize, b: usize| {
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            sym_pairs.iter().position(|&p| p == (a, b)).unwrap()
        };
        Self::from_fn(n, |i, j, k, l| h[(idx(i, k), idx(j, l))])
    }

    /// Block tensor of a product; mixed components vanish.
    pub fn product(a: &Self, b: &Self) -> Result<Self> {
        let (na, nb) = (a.n, b.n);
        Self::from_fn(na + nb, |i, j, k, l| {
            if i < na && j < na && k < na && l < na {
                a.get(i, j, k, l)
            } else if i >= na && j >= na && k >= na && l >= na {
                b.get(i - na, j - na, k - na, l - na)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        let n = self.n;
        self.components[((i * n + j) * n + k) * n + l]
    }

    pub fn components(&self) -> &[Complex64] {
        &self.components
    }

    /// Worst residual over the first-index swap, second-index swap and Hermitian identities.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        worst = worst
                            .max((r - self.get(k, j, i, l)).norm())
                            .max((r - self.get(i, l, k, j)).norm())
                            .max((r - self.get(j, i, l, k).conj()).norm());
                    }
                }
            }
        }
        worst
    }

    pub fn validate(&self, tolerance: f64) -> Result<()> {
        let scale = self.components.iter().fold(1.0f64, |m, c| m.max(c.norm()));
        let residual = self.symmetry_residual();
        if residual > tolerance * scale {
            return Err(Error::Validation {
                identity: "Kähler curvature symmetry",
                residual,
                tolerance: tolerance * scale,
            });
        }
        Ok(())
    }

    /// Components in the frame `e'_a = Σ_i frame[(i, a)] e_i`.
    pub fn transform(&self, frame: &DMatrix<Complex64>) -> Result<Self> {
        let n = self.n;
        if frame.nrows() != n || frame.ncols() != n {
            return Err(Error::Argument(format!("frame must be {n}x{n}")));
        }
        let mut cur = self.components.clone();
        for slot in 0..4 {
            let mut next = vec![Complex64::new(0.0, 0.0); n.pow(4)];
            let stride = n.pow(3 - slot as u32);
            // Slots 1 and 3 are barred.
            let barred = slot % 2 == 1;
            for (idx, out) in next.iter_mut().enumerate() {
                let digit = (idx / stride) % n;
                let base = idx - digit * stride;
                let mut s = Complex64::new(0.0, 0.0);
                for m in 0..n {
                    let u = frame[(m, digit)];
                    s += if barred { u.conj() } else { u } * cur[base + m * stride];
                }
                *out = s;
            }
            cur = next;
        }
        Self::new(n, cur)
    }

    /// `R_{ij̄jī}`; holomorphic sectional curvature when `i = j`.
    pub fn bisectional(&self, i: usize, j: usize) -> Result<f64> {
        check_range("i", i, 0, self.n - 1)?;
        check_range("j", j, 0, self.n - 1)?;
        Ok(self.get(i, j, j, i).re)
    }

    /// `Ric_{kl̄} = Σ_i R_{iīkl̄}`.
    pub fn ricci(&self) -> DMatrix<Complex64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |k, l| (0..n).map(|i| self.get(i, i, k, l)).sum())
    }

    /// `S(A, B) = Σ R_{ij̄lk̄} A_{ij} conj(B_{kl})`.
    pub fn form_pairing(&self, a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
        let n = self.n;
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let aij = a[(i, j)];
                if aij == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        s += self.get(i, j, l, k) * aij * b[(k, l)].conj();
                    }
                }
            }
        }
        s
    }

    /// `g(R(φ), φ)` for the form with coefficient matrix `a`.
    pub fn quadratic_form(&self, a: &DMatrix<Complex64>) -> f64 {
        self.form_pairing(a, a).re
    }
}

/// The real orthonormal basis of `n×n` Hermitian matrices used by [`KahlerOperatorMatrix`].
pub fn hermitian_basis(n: usize) -> Vec<DMatrix<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let mut m = DMatrix::from_element(n, n, zero);
        m[(i, i)] = Complex64::new(1.0, 0.0);
        out.push(m);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut re = DMatrix::from_element(n, n, zero);
            re[(i, j)] = Complex64::new(h, 0.0);
            re[(j, i)] = Complex64::new(h, 0.0);
            out.push(re);
            let mut im = DMatrix::from_element(n, n, zero);
            im[(i, j)] = Complex64::new(0.0, h);
            im[(j, i)] = Complex64::new(0.0, -h);
            out.push(im);
        }
    }
    out
}

/// Position of the real (`imaginary = false`) or imaginary element for `i < j`.
pub fn hermitian_basis_index(n: usize, i: usize, j: usize, imaginary: bool) -> usize {
    debug_assert!(i < j && j < n);
    n + 2 * crate::riemcurv::pair_index(n, i, j) + usize::from(imaginary)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KahlerOperatorMatrix {
    n: usize,
    matrix: DMatrix<f64>,
}

impl KahlerOperatorMatrix {
    pub fn complex_dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `T = Σ ρ_i`.
    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }
}

pub fn assemble_kahler_operator(r: &KahlerCurvatureTensor) -> KahlerOperatorMatrix {
    let n = r.dim();
    let basis = hermitian_basis(n);
    let size = basis.len();
    let mut m = DMatrix::zeros(size, size);
    for a in 0..size {
        for b in a..size {
            let v = 0.5 * (r.form_pairing(&basis[a], &basis[b]) + r.form_pairing(&basis[b], &basis[a])).re;
            m[(a, b)] = v;
            m[(b, a)] = v;
        }
    }
    KahlerOperatorMatrix { n, matrix: m }
}

pub fn kahler_spectrum(m: &KahlerOperatorMatrix, tolerance: f64) -> Result<EigenDecomposition> {
    symmetric_eigen(&m.matrix, tolerance)
}

/// `(4·R_{iījj̄}, g(R(φ₊), φ₊) + g(R(φ₋), φ₋))` with `φ₊ = e_i∧ē_j + e_j∧ē_i` and
/// `φ₋ = e_j∧ē_i − e_i∧ē_j`; the right side is read off the assembled operator.
pub fn orthogonal_bisectional_identity(r: &KahlerCurvatureTensor, i: usize, j: usize) -> Result<(f64, f64)> {
    let n = r.dim();
    check_range("i", i, 0, n - 1)?;
    check_range("j", j, 0, n - 1)?;
    if i == j {
        return Err(Error::Argument(format!("orthogonal bisectional curvature needs i ≠ j, got {i} = {j}")));
    }
    let lhs = 4.0 * r.get(i, i, j, j).re;
    let m = assemble_kahler_operator(r);
    let (p, q) = (i.min(j), i.max(j));
    // φ₊ = √2 · (real element); φ₋ = i·√2·(±imaginary element), and |i|² = 1.
    let re = hermitian_basis_index(n, p, q, false);
    let im = hermitian_basis_index(n, p, q, true);
    let rhs = 2.0 * m.matrix[(re, re)] + 2.0 * m.matrix[(im, im)];
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, Serialize)]
pub struct ObcReport {
    /// `ρ_1 + ρ_2` of the Kähler operator.
    pub two_smallest_sum: f64,
    pub frames_checked: usize,
    /// `min 4R_{iījj̄} − 2(ρ_1 + ρ_2)` over frames and pairs `i ≠ j`.
    pub min_margin: f64,
    pub per_frame_min: Vec<f64>,
    pub tolerance: f64,
}

impl ObcReport {
    pub fn holds(&self) -> bool {
        self.min_margin >= -self.tolerance
    }
}

/// Checks `4R_{iījj̄} ≥ 2(ρ_1 + ρ_2)` in every supplied unitary frame.
pub fn two_positivity_implies_obc(
    r: &KahlerCurvatureTensor,
    frames: &[DMatrix<Complex64>],
    tolerance: f64,
) -> Result<ObcReport> {
    let n = r.dim();
    if n < 2 {
        return Err(Error::Domain("orthogonal bisectional curvature needs n ≥ 2".into()));
    }
    let eig = kahler_spectrum(&assemble_kahler_operator(r), 1e-10)?;
    let rho = eig.spectrum.values();
    let two = rho[0] + rho[1];
    if two <= tolerance {
        return Err(Error::Precondition(format!(
            "Kähler operator is not 2-positive: ρ₁ + ρ₂ = {two:.3e}"
        )));
    }
    let mut per_frame_min = Vec::with_capacity(frames.len());
    for frame in frames {
        check_unitary(frame, 1e-10)?;
        let t = r.transform(frame)?;
        let mut worst = f64::INFINITY;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.min(4.0 * t.get(i, i, j, j).re - 2.0 * two);
                }
            }
        }
        per_frame_min.push(worst);
    }
    let min_margin = per_frame_min.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ObcReport {
        two_smallest_sum: two,
        frames_checked: frames.len(),
        min_margin,
        per_frame_min,
        tolerance,
    })
}

pub fn check_unitary(u: &DMatrix<Complex64>, tolerance: f64) -> Result<()> {
    let n = u.nrows();
    let err = (u.adjoint() * u - DMatrix::<Complex64>::identity(n, n))
        .iter()
        .fold(0.0f64, |m, z| m.max(z.norm()));
    if err > tolerance {
        return Err(Error::Argument(format!("frame is not unitary (residual {err:.3e})")));
    }
    Ok(())
}

/// Haar-like random unitary: Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary<G: Rng + ?Sized>(n: usize, rng: &mut G) -> DMatrix<Complex64> {
    let mut m = DMatrix::<Complex64>::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    for c in 0..n {
        for p in 0..c {
            let proj: Complex64 = (0..n).map(|r| m[(r, p)].conj() * m[(r, c)]).sum();
            for r in 0..n {
                let v = m[(r, p)];
                m[(r, c)] -= proj * v;
            }
        }
        let norm = (0..n).map(|r| m[(r, c)].norm_sqr()).sum::<f64>().sqrt();
        for r in 0..n {
            m[(r, c)] /= norm;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spectrum(r: &KahlerCurvatureTensor) -> Vec<f64> {
        kahler_spectrum(&assemble_kahler_operator(r), 1e-10)
            .unwrap()
            .spectrum
            .values()
            .to_vec()
    }

    #[test]
    fn cp1_is_one_by_one() {
        let r = KahlerCurvatureTensor::fubini_study(1, 1.0).unwrap();
        let m = assemble_kahler_operator(&r);
        assert_eq!(m.matrix().shape(), (1, 1));
        assert_relative_eq!(m.matrix()[(0, 0)], 2.0);
    }

    #[test]
    fn fubini_study_bisectional() {
        let r = KahlerCurvatureTensor::fubini_study(3, 1.0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 2.0 } else { 1.0 };
                assert_eq!(r.bisectional(i, j).unwrap(), want);
            }
        }
        let m = assemble_kahler_operator(&r);
        for i in 0..3 {
            assert_relative_eq!(m.matrix()[(i, i)], 2.0);
        }
        assert!(r.bisectional(3, 0).is_err());
    }

    #[test]
    fn product_and_flat() {
        let cp1 = KahlerCurvatureTensor::fubini_study(1, 1.0).unwrap();
        let p = KahlerCurvatureTensor::product(&cp1, &cp1).unwrap();
        assert_eq!(p.bisectional(0, 1).unwrap(), 0.0);
        let s = spectrum(&p);
        for (a, b) in s.iter().zip([0.0, 0.0, 2.0, 2.0]) {
            assert_relative_eq!(*a, b, epsilon = 1e-12);
        }
        let flat = KahlerCurvatureTensor::zero(2).unwrap();
        assert_eq!(flat.bisectional(0, 1).unwrap(), 0.0);
        assert_eq!(orthogonal_bisectional_identity(&flat, 0, 1).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn identity_on_fubini_study() {
        let r = KahlerCurvatureTensor::fubini_study(2, 1.0).unwrap();
        let (lhs, rhs) = orthogonal_bisectional_identity(&r, 0, 1).unwrap();
        assert_relative_eq!(lhs, 4.0, epsilon = 1e-14);
        assert_relative_eq!(rhs, 4.0, epsilon = 1e-12);
        assert!(matches!(orthogonal_bisectional_identity(&r, 1, 1), Err(Error::Argument(_))));
    }

    #[test]
    fn operator_agrees_with_direct_quadratic_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = KahlerCurvatureTensor::random(3, &mut rng).unwrap();
        let m = assemble_kahler_operator(&r);
        let basis = hermitian_basis(3);
        let x: Vec<f64> = (0..9).map(|i| (i as f64 * 0.37).sin()).collect();
        let a = basis.iter().zip(&x).fold(DMatrix::<Complex64>::zeros(3, 3), |acc, (b, c)| acc + b * Complex64::new(*c, 0.0));
        let xv = nalgebra::DVector::from_vec(x);
        let via_matrix = (xv.transpose() * m.matrix() * &xv)[(0, 0)];
        assert_relative_eq!(via_matrix, r.quadratic_form(&a), max_relative = 1e-12);
        // The pairing is Hermitian, so the quadratic form on Hermitian A is real.
        assert!(r.form_pairing(&a, &a).im.abs() < 1e-12);
    }

    #[test]
    fn random_tensors_validate_and_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..5 {
            let r = KahlerCurvatureTensor::random(n, &mut rng).unwrap();
            let u = random_unitary(n, &mut rng);
            check_unitary(&u, 1e-12).unwrap();
            let t = r.transform(&u).unwrap();
            let (a, b) = (spectrum(&r), spectrum(&t));
            for (x, y) in a.iter().zip(&b) {
                assert_relative_eq!(x, y, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn obc_precondition_and_margins() {
        let cp1 = KahlerCurvatureTensor::fubini_study(1, 1.0).unwrap();
        let p = KahlerCurvatureTensor::product(&cp1, &cp1).unwrap();
        assert!(matches!(
            two_positivity_implies_obc(&p, &[], 1e-9),
            Err(Error::Precondition(_))
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = KahlerCurvatureTensor::fubini_study(3, 1.0).unwrap();
        let frames: Vec<_> = (0..20).map(|_| random_unitary(3, &mut rng)).collect();
        let rep = two_positivity_implies_obc(&r, &frames, 1e-9).unwrap();
        // FS is frame-independent and saturates the inequality.
        assert_relative_eq!(rep.two_smallest_sum, 2.0, epsilon = 1e-12);
        assert!(rep.min_margin.abs() < 1e-9);
        assert!(rep.holds());
        let bad = DMatrix::from_element(3, 3, Complex64::new(1.0, 0.0));
        assert!(two_positivity_implies_obc(&r, &[bad], 1e-9).is_err());
    }

    #[test]
    fn symmetry_violation_rejected() {
        let mut c = KahlerCurvatureTensor::fubini_study(2, 1.0).unwrap().components().to_vec();
        c[1] = Complex64::new(0.3, 0.0);
        assert!(matches!(KahlerCurvatureTensor::new(2, c), Err(Error::Validation { .. })));
    }
}

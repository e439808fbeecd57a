//! Closed-form curvature tensors of model spaces at a point.
//!
//! All models are homogeneous, so one point represents the whole space. Catalog names
//! accepted by [`ModelSpec::from_catalog`]: `s3`, `s2xs1`, `sKxs1:k`, `flat:n`,
//! `cpn:n`, `cp1xcp1`, `hyperbolic:n`.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{check_range, Error, Result};
use crate::kahlercurv::KahlerCurvatureTensor;
use crate::riemcurv::{CurvatureOperatorMatrix, RiemannTensor};

/// Scale of the Fubini–Study entries: `R_{ij̄kl̄} = c(δ_ij δ_kl + δ_il δ_kj)`, so the
/// holomorphic sectional curvature is `2c` and the real CP² operator has largest
/// eigenvalue 3.
pub const FUBINI_STUDY_SCALE: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    RoundSphere { n: usize, radius: f64 },
    Flat { n: usize },
    Product(Box<ModelSpec>, Box<ModelSpec>),
    /// `CPⁿ`, `n` the complex dimension.
    FubiniStudy { n: usize },
    Hyperbolic { n: usize },
}

#[derive(Debug, Clone)]
pub struct ModelTensors {
    pub spec: ModelSpec,
    pub riemann: Option<RiemannTensor>,
    pub kahler: Option<KahlerCurvatureTensor>,
}

impl ModelSpec {
    pub fn product(a: ModelSpec, b: ModelSpec) -> Self {
        ModelSpec::Product(Box::new(a), Box::new(b))
    }

    pub fn from_catalog(name: &str) -> Result<Self> {
        let (head, arg) = match name.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (name, None),
        };
        let num = |what: &str| -> Result<usize> {
            let a = arg.ok_or_else(|| Error::Argument(format!("model `{what}` needs a `:<integer>` suffix")))?;
            a.trim()
                .parse()
                .map_err(|_| Error::Argument(format!("invalid integer `{a}` in model name `{name}`")))
        };
        let spec = match head {
            "s3" if arg.is_none() => ModelSpec::RoundSphere { n: 3, radius: 1.0 },
            "s2xs1" if arg.is_none() => ModelSpec::product(
                ModelSpec::RoundSphere { n: 2, radius: 1.0 },
                ModelSpec::Flat { n: 1 },
            ),
            "sKxs1" => {
                let k = num("sKxs1")?;
                if k < 2 {
                    return Err(Error::Domain(format!("sKxs1 needs k ≥ 2, got {k}")));
                }
                ModelSpec::product(ModelSpec::RoundSphere { n: k, radius: 1.0 }, ModelSpec::Flat { n: 1 })
            }
            "flat" => ModelSpec::Flat { n: num("flat")? },
            "cpn" => ModelSpec::FubiniStudy { n: num("cpn")? },
            "cp1xcp1" if arg.is_none() => ModelSpec::product(
                ModelSpec::FubiniStudy { n: 1 },
                ModelSpec::FubiniStudy { n: 1 },
            ),
            "hyperbolic" => ModelSpec::Hyperbolic { n: num("hyperbolic")? },
            _ => return Err(Error::Argument(format!("unknown model `{name}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Real dimension.
    pub fn dimension(&self) -> usize {
        match self {
            ModelSpec::RoundSphere { n, .. } | ModelSpec::Flat { n } | ModelSpec::Hyperbolic { n } => *n,
            ModelSpec::FubiniStudy { n } => 2 * n,
            ModelSpec::Product(a, b) => a.dimension() + b.dimension(),
        }
    }

    /// Complex dimension when the model carries a Kähler structure.
    pub fn complex_dimension(&self) -> Option<usize> {
        match self {
            ModelSpec::FubiniStudy { n } => Some(*n),
            ModelSpec::Flat { n } if n % 2 == 0 => Some(n / 2),
            ModelSpec::Product(a, b) => Some(a.complex_dimension()? + b.complex_dimension()?),
            _ => None,
        }
    }

    pub fn is_kahler(&self) -> bool {
        self.complex_dimension().is_some()
    }

    /// Checks parameters; only the whole model (not a product factor) needs dimension ≥ 2.
    pub fn validate(&self) -> Result<()> {
        self.validate_factor()?;
        if self.dimension() < 2 {
            return Err(Error::Domain(format!("{self} has dimension {} < 2", self.dimension())));
        }
        Ok(())
    }

    fn validate_factor(&self) -> Result<()> {
        match self {
            ModelSpec::RoundSphere { n, radius } => {
                if *n < 2 {
                    return Err(Error::Domain(format!("round sphere needs n ≥ 2, got {n}")));
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::Domain(format!("radius must be positive, got {radius}")));
                }
            }
            ModelSpec::Flat { n } if *n < 1 => return Err(Error::Domain("flat space needs n ≥ 1".into())),
            ModelSpec::Hyperbolic { n } if *n < 2 => {
                return Err(Error::Domain(format!("hyperbolic space needs n ≥ 2, got {n}")))
            }
            ModelSpec::FubiniStudy { n } if *n < 1 => {
                return Err(Error::Domain("CPⁿ needs n ≥ 1".into()))
            }
            ModelSpec::Product(a, b) => {
                a.validate_factor()?;
                b.validate_factor()?;
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::RoundSphere { n, radius } if *radius == 1.0 => write!(f, "S^{n}"),
            ModelSpec::RoundSphere { n, radius } => write!(f, "S^{n}(r={radius})"),
            ModelSpec::Flat { n } => write!(f, "R^{n}"),
            ModelSpec::FubiniStudy { n } => write!(f, "CP^{n}"),
            ModelSpec::Hyperbolic { n } => write!(f, "H^{n}"),
            ModelSpec::Product(a, b) => write!(f, "{a} x {b}"),
        }
    }
}

/// Raw `n⁴` components; `None` when the spec has no Riemannian tensor in the catalog.
fn riemann_components(spec: &ModelSpec) -> Option<(usize, Vec<f64>)> {
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let constant = |n: usize, kappa: f64| {
        let mut c = Vec::with_capacity(n.pow(4));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        c.push(kappa * (d(i, l) * d(j, k) - d(i, k) * d(j, l)));
                    }
                }
            }
        }
        (n, c)
    };
    match spec {
        ModelSpec::RoundSphere { n, radius } => Some(constant(*n, 1.0 / (radius * radius))),
        ModelSpec::Flat { n } => Some((*n, vec![0.0; n.pow(4)])),
        ModelSpec::Hyperbolic { n } => Some(constant(*n, -1.0)),
        ModelSpec::FubiniStudy { n: 2 } => Some((4, cp2_components(2.0 * FUBINI_STUDY_SCALE))),
        ModelSpec::FubiniStudy { .. } => None,
        ModelSpec::Product(a, b) => {
            let (na, ca) = riemann_components(a)?;
            let (nb, cb) = riemann_components(b)?;
            let n = na + nb;
            let mut c = vec![0.0; n.pow(4)];
            let put = |c: &mut Vec<f64>, off: usize, m: usize, src: &[f64]| {
                for i in 0..m {
                    for j in 0..m {
                        for k in 0..m {
                            for l in 0..m {
                                let dst = (((i + off) * n + j + off) * n + k + off) * n + l + off;
                                c[dst] = src[((i * m + j) * m + k) * m + l];
                            }
                        }
                    }
                }
            };
            put(&mut c, 0, na, &ca);
            put(&mut c, na, nb, &cb);
            Some((n, c))
        }
    }
}

/// Constant holomorphic sectional curvature `h` on `C²` with `J e_0 = e_1`, `J e_2 = e_3`:
///
/// ```text
/// R(X,Y,Z,W) = h/4 · [⟨X,W⟩⟨Y,Z⟩ − ⟨X,Z⟩⟨Y,W⟩ + ⟨X,JW⟩⟨Y,JZ⟩ − ⟨X,JZ⟩⟨Y,JW⟩ − 2⟨X,JY⟩⟨Z,JW⟩]
/// ```
fn cp2_components(h: f64) -> Vec<f64> {
    let n = 4;
    // j[a][b] = ⟨e_a, J e_b⟩
    let mut j = [[0.0f64; 4]; 4];
    j[1][0] = 1.0;
    j[0][1] = -1.0;
    j[3][2] = 1.0;
    j[2][3] = -1.0;
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let mut c = Vec::with_capacity(n * n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    let v = d(x, w) * d(y, z) - d(x, z) * d(y, w) + j[x][w] * j[y][z]
                        - j[x][z] * j[y][w]
                        - 2.0 * j[x][y] * j[z][w];
                    c.push(0.25 * h * v);
                }
            }
        }
    }
    c
}

/// The CP² Fubini–Study curvature operator as a literal matrix in the basis
/// `(e01, e02, e03, e12, e13, e23)`; its eigenvalues are `0, 0, 1, 1, 1, 3`.
pub fn cp2_golden_operator() -> CurvatureOperatorMatrix {
    #[rustfmt::skip]
    let entries = [
        2.0, 0.0, 0.0,  0.0, 0.0, 1.0,
        0.0, 0.5, 0.0,  0.0, 0.5, 0.0,
        0.0, 0.0, 0.5, -0.5, 0.0, 0.0,
        0.0, 0.0, -0.5, 0.5, 0.0, 0.0,
        0.0, 0.5, 0.0,  0.0, 0.5, 0.0,
        1.0, 0.0, 0.0,  0.0, 0.0, 2.0,
    ];
    CurvatureOperatorMatrix::from_matrix(4, DMatrix::from_row_slice(6, 6, &entries))
        .expect("literal operator is symmetric")
}

pub const CP2_GOLDEN_SPECTRUM: [f64; 6] = [0.0, 0.0, 1.0, 1.0, 1.0, 3.0];

fn kahler_tensor(spec: &ModelSpec) -> Result<Option<KahlerCurvatureTensor>> {
    Ok(match spec {
        ModelSpec::FubiniStudy { n } => Some(KahlerCurvatureTensor::fubini_study(*n, FUBINI_STUDY_SCALE)?),
        ModelSpec::Flat { n } if n % 2 == 0 => Some(KahlerCurvatureTensor::zero(n / 2)?),
        ModelSpec::Product(a, b) => match (kahler_tensor(a)?, kahler_tensor(b)?) {
            (Some(x), Some(y)) => Some(KahlerCurvatureTensor::product(&x, &y)?),
            _ => None,
        },
        _ => None,
    })
}

pub fn build(spec: &ModelSpec) -> Result<ModelTensors> {
    spec.validate()?;
    let riemann = match riemann_components(spec) {
        Some((n, c)) => Some(RiemannTensor::new(n, c)?),
        None => None,
    };
    let kahler = kahler_tensor(spec)?;
    if riemann.is_none() && kahler.is_none() {
        return Err(Error::Domain(format!("{spec} has no catalogued curvature tensor")));
    }
    Ok(ModelTensors {
        spec: spec.clone(),
        riemann,
        kahler,
    })
}

/// Most positive eigenvalues a product with factor dimensions `(m, n−m)` can have.
pub fn positive_eigenvalue_budget(n: usize, m: usize, kahler: bool) -> Result<usize> {
    if n < 2 {
        return Err(Error::Range { what: "n", value: n as i64, lo: 2, hi: i64::MAX });
    }
    check_range("m", m, 1, n - 1)?;
    Ok(if kahler {
        n * n - 2 * m * (n - m)
    } else {
        n * (n - 1) / 2 - m * (n - m)
    })
}

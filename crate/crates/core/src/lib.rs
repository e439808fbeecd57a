//! Curvature operators, shifted eigenvalue cones and the verdicts they support.
//!
//! Modules, roughly bottom-up:
//! - [`symcone`]: elementary symmetric functions, `Γ_j⁺` membership, thresholds `α_k`, `β_k`.
//! - [`riemcurv`] and [`kahlercurv`]: tensors, operator assembly, spectra.
//! - [`models`]: closed-form catalog (spheres, flat space, products, ℂPⁿ).
//! - [`chart`]: metric charts, expression parsing, finite-difference curvature.
//! - [`lemmalab`]: the interpolation lemma and the pinching arithmetic.
//! - [`classify`]: evidence to verdicts, Betti vanishing.

pub mod chart;
pub mod classify;
pub mod eigen;
pub mod error;
pub mod kahlercurv;
pub mod lemmalab;
pub mod models;
pub mod riemcurv;
pub mod symcone;

pub use error::{Error, Result};

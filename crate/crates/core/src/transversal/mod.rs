//! Numerical checks of the quantitative estimates behind pencils adapted to a
//! Lagrangian: the cutoff `l_k`, the radial rescaling map, the deformed Morse
//! functions `h_k`, and estimated transversality of the local perturbation
//! `p − w − w̄q`.
//!
//! Everything works in the rescaled coordinates where the metric is `g_k`, so
//! only the parameters `(k, D, c₀)` enter.

mod cutoff;
mod localtrans;
mod morse;
mod radial;

pub use cutoff::{
    build_cutoff, log_samples, minimal_k, ConstantProfile, CutoffProfile, CutoffReport, PowerLaw, RadialProfile,
    ShiftedPowerLaw,
};
pub use localtrans::{
    ball_grid, find_good_w0, random_instance, sigma, solve_w, solve_w_derivative, CertificateOptions,
    LocalTransInstance, Monomial, Polynomial, TransversalityCertificate, Warning,
};
pub use morse::{
    deform_morse, polar_grid, verify_deform_bounds, Background, CriticalPoint, DeformReport, DeformedMorse,
    MorseModel,
};
pub use radial::{radial_map_check, random_radial_case, RadialReport};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransversalError {
    #[error("k = {k} is below the admissible bound (3D/(1.4 c0))^6 = {min_k}")]
    Threshold { k: f64, min_k: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("point {0:?} lies outside every critical ball and no background is set")]
    OutsideSupport(Vec<f64>),
    #[error("precondition fails: {0}")]
    Precondition(String),
    #[error("|q(z)| = {0} is not below 1")]
    NotContracting(f64),
    #[error("verification failed at z = {point:?}: |f| = {value}, smallest singular value {singular} (sigma = {sigma})")]
    Verification { point: Vec<[f64; 2]>, value: f64, singular: f64, sigma: f64 },
}

/// Value and derivatives up to third order of a real function on `ℝⁿ`.
///
/// `third` holds `∂³f/∂x_a∂x_b∂x_c` at index `(a·n + b)·n + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: DVector<f64>,
    pub hess: DMatrix<f64>,
    pub third: Vec<f64>,
}

impl Jet {
    pub fn third_norm(&self) -> f64 {
        self.third.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Smallest singular value of a symmetric matrix.
pub fn symmetric_min_singular(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |acc, e| acc.min(e.abs()))
}

/// Whether `∇h` is η-transverse to zero on the grid: wherever `|∇h| < η`,
/// the Hessian has smallest singular value at least `η`. With `η = 0` the
/// test set is empty and the answer is `true`.
pub fn check_gradient_transversality<F>(h: F, grid: &[Vec<f64>], eta: f64) -> bool
where
    F: Fn(&[f64]) -> (DVector<f64>, DMatrix<f64>),
{
    grid.iter().all(|x| {
        let (g, hs) = h(x);
        g.norm() >= eta || symmetric_min_singular(&hs) >= eta
    })
}

/// The largest η for which [`check_gradient_transversality`] holds on the grid,
/// `min_x max(|∇h(x)|, σ_min(∇²h(x)))`.
pub fn observed_gradient_eta<F>(h: F, grid: &[Vec<f64>]) -> f64
where
    F: Fn(&[f64]) -> (DVector<f64>, DMatrix<f64>),
{
    grid.iter().fold(f64::INFINITY, |acc, x| {
        let (g, hs) = h(x);
        acc.min(g.norm().max(symmetric_min_singular(&hs)))
    })
}

/// Value and first derivatives `∂f/∂z_j`, `∂f/∂z̄_j` of a complex function on `ℂⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexJet {
    pub value: Complex64,
    pub dz: Vec<Complex64>,
    pub dzbar: Vec<Complex64>,
}

impl ComplexJet {
    pub fn holomorphic(value: Complex64, dz: Vec<Complex64>) -> Self {
        let dzbar = vec![Complex64::new(0.0, 0.0); dz.len()];
        Self { value, dz, dzbar }
    }

    /// Smallest singular value of the real `2 × 2n` derivative.
    pub fn min_singular(&self) -> f64 {
        // Columns ∂/∂x_j = a+b and ∂/∂y_j = i(a−b); accumulate M Mᵀ.
        let (mut s11, mut s12, mut s22) = (0.0, 0.0, 0.0);
        for (a, b) in self.dz.iter().zip(&self.dzbar) {
            for col in [a + b, Complex64::i() * (a - b)] {
                s11 += col.re * col.re;
                s12 += col.re * col.im;
                s22 += col.im * col.im;
            }
        }
        let tr = s11 + s22;
        let disc = ((s11 - s22).powi(2) + 4.0 * s12 * s12).sqrt();
        (0.5 * (tr - disc)).max(0.0).sqrt()
    }
}

/// Outcome of a grid transversality check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransverseCheck {
    pub passed: bool,
    /// `min max(|f|, σ_min(df))` over the grid.
    pub margin: f64,
    /// First grid point that fails, with `|f|` and `σ_min` there.
    pub failure: Option<(usize, f64, f64)>,
    pub points: usize,
}

/// Whether `f` is η-transverse to zero on the grid: wherever `|f| < η`, the
/// real derivative has a right inverse of norm `< 1/η`.
pub fn eta_transverse_check<F>(f: F, grid: &[Vec<Complex64>], eta: f64) -> TransverseCheck
where
    F: Fn(&[Complex64]) -> ComplexJet,
{
    let mut margin = f64::INFINITY;
    let mut failure = None;
    for (i, z) in grid.iter().enumerate() {
        let j = f(z);
        let (v, s) = (j.value.norm(), j.min_singular());
        margin = margin.min(v.max(s));
        if failure.is_none() && v < eta && s <= eta {
            failure = Some((i, v, s));
        }
    }
    TransverseCheck { passed: failure.is_none(), margin, failure, points: grid.len() }
}

/// `(cos h, sin h)` with value, gradient and Hessian propagated from `h`.
pub fn circle_pair(h: &Jet) -> (Jet, Jet) {
    let (c, s) = (h.value.cos(), h.value.sin());
    let gg = &h.grad * h.grad.transpose();
    let cos = Jet {
        value: c,
        grad: &h.grad * -s,
        hess: &gg * -c - &h.hess * s,
        third: Vec::new(),
    };
    let sin = Jet {
        value: s,
        grad: &h.grad * c,
        hess: &gg * -s + &h.hess * c,
        third: Vec::new(),
    };
    (cos, sin)
}

/// `|(h¹ + i h²)/(h¹ − i h²) − (cos 2h + i sin 2h)|` for `(h¹, h²) = (cos h, sin h)`.
pub fn circle_identity_residual(h: f64) -> f64 {
    let u = Complex64::new(h.cos(), h.sin());
    let q = u / u.conj();
    (q - Complex64::new((2.0 * h).cos(), (2.0 * h).sin())).norm()
}

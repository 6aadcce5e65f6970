use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{symmetric_min_singular, CutoffProfile, Jet, RadialProfile, TransversalError};

/// A nondegenerate critical point with Morse chart `f = c + Σ ε_i y_i²` around
/// `center` (unscaled coordinates).
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoint {
    pub center: Vec<f64>,
    pub value: f64,
    pub signs: Vec<f64>,
}

/// The unscaled function `f` away from the critical points, evaluated with
/// derivatives up to third order.
#[derive(Clone)]
pub struct Background(Arc<dyn Fn(&[f64]) -> Jet + Send + Sync>);

impl Background {
    pub fn new(f: impl Fn(&[f64]) -> Jet + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    /// The Morse chart of `p` extended to all of `ℝⁿ`.
    pub fn quadratic(p: &CriticalPoint) -> Self {
        let p = p.clone();
        Self::new(move |y| {
            let n = y.len();
            let d: Vec<f64> = (0..n).map(|i| y[i] - p.center[i]).collect();
            Jet {
                value: p.value + (0..n).map(|i| p.signs[i] * d[i] * d[i]).sum::<f64>(),
                grad: DVector::from_fn(n, |i, _| 2.0 * p.signs[i] * d[i]),
                hess: DMatrix::from_fn(n, n, |i, j| if i == j { 2.0 * p.signs[i] } else { 0.0 }),
                third: vec![0.0; n * n * n],
            }
        })
    }

    pub fn eval(&self, y: &[f64]) -> Jet {
        (self.0)(y)
    }
}

impl fmt::Debug for Background {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Background(..)")
    }
}

#[derive(Debug, Clone)]
pub struct MorseModel {
    pub dim: usize,
    pub points: Vec<CriticalPoint>,
    pub background: Option<Background>,
}

impl MorseModel {
    /// One critical point at the origin with the quadratic as background.
    pub fn single(signs: Vec<f64>, value: f64) -> Self {
        let p = CriticalPoint { center: vec![0.0; signs.len()], value, signs };
        Self { dim: p.signs.len(), background: Some(Background::quadratic(&p)), points: vec![p] }
    }
}

/// `h_k(x) = f_k(l̂_k(x)·x)` near each critical point and `k^{1/2} f` elsewhere,
/// in `g_k`-coordinates `x = k^{1/2} y`.
#[derive(Debug, Clone)]
pub struct DeformedMorse {
    pub model: MorseModel,
    pub profile: CutoffProfile,
}

pub fn deform_morse(model: MorseModel, profile: CutoffProfile) -> Result<DeformedMorse, TransversalError> {
    let n = model.dim;
    if n == 0 || model.points.is_empty() {
        return Err(TransversalError::Parameter("need a positive dimension and a critical point".into()));
    }
    for p in &model.points {
        if p.center.len() != n || p.signs.len() != n || p.signs.iter().any(|s| s.abs() != 1.0) {
            return Err(TransversalError::Parameter(format!("critical point {p:?} does not fit dimension {n}")));
        }
    }
    for (i, p) in model.points.iter().enumerate() {
        for q in &model.points[i + 1..] {
            let dist = p.center.iter().zip(&q.center).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            if dist <= 2.0 * profile.c0 {
                return Err(TransversalError::Parameter(format!(
                    "critical points {:?} and {:?} are closer than 2 c0",
                    p.center, q.center
                )));
            }
        }
    }
    Ok(DeformedMorse { model, profile })
}

impl DeformedMorse {
    pub fn dim(&self) -> usize {
        self.model.dim
    }

    pub fn jet(&self, x: &[f64]) -> Result<Jet, TransversalError> {
        let n = self.dim();
        if x.len() != n {
            return Err(TransversalError::Parameter(format!("point of dimension {} for n = {n}", x.len())));
        }
        let sk = self.profile.k.sqrt();
        for p in &self.model.points {
            let u: Vec<f64> = (0..n).map(|i| x[i] - sk * p.center[i]).collect();
            let r = u.iter().map(|v| v * v).sum::<f64>().sqrt();
            if r < sk * self.profile.c0 {
                if r >= self.profile.t2() && self.model.background.is_some() {
                    break;
                }
                return Ok(self.local_jet(p, &u, r));
            }
        }
        let bg = self.model.background.as_ref().ok_or_else(|| TransversalError::OutsideSupport(x.to_vec()))?;
        let y: Vec<f64> = x.iter().map(|v| v / sk).collect();
        let f = bg.eval(&y);
        Ok(Jet {
            value: sk * f.value,
            grad: f.grad,
            hess: f.hess / sk,
            third: f.third.iter().map(|v| v / self.profile.k).collect(),
        })
    }

    fn local_jet(&self, p: &CriticalPoint, u: &[f64], r: f64) -> Jet {
        let n = u.len();
        let sk = self.profile.k.sqrt();
        let eps = &p.signs;
        if r <= self.profile.d {
            return Jet {
                value: sk * p.value + (0..n).map(|i| eps[i] * u[i] * u[i]).sum::<f64>(),
                grad: DVector::from_fn(n, |i, _| 2.0 * eps[i] * u[i]),
                hess: DMatrix::from_fn(n, n, |i, j| if i == j { 2.0 * eps[i] } else { 0.0 }),
                third: vec![0.0; n * n * n],
            };
        }
        let [l, l1, l2, l3] = self.profile.jet(r);
        let uh: Vec<f64> = u.iter().map(|v| v / r).collect();
        let kd = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        let pr = |a: usize, b: usize| kd(a, b) - uh[a] * uh[b];
        // Derivatives of l̂(u) = l(|u|).
        let la: Vec<f64> = (0..n).map(|a| l1 * uh[a]).collect();
        let lab = DMatrix::from_fn(n, n, |a, b| l2 * uh[a] * uh[b] + l1 / r * pr(a, b));
        let c3 = l2 / r - l1 / (r * r);
        let labc = |a: usize, b: usize, c: usize| {
            l3 * uh[a] * uh[b] * uh[c] + c3 * (pr(a, c) * uh[b] + pr(b, c) * uh[a] + pr(a, b) * uh[c])
        };
        // Φ^i = l̂ u_i and its derivatives.
        let phi: Vec<f64> = u.iter().map(|v| l * v).collect();
        let phi1 = |i: usize, a: usize| la[a] * u[i] + l * kd(i, a);
        let phi2 = |i: usize, a: usize, b: usize| lab[(a, b)] * u[i] + la[a] * kd(i, b) + la[b] * kd(i, a);
        let phi3 = |i: usize, a: usize, b: usize, c: usize| {
            labc(a, b, c) * u[i] + lab[(a, b)] * kd(i, c) + lab[(a, c)] * kd(i, b) + lab[(b, c)] * kd(i, a)
        };
        // f_k(y) = k^{1/2} c + k^{-1/2} Σ ε_i y_i².
        let fi: Vec<f64> = (0..n).map(|i| 2.0 * eps[i] * phi[i] / sk).collect();
        let fii: Vec<f64> = (0..n).map(|i| 2.0 * eps[i] / sk).collect();

        let value = sk * p.value + (0..n).map(|i| eps[i] * phi[i] * phi[i]).sum::<f64>() / sk;
        let grad = DVector::from_fn(n, |a, _| (0..n).map(|i| fi[i] * phi1(i, a)).sum());
        let hess = DMatrix::from_fn(n, n, |a, b| {
            (0..n).map(|i| fii[i] * phi1(i, a) * phi1(i, b) + fi[i] * phi2(i, a, b)).sum()
        });
        let mut third = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    third[(a * n + b) * n + c] = (0..n)
                        .map(|i| {
                            fii[i]
                                * (phi1(i, a) * phi2(i, b, c) + phi1(i, b) * phi2(i, a, c) + phi1(i, c) * phi2(i, a, b))
                                + fi[i] * phi3(i, a, b, c)
                        })
                        .sum();
                }
            }
        }
        Jet { value, grad, hess, third }
    }
}

/// Points around `center`: the center itself, then `radii` log-spaced spheres in
/// `[r_min, r_max]`, each sampled in `directions` directions.
///
/// In the plane the directions are equally spaced angles; in higher dimension
/// they are fixed pseudo-random unit vectors plus the coordinate axes.
pub fn polar_grid(center: &[f64], r_min: f64, r_max: f64, radii: usize, directions: usize) -> Vec<Vec<f64>> {
    let n = center.len();
    let dirs: Vec<Vec<f64>> = match n {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..directions)
            .map(|j| {
                let th = std::f64::consts::TAU * j as f64 / directions as f64;
                vec![th.cos(), th.sin()]
            })
            .collect(),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let mut d: Vec<Vec<f64>> = (0..n)
                .flat_map(|i| [1.0, -1.0].map(|s| (0..n).map(|j| if i == j { s } else { 0.0 }).collect()))
                .collect();
            while d.len() < directions.max(2 * n) {
                let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > 0.1 && norm <= 1.0 {
                    d.push(v.iter().map(|x| x / norm).collect());
                }
            }
            d
        }
    };
    let mut out = vec![center.to_vec()];
    for r in super::log_samples(r_min, r_max, radii) {
        for dir in &dirs {
            out.push((0..n).map(|i| center[i] + r * dir[i]).collect());
        }
    }
    out
}

/// Observed constants of a deformed Morse function on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeformReport {
    pub k: f64,
    pub d: f64,
    pub c0: f64,
    pub eps: f64,
    pub points: usize,
    pub max_grad: f64,
    /// `min max(|∇h|, σ_min(∇²h))`: the largest η for which `∇h` is
    /// η-transverse to zero on the grid.
    pub eta_observed: f64,
    pub max_third: f64,
    pub max_grad_over_d: f64,
    pub max_third_times_d: f64,
    /// `max |∇h| |x|^{2ε} / D^{1+2ε}` over grid points in `[2D, k^{1/2}c₀/2]`.
    pub annulus_constant: f64,
}

pub fn verify_deform_bounds(h: &DeformedMorse, grid: &[Vec<f64>]) -> Result<DeformReport, TransversalError> {
    let p = &h.profile;
    let center: Vec<f64> = h.model.points[0].center.iter().map(|c| c * p.k.sqrt()).collect();
    let mut max_grad = 0.0f64;
    let mut eta = f64::INFINITY;
    let mut max_third = 0.0f64;
    let mut annulus = 0.0f64;
    for x in grid {
        let j = h.jet(x)?;
        let g = j.grad.norm();
        max_grad = max_grad.max(g);
        eta = eta.min(g.max(symmetric_min_singular(&j.hess)));
        max_third = max_third.max(j.third_norm());
        let r = x.iter().zip(&center).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        if r >= 2.0 * p.d && r <= p.t1() {
            annulus = annulus.max(g * r.powf(2.0 * p.eps) / p.d.powf(1.0 + 2.0 * p.eps));
        }
    }
    Ok(DeformReport {
        k: p.k,
        d: p.d,
        c0: p.c0,
        eps: p.eps,
        points: grid.len(),
        max_grad,
        eta_observed: eta,
        max_third,
        max_grad_over_d: max_grad / p.d,
        max_third_times_d: max_third * p.d,
        annulus_constant: annulus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transversal::build_cutoff;

    fn saddle(k: f64, d: f64) -> DeformedMorse {
        deform_morse(MorseModel::single(vec![1.0, -1.0], 0.5), build_cutoff(k, d, d).unwrap()).unwrap()
    }

    #[test]
    fn center_value_and_gradient() {
        let h = saddle(1e4, 1.0);
        let j = h.jet(&[0.0, 0.0]).unwrap();
        assert_eq!(j.value, 100.0 * 0.5);
        assert_eq!(j.grad.norm(), 0.0);
        assert_eq!(j.hess, DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, -2.0]));
    }

    #[test]
    fn inner_ball_is_quadratic() {
        let h = saddle(1e4, 1.0);
        let j = h.jet(&[0.6, 0.3]).unwrap();
        assert!((j.value - (50.0 + 0.36 - 0.09)).abs() < 1e-12);
    }

    #[test]
    fn far_region_is_rescaled_f() {
        let h = saddle(1e4, 1.0);
        let x = [80.0, -10.0];
        let j = h.jet(&x).unwrap();
        let y = [0.8, -0.1];
        assert!((j.value - 100.0 * (0.5 + y[0] * y[0] - y[1] * y[1])).abs() < 1e-12);
    }

    #[test]
    fn local_formula_agrees_with_background_past_the_outer_band() {
        let mut h = saddle(1e4, 1.0);
        let x = [60.0, 40.0];
        let with_bg = h.jet(&x).unwrap();
        h.model.background = None;
        let local = h.jet(&x).unwrap();
        assert!((with_bg.value - local.value).abs() < 1e-10);
        assert!((&with_bg.grad - &local.grad).norm() < 1e-12);
        assert!(h.jet(&[200.0, 0.0]).is_err());
    }

    #[test]
    fn rejects_close_points() {
        let p = |c: f64| CriticalPoint { center: vec![c, 0.0], value: 0.0, signs: vec![1.0, 1.0] };
        let model = MorseModel { dim: 2, points: vec![p(0.0), p(1.5)], background: None };
        assert!(deform_morse(model, build_cutoff(1e4, 1.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn report_on_small_grid() {
        let h = saddle(1e4, 1.0);
        let grid = polar_grid(&[0.0, 0.0], 0.1, 100.0, 60, 16);
        let r = verify_deform_bounds(&h, &grid).unwrap();
        assert!(r.eta_observed > 0.0 && r.max_grad.is_finite() && r.max_third.is_finite());
    }

    #[test]
    fn polar_grid_shapes() {
        assert_eq!(polar_grid(&[0.0, 0.0], 1.0, 2.0, 3, 4).len(), 13);
        let g = polar_grid(&[0.0; 3], 1.0, 2.0, 2, 10);
        assert_eq!(g.len(), 21);
        assert!(g[1..].iter().all(|x| (x.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs() < 1e-12
            || (x.iter().map(|v| v * v).sum::<f64>().sqrt() - 2.0).abs() < 1e-12));
    }
}

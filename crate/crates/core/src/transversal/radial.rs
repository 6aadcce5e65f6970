use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use serde::Serialize;

use super::{build_cutoff, PowerLaw, RadialProfile, ShiftedPowerLaw, TransversalError};

/// Closed forms for `d(l(|x|)·x)` compared against a finite-difference Jacobian.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialReport {
    pub x: Vec<f64>,
    pub l: f64,
    pub dl: f64,
    pub det: f64,
    pub det_numeric: f64,
    pub det_rel_error: f64,
    /// Ascending: `l + l′|x|` first, then `l` with multiplicity `n − 1`.
    pub eigenvalues: Vec<f64>,
    pub eigenvalues_numeric: Vec<f64>,
    pub eig_rel_error: f64,
    pub jacobian_rel_error: f64,
    pub operator_norm: f64,
    pub det_bound_holds: bool,
    pub eig_bound_holds: bool,
    pub norm_bound_holds: bool,
}

impl RadialReport {
    pub fn bounds_hold(&self) -> bool {
        self.det_bound_holds && self.eig_bound_holds && self.norm_bound_holds
    }
}

fn radial_map(l: &dyn RadialProfile, x: &DVector<f64>) -> DVector<f64> {
    x * l.value(x.norm())
}

pub fn radial_map_check(l: &dyn RadialProfile, x: &[f64]) -> Result<RadialReport, TransversalError> {
    let n = x.len();
    let xv = DVector::from_column_slice(x);
    let t = xv.norm();
    if n == 0 || !(t > 0.0) {
        return Err(TransversalError::Parameter("x must be a nonzero vector".into()));
    }
    let [lv, dl, _, _] = l.jet(t);
    if !(lv > 0.0) || dl > 0.0 || dl / lv < -0.75 / t {
        return Err(TransversalError::Precondition(format!(
            "at |x| = {t}: l = {lv}, l' = {dl}, need l > 0, l' <= 0, l'/l >= -3/(4|x|)"
        )));
    }
    let closed = DMatrix::identity(n, n) * lv + &xv * xv.transpose() * (dl / t);

    let h = 1e-5 * t;
    let mut fd = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = DVector::zeros(n);
        e[j] = h;
        let col = (radial_map(l, &(&xv + &e)) - radial_map(l, &(&xv - &e))) / (2.0 * h);
        fd.set_column(j, &col);
    }
    let jacobian_rel_error = (&fd - &closed).abs().max() / closed.abs().max();

    let radial = lv + dl * t;
    let det = lv.powi(n as i32 - 1) * radial;
    let det_numeric = fd.clone().determinant();
    let mut eigenvalues = vec![lv; n];
    eigenvalues[0] = radial;
    eigenvalues.sort_by(f64::total_cmp);
    let sym = (&fd + fd.transpose()) * 0.5;
    let mut eigenvalues_numeric: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    eigenvalues_numeric.sort_by(f64::total_cmp);
    let eig_rel_error = eigenvalues
        .iter()
        .zip(&eigenvalues_numeric)
        .map(|(a, b)| (a - b).abs() / a.abs())
        .fold(0.0, f64::max);
    let operator_norm = eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let slack = 1e-12 * lv;
    Ok(RadialReport {
        x: x.to_vec(),
        l: lv,
        dl,
        det,
        det_numeric,
        det_rel_error: (det - det_numeric).abs() / det.abs(),
        eig_bound_holds: eigenvalues[0] >= lv / 4.0 - slack,
        det_bound_holds: det >= lv.powi(n as i32) / 4.0 - slack * lv.powi(n as i32 - 1),
        norm_bound_holds: operator_norm <= lv + slack,
        eigenvalues,
        eigenvalues_numeric,
        eig_rel_error,
        jacobian_rel_error,
        operator_norm,
    })
}

/// A random admissible pair `(l, x)`: a power law, a shifted power law or a
/// cutoff `l_k`, with `x` in dimension 1 to 6 and `|x|` where `l` is admissible.
/// The string names the profile.
pub fn random_radial_case<R: Rng>(rng: &mut R) -> (String, Box<dyn RadialProfile>, Vec<f64>) {
    let n = rng.gen_range(1..=6);
    let (name, l, t): (String, Box<dyn RadialProfile>, f64) = match rng.gen_range(0..3) {
        0 => {
            let l = PowerLaw { scale: rng.gen_range(0.5..3.0), beta: rng.gen_range(0.05..0.75) };
            (format!("power scale={} beta={}", l.scale, l.beta), Box::new(l), 10f64.powf(rng.gen_range(-2.0..3.0)))
        }
        1 => {
            let l = ShiftedPowerLaw { scale: rng.gen_range(0.5..3.0), beta: rng.gen_range(0.05..0.75) };
            (format!("shifted scale={} beta={}", l.scale, l.beta), Box::new(l), 10f64.powf(rng.gen_range(-2.0..3.0)))
        }
        _ => {
            let k = [1e4, 1e5, 1e6][rng.gen_range(0..3)];
            let d = [1.0, 2.0][rng.gen_range(0..2)];
            let l = build_cutoff(k, d, 1.0).expect("admissible cutoff parameters");
            let t = (rng.gen_range(0.5 * d..l.t2() * 1.2f64)).max(1e-3);
            (format!("cutoff k={k} D={d}"), Box::new(l), t)
        }
    };
    let v: Vec<f64> = loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 0.1 {
            break v.iter().map(|c| c * t / norm).collect();
        }
    };
    (name, l, v)
}

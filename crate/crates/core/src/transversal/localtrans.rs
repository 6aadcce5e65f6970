use std::collections::VecDeque;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::{eta_transverse_check, ComplexJet, TransversalError, TransverseCheck};

/// `coeff · z^exps`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub exps: Vec<u32>,
    pub coeff: Complex64,
}

/// A complex polynomial in `n` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub vars: usize,
    pub terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn new(vars: usize, terms: Vec<Monomial>) -> Result<Self, TransversalError> {
        if vars == 0 || terms.iter().any(|t| t.exps.len() != vars) {
            return Err(TransversalError::Parameter(format!("monomials must have {vars} exponents")));
        }
        Ok(Self { vars, terms })
    }

    pub fn constant(vars: usize, c: Complex64) -> Self {
        Self { vars, terms: vec![Monomial { exps: vec![0; vars], coeff: c }] }
    }

    /// Univariate polynomial from coefficients of `1, z, z², …`.
    pub fn univariate(coeffs: &[Complex64]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(|(e, &c)| Monomial { exps: vec![e as u32], coeff: c })
            .collect();
        Self { vars: 1, terms }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.exps.iter().sum()).max().unwrap_or(0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        let terms = self.terms.iter().map(|t| Monomial { exps: t.exps.clone(), coeff: t.coeff * s }).collect();
        Self { vars: self.vars, terms }
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.eval_with_gradient(z).0
    }

    pub fn eval_with_gradient(&self, z: &[Complex64]) -> (Complex64, Vec<Complex64>) {
        let n = self.vars;
        let zero = Complex64::new(0.0, 0.0);
        let mut v = zero;
        let mut g = vec![zero; n];
        for t in &self.terms {
            let pw: Vec<Complex64> = (0..n).map(|i| z[i].powu(t.exps[i])).collect();
            v += t.coeff * pw.iter().product::<Complex64>();
            for j in 0..n {
                if t.exps[j] == 0 {
                    continue;
                }
                let mut m = t.coeff * f64::from(t.exps[j]) * z[j].powu(t.exps[j] - 1);
                for i in (0..n).filter(|&i| i != j) {
                    m *= pw[i];
                }
                g[j] += m;
            }
        }
        (v, g)
    }
}

/// `σ = δ (ln(1/δ))^{−p}`.
pub fn sigma(delta: f64, pexp: u32) -> f64 {
    delta * (1.0 / delta).ln().powi(-(pexp as i32))
}

/// The perturbation problem `s(z, w) = p(z) − w − w̄ q(z)` on the unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalTransInstance {
    pub p: Polynomial,
    pub q: Polynomial,
    pub kappa: f64,
    pub delta: f64,
    pub pexp: u32,
}

/// Soft findings that do not invalidate a certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// Sampled `sup |p|` over the `11/10`-ball exceeds 1.
    PBound { sup: f64 },
    /// The largest clearance component is smaller than `0.9 π δ²`.
    Clearance { area: f64, claim: f64 },
}

impl LocalTransInstance {
    pub fn vars(&self) -> usize {
        self.p.vars
    }

    pub fn sigma(&self) -> f64 {
        sigma(self.delta, self.pexp)
    }

    /// Parameter ranges and the sampled bounds on `|p|`, `|q|` over the grid.
    /// The bound on `q` is required; the bound on `p` only warns.
    pub fn check(&self, grid: &[Vec<Complex64>]) -> Result<Vec<Warning>, TransversalError> {
        if self.p.vars != self.q.vars {
            return Err(TransversalError::Parameter("p and q have different numbers of variables".into()));
        }
        if !(self.kappa > 0.0 && self.kappa < 1.0) {
            return Err(TransversalError::Parameter(format!("kappa = {} not in (0,1)", self.kappa)));
        }
        if !(self.delta > 0.0 && self.delta < 0.5) {
            return Err(TransversalError::Parameter(format!("delta = {} not in (0,1/2)", self.delta)));
        }
        if self.pexp == 0 {
            return Err(TransversalError::Parameter("pexp must be positive".into()));
        }
        let sup = |f: &Polynomial| grid.iter().map(|z| f.eval(z).norm()).fold(0.0, f64::max);
        let sq = sup(&self.q);
        if sq > (1.0 - self.kappa) * (1.0 + 1e-12) {
            return Err(TransversalError::Parameter(format!(
                "sampled sup |q| = {sq} exceeds 1 - kappa = {}",
                1.0 - self.kappa
            )));
        }
        let sp = sup(&self.p);
        Ok(if sp > 1.0 + 1e-12 { vec![Warning::PBound { sup: sp }] } else { Vec::new() })
    }
}

/// Tensor grid of `per_axis` points on each real axis of `[−R, R]^{2n}`,
/// restricted to the closed ball of radius `R` in `ℂⁿ`.
pub fn ball_grid(vars: usize, radius: f64, per_axis: usize) -> Vec<Vec<Complex64>> {
    let m = per_axis.max(2);
    let coord = |i: usize| -radius + 2.0 * radius * i as f64 / (m - 1) as f64;
    let dims = 2 * vars;
    let mut out = Vec::new();
    let mut idx = vec![0usize; dims];
    loop {
        let x: Vec<f64> = idx.iter().map(|&i| coord(i)).collect();
        if x.iter().map(|v| v * v).sum::<f64>() <= radius * radius * (1.0 + 1e-12) {
            out.push((0..vars).map(|j| Complex64::new(x[2 * j], x[2 * j + 1])).collect());
        }
        let mut d = 0;
        loop {
            if d == dims {
                return out;
            }
            idx[d] += 1;
            if idx[d] < m {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// The solution `w = (p − p̄q)/(1 − |q|²)` of `p(z) − w − w̄ q(z) = 0`.
pub fn solve_w(p: &Polynomial, q: &Polynomial, z: &[Complex64]) -> Result<Complex64, TransversalError> {
    let (pv, qv) = (p.eval(z), q.eval(z));
    let d = 1.0 - qv.norm_sqr();
    if d <= 0.0 {
        return Err(TransversalError::NotContracting(qv.norm()));
    }
    Ok((pv - pv.conj() * qv) / d)
}

/// `w(z)` with `∂w/∂z_j = l_j/(1 − |q|²)` and `∂w/∂z̄_j = −q l̄_j/(1 − |q|²)`,
/// where `l = ∂s/∂z = ∇p − w̄ ∇q` along the graph.
pub fn solve_w_derivative(
    p: &Polynomial,
    q: &Polynomial,
    z: &[Complex64],
) -> Result<(ComplexJet, Vec<Complex64>), TransversalError> {
    let (pv, dp) = p.eval_with_gradient(z);
    let (qv, dq) = q.eval_with_gradient(z);
    let d = 1.0 - qv.norm_sqr();
    if d <= 0.0 {
        return Err(TransversalError::NotContracting(qv.norm()));
    }
    let w = (pv - pv.conj() * qv) / d;
    let l: Vec<Complex64> = dp.iter().zip(&dq).map(|(a, b)| a - w.conj() * b).collect();
    let dz = l.iter().map(|x| x / d).collect();
    let dzbar = l.iter().map(|x| -qv * x.conj() / d).collect();
    Ok((ComplexJet { value: w, dz, dzbar }, l))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertificateOptions {
    /// Points per real axis of the `z` grids.
    pub per_axis: usize,
    /// Points per real axis of the `w` grid over `B(0, δ)`.
    pub w_per_axis: usize,
    /// Scale `C` of the sublevel set `{|l| ≤ Cσ}` and of its neighbourhood.
    pub c_factor: f64,
    /// Retry once at twice the resolution when verification fails.
    pub refine_on_failure: bool,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        Self { per_axis: 201, w_per_axis: 201, c_factor: 4.0, refine_on_failure: true }
    }
}

/// A perturbation `w0` with `|w0| < δ` for which `p − w0 − w̄0 q` is
/// σ-transverse to zero on the sampled unit ball.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransversalityCertificate {
    pub w0: [f64; 2],
    pub sigma: f64,
    /// `min max(|f|, σ_min(df))` on the certified grid.
    pub margin: f64,
    pub per_axis: usize,
    pub grid_points: usize,
    /// Distance from `w0` to the image of the sublevel set (capped at `2δ`).
    pub clearance: f64,
    /// Area of the largest connected region of `B(0,δ)` outside the
    /// `Cσ`-neighbourhood of that image.
    pub clearance_area: f64,
    pub clearance_claim: f64,
    pub sublevel_points: usize,
    pub max_residual: f64,
    pub attempts: usize,
    /// Independent check on a grid twice as fine.
    pub refined: TransverseCheck,
    pub warnings: Vec<Warning>,
}

struct Clearance {
    w0: Complex64,
    distance: f64,
    area: f64,
    sublevel: usize,
    residual: f64,
}

fn choose_w0(inst: &LocalTransInstance, per_axis: usize, opts: &CertificateOptions) -> Result<Clearance, TransversalError> {
    let n = inst.vars();
    let cs = opts.c_factor * inst.sigma();
    let delta = inst.delta;
    let mut images = Vec::new();
    let mut residual = 0.0f64;
    let mut sublevel = 0;
    for z in ball_grid(n, 1.1, per_axis) {
        let (jet, l) = solve_w_derivative(&inst.p, &inst.q, &z)?;
        let w = jet.value;
        let s = inst.p.eval(&z) - w - w.conj() * inst.q.eval(&z);
        residual = residual.max(s.norm());
        if l.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt() <= cs {
            sublevel += 1;
            if w.norm() <= 3.0 * delta {
                images.push(w);
            }
        }
    }
    let m = opts.w_per_axis.max(3);
    let h = 2.0 * delta / (m - 1) as f64;
    let coord = |i: usize| -delta + h * i as f64;
    let cap = 2.0 * delta;
    // dist[i][j] is None outside the open disc.
    let mut dist = vec![None; m * m];
    for i in 0..m {
        for j in 0..m {
            let w = Complex64::new(coord(i), coord(j));
            if w.norm() < delta {
                let d = images.iter().fold(cap, |acc, y| acc.min((w - y).norm()));
                dist[i * m + j] = Some(d);
            }
        }
    }
    let mut best: Option<(f64, f64, Complex64)> = None;
    for i in 0..m {
        for j in 0..m {
            if let Some(d) = dist[i * m + j] {
                let w = Complex64::new(coord(i), coord(j));
                let better = match best {
                    None => true,
                    Some((bd, bn, _)) => d > bd || (d == bd && w.norm() < bn),
                };
                if better {
                    best = Some((d, w.norm(), w));
                }
            }
        }
    }
    let (distance, _, w0) = best.ok_or_else(|| TransversalError::Parameter("empty w grid".into()))?;
    let area = largest_component(&dist, m, cs) as f64 * h * h;
    Ok(Clearance { w0, distance, area, sublevel, residual })
}

/// Size of the largest 4-connected set of cells with distance above `r`.
fn largest_component(dist: &[Option<f64>], m: usize, r: f64) -> usize {
    let free = |k: usize| dist[k].is_some_and(|d| d > r);
    let mut seen = vec![false; m * m];
    let mut best = 0;
    for start in 0..m * m {
        if seen[start] || !free(start) {
            continue;
        }
        seen[start] = true;
        let mut size = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(k) = queue.pop_front() {
            size += 1;
            let (i, j) = (k / m, k % m);
            let mut nb = Vec::with_capacity(4);
            if i > 0 {
                nb.push(k - m);
            }
            if i + 1 < m {
                nb.push(k + m);
            }
            if j > 0 {
                nb.push(k - 1);
            }
            if j + 1 < m {
                nb.push(k + 1);
            }
            for x in nb {
                if !seen[x] && free(x) {
                    seen[x] = true;
                    queue.push_back(x);
                }
            }
        }
        best = best.max(size);
    }
    best
}

fn perturbed<'a>(inst: &'a LocalTransInstance, w0: Complex64) -> impl Fn(&[Complex64]) -> ComplexJet + 'a {
    move |z| {
        let (pv, dp) = inst.p.eval_with_gradient(z);
        let (qv, dq) = inst.q.eval_with_gradient(z);
        let dz = dp.iter().zip(&dq).map(|(a, b)| a - w0.conj() * b).collect();
        ComplexJet::holomorphic(pv - w0 - w0.conj() * qv, dz)
    }
}

/// Searches `B(0, δ)` for a `w0` keeping `p − w0 − w̄0 q` σ-transverse to zero,
/// and certifies it by brute force on the unit-ball grid.
pub fn find_good_w0(
    inst: &LocalTransInstance,
    opts: &CertificateOptions,
) -> Result<TransversalityCertificate, TransversalError> {
    let mut warnings = inst.check(&ball_grid(inst.vars(), 1.1, opts.per_axis))?;
    let sigma = inst.sigma();
    let tries = if opts.refine_on_failure { 2 } else { 1 };
    let mut per_axis = opts.per_axis;
    let mut last_err = None;
    for attempt in 1..=tries {
        let c = choose_w0(inst, per_axis, opts)?;
        let grid = ball_grid(inst.vars(), 1.0, per_axis);
        let check = eta_transverse_check(perturbed(inst, c.w0), &grid, sigma);
        if let Some((idx, value, singular)) = check.failure {
            last_err = Some(TransversalError::Verification {
                point: grid[idx].iter().map(|z| [z.re, z.im]).collect(),
                value,
                singular,
                sigma,
            });
            per_axis = 2 * per_axis - 1;
            continue;
        }
        let fine = ball_grid(inst.vars(), 1.0, 2 * per_axis - 1);
        let refined = eta_transverse_check(perturbed(inst, c.w0), &fine, sigma);
        let claim = 0.9 * std::f64::consts::PI * inst.delta * inst.delta;
        if c.area < claim {
            warnings.push(Warning::Clearance { area: c.area, claim });
        }
        return Ok(TransversalityCertificate {
            w0: [c.w0.re, c.w0.im],
            sigma,
            margin: check.margin,
            per_axis,
            grid_points: grid.len(),
            clearance: c.distance,
            clearance_area: c.area,
            clearance_claim: claim,
            sublevel_points: c.sublevel,
            max_residual: c.residual,
            attempts: attempt,
            refined,
            warnings,
        });
    }
    Err(last_err.expect("at least one attempt"))
}

/// A random univariate instance: `p` of degree `1..=max_degree` scaled to
/// sampled `sup |p| = 1` and `q` of degree `0..=max_degree` scaled to
/// `sup |q| ≤ 0.98 (1 − κ)`, sups taken over `grid`.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    max_degree: usize,
    kappa: f64,
    delta: f64,
    pexp: u32,
    grid: &[Vec<Complex64>],
) -> LocalTransInstance {
    let coeffs = |rng: &mut R, deg: usize| -> Polynomial {
        let c: Vec<Complex64> =
            (0..=deg).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        Polynomial::univariate(&c)
    };
    let top = max_degree.max(1);
    let dp = rng.gen_range(1..=top);
    let p = coeffs(rng, dp);
    let dq = rng.gen_range(0..=top);
    let q = coeffs(rng, dq);
    let shrink: f64 = rng.gen_range(0.3..0.98);
    let sup = |f: &Polynomial| grid.iter().map(|z| f.eval(z).norm()).fold(0.0, f64::max);
    let (sp, sq) = (sup(&p), sup(&q));
    LocalTransInstance {
        p: if sp > 0.0 { p.scaled(1.0 / sp) } else { p },
        q: if sq > 0.0 { q.scaled(shrink * (1.0 - kappa) / sq) } else { q },
        kappa,
        delta,
        pexp,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solve_w_examples() {
        let p = Polynomial::univariate(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let half = Polynomial::constant(1, c(0.5, 0.0));
        let w = solve_w(&p, &half, &[c(1.0, 0.0)]).unwrap();
        assert!((w - c(2.0 / 3.0, 0.0)).norm() < 1e-15);
        let zero = Polynomial::constant(1, c(0.0, 0.0));
        let z = [c(0.3, -0.2)];
        assert_eq!(solve_w(&p, &zero, &z).unwrap(), p.eval(&z));
        let one = Polynomial::constant(1, c(1.0, 0.0));
        assert!(matches!(solve_w(&p, &one, &z), Err(TransversalError::NotContracting(_))));
        let w = solve_w(&p, &half, &[c(0.4, 0.0)]).unwrap();
        assert!(w.im.abs() < 1e-16);
    }

    #[test]
    fn w_derivatives_match_finite_differences() {
        let p = Polynomial::univariate(&[c(0.1, 0.2), c(-0.4, 0.3), c(0.2, 0.0), c(0.0, -0.3)]);
        let q = Polynomial::univariate(&[c(0.2, -0.1), c(0.1, 0.25)]);
        let z = [c(0.31, -0.47)];
        let (jet, l) = solve_w_derivative(&p, &q, &z).unwrap();
        let h = 1e-6;
        let wx = (solve_w(&p, &q, &[z[0] + h]).unwrap() - solve_w(&p, &q, &[z[0] - h]).unwrap()) / (2.0 * h);
        let wy = (solve_w(&p, &q, &[z[0] + c(0.0, h)]).unwrap() - solve_w(&p, &q, &[z[0] - c(0.0, h)]).unwrap())
            / (2.0 * h);
        let dz = (wx - Complex64::i() * wy) / 2.0;
        let dzbar = (wx + Complex64::i() * wy) / 2.0;
        assert!((dz - jet.dz[0]).norm() < 1e-8);
        assert!((dzbar - jet.dzbar[0]).norm() < 1e-8);
        let kappa = 1.0 - q.eval(&z).norm();
        assert!(jet.dz[0].norm() + jet.dzbar[0].norm() <= 2.0 / kappa * l[0].norm());
    }

    #[test]
    fn multivariate_gradient() {
        let p = Polynomial::new(
            2,
            vec![
                Monomial { exps: vec![2, 1], coeff: c(1.0, 1.0) },
                Monomial { exps: vec![0, 3], coeff: c(-2.0, 0.0) },
            ],
        )
        .unwrap();
        let z = [c(0.5, 0.1), c(-0.2, 0.3)];
        let (v, g) = p.eval_with_gradient(&z);
        assert!((v - (c(1.0, 1.0) * z[0] * z[0] * z[1] - z[1].powu(3) * 2.0)).norm() < 1e-15);
        assert!((g[0] - c(1.0, 1.0) * z[0] * z[1] * 2.0).norm() < 1e-15);
        assert!((g[1] - (c(1.0, 1.0) * z[0] * z[0] - z[1] * z[1] * 6.0)).norm() < 1e-15);
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn sigma_value() {
        assert!((sigma(0.1, 2) - 0.018861).abs() < 1e-6);
    }

    #[test]
    fn ball_grid_counts() {
        let g = ball_grid(1, 1.0, 3);
        assert_eq!(g.len(), 5);
        assert_eq!(ball_grid(2, 1.0, 3).len(), 9);
    }

    #[test]
    fn quadratic_example_is_certified() {
        let inst = LocalTransInstance {
            p: Polynomial::univariate(&[c(-0.25, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
            q: Polynomial::constant(1, c(0.5, 0.0)),
            kappa: 0.5,
            delta: 0.1,
            pexp: 2,
        };
        let opts = CertificateOptions { per_axis: 101, w_per_axis: 81, ..Default::default() };
        let cert = find_good_w0(&inst, &opts).unwrap();
        assert!(cert.margin >= cert.sigma);
        assert!(cert.refined.passed);
        assert!(cert.warnings.iter().any(|w| matches!(w, Warning::PBound { .. })));
        assert!((cert.w0[0].powi(2) + cert.w0[1].powi(2)).sqrt() < 0.1);
    }

    #[test]
    fn random_instances_respect_bounds() {
        let grid = ball_grid(1, 1.1, 41);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let inst = random_instance(&mut rng, 4, 0.2, 0.1, 2, &grid);
            assert!(inst.p.degree() <= 4 && inst.q.degree() <= 4);
            assert!(inst.check(&grid).unwrap().is_empty());
        }
    }
}

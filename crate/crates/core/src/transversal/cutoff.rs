use serde::Serialize;

use super::TransversalError;

/// A radial profile `t ↦ l(t)` together with its first three derivatives.
pub trait RadialProfile {
    /// `[l, l′, l″, l‴]` at `t ≥ 0`.
    fn jet(&self, t: f64) -> [f64; 4];

    fn value(&self, t: f64) -> f64 {
        self.jet(t)[0]
    }
}

/// `l(t) = c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantProfile(pub f64);

impl RadialProfile for ConstantProfile {
    fn jet(&self, _t: f64) -> [f64; 4] {
        [self.0, 0.0, 0.0, 0.0]
    }
}

/// `l(t) = c · t^{−β}` for `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    pub scale: f64,
    pub beta: f64,
}

impl RadialProfile for PowerLaw {
    fn jet(&self, t: f64) -> [f64; 4] {
        let b = self.beta;
        let l = self.scale * t.powf(-b);
        [l, -b * l / t, b * (b + 1.0) * l / (t * t), -b * (b + 1.0) * (b + 2.0) * l / (t * t * t)]
    }
}

/// `l(t) = c · (1 + t)^{−β}`, smooth at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedPowerLaw {
    pub scale: f64,
    pub beta: f64,
}

impl RadialProfile for ShiftedPowerLaw {
    fn jet(&self, t: f64) -> [f64; 4] {
        PowerLaw { scale: self.scale, beta: self.beta }.jet(1.0 + t)
    }
}

/// A monotone ramp `σ: [0,1] → [0,1]` in Bernstein form with coefficients
/// `0,0,0,v,…,v,1,1,1`, so `σ` is flat to second order at both ends and its
/// mean equals the mean of the coefficients.
#[derive(Debug, Clone, PartialEq)]
struct Ramp {
    coeffs: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
    primitive: Vec<f64>,
}

impl Ramp {
    fn with_mean(mean: f64, degree: usize) -> Self {
        let n = degree;
        let v = (mean * (n + 1) as f64 - 3.0) / (n as f64 - 5.0);
        assert!((0.0..=1.0).contains(&v), "ramp plateau {v} outside [0,1]");
        let mut coeffs = vec![v; n + 1];
        coeffs[..3].fill(0.0);
        coeffs[n - 2..].fill(1.0);
        let diff = |c: &[f64]| -> Vec<f64> {
            let m = (c.len() - 1) as f64;
            c.windows(2).map(|w| m * (w[1] - w[0])).collect()
        };
        let d1 = diff(&coeffs);
        let d2 = diff(&d1);
        let mut primitive = vec![0.0];
        let mut acc = 0.0;
        for c in &coeffs {
            acc += c;
            primitive.push(acc / (n + 1) as f64);
        }
        Self { coeffs, d1, d2, primitive }
    }

    /// `[∫₀^v σ, σ, σ′, σ″]`.
    fn eval(&self, v: f64) -> [f64; 4] {
        [
            de_casteljau(&self.primitive, v),
            de_casteljau(&self.coeffs, v),
            de_casteljau(&self.d1, v),
            de_casteljau(&self.d2, v),
        ]
    }
}

fn de_casteljau(c: &[f64], v: f64) -> f64 {
    let mut b = c.to_vec();
    for r in 1..b.len() {
        for j in 0..b.len() - r {
            b[j] = (1.0 - v) * b[j] + v * b[j + 1];
        }
    }
    b[0]
}

const INNER_DEGREE: usize = 7;
const OUTER_DEGREE: usize = 23;

/// The cutoff `l_k` on `[0, ∞)`.
///
/// Both transition bands are built in the logarithmic variable `s = ln t`:
/// `d ln l / ds` moves monotonically between `0` and `−β` along a ramp, which
/// keeps `0 ≥ l′/l ≥ −β/t` and makes `l` of class `C³`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffProfile {
    pub k: f64,
    pub d: f64,
    pub c0: f64,
    pub eps: f64,
    pub a: f64,
    inner: Ramp,
    outer: Ramp,
}

/// `(3D/(1.4 c₀))⁶`, the smallest admissible `k`.
pub fn minimal_k(d: f64, c0: f64) -> f64 {
    let r = 3.0 * d / (1.4 * c0);
    let r3 = r * r * r;
    r3 * r3
}

pub fn build_cutoff(k: f64, d: f64, c0: f64) -> Result<CutoffProfile, TransversalError> {
    if !(k > 0.0 && d > 0.0 && c0 > 0.0) || !(k.is_finite() && d.is_finite() && c0.is_finite()) {
        return Err(TransversalError::Parameter(format!("k={k}, D={d}, c0={c0} must be positive")));
    }
    let ratio = 3.0 * d / (1.4 * c0);
    if ratio <= 1.0 {
        return Err(TransversalError::Parameter(format!(
            "3D/(1.4 c0) = {ratio} must exceed 1 for a positive exponent"
        )));
    }
    let min_k = minimal_k(d, c0);
    if k < min_k {
        return Err(TransversalError::Threshold { k, min_k });
    }
    let eps = ratio.ln() / (k.ln() - 2.0 * ratio.ln());
    let beta = 0.5 + eps;
    let a = (1.5 * d).powf(beta);
    if k.sqrt() * c0 / 2.0 <= 2.0 * d {
        return Err(TransversalError::Parameter(format!(
            "bands overlap: k^(1/2) c0 / 2 = {} is not beyond 2D = {}",
            k.sqrt() * c0 / 2.0,
            2.0 * d
        )));
    }
    Ok(CutoffProfile {
        k,
        d,
        c0,
        eps,
        a,
        inner: Ramp::with_mean((4.0f64 / 3.0).ln() / 2f64.ln(), INNER_DEGREE),
        outer: Ramp::with_mean(1.0 - 1.4f64.ln() / 1.5f64.ln(), OUTER_DEGREE),
    })
}

impl CutoffProfile {
    pub fn beta(&self) -> f64 {
        0.5 + self.eps
    }

    /// Start of the outer band, `k^{1/2} c₀ / 2`.
    pub fn t1(&self) -> f64 {
        self.k.sqrt() * self.c0 / 2.0
    }

    /// End of the outer band, `3 k^{1/2} c₀ / 4`.
    pub fn t2(&self) -> f64 {
        0.75 * self.k.sqrt() * self.c0
    }

    /// `ln l` and its first three derivatives in `s = ln t`.
    fn log_jet(&self, t: f64) -> [f64; 4] {
        let b = self.beta();
        let quarter = 0.25 * self.k.ln();
        let s = t.ln();
        if t < 2.0 * self.d {
            let w = 2f64.ln();
            let [int, sg, sg1, sg2] = self.inner.eval((s - self.d.ln()) / w);
            [quarter - b * w * int, -b * sg, -b * sg1 / w, -b * sg2 / (w * w)]
        } else if t <= self.t1() {
            [self.a.ln() + quarter - b * s, -b, 0.0, 0.0]
        } else {
            let w = 1.5f64.ln();
            let v = (s - self.t1().ln()) / w;
            let [int, sg, sg1, sg2] = self.outer.eval(v);
            [b * 1.4f64.ln() - b * w * (v - int), -b * (1.0 - sg), b * sg1 / w, b * sg2 / (w * w)]
        }
    }

    /// Sampled derivative bounds on both transition bands.
    pub fn report(&self, samples: usize) -> CutoffReport {
        let q = self.k.powf(0.25);
        let mut inner = [0.0f64; 3];
        let mut outer = [0.0f64; 3];
        let mut slope = f64::NEG_INFINITY;
        let n = samples.max(2);
        for i in 0..n {
            let f = i as f64 / (n - 1) as f64;
            let t = self.d * 2f64.powf(f);
            let [_, l1, l2, l3] = self.jet(t);
            let d = self.d;
            inner[0] = inner[0].max(l1.abs() * d / q);
            inner[1] = inner[1].max(l2.abs() * d * d / q);
            inner[2] = inner[2].max(l3.abs() * d * d * d / q);
            let t = self.t1() * 1.5f64.powf(f);
            let [_, l1, l2, l3] = self.jet(t);
            let k = self.k;
            outer[0] = outer[0].max(l1.abs() * k.sqrt());
            outer[1] = outer[1].max(l2.abs() * k);
            outer[2] = outer[2].max(l3.abs() * k.powf(1.5));
        }
        for t in log_samples(self.d, self.t2(), n) {
            let [l, l1, _, _] = self.jet(t);
            slope = slope.max(-l1 * t / l);
        }
        CutoffReport {
            k: self.k,
            d: self.d,
            c0: self.c0,
            eps: self.eps,
            a: self.a,
            beta: self.beta(),
            min_k: minimal_k(self.d, self.c0),
            inner_band: [self.d, 2.0 * self.d],
            outer_band: [self.t1(), self.t2()],
            inner_scaled_bounds: inner,
            outer_scaled_bounds: outer,
            max_log_slope: slope,
        }
    }
}

impl RadialProfile for CutoffProfile {
    fn jet(&self, t: f64) -> [f64; 4] {
        if t <= self.d {
            return [self.k.powf(0.25), 0.0, 0.0, 0.0];
        }
        if t >= self.t2() {
            return [1.0, 0.0, 0.0, 0.0];
        }
        let [lam, l1, l2, l3] = self.log_jet(t);
        let l = lam.exp();
        let g1 = l1 / t;
        let g2 = (l2 - l1) / (t * t);
        let g3 = (l3 - 3.0 * l2 + 2.0 * l1) / (t * t * t);
        [l, l * g1, l * (g2 + g1 * g1), l * (g3 + 3.0 * g1 * g2 + g1 * g1 * g1)]
    }
}

/// `n` points log-spaced on `[lo, hi]`, endpoints included.
pub fn log_samples(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let m = n.max(2);
    (0..m).map(move |i| (a + (b - a) * i as f64 / (m - 1) as f64).exp())
}

/// Constants of a cutoff and its observed derivative bounds.
///
/// `inner_scaled_bounds[j]` is `max |l^{(j+1)}| D^{j+1} / k^{1/4}` over `[D, 2D]`;
/// `outer_scaled_bounds[j]` is `max |l^{(j+1)}| k^{(j+1)/2}` over the outer band;
/// `max_log_slope` is `max (−t l′/l)`, to be compared with `β`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutoffReport {
    pub k: f64,
    pub d: f64,
    pub c0: f64,
    pub eps: f64,
    pub a: f64,
    pub beta: f64,
    pub min_k: f64,
    pub inner_band: [f64; 2],
    pub outer_band: [f64; 2],
    pub inner_scaled_bounds: [f64; 3],
    pub outer_scaled_bounds: [f64; 3],
    pub max_log_slope: f64,
}

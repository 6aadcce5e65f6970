use std::path::PathBuf;

use lefschetz::io::{instance_json, parse_instance};
use lefschetz::transversal::{
    ball_grid, build_cutoff, deform_morse, find_good_w0, polar_grid, radial_map_check, random_instance,
    random_radial_case, verify_deform_bounds, CertificateOptions, LocalTransInstance, MorseModel, RadialProfile,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{read, Failure, Outcome};

pub fn cutoff(k: f64, d: f64, c0: f64, samples: usize) -> Result<Outcome, Failure> {
    let p = build_cutoff(k, d, c0)?;
    let beta = p.beta();
    let n = samples.max(1);
    let ratio = (p.t2() / d).ln();
    let mut violations = 0usize;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..n {
        let t = d * (ratio * (i as f64 + 0.5) / n as f64).exp();
        let [l, l1, _, _] = p.jet(t);
        let s = l1 / l;
        worst = worst.max(-s * t / beta);
        if !(s < 0.0 && s >= -beta / t * (1.0 + 1e-12)) {
            violations += 1;
        }
    }
    let top = k.powf(0.25);
    let inner_gap = ((p.value(d * (1.0 + 1e-12)) - top) / top).abs();
    let outer_gap = (p.value(p.t2() * (1.0 - 1e-12)) - 1.0).abs();
    let endpoints_exact = p.value(d) == top && p.value(p.t2()) == 1.0;
    let endpoints_ok = endpoints_exact && inner_gap < 1e-9 && outer_gap < 1e-9;
    let mut report = serde_json::to_value(p.report(n))?;
    report["slope_check"] = json!({
        "samples": n,
        "violations": violations,
        "max_slope_over_beta": worst,
    });
    report["endpoint_check"] = json!({
        "exact": endpoints_exact,
        "inner_relative_gap": inner_gap,
        "outer_gap": outer_gap,
    });
    Ok(Outcome { report, ok: violations == 0 && endpoints_ok })
}

pub fn deform(
    k: f64,
    d: f64,
    c0: f64,
    n: usize,
    index: usize,
    radii: usize,
    directions: usize,
) -> Result<Outcome, Failure> {
    if n == 0 || index > n {
        return Err(Failure::Input(format!("need n >= 1 and index <= n, got n={n}, index={index}")));
    }
    let signs: Vec<f64> = (0..n).map(|i| if i < n - index { 1.0 } else { -1.0 }).collect();
    let profile = build_cutoff(k, d, c0)?;
    let r_max = k.sqrt() * c0;
    let h = deform_morse(MorseModel::single(signs.clone(), 0.5), profile)?;
    let grid = polar_grid(&vec![0.0; n], d / 10.0, r_max, radii, directions);
    let r = verify_deform_bounds(&h, &grid)?;
    let ok = r.eta_observed > 0.0
        && [r.max_grad, r.max_third, r.annulus_constant].iter().all(|v| v.is_finite());
    let mut report = serde_json::to_value(&r)?;
    report["signs"] = json!(signs);
    report["grid"] = json!({ "r_min": d / 10.0, "r_max": r_max, "radii": radii, "directions": directions });
    Ok(Outcome { report, ok })
}

pub struct LocalParams {
    pub seed: u64,
    pub trials: usize,
    pub kappa: f64,
    pub delta: f64,
    pub pexp: u32,
    pub max_degree: usize,
    pub resolution: usize,
    pub c_factor: f64,
    pub min_success: f64,
}

fn certify(inst: &LocalTransInstance, opts: &CertificateOptions) -> (bool, Value) {
    match find_good_w0(inst, opts) {
        Ok(c) => {
            let passed = c.refined.passed;
            (passed, json!({ "certified": passed, "certificate": c }))
        }
        Err(e) => (false, json!({ "certified": false, "error": e.to_string() })),
    }
}

pub fn localtrans(params: &LocalParams, instance: Option<&PathBuf>) -> Result<Outcome, Failure> {
    if params.resolution < 3 {
        return Err(Failure::Input("resolution must be at least 3".into()));
    }
    let opts = CertificateOptions {
        per_axis: params.resolution,
        w_per_axis: params.resolution,
        c_factor: params.c_factor,
        refine_on_failure: true,
    };
    if let Some(path) = instance {
        let inst = parse_instance(&read(path)?)?;
        inst.check(&ball_grid(inst.vars(), 1.1, params.resolution))?;
        let (ok, mut entry) = certify(&inst, &opts);
        entry["instance"] = instance_json(&inst);
        return Ok(Outcome { report: json!({ "options": opts, "result": entry }), ok });
    }
    let grid = ball_grid(1, 1.1, params.resolution);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut trials = Vec::with_capacity(params.trials);
    let mut successes = 0usize;
    let mut warned = 0usize;
    for i in 0..params.trials {
        let inst = random_instance(&mut rng, params.max_degree, params.kappa, params.delta, params.pexp, &grid);
        inst.check(&grid)?;
        let (ok, mut entry) = certify(&inst, &opts);
        successes += ok as usize;
        if entry["certificate"]["warnings"].as_array().is_some_and(|w| !w.is_empty()) {
            warned += 1;
        }
        entry["trial"] = json!(i);
        entry["instance"] = instance_json(&inst);
        trials.push(entry);
    }
    let rate = if params.trials == 0 { 1.0 } else { successes as f64 / params.trials as f64 };
    let report = json!({
        "seed": params.seed,
        "trials": params.trials,
        "kappa": params.kappa,
        "delta": params.delta,
        "pexp": params.pexp,
        "max_degree": params.max_degree,
        "options": opts,
        "successes": successes,
        "success_rate": rate,
        "min_success": params.min_success,
        "with_warnings": warned,
        "results": trials,
    });
    Ok(Outcome { report, ok: rate >= params.min_success })
}

pub fn radial(samples: usize, seed: u64) -> Result<Outcome, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [0.0f64; 3];
    let mut failures = Vec::new();
    for i in 0..samples {
        let (name, l, x) = random_radial_case(&mut rng);
        let r = radial_map_check(l.as_ref(), &x)?;
        worst[0] = worst[0].max(r.det_rel_error);
        worst[1] = worst[1].max(r.eig_rel_error);
        worst[2] = worst[2].max(r.jacobian_rel_error);
        let close = r.det_rel_error < 1e-6 && r.eig_rel_error < 1e-6 && r.jacobian_rel_error < 1e-6;
        if !close || !r.bounds_hold() {
            failures.push(json!({ "sample": i, "profile": name, "report": r }));
        }
    }
    let ok = failures.is_empty();
    let report = json!({
        "samples": samples,
        "seed": seed,
        "tolerance": 1e-6,
        "max_det_rel_error": worst[0],
        "max_eig_rel_error": worst[1],
        "max_jacobian_rel_error": worst[2],
        "failures": failures,
    });
    Ok(Outcome { report, ok })
}

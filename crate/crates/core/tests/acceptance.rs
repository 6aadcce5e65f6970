//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and fails if
//! any criterion fails. Run with `--nocapture` to see the lines.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use lefschetz::fiber::{
    act, base_half_twist, cycle_eq, dehn_twist, elem_eq, intersection_number, Cycle, Exactness, FiberModel,
    PunctureArc,
};
use lefschetz::pencil::{
    automorphism_from_arc, base_twist_automorphism, classify_arc, enumerate_arcs, fakematch_lantern_identity,
    hurwitz_apply, hurwitz_orbit, in_gamma, kernel_orbit, ArcClass, IntersectionMode, Pencil,
};
use lefschetz::transversal::{
    ball_grid, build_cutoff, deform_morse, find_good_w0, polar_grid, radial_map_check, random_instance,
    random_radial_case, solve_w, verify_deform_bounds, CertificateOptions, MorseModel, RadialProfile, Warning,
};
use lefschetz::wordcore::{artin_apply, braid_eq, Arc, Braid, FreeWord};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GROUP_RUNTIME: Duration = Duration::from_secs(30);
const SWEEP_RUNTIME: Duration = Duration::from_secs(60);
const HURWITZ_CASES: usize = 500;
const RANDOM_ARCS: usize = 100;
const CUTOFF_SAMPLES: usize = 10_000;
const OUTER_VALUE_TOL: f64 = 1e-9;
const CLOSED_FORM_TOL: f64 = 1e-12;
const SWEEP_SPREAD: f64 = 3.0;
const RADIAL_SAMPLES: usize = 1_000;
const RADIAL_TOL: f64 = 1e-6;
const LOCAL_TRIALS: usize = 100;
const LOCAL_MIN_SUCCESS: usize = 95;
const RESIDUAL_TOL: f64 = 1e-10;

type Verdict = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn torus(p: i64, q: i64) -> Cycle {
    Cycle::torus(p, q).unwrap()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut relations = 0;
    for n in 2..=8usize {
        let s = |i: usize| Braid::generator(n, i).unwrap();
        for i in 1..n {
            for j in 1..n {
                let (a, b) = (s(i), s(j));
                let ab = a.mul(&b).unwrap();
                let ba = b.mul(&a).unwrap();
                if i.abs_diff(j) >= 2 {
                    check(braid_eq(&ab, &ba).unwrap(), || format!("σ{i}, σ{j} do not commute on {n} strands"))?;
                } else if i.abs_diff(j) == 1 {
                    let aba = ab.mul(&a).unwrap();
                    let bab = ba.mul(&b).unwrap();
                    check(braid_eq(&aba, &bab).unwrap(), || format!("braid relation σ{i}, σ{j} fails on {n} strands"))?;
                    check(!braid_eq(&ab, &ba).unwrap(), || format!("σ{i}, σ{j} commute on {n} strands"))?;
                }
                relations += 1;
            }
        }
    }
    let mut vectors = Vec::new();
    for p in -5i64..=5 {
        for q in -5i64..=5 {
            if gcd(p, q) == 1 {
                vectors.push(((p, q), torus(p, q)));
            }
        }
    }
    let twists: Vec<_> = vectors.iter().map(|(_, c)| dehn_twist(c).unwrap()).collect();
    let (mut braided, mut commuting) = (0, 0);
    for (i, ((p1, q1), c1)) in vectors.iter().enumerate() {
        for (j, ((p2, q2), c2)) in vectors.iter().enumerate() {
            let det = (p1 * q2 - q1 * p2).unsigned_abs();
            let inter = intersection_number(c1, c2).unwrap();
            check(inter.small() == Some(det) && inter.exactness == Exactness::Exact, || {
                format!("i({c1},{c2}) = {:?}, |det| = {det}", inter)
            })?;
            let (t1, t2) = (&twists[i], &twists[j]);
            let t12 = t1.mul(t2).unwrap();
            let t21 = t2.mul(t1).unwrap();
            match det {
                0 => {
                    check(elem_eq(&t12, &t21).unwrap(), || format!("twists on {c1}, {c2} do not commute"))?;
                    commuting += 1;
                }
                1 => {
                    let lhs = t12.mul(t1).unwrap();
                    let rhs = t21.mul(t2).unwrap();
                    check(elem_eq(&lhs, &rhs).unwrap(), || format!("braid relation fails for {c1}, {c2}"))?;
                    braided += 1;
                }
                _ => {}
            }
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < GROUP_RUNTIME, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{relations} generator pairs on 2-8 strands; torus: {braided} braid, {commuting} commuting pairs in {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn random_torus_cycle(rng: &mut ChaCha8Rng) -> Cycle {
    loop {
        let (p, q) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        if gcd(p, q) == 1 {
            return torus(p, q);
        }
    }
}

fn random_braid(rng: &mut ChaCha8Rng, strands: usize, max_len: usize) -> Braid {
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<i32> = (0..len)
        .map(|_| {
            let g = rng.gen_range(1..strands as i32);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect();
    Braid::from_letters(strands, letters).unwrap()
}

fn criterion_2() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut total_len = 0;
    for case in 0..HURWITZ_CASES {
        let r = rng.gen_range(2..=6);
        let cycles: Vec<Cycle> = (0..r).map(|_| random_torus_cycle(&mut rng)).collect();
        let p = Pencil::new(FiberModel::Torus, cycles).unwrap();
        let b = random_braid(&mut rng, r, 10);
        total_len += b.len();
        let q = hurwitz_apply(&b, &p).map_err(|e| format!("case {case}: {e}"))?;
        let before = p.total_monodromy().map_err(|e| format!("case {case}: {e}"))?;
        let after = q.total_monodromy().map_err(|e| format!("case {case}: {e}"))?;
        check(before == after, || format!("case {case}: {p} under [{b}] gives {q}, {before} != {after}"))?;
    }
    Ok(format!("{HURWITZ_CASES} pencils, {total_len} braid letters, monodromy preserved exactly"))
}

fn criterion_3() -> Verdict {
    let (a, b) = (torus(1, 0), torus(0, 1));
    let p = Pencil::new(FiberModel::Torus, vec![a.clone(), b.clone(), a, b]).unwrap();
    let mut counts = [0usize; 4];
    for arc in enumerate_arcs(4, 4) {
        let class = classify_arc(&arc, &p, IntersectionMode::Strict).map_err(|e| format!("{arc}: {e}"))?;
        let k = match class {
            ArcClass::Matching => 1,
            ArcClass::DisjointPair => 2,
            ArcClass::OnceIntersecting => 3,
            _ => {
                counts[0] += 1;
                continue;
            }
        };
        counts[k] += 1;
        let auto = automorphism_from_arc(&arc, &p, IntersectionMode::Strict).map_err(|e| format!("{arc}: {e}"))?;
        check(braid_eq(&auto.braid, &arc.half_twist().pow(k as u32)).unwrap(), || {
            format!("{arc}: braid [{}] is not σ^{k}", auto.braid)
        })?;
        check(auto.fiber.is_identity(), || format!("{arc}: nontrivial fiber part"))?;
        check(in_gamma(&auto, &p).unwrap(), || format!("{arc}: (σ^{k}, 1) not in Γ"))?;
    }
    check(counts[1] > 0 && counts[3] > 0, || format!("degenerate enumeration {counts:?}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..RANDOM_ARCS {
        let n = rng.gen_range(2..=8);
        let base = rng.gen_range(1..n);
        let carrier = random_braid(&mut rng, n, 8);
        let arc = Arc::new(base, carrier).unwrap();
        let pair = arc.supporting_pair();
        let (e1, e2) = (pair.first.to_word(), pair.second.to_word());
        let mul = |u: &FreeWord, v: &FreeWord| u.mul(v).unwrap();
        let conj = |g: &FreeWord, u: &FreeWord| mul(&mul(g, u), &g.inverse());
        let e21 = mul(&e2, &e1);
        let e212 = mul(&e21, &e2);
        let expected = [
            (e2.clone(), conj(&e2, &e1)),
            (conj(&e2, &e1), conj(&e21, &e2)),
            (conj(&e21, &e2), conj(&e212, &e1)),
        ];
        for (k, (x1, x2)) in expected.iter().enumerate() {
            let t = arc.half_twist().pow(k as u32 + 1);
            let y1 = artin_apply(&t, &e1).unwrap();
            let y2 = artin_apply(&t, &e2).unwrap();
            check(&y1 == x1 && &y2 == x2, || {
                format!("arc {i} {arc}: σ^{} gives ({y1}, {y2}), expected ({x1}, {x2})", k + 1)
            })?;
        }
    }
    Ok(format!(
        "(a,b,a,b) carriers <= 4: {} matching, {} disjoint, {} once-intersecting in Γ ({} other); {RANDOM_ARCS} arcs satisfy the σ, σ², σ³ formulas",
        counts[1], counts[2], counts[3], counts[0]
    ))
}

fn criterion_4() -> Verdict {
    let n = 3;
    let b = |s: &str| Braid::parse(n, s).unwrap();
    let a12 = b("s1 s1");
    let a13 = b("s2 s1 s1 S2");
    let a23 = b("s2 s2");
    let lhs = a12.mul(&a13).unwrap().mul(&a23).unwrap();
    let delta2 = b("s1 s2").pow(3);
    check(braid_eq(&lhs, &delta2).unwrap(), || format!("A12 A13 A23 = [{lhs}] differs from Δ²"))?;
    check(braid_eq(&delta2, &Braid::full_twist(n, 1, n).unwrap()).unwrap(), || "full twist mismatch".into())?;

    let d = PunctureArc::standard(n, 1).unwrap();
    let s1 = Cycle::disc_standard(n, 2, 3).unwrap();
    let t = base_half_twist(&d);
    let s2 = act(&t, &s1).unwrap();
    let g = dehn_twist(&s2).unwrap().mul(&t).unwrap().mul(&t).unwrap();
    check(cycle_eq(&act(&g, &s1).unwrap(), &s1), || "τ_{S″}τ_δ² moves S′".into())?;
    check(fakematch_lantern_identity(&s1, &d).unwrap(), || "library lantern identity disagrees".into())?;

    // Pencil whose first matching arc realises S″ = τ_δ⁻¹(S′).
    let s2 = act(&t.inverse(), &s1).unwrap();
    let c2 = act(&lefschetz::fiber::dehn_twist_inverse(&s1).unwrap(), &s2).unwrap();
    let p = Pencil::new(FiberModel::Disc { punctures: n }, vec![s1.clone(), c2]).unwrap();
    let arc = Arc::standard(2, 1).unwrap();
    let auto = base_twist_automorphism(&arc, &d, &p).map_err(|e| e.to_string())?;
    check(in_gamma(&auto, &p).unwrap(), || format!("{auto} not in Γ"))?;
    let g = dehn_twist(&s1).unwrap().mul(&t).unwrap().mul(&t).unwrap();
    check(cycle_eq(&act(&g, &s2).unwrap(), &s2), || "transposed lantern identity fails".into())?;
    Ok(format!("A12 A13 A23 = Δ² on 3 strands; lantern identity holds; {auto} in Γ"))
}

fn criterion_5() -> Verdict {
    let c0 = 1.0;
    let mut lines = Vec::new();
    for k in [1e3, 1e4, 1e5] {
        for d in [1.0, 2.0, 5.0] {
            let r: f64 = 3.0 * d / (1.4 * c0);
            let admissible = k >= r.powi(6) && k.sqrt() * c0 / 2.0 > 2.0 * d;
            let built = build_cutoff(k, d, c0);
            if !admissible {
                check(built.is_err(), || format!("k={k}, D={d} accepted below the threshold"))?;
                continue;
            }
            let p = built.map_err(|e| format!("k={k}, D={d}: {e}"))?;
            let eps = r.ln() / (k.ln() - 2.0 * r.ln());
            let a = (1.5 * d).powf(0.5 + eps);
            check((p.eps - eps).abs() <= CLOSED_FORM_TOL && (p.a - a).abs() <= CLOSED_FORM_TOL, || {
                format!("k={k}, D={d}: eps {} vs {eps}, a {} vs {a}", p.eps, p.a)
            })?;
            let beta = 0.5 + eps;
            let t2 = 0.75 * k.sqrt() * c0;
            let span = (t2 / d).ln();
            for i in 0..CUTOFF_SAMPLES {
                let t = d * (span * (i as f64 + 0.5) / CUTOFF_SAMPLES as f64).exp();
                let [l, l1, _, _] = p.jet(t);
                let s = l1 / l;
                check(s < 0.0 && s >= -beta / t * (1.0 + 1e-12), || {
                    format!("k={k}, D={d}: l'/l = {s} at t = {t}, bound {}", -beta / t)
                })?;
            }
            check(p.value(d) == k.powf(0.25), || format!("k={k}, D={d}: l(D) = {}", p.value(d)))?;
            let inside = p.value(d * (1.0 + 1e-12));
            check((inside / k.powf(0.25) - 1.0).abs() < OUTER_VALUE_TOL, || format!("l jumps at D: {inside}"))?;
            for t in [t2 * (1.0 - 1e-12), t2, 2.0 * t2] {
                check((p.value(t) - 1.0).abs() < OUTER_VALUE_TOL, || format!("k={k}, D={d}: l({t}) = {}", p.value(t)))?;
            }
            lines.push(format!("(k={k:e},D={d})"));
        }
    }
    Ok(format!("admissible {}; {CUTOFF_SAMPLES} samples each", lines.join(" ")))
}

fn criterion_6() -> Verdict {
    let start = Instant::now();
    let mut summary = Vec::new();
    for d in [1.0, 2.0, 5.0] {
        let mut rows = Vec::new();
        for k in [1e3f64, 1e4, 1e5] {
            let profile = build_cutoff(k, d, d).map_err(|e| e.to_string())?;
            let h = deform_morse(MorseModel::single(vec![1.0, -1.0], 0.5), profile).map_err(|e| e.to_string())?;
            let grid = polar_grid(&[0.0, 0.0], d / 10.0, k.sqrt() * d, 400, 64);
            let r = verify_deform_bounds(&h, &grid).map_err(|e| e.to_string())?;
            check(r.eta_observed > 0.0, || format!("D={d}, k={k}: eta {}", r.eta_observed))?;
            rows.push([r.max_grad_over_d, r.eta_observed, r.max_third_times_d]);
        }
        for (j, name) in ["maxGrad/D", "etaObserved", "maxThird*D"].iter().enumerate() {
            let hi = rows.iter().map(|r| r[j]).fold(f64::MIN, f64::max);
            let lo = rows.iter().map(|r| r[j]).fold(f64::MAX, f64::min);
            check(hi / lo < SWEEP_SPREAD, || format!("D={d}: {name} spread {}", hi / lo))?;
            summary.push(format!("D={d} {name} x{:.2}", hi / lo));
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < SWEEP_RUNTIME, || format!("took {elapsed:?}"))?;
    Ok(format!("{} in {:.1}s", summary.join(", "), elapsed.as_secs_f64()))
}

fn fd_jacobian(l: &dyn RadialProfile, x: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    let xv = DVector::from_column_slice(x);
    let h = 1e-5 * xv.norm();
    let f = |v: &DVector<f64>| v * l.value(v.norm());
    let mut j = DMatrix::zeros(n, n);
    for c in 0..n {
        let mut e = DVector::zeros(n);
        e[c] = h;
        j.set_column(c, &((f(&(&xv + &e)) - f(&(&xv - &e))) / (2.0 * h)));
    }
    j
}

fn criterion_7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut det_err, mut eig_err) = (0.0f64, 0.0f64);
    for i in 0..RADIAL_SAMPLES {
        let (name, l, x) = random_radial_case(&mut rng);
        let r = radial_map_check(l.as_ref(), &x).map_err(|e| format!("sample {i} ({name}): {e}"))?;
        let n = x.len();
        let t = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let [lv, dl, _, _] = l.jet(t);
        let det = lv.powi(n as i32) * (1.0 + t * dl / lv);
        check((r.det - det).abs() <= 1e-12 * det.abs(), || format!("sample {i}: det {} vs {det}", r.det))?;
        let jac = fd_jacobian(l.as_ref(), &x);
        let e = (jac.clone().determinant() - det).abs() / det.abs();
        det_err = det_err.max(e);
        let mut numeric: Vec<f64> = SymmetricEigen::new((&jac + jac.transpose()) * 0.5).eigenvalues.iter().copied().collect();
        numeric.sort_by(f64::total_cmp);
        let mut closed = vec![lv; n];
        closed[0] = lv + dl * t;
        closed.sort_by(f64::total_cmp);
        let e2 = closed.iter().zip(&numeric).map(|(a, b)| (a - b).abs() / a.abs()).fold(0.0, f64::max);
        eig_err = eig_err.max(e2);
        check(e < RADIAL_TOL && e2 < RADIAL_TOL, || format!("sample {i} ({name}): det err {e}, eig err {e2}"))?;
        check(closed[0] >= lv / 4.0 * (1.0 - 1e-12) && r.bounds_hold(), || format!("sample {i}: bounds fail"))?;
    }
    Ok(format!("{RADIAL_SAMPLES} samples: max det rel err {det_err:.2e}, max eig rel err {eig_err:.2e}"))
}

fn criterion_8() -> Verdict {
    let grid = ball_grid(1, 1.1, 201);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let opts = CertificateOptions::default();
    let (mut successes, mut area_warnings, mut max_residual) = (0, 0, 0.0f64);
    for trial in 0..LOCAL_TRIALS {
        let inst = random_instance(&mut rng, 4, 0.2, 0.1, 2, &grid);
        let q_sup = grid.iter().map(|z| inst.q.eval(z).norm()).fold(0.0, f64::max);
        check(inst.p.degree() <= 4 && inst.q.degree() <= 4 && q_sup <= 0.8 + 1e-12, || {
            format!("trial {trial}: instance out of range")
        })?;
        for z in ball_grid(1, 1.0, 101) {
            let w = solve_w(&inst.p, &inst.q, &z).map_err(|e| format!("trial {trial}: {e}"))?;
            let res = (inst.p.eval(&z) - w - w.conj() * inst.q.eval(&z)).norm();
            max_residual = max_residual.max(res);
        }
        let Ok(cert) = find_good_w0(&inst, &opts) else { continue };
        check(cert.max_residual < RESIDUAL_TOL, || format!("trial {trial}: residual {}", cert.max_residual))?;
        check(cert.refined.passed, || format!("trial {trial}: refined check failed"))?;
        let w0 = Complex64::new(cert.w0[0], cert.w0[1]);
        check(w0.norm() < inst.delta, || format!("trial {trial}: |w0| = {}", w0.norm()))?;
        // Independent check on a grid twice as fine as the certified one.
        let fine = 2 * cert.per_axis - 1;
        for i in 0..fine {
            for j in 0..fine {
                let z = Complex64::new(-1.0 + 2.0 * i as f64 / (fine - 1) as f64, -1.0 + 2.0 * j as f64 / (fine - 1) as f64);
                if z.norm() > 1.0 {
                    continue;
                }
                let (pv, dp) = inst.p.eval_with_gradient(&[z]);
                let (qv, dq) = inst.q.eval_with_gradient(&[z]);
                let f = pv - w0 - w0.conj() * qv;
                let df = (dp[0] - w0.conj() * dq[0]).norm();
                check(f.norm() >= cert.sigma || df > cert.sigma, || {
                    format!("trial {trial}: not transverse at {z}: |f| = {}, |f'| = {df}", f.norm())
                })?;
            }
        }
        successes += 1;
        area_warnings += cert.warnings.iter().filter(|w| matches!(w, Warning::Clearance { .. })).count();
    }
    check(max_residual < RESIDUAL_TOL, || format!("solve_w residual {max_residual}"))?;
    check(successes >= LOCAL_MIN_SUCCESS, || format!("{successes}/{LOCAL_TRIALS} certified"))?;
    Ok(format!(
        "{successes}/{LOCAL_TRIALS} certified and re-verified; max residual {max_residual:.1e}; clearance-area warnings: {area_warnings}"
    ))
}

fn criterion_9() -> Verdict {
    let (a, b) = (torus(1, 0), torus(0, 1));
    let ab = Pencil::new(FiberModel::Torus, vec![a.clone(), b.clone()]).unwrap();
    let orbit = hurwitz_orbit(&ab, 3).map_err(|e| e.to_string())?;
    let total = ab.total_monodromy().unwrap();
    for q in &orbit {
        check(q.total_monodromy().unwrap() == total, || format!("{q} changes the total monodromy"))?;
    }
    let mut oracle = BTreeSet::from([ab.clone()]);
    let mut frontier = vec![ab.clone()];
    for _ in 0..3 {
        let mut next = Vec::new();
        for q in &frontier {
            for s in ["s1", "S1"] {
                let moved = hurwitz_apply(&Braid::parse(2, s).unwrap(), q).unwrap();
                if oracle.insert(moved.clone()) {
                    next.push(moved);
                }
            }
        }
        frontier = next;
    }
    check(oracle == orbit, || format!("orbit {} members, oracle {}", orbit.len(), oracle.len()))?;

    let abab = Pencil::new(FiberModel::Torus, vec![a.clone(), b.clone(), a, b]).unwrap();
    let gen = automorphism_from_arc(&Arc::standard(4, 1).unwrap(), &abab, IntersectionMode::Strict).unwrap();
    check(gen.braid.len() == 3, || format!("generator [{}] is not a cube", gen.braid))?;
    let start = Arc::new(1, Braid::parse(4, "S2").unwrap()).unwrap();
    let arcs = kernel_orbit(&start, &abab, &[gen], 3, IntersectionMode::Strict).map_err(|e| e.to_string())?;
    for arc in &arcs {
        let class = classify_arc(arc, &abab, IntersectionMode::Strict).unwrap();
        check(class == ArcClass::Matching, || format!("{arc} is {class}"))?;
    }
    Ok(format!("Hurwitz orbit of (a,b): {} pencils; kernel orbit: {} matching arcs", orbit.len(), arcs.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("group identities", criterion_1),
        ("Hurwitz invariance", criterion_2),
        ("kernel elements", criterion_3),
        ("lantern and base-point twist", criterion_4),
        ("cutoff profile", criterion_5),
        ("deformation sweep", criterion_6),
        ("radial map", criterion_7),
        ("local perturbation", criterion_8),
        ("orbits", criterion_9),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                println!("FAIL {} {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

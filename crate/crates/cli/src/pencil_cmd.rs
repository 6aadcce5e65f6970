use std::path::PathBuf;

use lefschetz::fiber::elem_eq;
use lefschetz::io::{fiber_element_json, parse_automorphism, parse_pencil, pencil_json};
use lefschetz::pencil::{
    arc_labels, classify_arc, enumerate_arcs, gamma_violation, hurwitz_apply, hurwitz_orbit, IntersectionMode, Pencil,
};
use lefschetz::wordcore::Braid;
use serde_json::json;

use crate::{read, Failure, Outcome};

fn load(path: &PathBuf) -> Result<Pencil, Failure> {
    Ok(parse_pencil(&read(path)?)?)
}

pub fn validate(path: &PathBuf, closed: bool) -> Result<Outcome, Failure> {
    let p = load(path)?;
    let total = p.total_monodromy()?;
    let is_closed = total.is_identity();
    let mut report = json!({
        "valid": true,
        "cycles": p.len(),
        "total_monodromy": fiber_element_json(&total),
        "closed": is_closed,
    });
    if !closed {
        report.as_object_mut().expect("object").remove("closed");
    }
    Ok(Outcome { report, ok: !closed || is_closed })
}

pub fn hurwitz(path: &PathBuf, braid: &str) -> Result<Outcome, Failure> {
    let p = load(path)?;
    let b = Braid::parse(p.len(), braid)?;
    let q = hurwitz_apply(&b, &p)?;
    let preserved = elem_eq(&p.total_monodromy()?, &q.total_monodromy()?)?;
    if preserved {
        eprintln!("total monodromy preserved");
    } else {
        eprintln!("total monodromy changed");
    }
    Ok(Outcome { report: pencil_json(&q), ok: preserved })
}

pub fn matching(path: &PathBuf, max_len: usize, trust: bool) -> Result<Outcome, Failure> {
    let p = load(path)?;
    let mode = if trust { IntersectionMode::TrustAlgebraic } else { IntersectionMode::Strict };
    let mut arcs = Vec::new();
    for a in enumerate_arcs(p.len(), max_len) {
        let class = classify_arc(&a, &p, mode)?;
        let (l1, l2) = arc_labels(&a, &p)?;
        arcs.push(json!({
            "arc": a.to_string(),
            "base": a.base,
            "carrier": a.carrier.to_string(),
            "class": class.name(),
            "detail": class.to_string(),
            "supporting_pair": a.supporting_pair().canonical().to_string(),
            "labels": [l1.to_string(), l2.to_string()],
        }));
    }
    Ok(Outcome { report: json!({ "max_len": max_len, "arcs": arcs }), ok: true })
}

pub fn gamma_check(path: &PathBuf, auto: &PathBuf) -> Result<Outcome, Failure> {
    let p = load(path)?;
    let a = parse_automorphism(&read(auto)?, p.fiber(), p.len())?;
    let violation = gamma_violation(&a, &p)?;
    if let Some(v) = &violation {
        eprintln!("{v}");
    }
    let report = json!({
        "automorphism": a.to_string(),
        "in_gamma": violation.is_none(),
        "violation": violation.as_ref().map(|v| v.to_string()),
    });
    Ok(Outcome { report, ok: violation.is_none() })
}

pub fn orbit(path: &PathBuf, depth: usize) -> Result<Outcome, Failure> {
    let p = load(path)?;
    let total = p.total_monodromy()?;
    let orbit = hurwitz_orbit(&p, depth)?;
    let mut shared = true;
    for q in &orbit {
        shared &= elem_eq(&total, &q.total_monodromy()?)?;
    }
    let members: Vec<String> = orbit.iter().map(|q| q.to_string()).collect();
    let report = json!({
        "depth": depth,
        "size": members.len(),
        "total_monodromy_shared": shared,
        "members": members,
    });
    Ok(Outcome { report, ok: shared })
}

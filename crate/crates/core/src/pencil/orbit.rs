use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::wordcore::{Arc, Braid};

use super::arcs::{classify_arc, IntersectionMode};
use super::{gamma_violation, hurwitz_apply, Automorphism, Pencil, PencilError};

/// Arcs reachable from `a` by at most `depth` applications of the given
/// elements of `Γ(φ)` and their inverses.
///
/// Every arc in the orbit must have the same class as `a`; a change is reported
/// as a postcondition failure.
pub fn kernel_orbit(
    a: &Arc,
    p: &Pencil,
    gens: &[Automorphism],
    depth: usize,
    mode: IntersectionMode,
) -> Result<Vec<Arc>, PencilError> {
    for g in gens {
        if let Some(v) = gamma_violation(g, p)? {
            return Err(PencilError::NotInGamma(format!("{g}: {v}")));
        }
    }
    let moves: Vec<Braid> = gens.iter().flat_map(|g| [g.braid.clone(), g.braid.inverse()]).collect();
    let class = classify_arc(a, p, mode)?;
    let mut seen = HashSet::from([a.supporting_pair().canonical()]);
    let mut out = vec![a.clone()];
    let mut queue = VecDeque::from([(a.clone(), 0usize)]);
    while let Some((arc, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        for m in &moves {
            let next = arc.pushforward(m)?;
            if !seen.insert(next.supporting_pair().canonical()) {
                continue;
            }
            let c = classify_arc(&next, p, mode)?;
            if !c.same_kind(&class) {
                return Err(PencilError::Postcondition(format!(
                    "{next} is {c} but {a} is {class}"
                )));
            }
            out.push(next.clone());
            queue.push_back((next, d + 1));
        }
    }
    Ok(out)
}

/// Pencils reachable by at most `depth` elementary Hurwitz moves `σ_i^{±1}`.
pub fn hurwitz_orbit(p: &Pencil, depth: usize) -> Result<BTreeSet<Pencil>, PencilError> {
    let r = p.len();
    let moves: Vec<Braid> = (1..r as i32)
        .flat_map(|i| [i, -i])
        .map(|l| Braid::from_letters(r, [l]).expect("letters in range"))
        .collect();
    let mut seen = BTreeSet::from([p.clone()]);
    let mut frontier = vec![p.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for q in &frontier {
            for m in &moves {
                let s = hurwitz_apply(m, q)?;
                if seen.insert(s.clone()) {
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    Ok(seen)
}

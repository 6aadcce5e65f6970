use std::collections::HashSet;
use std::fmt;

use crate::fiber::{
    act, arc_crossings, base_half_twist, dehn_twist, intersection_number, Cycle, Exactness, FiberModel,
    PunctureArc,
};
use crate::wordcore::{Arc, Braid};

use super::{gamma_violation, Automorphism, Pencil, PencilError};

/// How much to believe a lower bound on geometric intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntersectionMode {
    /// Only exact intersection numbers are used.
    #[default]
    Strict,
    /// In `Sp(2h,ℤ)` models, take `|⟨S′,S″⟩|` at face value.
    TrustAlgebraic,
}

/// The relative position of the two labels `S′ = L(η′)`, `S″ = L(η″)` of an arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArcClass {
    /// `S′ = S″`.
    Matching,
    /// Disjoint labels.
    DisjointPair,
    /// Labels meeting exactly once.
    OnceIntersecting,
    /// Disc fiber, `S′` crossing `δ` once and `S″` the image of `S′` under the
    /// negative half-twist along `δ`.
    BasePointTwist(PunctureArc),
    Other(String),
}

impl ArcClass {
    pub fn name(&self) -> &'static str {
        match self {
            ArcClass::Matching => "matching",
            ArcClass::DisjointPair => "disjoint-pair",
            ArcClass::OnceIntersecting => "once-intersecting",
            ArcClass::BasePointTwist(_) => "base-point-twist",
            ArcClass::Other(_) => "other",
        }
    }

    pub fn same_kind(&self, other: &ArcClass) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }
}

impl fmt::Display for ArcClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArcClass::BasePointTwist(d) => write!(f, "base-point-twist({d})"),
            ArcClass::Other(reason) => write!(f, "other: {reason}"),
            c => f.write_str(c.name()),
        }
    }
}

/// Clauses of the hypothesis for the base-point twist construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FakematchClause {
    /// `S′` crosses `δ` exactly once.
    CrossesOnce,
    /// `S″ = τ_δ⁻¹(S′)`.
    HalfTwistImage,
}

impl fmt::Display for FakematchClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FakematchClause::CrossesOnce => f.write_str("i"),
            FakematchClause::HalfTwistImage => f.write_str("ii"),
        }
    }
}

/// The labels `(S′, S″)` of the supporting pair of `a`.
pub fn arc_labels(a: &Arc, p: &Pencil) -> Result<(Cycle, Cycle), PencilError> {
    if a.strands() != p.len() {
        return Err(PencilError::StrandMismatch { braid: a.strands(), cycles: p.len() });
    }
    let m = p.evaluator()?;
    let pair = a.supporting_pair();
    Ok((m.label(&pair.first)?, m.label(&pair.second)?))
}

fn check_fakematch(s1: &Cycle, s2: &Cycle, d: &PunctureArc) -> Result<(), PencilError> {
    match arc_crossings(s1, d) {
        Ok(1) => {}
        Ok(k) => {
            return Err(PencilError::Hypothesis {
                clause: FakematchClause::CrossesOnce,
                detail: format!("{s1} crosses {d} {k} times"),
            })
        }
        Err(e) => {
            return Err(PencilError::Hypothesis {
                clause: FakematchClause::CrossesOnce,
                detail: format!("cannot count crossings of {s1} with {d}: {e}"),
            })
        }
    }
    let expected = act(&base_half_twist(d).inverse(), s1)?;
    if &expected != s2 {
        return Err(PencilError::Hypothesis {
            clause: FakematchClause::HalfTwistImage,
            detail: format!("S″ = {s2} but the half-twist image of S′ is {expected}"),
        });
    }
    Ok(())
}

pub fn classify_arc(a: &Arc, p: &Pencil, mode: IntersectionMode) -> Result<ArcClass, PencilError> {
    let (s1, s2) = arc_labels(a, p)?;
    if s1 == s2 {
        return Ok(ArcClass::Matching);
    }
    let i = intersection_number(&s1, &s2)?;
    let trusted = i.exactness == Exactness::Exact
        || (mode == IntersectionMode::TrustAlgebraic && matches!(p.fiber(), FiberModel::Symplectic { .. }));
    if trusted {
        match i.small() {
            Some(0) => return Ok(ArcClass::DisjointPair),
            Some(1) => return Ok(ArcClass::OnceIntersecting),
            _ => {}
        }
    }
    if let FiberModel::Disc { punctures } = p.fiber() {
        for base in 1..punctures {
            let d = PunctureArc::standard(punctures, base)?;
            if check_fakematch(&s1, &s2, &d).is_ok() {
                return Ok(ArcClass::BasePointTwist(d));
            }
        }
    }
    let reason = match (trusted, i.exactness) {
        (true, _) => format!("labels meet {} times", i.value),
        (false, Exactness::LowerBound) => {
            format!("only a lower bound {} is known for the intersection of the labels", i.value)
        }
        (false, Exactness::Exact) => unreachable!("exact intersections are trusted"),
    };
    Ok(ArcClass::Other(reason))
}

/// The element of `Γ(φ)` produced by an arc: `(σ_a^k, 1)` with `k = 1, 2, 3`
/// for matching, disjoint and once-intersecting labels, or the base-point twist.
pub fn automorphism_from_arc(a: &Arc, p: &Pencil, mode: IntersectionMode) -> Result<Automorphism, PencilError> {
    let k = match classify_arc(a, p, mode)? {
        ArcClass::Matching => 1,
        ArcClass::DisjointPair => 2,
        ArcClass::OnceIntersecting => 3,
        ArcClass::BasePointTwist(d) => return base_twist_automorphism(a, &d, p),
        c @ ArcClass::Other(_) => return Err(PencilError::UnsupportedClass(c.to_string())),
    };
    let auto = Automorphism::new(a.half_twist().pow(k), p.fiber().identity());
    ensure_in_gamma(&auto, p)?;
    Ok(auto)
}

fn ensure_in_gamma(auto: &Automorphism, p: &Pencil) -> Result<(), PencilError> {
    match gamma_violation(auto, p)? {
        None => Ok(()),
        Some(v) => Err(PencilError::Postcondition(format!("{auto} is not in Γ: {v}"))),
    }
}

/// `(σ_a, τ_δ⁻¹)` for a disc fiber whose labels satisfy `S′ ⋔ δ` once and
/// `S″ = τ_δ⁻¹(S′)`.
///
/// The lantern relation gives `τ_δ² τ_{S″}(S′) = S′`; this is checked before the
/// result is returned.
pub fn base_twist_automorphism(a: &Arc, d: &PunctureArc, p: &Pencil) -> Result<Automorphism, PencilError> {
    d.check_model(&p.fiber())?;
    let (s1, s2) = arc_labels(a, p)?;
    check_fakematch(&s1, &s2, d)?;
    let t = base_half_twist(d);
    let lantern = t.mul(&t)?.mul(&dehn_twist(&s2)?)?;
    if act(&lantern, &s1)? != s1 {
        return Err(PencilError::Postcondition(format!("τ_δ² τ_S″ moves S′ = {s1}")));
    }
    let auto = Automorphism::new(a.half_twist(), t.inverse());
    ensure_in_gamma(&auto, p)?;
    Ok(auto)
}

/// With `S″ = τ_δ(S′)`, whether `τ_{S″} τ_δ²` fixes `S′`.
pub fn fakematch_lantern_identity(s1: &Cycle, d: &PunctureArc) -> Result<bool, PencilError> {
    let t = base_half_twist(d);
    let s2 = act(&t, s1)?;
    let g = dehn_twist(&s2)?.mul(&t)?.mul(&t)?;
    Ok(act(&g, s1)? == *s1)
}

/// Local model of a singular point of a plane curve in the base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityKind {
    Tangency,
    Node,
    Cusp,
}

/// Half-twist power attached to a singularity: `σ_a`, `σ_a²` or `σ_a³`.
pub fn dual_singularity_braid(kind: SingularityKind, a: &Arc) -> Braid {
    let k = match kind {
        SingularityKind::Tangency => 1,
        SingularityKind::Node => 2,
        SingularityKind::Cusp => 3,
    };
    a.half_twist().pow(k)
}

/// Freely reduced braid words of length at most `max_len`, shortest first.
fn carriers(strands: usize, max_len: usize) -> Vec<Braid> {
    let gens: Vec<i32> = (1..strands as i32).flat_map(|i| [i, -i]).collect();
    let mut out = vec![Braid::identity(strands)];
    let mut layer = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for b in &layer {
            for &g in &gens {
                if b.letters().last() != Some(&-g) {
                    let letters = b.letters().iter().copied().chain([g]);
                    next.push(Braid::from_letters(strands, letters).expect("letters in range"));
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Arcs with carriers of length at most `max_len`, one per supporting pair up to
/// simultaneous conjugation, in order of carrier length.
pub fn enumerate_arcs(strands: usize, max_len: usize) -> Vec<Arc> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    if strands < 2 {
        return out;
    }
    for c in carriers(strands, max_len) {
        for base in 1..strands {
            let a = Arc { base, carrier: c.clone() };
            if seen.insert(a.supporting_pair().canonical()) {
                out.push(a);
            }
        }
    }
    out
}

pub fn enumerate_matching_arcs(p: &Pencil, max_len: usize, mode: IntersectionMode) -> Result<Vec<Arc>, PencilError> {
    let mut out = Vec::new();
    for a in enumerate_arcs(p.len(), max_len) {
        if classify_arc(&a, p, mode)? == ArcClass::Matching {
            out.push(a);
        }
    }
    Ok(out)
}

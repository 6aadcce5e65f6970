//! Positive factorizations and their enhanced monodromy.
//!
//! A [`Pencil`] is an ordered tuple of vanishing cycles `(c_1, ..., c_r)`. Its
//! monodromy `ζ` sends the geometric generator `x_i` to the Dehn twist `τ_{c_i}`
//! and is extended as a homomorphism, words being evaluated left to right. The
//! vanishing-cycle labelling of conjugates of generators is
//! `L(w x_i w⁻¹) = ζ(w)(c_i)`, which is compatible with `ζ(w x_i w⁻¹) = τ_{L}`.
//!
//! The braid group acts by Hurwitz moves, `θ̂ ↦ θ̂ ∘ b_*⁻¹`, and the group `Γ(φ)`
//! of combinatorial automorphisms is the set of pairs `(b, g)` with
//! `θ̂ ∘ b_* = g_*(θ̂)`.

mod arcs;
mod orbit;

pub use arcs::{
    arc_labels, automorphism_from_arc, base_twist_automorphism, classify_arc, dual_singularity_braid,
    enumerate_arcs, enumerate_matching_arcs, fakematch_lantern_identity, ArcClass, FakematchClause,
    IntersectionMode, SingularityKind,
};
pub use orbit::{hurwitz_orbit, kernel_orbit};

use std::fmt;

use thiserror::Error;

use crate::fiber::{act, dehn_twist, dehn_twist_inverse, elem_eq, Cycle, FiberElement, FiberError, FiberModel};
use crate::wordcore::{Braid, FreeWord, GeneratorConjugate, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PencilError {
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("a pencil needs at least one vanishing cycle")]
    Empty,
    #[error("braid on {braid} strands applied to a pencil with {cycles} cycles")]
    StrandMismatch { braid: usize, cycles: usize },
    #[error("generator is not in Γ(φ): {0}")]
    NotInGamma(String),
    #[error("arc class {0} has no associated automorphism")]
    UnsupportedClass(String),
    #[error("hypothesis ({clause}) fails: {detail}")]
    Hypothesis { clause: FakematchClause, detail: String },
    #[error("postcondition failed: {0}")]
    Postcondition(String),
}

/// A positive factorization over a disc: an ordered list of vanishing cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pencil {
    fiber: FiberModel,
    cycles: Vec<Cycle>,
}

impl Pencil {
    pub fn new(fiber: FiberModel, cycles: Vec<Cycle>) -> Result<Self, PencilError> {
        fiber.validate()?;
        if cycles.is_empty() {
            return Err(PencilError::Empty);
        }
        for c in &cycles {
            fiber.check_cycle(c)?;
        }
        Ok(Self { fiber, cycles })
    }

    pub fn fiber(&self) -> FiberModel {
        self.fiber
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    /// Number of critical values `r`.
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn twists(&self) -> Result<Vec<FiberElement>, PencilError> {
        self.cycles.iter().map(|c| Ok(dehn_twist(c)?)).collect()
    }

    pub(crate) fn evaluator(&self) -> Result<Monodromy<'_>, PencilError> {
        let twists = self.twists()?;
        let inverses = twists.iter().map(FiberElement::inverse).collect();
        Ok(Monodromy { pencil: self, twists, inverses })
    }

    /// `ζ(x_1 ⋯ x_r)`.
    pub fn total_monodromy(&self) -> Result<FiberElement, PencilError> {
        let r = self.len();
        self.evaluator()?.of(&FreeWord::consecutive_product(r, 1, r)?)
    }

    /// Whether the total monodromy is trivial.
    pub fn is_closed(&self) -> Result<bool, PencilError> {
        Ok(self.total_monodromy()?.is_identity())
    }

    fn check_strands(&self, b: &Braid) -> Result<(), PencilError> {
        if b.strands() != self.len() {
            return Err(PencilError::StrandMismatch { braid: b.strands(), cycles: self.len() });
        }
        Ok(())
    }
}

impl fmt::Display for Pencil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.cycles.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Cached twists of a pencil for repeated evaluation of `ζ` and `L`.
pub(crate) struct Monodromy<'a> {
    pencil: &'a Pencil,
    twists: Vec<FiberElement>,
    inverses: Vec<FiberElement>,
}

impl Monodromy<'_> {
    pub(crate) fn of(&self, gamma: &FreeWord) -> Result<FiberElement, PencilError> {
        let r = self.pencil.len();
        if gamma.rank() != r {
            return Err(WordError::RankMismatch { left: gamma.rank(), right: r }.into());
        }
        let mut acc = self.pencil.fiber.identity();
        for &l in gamma.letters() {
            let i = l.unsigned_abs() as usize - 1;
            let t = if l > 0 { &self.twists[i] } else { &self.inverses[i] };
            acc = acc.mul(t)?;
        }
        Ok(acc)
    }

    pub(crate) fn label(&self, gamma: &GeneratorConjugate) -> Result<Cycle, PencilError> {
        let r = self.pencil.len();
        if gamma.conjugator.rank() != r || gamma.core == 0 || gamma.core > r {
            return Err(WordError::RankMismatch { left: gamma.conjugator.rank(), right: r }.into());
        }
        let g = self.of(&gamma.conjugator)?;
        Ok(act(&g, &self.pencil.cycles[gamma.core - 1])?)
    }
}

/// `ζ(γ)`.
pub fn monodromy_of(p: &Pencil, gamma: &FreeWord) -> Result<FiberElement, PencilError> {
    p.evaluator()?.of(gamma)
}

/// `L(w x_i w⁻¹) = ζ(w)(c_i)`.
pub fn vanishing_label(p: &Pencil, gamma: &GeneratorConjugate) -> Result<Cycle, PencilError> {
    p.evaluator()?.label(gamma)
}

/// The Hurwitz move by `b`: the result has enhanced monodromy `θ̂ ∘ b_*⁻¹`.
///
/// On generators, `σ_i` sends `(c_i, c_{i+1})` to `(c_{i+1}, τ_{c_{i+1}}⁻¹(c_i))`
/// and `σ_i⁻¹` sends it to `(τ_{c_i}(c_{i+1}), c_i)`.
pub fn hurwitz_apply(b: &Braid, p: &Pencil) -> Result<Pencil, PencilError> {
    p.check_strands(b)?;
    let mut cycles = p.cycles.clone();
    for &l in b.letters().iter().rev() {
        let i = l.unsigned_abs() as usize - 1;
        let (ci, cj) = (cycles[i].clone(), cycles[i + 1].clone());
        if l > 0 {
            cycles[i + 1] = act(&dehn_twist_inverse(&cj)?, &ci)?;
            cycles[i] = cj;
        } else {
            cycles[i] = act(&dehn_twist(&ci)?, &cj)?;
            cycles[i + 1] = ci;
        }
    }
    Ok(Pencil { fiber: p.fiber, cycles })
}

/// A candidate element `(b, g)` of `Γ(φ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    pub braid: Braid,
    pub fiber: FiberElement,
}

impl Automorphism {
    pub fn new(braid: Braid, fiber: FiberElement) -> Self {
        Self { braid, fiber }
    }

    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism, PencilError> {
        Ok(Automorphism {
            braid: self.braid.mul(&other.braid)?,
            fiber: self.fiber.mul(&other.fiber)?,
        })
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism { braid: self.braid.inverse(), fiber: self.fiber.inverse() }
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "([{}], {})", self.braid, self.fiber)
    }
}

/// Which side of `θ̂ ∘ b_* = g_*(θ̂)` failed, and where.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaViolation {
    Monodromy { generator: usize, lhs: String, rhs: String },
    Label { generator: usize, lhs: String, rhs: String },
}

impl fmt::Display for GammaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaViolation::Monodromy { generator, lhs, rhs } => write!(
                f,
                "generator x{generator}: ζ(b_*(x{generator})) = {lhs} but g τ g⁻¹ = {rhs}"
            ),
            GammaViolation::Label { generator, lhs, rhs } => write!(
                f,
                "generator x{generator}: L(b_*(x{generator})) = {lhs} but g(c{generator}) = {rhs}"
            ),
        }
    }
}

/// The first generator on which `(b, g)` fails to preserve `θ̂`, if any.
pub fn gamma_violation(a: &Automorphism, p: &Pencil) -> Result<Option<GammaViolation>, PencilError> {
    p.check_strands(&a.braid)?;
    p.fiber.check_element(&a.fiber)?;
    let m = p.evaluator()?;
    let images = a.braid.generator_images();
    for (i, img) in images.iter().enumerate() {
        let gamma = img
            .as_generator_conjugate()
            .ok_or_else(|| WordError::NotAGeneratorConjugate(img.to_string()))?;
        let lhs = m.of(img)?;
        let rhs = a.fiber.conjugating(&m.twists[i])?;
        if !elem_eq(&lhs, &rhs)? {
            return Ok(Some(GammaViolation::Monodromy {
                generator: i + 1,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            }));
        }
        let lhs = m.label(&gamma)?;
        let rhs = act(&a.fiber, &p.cycles[i])?;
        if lhs != rhs {
            return Ok(Some(GammaViolation::Label {
                generator: i + 1,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            }));
        }
    }
    Ok(None)
}

/// Membership in `Γ(φ)`, checked on the generators `x_1, ..., x_r`.
pub fn in_gamma(a: &Automorphism, p: &Pencil) -> Result<bool, PencilError> {
    Ok(gamma_violation(a, p)?.is_none())
}

//! Decidable models of the fiber mapping class group and its vanishing cycles.
//!
//! Three models are provided:
//!
//! * `Torus`: `SL(2,ℤ)` acting on primitive classes of `H₁(T²)`. Faithful, and
//!   algebraic intersection equals geometric intersection.
//! * `Symplectic { genus }`: `Sp(2h,ℤ)` acting on primitive classes of
//!   `ℤ^{2h}`. A homological shadow: equality and disjointness are necessary
//!   conditions only.
//! * `Disc { punctures }`: the braid group acting on curves in the punctured
//!   disc, where punctures play the role of base points.
//!
//! Cycles are unoriented, so homology classes are taken up to sign.

mod cycle;
mod matrix;

pub use cycle::{CurveWitness, Cycle, DiscCurve, HomologyClass};
pub use matrix::{symplectic_pairing, IntMatrix};

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::wordcore::{braid_eq, Arc, Braid, WordError};

/// Longest carrier tried when looking for a witness of a parsed disc curve.
const WITNESS_SEARCH_DEPTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberError {
    #[error("fiber model mismatch")]
    ModelMismatch,
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("disc curve {0} is not a pushforward of a round curve")]
    UnsupportedCurve(String),
    #[error("operation needs the punctured-disc model")]
    NeedsDisc,
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiberModel {
    Torus,
    Symplectic { genus: usize },
    Disc { punctures: usize },
}

impl FiberModel {
    pub fn validate(&self) -> Result<(), FiberError> {
        match *self {
            FiberModel::Torus => Ok(()),
            FiberModel::Symplectic { genus } if genus >= 1 => Ok(()),
            FiberModel::Disc { punctures } if punctures >= 2 => Ok(()),
            m => Err(FiberError::Malformed(format!("bad fiber parameters {m:?}"))),
        }
    }

    pub fn check_cycle(&self, c: &Cycle) -> Result<(), FiberError> {
        let ok = match (self, c) {
            (FiberModel::Torus, Cycle::Torus(h)) => h.entries().len() == 2,
            (FiberModel::Symplectic { genus }, Cycle::Symplectic(h)) => h.entries().len() == 2 * genus,
            (FiberModel::Disc { punctures }, Cycle::Disc(d)) => d.punctures() == *punctures,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(FiberError::ModelMismatch)
        }
    }

    pub fn check_element(&self, g: &FiberElement) -> Result<(), FiberError> {
        let ok = match (self, g) {
            (FiberModel::Torus, FiberElement::Torus(m)) => m.dim() == 2 && m.is_symplectic(),
            (FiberModel::Symplectic { genus }, FiberElement::Symplectic(m)) => {
                m.dim() == 2 * genus && m.is_symplectic()
            }
            (FiberModel::Disc { punctures }, FiberElement::Disc(b)) => b.strands() == *punctures,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(FiberError::ModelMismatch)
        }
    }

    pub fn identity(&self) -> FiberElement {
        match *self {
            FiberModel::Torus => FiberElement::Torus(IntMatrix::identity(2)),
            FiberModel::Symplectic { genus } => FiberElement::Symplectic(IntMatrix::identity(2 * genus)),
            FiberModel::Disc { punctures } => FiberElement::Disc(Braid::identity(punctures)),
        }
    }
}

/// A mapping class of the fiber: an `SL(2,ℤ)` or `Sp(2h,ℤ)` matrix, or a braid
/// of the punctures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberElement {
    Torus(IntMatrix),
    Symplectic(IntMatrix),
    Disc(Braid),
}

impl FiberElement {
    pub fn mul(&self, other: &FiberElement) -> Result<FiberElement, FiberError> {
        use FiberElement::*;
        match (self, other) {
            (Torus(a), Torus(b)) => Ok(Torus(a.mul(b)?)),
            (Symplectic(a), Symplectic(b)) => Ok(Symplectic(a.mul(b)?)),
            (Disc(a), Disc(b)) => Ok(Disc(a.mul(b)?)),
            _ => Err(FiberError::ModelMismatch),
        }
    }

    pub fn inverse(&self) -> FiberElement {
        match self {
            FiberElement::Torus(m) => FiberElement::Torus(m.symplectic_inverse()),
            FiberElement::Symplectic(m) => FiberElement::Symplectic(m.symplectic_inverse()),
            FiberElement::Disc(b) => FiberElement::Disc(b.inverse()),
        }
    }

    /// `self · x · self⁻¹`.
    pub fn conjugating(&self, x: &FiberElement) -> Result<FiberElement, FiberError> {
        self.mul(x)?.mul(&self.inverse())
    }

    pub fn is_identity(&self) -> bool {
        match self {
            FiberElement::Torus(m) | FiberElement::Symplectic(m) => *m == IntMatrix::identity(m.dim()),
            FiberElement::Disc(b) => braid_eq(b, &Braid::identity(b.strands())).unwrap_or(false),
        }
    }
}

impl fmt::Display for FiberElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberElement::Torus(m) | FiberElement::Symplectic(m) => write!(f, "{m}"),
            FiberElement::Disc(b) => write!(f, "[{b}]"),
        }
    }
}

/// Equality of mapping classes; braids are compared through their Artin action.
pub fn elem_eq(a: &FiberElement, b: &FiberElement) -> Result<bool, FiberError> {
    match (a, b) {
        (FiberElement::Torus(x), FiberElement::Torus(y))
        | (FiberElement::Symplectic(x), FiberElement::Symplectic(y)) => Ok(x == y),
        (FiberElement::Disc(x), FiberElement::Disc(y)) => Ok(braid_eq(x, y)?),
        _ => Err(FiberError::ModelMismatch),
    }
}

/// The positive Dehn twist about `c`.
///
/// On homology this is the transvection `v ↦ v + ⟨v,c⟩c`. In the disc model
/// the curve must be a pushforward `b(C_{i..j})` of a round curve, and the
/// twist is `b · Δ²_{i..j} · b⁻¹`.
pub fn dehn_twist(c: &Cycle) -> Result<FiberElement, FiberError> {
    dehn_twist_pow(c, 1)
}

pub fn dehn_twist_inverse(c: &Cycle) -> Result<FiberElement, FiberError> {
    dehn_twist_pow(c, -1)
}

fn dehn_twist_pow(c: &Cycle, sign: i64) -> Result<FiberElement, FiberError> {
    match c {
        Cycle::Torus(h) => Ok(FiberElement::Torus(IntMatrix::transvection(h.entries(), sign))),
        Cycle::Symplectic(h) => Ok(FiberElement::Symplectic(IntMatrix::transvection(h.entries(), sign))),
        Cycle::Disc(d) => {
            let w = d
                .find_witness(WITNESS_SEARCH_DEPTH)
                .ok_or_else(|| FiberError::UnsupportedCurve(d.word().to_string()))?;
            let mut twist = Braid::full_twist(d.punctures(), w.lo, w.hi)?;
            if sign < 0 {
                twist = twist.inverse();
            }
            Ok(FiberElement::Disc(w.carrier.conjugating(&twist)?))
        }
    }
}

/// The image of `c` under `g`, re-canonicalised.
pub fn act(g: &FiberElement, c: &Cycle) -> Result<Cycle, FiberError> {
    match (g, c) {
        (FiberElement::Torus(m), Cycle::Torus(h)) => Ok(Cycle::Torus(HomologyClass::from_big(m.apply(h.entries())?)?)),
        (FiberElement::Symplectic(m), Cycle::Symplectic(h)) => {
            Ok(Cycle::Symplectic(HomologyClass::from_big(m.apply(h.entries())?)?))
        }
        (FiberElement::Disc(b), Cycle::Disc(d)) => Ok(Cycle::Disc(d.pushforward(b)?)),
        _ => Err(FiberError::ModelMismatch),
    }
}

pub fn cycle_eq(a: &Cycle, b: &Cycle) -> bool {
    a == b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exactness {
    Exact,
    LowerBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Intersection {
    pub value: BigUint,
    pub exactness: Exactness,
}

impl Intersection {
    fn exact(value: impl Into<BigUint>) -> Self {
        Self { value: value.into(), exactness: Exactness::Exact }
    }

    fn lower_bound(value: impl Into<BigUint>) -> Self {
        Self { value: value.into(), exactness: Exactness::LowerBound }
    }

    /// The value if it fits in a `u64`.
    pub fn small(&self) -> Option<u64> {
        self.value.to_u64()
    }
}

/// Geometric intersection number, or a certified lower bound for it.
///
/// Disc-model curves are only compared when both are round curves; any other
/// pair gets the trivial bound `(0, LowerBound)`.
pub fn intersection_number(a: &Cycle, b: &Cycle) -> Result<Intersection, FiberError> {
    match (a, b) {
        (Cycle::Torus(x), Cycle::Torus(y)) => {
            Ok(Intersection::exact(symplectic_pairing(x.entries(), y.entries())?.into_parts().1))
        }
        (Cycle::Symplectic(x), Cycle::Symplectic(y)) => Ok(Intersection::lower_bound(
            symplectic_pairing(x.entries(), y.entries())?.into_parts().1,
        )),
        (Cycle::Disc(x), Cycle::Disc(y)) => {
            if x.punctures() != y.punctures() {
                return Err(FiberError::ModelMismatch);
            }
            match (x.standard_range(), y.standard_range()) {
                (Some((l1, h1)), Some((l2, h2))) => {
                    let disjoint = h1 < l2 || h2 < l1;
                    let nested = (l1 <= l2 && h2 <= h1) || (l2 <= l1 && h1 <= h2);
                    if disjoint || nested {
                        Ok(Intersection::exact(0u32))
                    } else {
                        Ok(Intersection::lower_bound(2u32))
                    }
                }
                _ => Ok(Intersection::lower_bound(0u32)),
            }
        }
        _ => Err(FiberError::ModelMismatch),
    }
}

/// An embedded arc between two punctures of a disc fiber.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PunctureArc(pub Arc);

impl PunctureArc {
    pub fn new(base: usize, carrier: Braid) -> Result<Self, FiberError> {
        Ok(Self(Arc::new(base, carrier)?))
    }

    pub fn standard(punctures: usize, base: usize) -> Result<Self, FiberError> {
        Ok(Self(Arc::standard(punctures, base)?))
    }

    pub fn check_model(&self, model: &FiberModel) -> Result<(), FiberError> {
        match model {
            FiberModel::Disc { punctures } if *punctures == self.0.strands() => Ok(()),
            FiberModel::Disc { .. } => Err(FiberError::ModelMismatch),
            _ => Err(FiberError::NeedsDisc),
        }
    }
}

impl fmt::Display for PunctureArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The half-twist of the fiber exchanging the endpoints of `d`.
pub fn base_half_twist(d: &PunctureArc) -> FiberElement {
    FiberElement::Disc(d.0.half_twist())
}

/// Number of crossings between a disc curve and a puncture arc, when both can
/// be straightened simultaneously: the curve pulled back by the arc's carrier
/// must be round.
pub fn arc_crossings(c: &Cycle, d: &PunctureArc) -> Result<u64, FiberError> {
    let Cycle::Disc(curve) = c else {
        return Err(FiberError::NeedsDisc);
    };
    let back = curve.pushforward(&d.0.carrier.inverse())?;
    let (lo, hi) = back
        .standard_range()
        .ok_or_else(|| FiberError::UnsupportedCurve(curve.word().to_string()))?;
    let inside = |p: usize| lo <= p && p <= hi;
    Ok(u64::from(inside(d.0.base) != inside(d.0.base + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wordcore::FreeWord;

    fn torus(p: i64, q: i64) -> Cycle {
        Cycle::torus(p, q).unwrap()
    }

    fn mat(g: &FiberElement) -> Vec<Vec<i64>> {
        match g {
            FiberElement::Torus(m) | FiberElement::Symplectic(m) => {
                m.rows().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
            }
            _ => panic!("not a matrix"),
        }
    }

    #[test]
    fn torus_twist_matrix() {
        assert_eq!(mat(&dehn_twist(&torus(1, 0)).unwrap()), vec![vec![1, -1], vec![0, 1]]);
        assert_eq!(mat(&dehn_twist(&torus(0, 1)).unwrap()), vec![vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn twist_fixes_its_cycle_and_moves_others() {
        let a = torus(1, 0);
        let ta = dehn_twist(&a).unwrap();
        assert_eq!(act(&ta, &a).unwrap(), a);
        // (0,1) -> (0,1) + <(0,1),(1,0)>(1,0) = (-1,1)
        assert_eq!(act(&ta, &torus(0, 1)).unwrap(), torus(-1, 1));
        let tb = dehn_twist(&torus(0, 1)).unwrap();
        assert_eq!(act(&tb, &a).unwrap(), torus(1, 1));
    }

    #[test]
    fn identity_acts_trivially() {
        for c in [torus(2, 3), torus(1, -4)] {
            assert_eq!(act(&FiberModel::Torus.identity(), &c).unwrap(), c);
        }
    }

    #[test]
    fn intersections() {
        let i = intersection_number(&torus(1, 0), &torus(0, 1)).unwrap();
        assert_eq!((i.small(), i.exactness), (Some(1), Exactness::Exact));
        let i = intersection_number(&torus(1, 0), &torus(1, 0)).unwrap();
        assert_eq!((i.small(), i.exactness), (Some(0), Exactness::Exact));
        let s1 = Cycle::symplectic(vec![1, 0, 0, 0]).unwrap();
        let s2 = Cycle::symplectic(vec![0, 0, 1, 0]).unwrap();
        let i = intersection_number(&s1, &s2).unwrap();
        assert_eq!((i.small(), i.exactness), (Some(0), Exactness::LowerBound));
    }

    #[test]
    fn disc_intersections_by_range() {
        let c = |lo, hi| Cycle::disc_standard(5, lo, hi).unwrap();
        let exact0 = Intersection::exact(0u32);
        assert_eq!(intersection_number(&c(1, 2), &c(3, 4)).unwrap(), exact0);
        assert_eq!(intersection_number(&c(1, 4), &c(2, 3)).unwrap(), exact0);
        assert_eq!(intersection_number(&c(1, 3), &c(2, 4)).unwrap(), Intersection::lower_bound(2u32));
    }

    #[test]
    fn sign_is_forgotten() {
        assert!(cycle_eq(&torus(1, 0), &torus(-1, 0)));
        assert!(!cycle_eq(&torus(1, 0), &torus(0, 1)));
        let a = Cycle::disc(&FreeWord::parse(3, "x1 x2").unwrap()).unwrap();
        let b = Cycle::disc(&FreeWord::parse(3, "x2 x1").unwrap()).unwrap();
        assert!(cycle_eq(&a, &b));
    }

    #[test]
    fn base_half_twist_squares_to_curve_twist() {
        let d = PunctureArc::standard(3, 1).unwrap();
        let h = base_half_twist(&d);
        assert_eq!(h, FiberElement::Disc(Braid::parse(3, "s1").unwrap()));
        let sq = h.mul(&h).unwrap();
        let enclosing = Cycle::disc_standard(3, 1, 2).unwrap();
        assert!(elem_eq(&sq, &dehn_twist(&enclosing).unwrap()).unwrap());
        // and on curves: two half-twists act like one Dehn twist
        let c = Cycle::disc_standard(3, 2, 3).unwrap();
        let twice = act(&h, &act(&h, &c).unwrap()).unwrap();
        assert_eq!(twice, act(&dehn_twist(&enclosing).unwrap(), &c).unwrap());
    }

    #[test]
    fn crossings_with_standard_arc() {
        let d = PunctureArc::standard(3, 1).unwrap();
        assert_eq!(arc_crossings(&Cycle::disc_standard(3, 2, 3).unwrap(), &d).unwrap(), 1);
        assert_eq!(arc_crossings(&Cycle::disc_standard(3, 1, 2).unwrap(), &d).unwrap(), 0);
        assert_eq!(arc_crossings(&Cycle::disc_standard(4, 3, 4).unwrap(), &PunctureArc::standard(4, 1).unwrap()).unwrap(), 0);
    }

    #[test]
    fn model_mismatch() {
        let s = Cycle::symplectic(vec![1, 0, 0, 0]).unwrap();
        assert_eq!(act(&FiberModel::Torus.identity(), &s).unwrap_err(), FiberError::ModelMismatch);
        assert!(FiberModel::Torus.check_cycle(&s).is_err());
        assert!(FiberModel::Symplectic { genus: 0 }.validate().is_err());
        assert!(FiberModel::Disc { punctures: 1 }.validate().is_err());
    }
}

use std::fmt;

use super::braid::{artin_apply, Braid};
use super::free::{FreeWord, GeneratorConjugate};
use super::WordError;

/// An embedded arc between two of the `r` marked points, encoded as the image
/// of the straight segment joining points `base` and `base + 1` under `carrier`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arc {
    pub base: usize,
    pub carrier: Braid,
}

/// The supporting pair `(η′, η″)` of an arc, with `η″` the image of `η′` under
/// the half-twist along the arc.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupportingPair {
    pub first: GeneratorConjugate,
    pub second: GeneratorConjugate,
}

impl Arc {
    pub fn new(base: usize, carrier: Braid) -> Result<Self, WordError> {
        if base == 0 || base >= carrier.strands() {
            return Err(WordError::BraidLetterOutOfRange {
                letter: base as i32,
                strands: carrier.strands(),
            });
        }
        Ok(Self { base, carrier })
    }

    pub fn standard(strands: usize, base: usize) -> Result<Self, WordError> {
        Self::new(base, Braid::identity(strands))
    }

    pub fn strands(&self) -> usize {
        self.carrier.strands()
    }

    /// The image of this arc under `b`.
    pub fn pushforward(&self, b: &Braid) -> Result<Arc, WordError> {
        Ok(Arc { base: self.base, carrier: b.mul(&self.carrier)? })
    }

    /// The positive half-twist `carrier · σ_base · carrier⁻¹`.
    pub fn half_twist(&self) -> Braid {
        let s = Braid::from_letters(self.strands(), [self.base as i32])
            .expect("base checked on construction");
        self.carrier.mul_unchecked(&s).mul_unchecked(&self.carrier.inverse())
    }

    pub fn supporting_pair(&self) -> SupportingPair {
        let r = self.strands();
        let xb = FreeWord::from_reduced_unchecked(r, vec![self.base as i32]);
        let xb1 = FreeWord::from_reduced_unchecked(r, vec![self.base as i32 + 1]);
        let twisted = xb.mul_unchecked(&xb1).mul_unchecked(&xb.inverse());
        let images = self.carrier.generator_images();
        let first = xb.substitute(&images);
        let second = twisted.substitute(&images);
        SupportingPair {
            first: first
                .as_generator_conjugate()
                .expect("braid images of generators are generator conjugates"),
            second: second
                .as_generator_conjugate()
                .expect("braid images of generators are generator conjugates"),
        }
    }
}

impl SupportingPair {
    /// Representative of the simultaneous-conjugacy class: both words conjugated
    /// by the inverse of `η′`'s canonical conjugator, so `η′` becomes a generator.
    pub fn canonical(&self) -> SupportingPair {
        let g = self.first.conjugator.inverse();
        let second = self
            .second
            .to_word()
            .conjugate(&g)
            .expect("same rank")
            .as_generator_conjugate()
            .expect("conjugates stay in Π");
        SupportingPair {
            first: GeneratorConjugate {
                core: self.first.core,
                conjugator: FreeWord::identity(g.rank()),
            },
            second,
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Arc({}, [{}])", self.base, self.carrier)
    }
}

impl fmt::Display for SupportingPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// The half-twist of an arc.
pub fn half_twist(a: &Arc) -> Braid {
    a.half_twist()
}

pub fn supporting_pair(a: &Arc) -> SupportingPair {
    a.supporting_pair()
}

/// `artin_apply` restricted to a supporting-pair element.
pub fn apply_to_conjugate(b: &Braid, g: &GeneratorConjugate) -> Result<GeneratorConjugate, WordError> {
    let img = artin_apply(b, &g.to_word())?;
    img.as_generator_conjugate()
        .ok_or_else(|| WordError::NotAGeneratorConjugate(img.to_string()))
}

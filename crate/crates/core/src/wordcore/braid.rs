use std::fmt;

use super::free::{fmt_letters, parse_token, push_reduced, FreeWord};
use super::WordError;

/// A braid word on `strands` strings in the Artin generators `σ_1, ..., σ_{r-1}`.
///
/// Letters are signed: `i` is `σ_i`, `-i` is `σ_i^{-1}`. Adjacent inverse pairs
/// are cancelled on construction, but two braids are equal only when their
/// actions on the free group agree (see [`braid_eq`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Braid {
    strands: usize,
    letters: Vec<i32>,
}

impl Braid {
    pub fn identity(strands: usize) -> Self {
        Self { strands, letters: Vec::new() }
    }

    pub fn from_letters<I>(strands: usize, letters: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = i32>,
    {
        if strands == 0 {
            return Err(WordError::ZeroRank);
        }
        let mut out = Vec::new();
        for l in letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(WordError::BraidLetterOutOfRange { letter: l, strands });
            }
            push_reduced(&mut out, l);
        }
        Ok(Self { strands, letters: out })
    }

    pub fn generator(strands: usize, i: usize) -> Result<Self, WordError> {
        Self::from_letters(strands, [i as i32])
    }

    /// `(σ_lo σ_{lo+1} ... σ_{hi-1})^{hi-lo+1}`: the full twist of strands `lo..=hi`.
    pub fn full_twist(strands: usize, lo: usize, hi: usize) -> Result<Self, WordError> {
        if lo == 0 || hi < lo || hi > strands {
            return Err(WordError::BadRange { lo, hi, strands });
        }
        let row: Vec<i32> = (lo..hi).map(|i| i as i32).collect();
        let reps = hi - lo + 1;
        Self::from_letters(strands, row.iter().copied().cycle().take(row.len() * reps))
    }

    pub fn parse(strands: usize, s: &str) -> Result<Self, WordError> {
        let letters = s
            .split_whitespace()
            .map(|tok| parse_token(tok, 's', 'S'))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_letters(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn check(&self, other: &Braid) -> Result<(), WordError> {
        if self.strands != other.strands {
            return Err(WordError::StrandMismatch { left: self.strands, right: other.strands });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Braid) -> Result<Braid, WordError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Braid) -> Braid {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Braid { strands: self.strands, letters: out }
    }

    pub fn inverse(&self) -> Braid {
        Braid {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Braid {
        (0..e).fold(Braid::identity(self.strands), |acc, _| acc.mul_unchecked(self))
    }

    /// `self · b · self⁻¹`.
    pub fn conjugating(&self, b: &Braid) -> Result<Braid, WordError> {
        self.check(b)?;
        Ok(self.mul_unchecked(b).mul_unchecked(&self.inverse()))
    }

    /// Images of the generators `x_1..x_r` under the Artin automorphism of this braid.
    pub fn generator_images(&self) -> Vec<FreeWord> {
        let r = self.strands;
        let mut table: Vec<FreeWord> = (1..=r)
            .map(|j| FreeWord::from_reduced_unchecked(r, vec![j as i32]))
            .collect();
        // table currently represents the composite of the letters already read;
        // appending a letter precomposes with its elementary automorphism.
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize;
            let (xi, xj) = (table[i - 1].clone(), table[i].clone());
            if l > 0 {
                // x_i -> x_i x_{i+1} x_i^{-1}, x_{i+1} -> x_i
                table[i - 1] = xi.mul_unchecked(&xj).mul_unchecked(&xi.inverse());
                table[i] = xi;
            } else {
                // x_i -> x_{i+1}, x_{i+1} -> x_{i+1}^{-1} x_i x_{i+1}
                table[i] = xj.inverse().mul_unchecked(&xi).mul_unchecked(&xj);
                table[i - 1] = xj;
            }
        }
        table
    }
}

impl fmt::Display for Braid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_letters(f, &self.letters, 's', 'S')
    }
}

/// The Artin action of `b` on `u`, with `σ_i: x_i ↦ x_i x_{i+1} x_i⁻¹, x_{i+1} ↦ x_i`.
///
/// Composition is a left action: `artin_apply(b₁·b₂, u) = artin_apply(b₁, artin_apply(b₂, u))`.
pub fn artin_apply(b: &Braid, u: &FreeWord) -> Result<FreeWord, WordError> {
    if b.strands() != u.rank() {
        return Err(WordError::RankMismatch { left: b.strands(), right: u.rank() });
    }
    Ok(u.substitute(&b.generator_images()))
}

/// Braid equality through the faithful Artin representation.
pub fn braid_eq(b1: &Braid, b2: &Braid) -> Result<bool, WordError> {
    b1.check(b2)?;
    Ok(b1.generator_images() == b2.generator_images())
}

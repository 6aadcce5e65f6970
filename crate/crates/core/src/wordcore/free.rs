use std::cmp::Ordering;
use std::fmt;

use super::WordError;

/// A freely reduced word in the free group `F_r` on generators `x_1, ..., x_r`.
///
/// Letters are stored as signed generator indices: `i` is `x_i`, `-i` is `x_i^{-1}`.
/// The free group is the fundamental group of the disc minus `r` points, with
/// `x_i` the geometric generator encircling the `i`-th point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<i32>,
}

impl FreeWord {
    pub fn identity(rank: usize) -> Self {
        Self { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, index: usize) -> Result<Self, WordError> {
        Self::from_letters(rank, [index as i32])
    }

    /// Builds a word from signed letters, freely reducing it.
    pub fn from_letters<I>(rank: usize, letters: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = i32>,
    {
        if rank == 0 {
            return Err(WordError::ZeroRank);
        }
        let mut out = Vec::new();
        for l in letters {
            if l == 0 || l.unsigned_abs() as usize > rank {
                return Err(WordError::LetterOutOfRange { letter: l, rank });
            }
            push_reduced(&mut out, l);
        }
        Ok(Self { rank, letters: out })
    }

    /// Caller guarantees every letter is in range.
    pub(crate) fn from_reduced_unchecked(rank: usize, letters: Vec<i32>) -> Self {
        debug_assert!(is_freely_reduced(&letters));
        Self { rank, letters }
    }

    /// `x_lo x_{lo+1} ... x_hi`; the boundary word of the disc around points `lo..=hi`.
    pub fn consecutive_product(rank: usize, lo: usize, hi: usize) -> Result<Self, WordError> {
        Self::from_letters(rank, (lo..=hi).map(|i| i as i32))
    }

    pub fn rank(&self) -> usize {
        self.rank
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

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    fn check_rank(&self, other: &FreeWord) -> Result<(), WordError> {
        if self.rank != other.rank {
            return Err(WordError::RankMismatch { left: self.rank, right: other.rank });
        }
        Ok(())
    }

    pub fn mul(&self, other: &FreeWord) -> Result<FreeWord, WordError> {
        self.check_rank(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        FreeWord { rank: self.rank, letters: out }
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate(&self, g: &FreeWord) -> Result<FreeWord, WordError> {
        self.check_rank(g)?;
        Ok(g.mul_unchecked(self).mul_unchecked(&g.inverse()))
    }

    /// Splits the word as `prefix · core · prefix⁻¹` with `core` cyclically reduced.
    pub fn cyclic_decomposition(&self) -> (FreeWord, FreeWord) {
        let l = &self.letters;
        let mut k = 0;
        while k < l.len() / 2 && l[k] == -l[l.len() - 1 - k] {
            k += 1;
        }
        let prefix = FreeWord { rank: self.rank, letters: l[..k].to_vec() };
        let core = FreeWord { rank: self.rank, letters: l[k..l.len() - k].to_vec() };
        (prefix, core)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(a), Some(b)) => self.letters.len() == 1 || *a != -*b,
            _ => true,
        }
    }

    /// Returns `(i, w)` with `self = w x_i w⁻¹` when the word lies in the set of
    /// conjugates of geometric generators. `w` is the prefix peeled by cyclic reduction.
    pub fn as_generator_conjugate(&self) -> Option<GeneratorConjugate> {
        let (prefix, core) = self.cyclic_decomposition();
        match core.letters.as_slice() {
            [c] if *c > 0 => Some(GeneratorConjugate {
                core: *c as usize,
                conjugator: prefix,
            }),
            _ => None,
        }
    }

    /// Applies the endomorphism sending `x_j` to `images[j-1]`.
    pub fn substitute(&self, images: &[FreeWord]) -> FreeWord {
        let rank = images.first().map_or(self.rank, |w| w.rank);
        let mut out = Vec::new();
        for &l in &self.letters {
            let img = &images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                for &m in &img.letters {
                    push_reduced(&mut out, m);
                }
            } else {
                for &m in img.letters.iter().rev() {
                    push_reduced(&mut out, -m);
                }
            }
        }
        FreeWord { rank, letters: out }
    }

    /// Parses space-separated `x<i>` / `X<i>` tokens.
    pub fn parse(rank: usize, s: &str) -> Result<FreeWord, WordError> {
        let letters = s
            .split_whitespace()
            .map(|tok| parse_token(tok, 'x', 'X'))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_letters(rank, letters)
    }
}

pub(crate) fn parse_token(tok: &str, pos: char, neg: char) -> Result<i32, WordError> {
    let bad = || WordError::BadToken(tok.to_string());
    let mut chars = tok.chars();
    let sign = match chars.next() {
        Some(c) if c == pos => 1,
        Some(c) if c == neg => -1,
        _ => return Err(bad()),
    };
    let digits = chars.as_str();
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let idx: i32 = digits.parse().map_err(|_| bad())?;
    if idx == 0 {
        return Err(bad());
    }
    Ok(sign * idx)
}

pub(crate) fn push_reduced(out: &mut Vec<i32>, l: i32) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

pub(crate) fn is_freely_reduced(letters: &[i32]) -> bool {
    letters.windows(2).all(|w| w[0] != -w[1])
}

pub(crate) fn fmt_letters(f: &mut fmt::Formatter<'_>, letters: &[i32], pos: char, neg: char) -> fmt::Result {
    for (k, l) in letters.iter().enumerate() {
        if k > 0 {
            f.write_str(" ")?;
        }
        let c = if *l > 0 { pos } else { neg };
        write!(f, "{}{}", c, l.unsigned_abs())?;
    }
    Ok(())
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_letters(f, &self.letters, 'x', 'X')
    }
}

/// Order used for canonical forms: by generator index, positive letter first.
pub(crate) fn letter_key(l: i32) -> (u32, bool) {
    (l.unsigned_abs(), l < 0)
}

pub(crate) fn cmp_letters(a: &[i32], b: &[i32]) -> Ordering {
    a.iter().map(|&l| letter_key(l)).cmp(b.iter().map(|&l| letter_key(l)))
}

/// An element of the set Π of conjugates of geometric generators, `w x_i w⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorConjugate {
    pub core: usize,
    pub conjugator: FreeWord,
}

impl GeneratorConjugate {
    pub fn generator(rank: usize, core: usize) -> Result<Self, WordError> {
        if core == 0 || core > rank {
            return Err(WordError::LetterOutOfRange { letter: core as i32, rank });
        }
        Ok(Self { core, conjugator: FreeWord::identity(rank) })
    }

    pub fn to_word(&self) -> FreeWord {
        let x = FreeWord::from_reduced_unchecked(self.conjugator.rank, vec![self.core as i32]);
        self.conjugator
            .mul_unchecked(&x)
            .mul_unchecked(&self.conjugator.inverse())
    }
}

impl fmt::Display for GeneratorConjugate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_word())
    }
}

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::wordcore::{artin_apply, cmp_letters, Braid, FreeWord};

use super::FiberError;

/// A primitive integer homology class taken up to sign.
///
/// Stored with its first nonzero entry positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomologyClass(Vec<BigInt>);

impl HomologyClass {
    pub fn new(v: Vec<i64>) -> Result<Self, FiberError> {
        Self::from_big(v.into_iter().map(BigInt::from).collect())
    }

    pub fn from_big(v: Vec<BigInt>) -> Result<Self, FiberError> {
        if v.is_empty() || v.len() % 2 != 0 {
            return Err(FiberError::Malformed(format!("class of odd or zero length {}", v.len())));
        }
        let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            return Err(FiberError::InvalidCycle("zero class".into()));
        }
        if !g.is_one() {
            let shown: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            return Err(FiberError::InvalidCycle(format!("class [{}] is not primitive", shown.join(", "))));
        }
        Ok(Self(normalize_sign(v)))
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }
}

fn normalize_sign(mut v: Vec<BigInt>) -> Vec<BigInt> {
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        v.iter_mut().for_each(|x| *x = -&*x);
    }
    v
}

/// How a disc curve was produced: the image under `carrier` of the round curve
/// enclosing punctures `lo..=hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveWitness {
    pub carrier: Braid,
    pub lo: usize,
    pub hi: usize,
}

/// A closed curve in the punctured disc, as a free homotopy class of unoriented
/// loops: a cyclic word up to rotation and inversion.
///
/// Equality, ordering and hashing only look at the canonical word; the witness
/// is bookkeeping that lets the Dehn twist be written down as a braid.
#[derive(Debug, Clone)]
pub struct DiscCurve {
    word: FreeWord,
    witness: Option<CurveWitness>,
}

impl DiscCurve {
    pub fn new(word: &FreeWord) -> Result<Self, FiberError> {
        let word = canonical_cyclic(word);
        if word.is_empty() {
            return Err(FiberError::InvalidCycle("trivial loop".into()));
        }
        let witness = standard_range(&word).map(|(lo, hi)| CurveWitness {
            carrier: Braid::identity(word.rank()),
            lo,
            hi,
        });
        Ok(Self { word, witness })
    }

    /// The round curve around punctures `lo..=hi`.
    pub fn standard(punctures: usize, lo: usize, hi: usize) -> Result<Self, FiberError> {
        if lo == 0 || hi < lo || hi > punctures {
            return Err(FiberError::InvalidCycle(format!("range {lo}..={hi} for {punctures} punctures")));
        }
        let w = FreeWord::consecutive_product(punctures, lo, hi)?;
        Ok(Self {
            word: canonical_cyclic(&w),
            witness: Some(CurveWitness { carrier: Braid::identity(punctures), lo, hi }),
        })
    }

    pub fn word(&self) -> &FreeWord {
        &self.word
    }

    pub fn punctures(&self) -> usize {
        self.word.rank()
    }

    pub fn witness(&self) -> Option<&CurveWitness> {
        self.witness.as_ref()
    }

    /// Range of the round curve this equals, if any.
    pub fn standard_range(&self) -> Option<(usize, usize)> {
        standard_range(&self.word)
    }

    pub fn pushforward(&self, b: &Braid) -> Result<Self, FiberError> {
        let img = artin_apply(b, &self.word)?;
        let word = canonical_cyclic(&img);
        let witness = self.witness.as_ref().map(|w| CurveWitness {
            carrier: b.mul(&w.carrier).expect("strand count checked by artin_apply"),
            lo: w.lo,
            hi: w.hi,
        });
        Ok(Self { word, witness })
    }

    /// A witness for this curve: the stored one, or a bounded search over
    /// carriers of length at most `max_len`.
    pub fn find_witness(&self, max_len: usize) -> Option<CurveWitness> {
        if let Some(w) = &self.witness {
            return Some(w.clone());
        }
        let n = self.punctures();
        let gens: Vec<i32> = (1..n as i32).flat_map(|i| [i, -i]).collect();
        let mut layer = vec![Braid::identity(n)];
        for _ in 0..=max_len {
            for b in &layer {
                let back = self.pushforward(&b.inverse()).ok()?;
                if let Some((lo, hi)) = back.standard_range() {
                    return Some(CurveWitness { carrier: b.clone(), lo, hi });
                }
            }
            layer = layer
                .iter()
                .flat_map(|b| {
                    gens.iter().filter_map(move |&g| {
                        if b.letters().last() == Some(&-g) {
                            None
                        } else {
                            Braid::from_letters(n, b.letters().iter().copied().chain([g])).ok()
                        }
                    })
                })
                .collect();
        }
        None
    }
}

fn standard_range(word: &FreeWord) -> Option<(usize, usize)> {
    let l = word.letters();
    let lo = *l.first()?;
    if lo <= 0 {
        return None;
    }
    let consecutive = l.iter().enumerate().all(|(k, &x)| x == lo + k as i32);
    consecutive.then(|| (lo as usize, lo as usize + l.len() - 1))
}

/// Least rotation of the cyclically reduced word or of its inverse.
pub(crate) fn canonical_cyclic(w: &FreeWord) -> FreeWord {
    let (_, core) = w.cyclic_decomposition();
    let inv = core.inverse();
    let n = core.len();
    if n == 0 {
        return core;
    }
    let mut best: Option<Vec<i32>> = None;
    for src in [core.letters(), inv.letters()] {
        for k in 0..n {
            let rot: Vec<i32> = src[k..].iter().chain(&src[..k]).copied().collect();
            if best.as_ref().is_none_or(|b| cmp_letters(&rot, b) == Ordering::Less) {
                best = Some(rot);
            }
        }
    }
    FreeWord::from_reduced_unchecked(w.rank(), best.expect("nonempty"))
}

impl PartialEq for DiscCurve {
    fn eq(&self, other: &Self) -> bool {
        self.word == other.word
    }
}

impl Eq for DiscCurve {}

impl Hash for DiscCurve {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.word.hash(state)
    }
}

impl PartialOrd for DiscCurve {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DiscCurve {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| cmp_letters(self.word.letters(), other.word.letters()))
    }
}

/// A vanishing-cycle class in one of the three fiber models.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cycle {
    Torus(HomologyClass),
    Symplectic(HomologyClass),
    Disc(DiscCurve),
}

impl Cycle {
    pub fn torus(p: i64, q: i64) -> Result<Self, FiberError> {
        Ok(Cycle::Torus(HomologyClass::new(vec![p, q])?))
    }

    pub fn symplectic(v: Vec<i64>) -> Result<Self, FiberError> {
        Ok(Cycle::Symplectic(HomologyClass::new(v)?))
    }

    pub fn disc(word: &FreeWord) -> Result<Self, FiberError> {
        Ok(Cycle::Disc(DiscCurve::new(word)?))
    }

    pub fn disc_standard(punctures: usize, lo: usize, hi: usize) -> Result<Self, FiberError> {
        Ok(Cycle::Disc(DiscCurve::standard(punctures, lo, hi)?))
    }

    pub fn homology(&self) -> Option<&[BigInt]> {
        match self {
            Cycle::Torus(h) | Cycle::Symplectic(h) => Some(h.entries()),
            Cycle::Disc(_) => None,
        }
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cycle::Torus(h) | Cycle::Symplectic(h) => {
                write!(f, "[")?;
                for (i, x) in h.entries().iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            Cycle::Disc(c) => write!(f, "{}", c.word),
        }
    }
}

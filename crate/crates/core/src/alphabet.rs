//! Level-N alphabet: letters indexed by {0} ∪ μ_N, words, convergence
//! classification, and the dihedral action on marked points.
//!
//! Roots of unity are purely symbolic here: a letter `e_{ζ^k}` stores only
//! the exponent k mod N. The point at infinity is never a letter; it is an
//! eliminated generator, `e_∞ = −(e_0 + Σ_ζ e_ζ)`, expanded eagerly by the
//! constructions that consume [`ExtendedPoint`].

use std::fmt;

use crate::error::Error;

/// Number of roots of unity N ≥ 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Level(u32);

impl Level {
    pub fn new(n: u32) -> Result<Level, Error> {
        if n == 0 {
            return Err(Error::InvalidArgument("level N must be >= 1".into()));
        }
        Ok(Level(n))
    }

    pub fn n(&self) -> u32 {
        self.0
    }

    /// Alphabet size, counting e_0 and the N letters e_ζ.
    pub fn num_letters(&self) -> u32 {
        self.0 + 1
    }

    /// All letters in the fixed total order `Zero < Root(0) < … < Root(N−1)`.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        std::iter::once(Letter::Zero).chain((0..self.0).map(Letter::Root))
    }

    pub fn reduce(&self, k: i64) -> u32 {
        k.rem_euclid(self.0 as i64) as u32
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A generator symbol: e_0, or e_{ζ^k} with the exponent reduced mod N.
///
/// The derived ordering (`Zero < Root(0) < Root(1) < …`) is the total order
/// all Lyndon-word machinery relies on; at N=1 it reduces to the classical
/// e_0 < e_1 convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Zero,
    Root(u32),
}

impl Letter {
    /// Packed digit in base N+1: Zero ↦ 0, Root(k) ↦ k+1.
    pub fn digit(&self) -> u64 {
        match self {
            Letter::Zero => 0,
            Letter::Root(k) => u64::from(*k) + 1,
        }
    }

    pub fn from_digit(d: u64, level: Level) -> Result<Letter, Error> {
        match d {
            0 => Ok(Letter::Zero),
            k if k <= u64::from(level.n()) => Ok(Letter::Root((k - 1) as u32)),
            _ => Err(Error::InvalidArgument(format!(
                "digit {d} out of range for level {level}"
            ))),
        }
    }

    pub fn valid_for(&self, level: Level) -> bool {
        match self {
            Letter::Zero => true,
            Letter::Root(k) => *k < level.n(),
        }
    }
}

/// A marked point of P¹ ∖ ({0,∞} ∪ μ_N); input domain of the dihedral action.
///
/// `Infinity` never appears inside a [`Word`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedPoint {
    Zero,
    Infinity,
    Root(u32),
}

/// An element (flip, rot) of Z/2 ⋉ μ_N acting on the marked points:
/// `rot` is the μ_N part u ↦ ζ^rot·u, `flip` the generator u ↦ u⁻¹.
///
/// A point is moved by applying the flip first, then the rotation, and the
/// product `g₂·g₁` acts as g₁ followed by g₂, so that
/// (f₁,r₁)·(f₂,r₂) = (f₁ xor f₂, r₂ + (−1)^{f₂} r₁) holds with the product
/// read right-to-left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DihedralElement {
    pub flip: bool,
    pub rot: u32,
}

impl DihedralElement {
    pub fn identity() -> DihedralElement {
        DihedralElement { flip: false, rot: 0 }
    }

    pub fn rotation(r: i64, level: Level) -> DihedralElement {
        DihedralElement { flip: false, rot: level.reduce(r) }
    }

    pub fn flip() -> DihedralElement {
        DihedralElement { flip: true, rot: 0 }
    }

    /// Group law: `self.compose(first, level)` acts by `first`, then `self`.
    pub fn compose(&self, first: &DihedralElement, level: Level) -> DihedralElement {
        let r1 = i64::from(first.rot);
        let r2 = i64::from(self.rot);
        let rot = if self.flip { level.reduce(r2 - r1) } else { level.reduce(r2 + r1) };
        DihedralElement { flip: self.flip ^ first.flip, rot }
    }
}

/// Apply a dihedral element to a marked point.
///
/// The rotation fixes 0 and ∞ and adds to root exponents; the flip swaps
/// 0 ↔ ∞ and negates root exponents (1/ζ = ζ⁻¹).
pub fn permute_point(g: &DihedralElement, p: ExtendedPoint, level: Level) -> ExtendedPoint {
    let flipped = if g.flip {
        match p {
            ExtendedPoint::Zero => ExtendedPoint::Infinity,
            ExtendedPoint::Infinity => ExtendedPoint::Zero,
            ExtendedPoint::Root(k) => ExtendedPoint::Root(level.reduce(-i64::from(k))),
        }
    } else {
        p
    };
    match flipped {
        ExtendedPoint::Root(k) => ExtendedPoint::Root(level.reduce(i64::from(k) + i64::from(g.rot))),
        fixed => fixed,
    }
}

/// A finite sequence of letters; the weight is the length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn valid_for(&self, level: Level) -> bool {
        self.0.iter().all(|l| l.valid_for(level))
    }
}

/// Convergence class of the iterated integral attached to a word: the
/// integral converges iff the word neither starts with e_1 nor ends with e_0.
pub fn is_convergent(w: &Word) -> Result<bool, Error> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let first = w.0[0];
    let last = w.0[w.0.len() - 1];
    Ok(first != Letter::Root(0) && last != Letter::Zero)
}

/// Parse a dotted word: tokens are `0` (e_0), `w^k` (e_{ζ^k}), or `1`
/// (alias for `w^0`); exponents are reduced mod N.
pub fn parse_word(s: &str, level: Level) -> Result<Word, Error> {
    let mut letters = Vec::new();
    for token in s.split('.') {
        match token {
            "" => {
                return Err(Error::ParseWord(format!("empty token in {s:?}")));
            }
            "0" => letters.push(Letter::Zero),
            "1" => letters.push(Letter::Root(0)),
            t => {
                let exp = t
                    .strip_prefix("w^")
                    .ok_or_else(|| Error::ParseWord(format!("unknown token {t:?}")))?;
                let k: i64 = exp
                    .parse()
                    .map_err(|_| Error::ParseWord(format!("exponent not an integer in {t:?}")))?;
                letters.push(Letter::Root(level.reduce(k)));
            }
        }
    }
    Ok(Word(letters))
}

/// Canonical text form: `0` for e_0 and `w^k` for e_{ζ^k}, dot-joined.
/// The empty word formats to the empty string; the series file layer writes
/// it as `1` instead (see [`crate::textio`]).
pub fn format_word(w: &Word) -> String {
    w.0.iter()
        .map(|l| match l {
            Letter::Zero => "0".to_string(),
            Letter::Root(k) => format!("w^{k}"),
        })
        .collect::<Vec<_>>()
        .join(".")
}

//! The graded free Lie algebra on the level-N alphabet: Witt dimensions,
//! Lyndon words, standard bracketings, Lyndon-basis coordinates, and the
//! primitivity test they induce.
//!
//! The basis is the right Lyndon factorization with standard bracketing:
//! `expand(l)` has coefficient exactly 1 on `l` and support only on
//! lexicographically larger words of the same weight, so coordinates are
//! read off by a triangular solve, and the solve doubles as the membership
//! test for the free Lie algebra.

use std::collections::BTreeMap;

use rand::Rng;
use rug::Rational;

use crate::alphabet::{format_word, Letter, Level, Word};
use crate::error::Error;
use crate::scalar::Ring;
use crate::series::{Series, WordKey};

/// Dimension of the degree-n part of the free Lie algebra on k letters,
/// by the necklace formula (1/n)·Σ_{d|n} μ(d)·k^{n/d}.
pub fn witt_dim(num_letters: u64, n: u64) -> u64 {
    assert!(num_letters >= 1 && n >= 1);
    let mut sum: i128 = 0;
    for d in 1..=n {
        if n.is_multiple_of(d) {
            let mu = moebius(d);
            if mu != 0 {
                sum += i128::from(mu) * (num_letters as i128).pow((n / d) as u32);
            }
        }
    }
    debug_assert!(sum >= 0 && sum % n as i128 == 0);
    (sum / n as i128) as u64
}

fn moebius(mut d: u64) -> i8 {
    let mut primes = 0;
    let mut p = 2;
    while p * p <= d {
        if d.is_multiple_of(p) {
            d /= p;
            if d.is_multiple_of(p) {
                return 0;
            }
            primes += 1;
        }
        p += 1;
    }
    if d > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A word is Lyndon iff it is strictly smaller than every proper suffix.
pub fn is_lyndon(w: &Word) -> bool {
    let letters = w.letters();
    if letters.is_empty() {
        return false;
    }
    for start in 1..letters.len() {
        if &letters[start..] <= letters {
            return false;
        }
    }
    true
}

/// All Lyndon words of length n over the level alphabet, in lexicographic
/// order, generated by Duval's algorithm. Their count is
/// `witt_dim(N+1, n)`.
pub fn lyndon_words(level: Level, n: usize) -> Vec<Word> {
    assert!(n >= 1);
    let k = level.num_letters() as u64;
    let mut out = Vec::new();
    let mut w: Vec<u64> = vec![0];
    loop {
        if w.len() == n {
            let letters = w
                .iter()
                .map(|&d| Letter::from_digit(d, level).expect("digit in range"))
                .collect();
            out.push(Word(letters));
        }
        let period = w.len();
        while w.len() < n {
            let repeat = w[w.len() - period];
            w.push(repeat);
        }
        while w.last() == Some(&(k - 1)) {
            w.pop();
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
    }
    out
}

/// Standard bracketing of a Lyndon word: a single letter maps to itself;
/// otherwise l = uv with v the longest proper Lyndon suffix, and the value
/// is [expand(u), expand(v)] in the concatenation algebra.
pub fn lyndon_expand(l: &Word, level: Level, trunc: usize) -> Result<Series, Error> {
    if !is_lyndon(l) {
        return Err(Error::NotLyndon(format_word(l)));
    }
    if l.weight() > trunc {
        return Err(Error::WeightOverflow { weight: l.weight(), trunc });
    }
    expand_rec(l.letters(), level, trunc)
}

fn expand_rec(letters: &[Letter], level: Level, trunc: usize) -> Result<Series, Error> {
    if letters.len() == 1 {
        return Series::letter(level, trunc, Ring::ExactRational, letters[0]);
    }
    let split = longest_lyndon_proper_suffix(letters);
    let u = expand_rec(&letters[..split], level, trunc)?;
    let v = expand_rec(&letters[split..], level, trunc)?;
    bracket_series(&u, &v)
}

fn longest_lyndon_proper_suffix(letters: &[Letter]) -> usize {
    for start in 1..letters.len() {
        if is_lyndon(&Word(letters[start..].to_vec())) {
            return start;
        }
    }
    unreachable!("every proper suffix of length 1 is Lyndon")
}

/// Ambient bracket ab − ba under concatenation.
pub fn bracket_series(a: &Series, b: &Series) -> Result<Series, Error> {
    a.concat_mul(b)?.sub(&b.concat_mul(a)?)
}

/// Coordinates of a primitive series in the Lyndon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LyndonCoords {
    pub level: Level,
    pub trunc: usize,
    pub coords: BTreeMap<WordKey, Rational>,
}

impl LyndonCoords {
    pub fn terms(&self) -> impl Iterator<Item = (Word, &Rational)> {
        self.coords.iter().map(|(k, c)| (k.unpack(self.level), c))
    }
}

/// Triangular elimination: returns the coordinates together with whatever
/// part of the series could not be expressed — the residual is zero exactly
/// when the input is primitive.
pub fn lyndon_decompose(x: &Series) -> Result<(LyndonCoords, Series), Error> {
    if !x.ring().is_exact() {
        return Err(Error::RingMismatch("Lyndon coordinates need the exact ring".into()));
    }
    let level = x.level();
    let trunc = x.trunc();
    let mut coords = BTreeMap::new();
    let mut residual = Series::zero(level, trunc, x.ring());
    if !x.constant_term().is_zero() {
        residual = residual.add(&Series::monomial(
            level,
            trunc,
            x.ring(),
            &Word::empty(),
            x.constant_term(),
        )?)?;
    }
    for weight in 1..=trunc {
        let mut part = x.weight_part(weight);
        loop {
            let Some((key, coeff)) = part.iter().next().map(|(k, c)| (*k, c.clone())) else {
                break;
            };
            let w = key.unpack(level);
            if !is_lyndon(&w) {
                // cannot be canceled by any later basis element: not primitive
                residual = residual.add(&part)?;
                break;
            }
            let q = coeff.as_rational().expect("exact ring").clone();
            coords.insert(key, q.clone());
            let expanded = lyndon_expand(&w, level, trunc)?.scale_rational(&q);
            part = part.sub(&expanded)?;
        }
    }
    Ok((LyndonCoords { level, trunc, coords }, residual))
}

/// Lyndon-basis coordinates of a primitive series; errors with the leading
/// residual word when the triangular solve leaves a remainder.
pub fn to_lyndon_coords(x: &Series) -> Result<LyndonCoords, Error> {
    let (coords, residual) = lyndon_decompose(x)?;
    if let Some((key, _)) = residual.iter().next() {
        return Err(Error::NotPrimitive {
            weight: key.len as usize,
            word: format_word(&key.unpack(x.level())),
        });
    }
    Ok(coords)
}

pub fn from_coords(coords: &LyndonCoords) -> Result<Series, Error> {
    let mut out = Series::zero(coords.level, coords.trunc, Ring::ExactRational);
    for (key, q) in &coords.coords {
        let w = key.unpack(coords.level);
        out = out.add(&lyndon_expand(&w, coords.level, coords.trunc)?.scale_rational(q))?;
    }
    Ok(out)
}

/// Membership test for the (completed, truncated) free Lie algebra.
pub fn is_primitive(x: &Series) -> Result<bool, Error> {
    let (_, residual) = lyndon_decompose(x)?;
    Ok(residual.is_zero())
}

/// A primitive series in the exact ring; the invariant is checked on entry.
#[derive(Clone, Debug, PartialEq)]
pub struct LieElement {
    body: Series,
}

impl LieElement {
    pub fn new(body: Series) -> Result<LieElement, Error> {
        let (_, residual) = lyndon_decompose(&body)?;
        if let Some((key, _)) = residual.iter().next() {
            return Err(Error::NotPrimitive {
                weight: key.len as usize,
                word: format_word(&key.unpack(body.level())),
            });
        }
        Ok(LieElement { body })
    }

    /// Wrap a series known to be primitive (e.g. a bracket of primitives).
    pub fn from_primitive_unchecked(body: Series) -> LieElement {
        debug_assert!(is_primitive(&body).unwrap_or(false));
        LieElement { body }
    }

    pub fn body(&self) -> &Series {
        &self.body
    }

    pub fn into_series(self) -> Series {
        self.body
    }

    pub fn generator(level: Level, trunc: usize, l: Letter) -> Result<LieElement, Error> {
        Ok(LieElement { body: Series::letter(level, trunc, Ring::ExactRational, l)? })
    }

    pub fn bracket(&self, other: &LieElement) -> Result<LieElement, Error> {
        if self.body.level() != other.body.level() {
            return Err(Error::LevelMismatch(self.body.level().n(), other.body.level().n()));
        }
        Ok(LieElement { body: bracket_series(&self.body, &other.body)? })
    }

    pub fn coords(&self) -> Result<LyndonCoords, Error> {
        to_lyndon_coords(&self.body)
    }
}

/// Random rational combination of Lyndon-basis elements of weight ≤ max_weight;
/// used by the seeded property suites.
pub fn random_lie_series<R: Rng>(
    level: Level,
    trunc: usize,
    max_weight: usize,
    rng: &mut R,
) -> Series {
    let mut out = Series::zero(level, trunc, Ring::ExactRational);
    for w in 1..=max_weight.min(trunc) {
        let words = lyndon_words(level, w);
        for _ in 0..2 {
            let l = &words[rng.gen_range(0..words.len())];
            let num = rng.gen_range(-4i64..=4);
            if num == 0 {
                continue;
            }
            let den = rng.gen_range(1i64..=3);
            let term = lyndon_expand(l, level, trunc)
                .expect("lyndon word expands")
                .scale_rational(&Rational::from((num, den)));
            out = out.add(&term).expect("same ring");
        }
    }
    out
}

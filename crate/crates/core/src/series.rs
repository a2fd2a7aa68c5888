//! Truncated noncommutative formal series over the level-N alphabet.
//!
//! A [`Series`] is a sparse map from words of weight ≤ W to coefficients in
//! a runtime-chosen [`Ring`]. Both the ring and the truncation are data, not
//! type parameters: every operation silently drops terms of weight above the
//! smaller truncation of its operands, which realizes the pro-finite limit
//! the series model.
//!
//! Words are keyed by `(length, packed base-(N+1) integer)` with the first
//! letter most significant, so the natural key order is weight first and
//! lexicographic within a weight.

use std::collections::{BTreeMap, HashMap};

use rug::{Float, Rational};

use crate::alphabet::{Letter, Level, Word};
use crate::error::Error;
use crate::scalar::{Ring, Scalar};

/// Packed word key: `code` is the base-(N+1) encoding of the letters with
/// the first letter most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordKey {
    pub len: u32,
    pub code: u64,
}

impl WordKey {
    pub const EMPTY: WordKey = WordKey { len: 0, code: 0 };

    pub fn pack(w: &Word, level: Level) -> Result<WordKey, Error> {
        let base = u64::from(level.num_letters());
        let mut code: u64 = 0;
        for l in w.letters() {
            if !l.valid_for(level) {
                return Err(Error::InvalidArgument(format!(
                    "letter {l:?} invalid for level {level}"
                )));
            }
            code = code
                .checked_mul(base)
                .and_then(|c| c.checked_add(l.digit()))
                .ok_or_else(|| Error::InvalidArgument("word too long to pack".into()))?;
        }
        Ok(WordKey { len: w.weight() as u32, code })
    }

    pub fn unpack(&self, level: Level) -> Word {
        let base = u64::from(level.num_letters());
        let mut letters = vec![Letter::Zero; self.len as usize];
        let mut code = self.code;
        for slot in letters.iter_mut().rev() {
            *slot = Letter::from_digit(code % base, level).expect("digit in range");
            code /= base;
        }
        Word(letters)
    }

    /// Key of the concatenation self·other.
    pub fn concat(&self, other: &WordKey, base: u64) -> WordKey {
        WordKey {
            len: self.len + other.len,
            code: self.code * base.pow(other.len) + other.code,
        }
    }

    pub fn reversed(&self, base: u64) -> WordKey {
        let mut code = self.code;
        let mut rev: u64 = 0;
        for _ in 0..self.len {
            rev = rev * base + code % base;
            code /= base;
        }
        WordKey { len: self.len, code: rev }
    }

    pub fn first_digit(&self, base: u64) -> Option<u64> {
        if self.len == 0 {
            None
        } else {
            Some(self.code / base.pow(self.len - 1))
        }
    }

    pub fn last_digit(&self, base: u64) -> Option<u64> {
        if self.len == 0 {
            None
        } else {
            Some(self.code % base)
        }
    }
}

/// Enumerate all packed words of the given weight, in lexicographic order.
pub fn keys_of_weight(level: Level, weight: u32) -> impl Iterator<Item = WordKey> {
    let base = u64::from(level.num_letters());
    let count = base.pow(weight);
    (0..count).map(move |code| WordKey { len: weight, code })
}

/// Truncated noncommutative series: sparse, canonical (no stored zeros).
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    level: Level,
    trunc: usize,
    ring: Ring,
    coeffs: BTreeMap<WordKey, Scalar>,
}

impl Series {
    pub fn zero(level: Level, trunc: usize, ring: Ring) -> Series {
        let base = u64::from(level.num_letters());
        debug_assert!(
            (trunc as u32) < 64 && base.checked_pow(trunc as u32).is_some(),
            "truncation too large for packed keys"
        );
        Series { level, trunc, ring, coeffs: BTreeMap::new() }
    }

    pub fn one(level: Level, trunc: usize, ring: Ring) -> Series {
        let mut s = Series::zero(level, trunc, ring);
        s.coeffs.insert(WordKey::EMPTY, Scalar::one(ring));
        s
    }

    pub fn monomial(
        level: Level,
        trunc: usize,
        ring: Ring,
        w: &Word,
        c: Scalar,
    ) -> Result<Series, Error> {
        if w.weight() > trunc {
            return Err(Error::WeightOverflow { weight: w.weight(), trunc });
        }
        c.ring().check_same(&ring)?;
        let key = WordKey::pack(w, level)?;
        let mut s = Series::zero(level, trunc, ring);
        if !c.is_zero() {
            s.coeffs.insert(key, c);
        }
        Ok(s)
    }

    pub fn letter(level: Level, trunc: usize, ring: Ring, l: Letter) -> Result<Series, Error> {
        Series::monomial(level, trunc, ring, &Word(vec![l]), Scalar::one(ring))
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest weight carrying a nonzero term, if any.
    pub fn min_weight(&self) -> Option<usize> {
        self.coeffs.keys().next().map(|k| k.len as usize)
    }

    pub fn coeff_key(&self, key: &WordKey) -> Scalar {
        self.coeffs.get(key).cloned().unwrap_or_else(|| Scalar::zero(self.ring))
    }

    pub fn coeff(&self, w: &Word) -> Result<Scalar, Error> {
        Ok(self.coeff_key(&WordKey::pack(w, self.level)?))
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff_key(&WordKey::EMPTY)
    }

    pub fn set_coeff_key(&mut self, key: WordKey, c: Scalar) -> Result<(), Error> {
        if key.len as usize > self.trunc {
            return Err(Error::WeightOverflow { weight: key.len as usize, trunc: self.trunc });
        }
        c.ring().check_same(&self.ring)?;
        if c.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, c);
        }
        Ok(())
    }

    pub fn set_coeff(&mut self, w: &Word, c: Scalar) -> Result<(), Error> {
        let key = WordKey::pack(w, self.level)?;
        self.set_coeff_key(key, c)
    }

    pub fn add_to_coeff(&mut self, key: WordKey, c: &Scalar) -> Result<(), Error> {
        if key.len as usize > self.trunc {
            return Ok(()); // silently dropped by truncation
        }
        c.ring().check_same(&self.ring)?;
        let entry = self.coeffs.entry(key).or_insert_with(|| Scalar::zero(self.ring));
        entry.add_assign(c)?;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
        Ok(())
    }

    /// Terms in canonical order (weight, then lexicographic).
    pub fn iter(&self) -> impl Iterator<Item = (&WordKey, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Word, &Scalar)> {
        self.coeffs.iter().map(|(k, c)| (k.unpack(self.level), c))
    }

    fn check_compat(&self, other: &Series) -> Result<(), Error> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level.n(), other.level.n()));
        }
        self.ring.check_same(&other.ring)
    }

    pub fn add(&self, other: &Series) -> Result<Series, Error> {
        self.check_compat(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut out = Series::zero(self.level, trunc, self.ring);
        for (k, c) in &self.coeffs {
            out.add_to_coeff(*k, c)?;
        }
        for (k, c) in &other.coeffs {
            out.add_to_coeff(*k, c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Series) -> Result<Series, Error> {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> Series {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Result<Series, Error> {
        c.ring().check_same(&self.ring)?;
        let mut out = Series::zero(self.level, self.trunc, self.ring);
        if c.is_zero() {
            return Ok(out);
        }
        for (k, a) in &self.coeffs {
            let v = a.mul(c)?;
            if !v.is_zero() {
                out.coeffs.insert(*k, v);
            }
        }
        Ok(out)
    }

    pub fn scale_i64(&self, m: i64) -> Series {
        self.scale(&Scalar::from_i64(m, self.ring)).expect("same ring")
    }

    pub fn scale_rational(&self, q: &Rational) -> Series {
        self.scale(&Scalar::from_rational(q.clone(), self.ring)).expect("same ring")
    }

    /// Concatenation product. The coefficient of w is the sum of a(u)·b(v)
    /// over all splittings w = uv; summation runs in ascending key order of
    /// the left factor, which is lexicographic among the prefixes of any
    /// fixed target word.
    pub fn concat_mul(&self, other: &Series) -> Result<Series, Error> {
        self.check_compat(other)?;
        let trunc = self.trunc.min(other.trunc);
        let base = u64::from(self.level.num_letters());
        let mut out = Series::zero(self.level, trunc, self.ring);
        for (ku, a) in &self.coeffs {
            if ku.len as usize > trunc {
                continue;
            }
            for (kv, b) in &other.coeffs {
                if (ku.len + kv.len) as usize > trunc {
                    continue;
                }
                out.add_to_coeff(ku.concat(kv, base), &a.mul(b)?)?;
            }
        }
        Ok(out)
    }

    /// Shuffle product.
    pub fn shuffle_mul(&self, other: &Series) -> Result<Series, Error> {
        self.check_compat(other)?;
        let trunc = self.trunc.min(other.trunc);
        let base = u64::from(self.level.num_letters());
        let mut out = Series::zero(self.level, trunc, self.ring);
        for (ku, a) in &self.coeffs {
            if ku.len as usize > trunc {
                continue;
            }
            for (kv, b) in &other.coeffs {
                if (ku.len + kv.len) as usize > trunc {
                    continue;
                }
                let ab = a.mul(b)?;
                for (kw, mult) in shuffle_pair(ku, kv, base) {
                    out.add_to_coeff(kw, &ab.mul_u64(mult))?;
                }
            }
        }
        Ok(out)
    }

    /// exp under concatenation; the argument must have zero constant term.
    pub fn exp_concat(&self) -> Result<Series, Error> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut acc = Series::one(self.level, self.trunc, self.ring);
        let mut pow = Series::one(self.level, self.trunc, self.ring);
        for k in 1..=self.trunc as u64 {
            pow = pow.concat_mul(self)?;
            if pow.is_zero() {
                break;
            }
            pow = pow.map_scalars(|c| c.div_u64(k));
            acc = acc.add(&pow)?;
        }
        Ok(acc)
    }

    /// log under concatenation; the argument must have constant term 1.
    pub fn log_concat(&self) -> Result<Series, Error> {
        let one = Scalar::one(self.ring);
        let mut ct = self.constant_term();
        ct.sub_assign(&one)?;
        if !ct.is_zero() {
            return Err(Error::ConstantTermNotOne);
        }
        let y = self.sub(&Series::one(self.level, self.trunc, self.ring))?;
        let mut acc = Series::zero(self.level, self.trunc, self.ring);
        let mut pow = Series::one(self.level, self.trunc, self.ring);
        for k in 1..=self.trunc as u64 {
            pow = pow.concat_mul(&y)?;
            if pow.is_zero() {
                break;
            }
            let term = pow.map_scalars(|c| c.div_u64(k));
            acc = if k % 2 == 1 { acc.add(&term)? } else { acc.sub(&term)? };
        }
        Ok(acc)
    }

    /// Divide every coefficient by a small positive integer.
    pub fn map_div_u64(&self, d: u64) -> Series {
        self.map_scalars(|c| c.div_u64(d))
    }

    fn map_scalars(&self, f: impl Fn(&Scalar) -> Scalar) -> Series {
        let mut out = Series::zero(self.level, self.trunc, self.ring);
        for (k, c) in &self.coeffs {
            let v = f(c);
            if !v.is_zero() {
                out.coeffs.insert(*k, v);
            }
        }
        out
    }

    /// First shuffle relation violated beyond `tol`, if any: returns
    /// (u, v, residual) with residual = |g(u)g(v) − Σ_{w ∈ u⧢v} g(w)|.
    pub fn grouplike_violation(&self, tol: &Float) -> Result<Option<(Word, Word, Float)>, Error> {
        let one = Scalar::one(self.ring);
        let mut ct = self.constant_term();
        ct.sub_assign(&one)?;
        if ct.abs_float() > *tol {
            return Ok(Some((Word::empty(), Word::empty(), ct.abs_float())));
        }
        let base = u64::from(self.level.num_letters());
        for wu in 1..=(self.trunc as u32).saturating_sub(1) {
            for wv in 1..=(self.trunc as u32 - wu) {
                if wv > wu {
                    // shuffle relations are symmetric in (u, v)
                    continue;
                }
                for ku in keys_of_weight(self.level, wu) {
                    for kv in keys_of_weight(self.level, wv) {
                        let mut lhs = self.coeff_key(&ku).mul(&self.coeff_key(&kv))?;
                        for (kw, mult) in shuffle_pair(&ku, &kv, base) {
                            lhs.sub_assign(&self.coeff_key(&kw).mul_u64(mult))?;
                        }
                        if lhs.abs_float() > *tol {
                            return Ok(Some((
                                ku.unpack(self.level),
                                kv.unpack(self.level),
                                lhs.abs_float(),
                            )));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// True iff the constant term is 1 and every shuffle relation among the
    /// coefficients holds within `tol` (use tol = 0 for the exact ring).
    pub fn is_grouplike(&self, tol: &Float) -> Result<bool, Error> {
        Ok(self.grouplike_violation(tol)?.is_none())
    }

    /// Largest shuffle-relation residual, for reporting.
    pub fn grouplike_residual(&self) -> Result<Float, Error> {
        let one = Scalar::one(self.ring);
        let mut ct = self.constant_term();
        ct.sub_assign(&one)?;
        let mut worst = ct.abs_float();
        let base = u64::from(self.level.num_letters());
        for wu in 1..=(self.trunc as u32).saturating_sub(1) {
            for wv in 1..=(self.trunc as u32 - wu) {
                if wv > wu {
                    continue;
                }
                for ku in keys_of_weight(self.level, wu) {
                    for kv in keys_of_weight(self.level, wv) {
                        let mut lhs = self.coeff_key(&ku).mul(&self.coeff_key(&kv))?;
                        for (kw, mult) in shuffle_pair(&ku, &kv, base) {
                            lhs.sub_assign(&self.coeff_key(&kw).mul_u64(mult))?;
                        }
                        let r = lhs.abs_float();
                        if r > worst {
                            worst = r;
                        }
                    }
                }
            }
        }
        Ok(worst)
    }

    /// Inverse of a group-like element via the antipode,
    /// h(w) = (−1)^{|w|}·g(reverse w).
    pub fn grouplike_inverse(&self) -> Result<Series, Error> {
        let tol = self.ring.default_tolerance();
        if let Some((u, v, r)) = self.grouplike_violation(&tol)? {
            return Err(Error::NotGrouplike {
                residual: r.to_string_radix(10, Some(6)),
                u: crate::alphabet::format_word(&u),
                v: crate::alphabet::format_word(&v),
            });
        }
        let base = u64::from(self.level.num_letters());
        let mut out = Series::zero(self.level, self.trunc, self.ring);
        for (k, c) in &self.coeffs {
            let v = if k.len % 2 == 0 { c.clone() } else { c.neg() };
            out.coeffs.insert(k.reversed(base), v);
        }
        Ok(out)
    }

    /// Restrict to terms of one weight.
    pub fn weight_part(&self, weight: usize) -> Series {
        let mut out = Series::zero(self.level, self.trunc, self.ring);
        for (k, c) in &self.coeffs {
            if k.len as usize == weight {
                out.coeffs.insert(*k, c.clone());
            }
        }
        out
    }

    /// Copy with a new truncation; terms above it are dropped.
    pub fn truncated(&self, trunc: usize) -> Series {
        let mut out = Series::zero(self.level, trunc, self.ring);
        for (k, c) in &self.coeffs {
            if k.len as usize <= trunc {
                out.coeffs.insert(*k, c.clone());
            }
        }
        out
    }

    /// Largest |coefficient| (0 for the zero series).
    pub fn max_abs(&self) -> Float {
        let mut worst = Float::with_val(64, 0);
        for c in self.coeffs.values() {
            let a = c.abs_float();
            if a > worst {
                worst = a;
            }
        }
        worst
    }
}

/// Shuffle of two packed words with multiplicities, by memoized dynamic
/// programming over suffix index pairs (never by enumerating permutations).
pub fn shuffle_pair(u: &WordKey, v: &WordKey, base: u64) -> Vec<(WordKey, u64)> {
    // letters, first letter first
    let digits = |k: &WordKey| {
        let mut out = vec![0u64; k.len as usize];
        let mut code = k.code;
        for slot in out.iter_mut().rev() {
            *slot = code % base;
            code /= base;
        }
        out
    };
    let du = digits(u);
    let dv = digits(v);

    type Memo = HashMap<(usize, usize), Vec<(u64, u32, u64)>>; // (code, len, mult)
    fn go(i: usize, j: usize, du: &[u64], dv: &[u64], base: u64, memo: &mut Memo) -> Vec<(u64, u32, u64)> {
        if let Some(hit) = memo.get(&(i, j)) {
            return hit.clone();
        }
        let result = if i == du.len() && j == dv.len() {
            vec![(0, 0, 1)]
        } else {
            let mut acc: HashMap<(u64, u32), u64> = HashMap::new();
            if i < du.len() {
                for (code, len, m) in go(i + 1, j, du, dv, base, memo) {
                    let key = (du[i] * base.pow(len) + code, len + 1);
                    *acc.entry(key).or_insert(0) += m;
                }
            }
            if j < dv.len() {
                for (code, len, m) in go(i, j + 1, du, dv, base, memo) {
                    let key = (dv[j] * base.pow(len) + code, len + 1);
                    *acc.entry(key).or_insert(0) += m;
                }
            }
            let mut v: Vec<_> = acc.into_iter().map(|((c, l), m)| (c, l, m)).collect();
            v.sort_unstable();
            v
        };
        memo.insert((i, j), result.clone());
        result
    }

    let mut memo = Memo::new();
    go(0, 0, &du, &dv, base, &mut memo)
        .into_iter()
        .map(|(code, len, m)| (WordKey { len, code }, m))
        .collect()
}

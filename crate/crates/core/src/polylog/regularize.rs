//! Shuffle regularization: extend the coefficient function from convergent
//! words to all words of weight ≤ W, uniquely determined by the shuffle
//! relations together with c(e_0) = c(e_1) = 0.
//!
//! For a word ending in e_0, write w = u·e_0^r with u not ending in e_0;
//! in the plain shuffle u ⧢ e_0^r the word w appears with coefficient
//! exactly 1 and every other term has a strictly shorter trailing run of
//! zeros, so 0 = c(u)·c(e_0)^r solves for c(w). Leading runs of e_1 are
//! stripped symmetrically. The two strip orders produce identical values;
//! both are exposed so that the order-independence can be tested, including
//! symbolically with indeterminate convergent values.

use std::collections::BTreeMap;

use crate::alphabet::Level;
use crate::cfloat::CFloat;
use crate::error::Error;
use crate::series::{keys_of_weight, shuffle_pair, WordKey};

/// Minimal coefficient interface the regularization recursion needs; it is
/// linear, so linear forms over indeterminates qualify alongside numbers.
pub trait RegCoeff: Clone {
    fn zero_like(&self) -> Self;
    fn add_assign(&mut self, other: &Self);
    fn sub_assign(&mut self, other: &Self);
    fn mul_u64(&self, m: u64) -> Self;
    fn neg(&self) -> Self;
}

impl RegCoeff for CFloat {
    fn zero_like(&self) -> Self {
        CFloat::zero(self.prec())
    }
    fn add_assign(&mut self, other: &Self) {
        CFloat::add_assign(self, other)
    }
    fn sub_assign(&mut self, other: &Self) {
        CFloat::sub_assign(self, other)
    }
    fn mul_u64(&self, m: u64) -> Self {
        CFloat::mul_u64(self, m)
    }
    fn neg(&self) -> Self {
        CFloat::neg(self)
    }
}

/// Which divergence direction is resolved first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StripOrder {
    LeadingThenTrailing,
    TrailingThenLeading,
}

fn digits_of(key: &WordKey, base: u64) -> Vec<u64> {
    let mut out = vec![0u64; key.len as usize];
    let mut code = key.code;
    for slot in out.iter_mut().rev() {
        *slot = code % base;
        code /= base;
    }
    out
}

fn key_from_digits(digits: &[u64], base: u64) -> WordKey {
    let mut code = 0u64;
    for &d in digits {
        code = code * base + d;
    }
    WordKey { len: digits.len() as u32, code }
}

/// run of leading Root(0) letters (digit 1)
fn leading_ones(digits: &[u64]) -> usize {
    digits.iter().take_while(|&&d| d == 1).count()
}

/// run of trailing Zero letters (digit 0)
fn trailing_zeros(digits: &[u64]) -> usize {
    digits.iter().rev().take_while(|&&d| d == 0).count()
}

fn block_key(digit: u64, len: usize, base: u64) -> WordKey {
    let mut code = 0u64;
    for _ in 0..len {
        code = code * base + digit;
    }
    WordKey { len: len as u32, code }
}

pub fn is_convergent_key(key: &WordKey, base: u64) -> bool {
    key.len > 0 && key.first_digit(base) != Some(1) && key.last_digit(base) != Some(0)
}

/// Solve for c(w) from the relation 0 = Σ_{w' ∈ core ⧢ block} mult·c(w'),
/// where w itself carries coefficient 1.
fn solve_one<S: RegCoeff>(
    w: &WordKey,
    core: &WordKey,
    block: &WordKey,
    base: u64,
    values: &BTreeMap<WordKey, S>,
    zero: &S,
) -> S {
    let mut acc = zero.clone();
    for (term, mult) in shuffle_pair(core, block, base) {
        if term == *w {
            debug_assert_eq!(mult, 1, "strip block must hit the target with coefficient 1");
            continue;
        }
        let known = values
            .get(&term)
            .expect("strip recursion ordered so that all other terms are known");
        acc.add_assign(&known.mul_u64(mult));
    }
    acc.neg()
}

/// Extend `partial` (all convergent words of weight ≤ trunc) to every word
/// of weight ≤ trunc. `one` is the coefficient of the empty word.
pub fn regularize_generic<S: RegCoeff>(
    partial: &BTreeMap<WordKey, S>,
    one: S,
    level: Level,
    trunc: usize,
    order: StripOrder,
) -> Result<BTreeMap<WordKey, S>, Error> {
    let base = u64::from(level.num_letters());
    let zero = one.zero_like();
    let mut values: BTreeMap<WordKey, S> = BTreeMap::new();
    values.insert(WordKey::EMPTY, one);
    for w in 1..=trunc {
        for key in keys_of_weight(level, w as u32) {
            if is_convergent_key(&key, base) {
                let v = partial.get(&key).ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "regularize: missing convergent coefficient for {}",
                        crate::alphabet::format_word(&key.unpack(level))
                    ))
                })?;
                values.insert(key, v.clone());
            }
        }
    }

    for weight in 1..=trunc {
        match order {
            StripOrder::LeadingThenTrailing => {
                strip_leading_phase(&mut values, level, weight, base, &zero, false)?;
                strip_trailing_phase(&mut values, level, weight, base, &zero, true)?;
            }
            StripOrder::TrailingThenLeading => {
                strip_trailing_phase(&mut values, level, weight, base, &zero, false)?;
                strip_leading_phase(&mut values, level, weight, base, &zero, true)?;
            }
        }
    }
    Ok(values)
}

/// Resolve words with a leading run of e_1. When `cover_all` is false, only
/// words that do not end in e_0 are handled (the complementary trailing
/// phase will run afterwards and needs cores from this phase's family).
fn strip_leading_phase<S: RegCoeff>(
    values: &mut BTreeMap<WordKey, S>,
    level: Level,
    weight: usize,
    base: u64,
    zero: &S,
    cover_all: bool,
) -> Result<(), Error> {
    for t in 1..=weight {
        for key in keys_of_weight(level, weight as u32) {
            if values.contains_key(&key) {
                continue;
            }
            let digits = digits_of(&key, base);
            if leading_ones(&digits) != t {
                continue;
            }
            if !cover_all && trailing_zeros(&digits) > 0 {
                continue;
            }
            let core = key_from_digits(&digits[t..], base);
            let block = block_key(1, t, base);
            let v = solve_one(&key, &core, &block, base, values, zero);
            values.insert(key, v);
        }
    }
    Ok(())
}

/// Resolve words with a trailing run of e_0. When `cover_all` is false,
/// only words that do not start with e_1 are handled.
fn strip_trailing_phase<S: RegCoeff>(
    values: &mut BTreeMap<WordKey, S>,
    level: Level,
    weight: usize,
    base: u64,
    zero: &S,
    cover_all: bool,
) -> Result<(), Error> {
    for r in 1..=weight {
        for key in keys_of_weight(level, weight as u32) {
            if values.contains_key(&key) {
                continue;
            }
            let digits = digits_of(&key, base);
            if trailing_zeros(&digits) != r {
                continue;
            }
            if !cover_all && leading_ones(&digits) > 0 {
                continue;
            }
            let core = key_from_digits(&digits[..digits.len() - r], base);
            let block = block_key(0, r, base);
            let v = solve_one(&key, &core, &block, base, values, zero);
            values.insert(key, v);
        }
    }
    Ok(())
}

/// Numeric regularization with an input-consistency scan: every shuffle
/// relation among the convergent coefficients themselves must hold within
/// `consistency_tol` (shuffles of convergent words stay convergent, so the
/// scan is well-posed before any regularized value exists).
pub fn regularize(
    partial: &BTreeMap<WordKey, CFloat>,
    level: Level,
    trunc: usize,
    bits: u32,
    consistency_tol: &rug::Float,
    order: StripOrder,
) -> Result<BTreeMap<WordKey, CFloat>, Error> {
    let base = u64::from(level.num_letters());
    // consistency of the convergent input
    for (ku, cu) in partial {
        if ku.len == 0 || !is_convergent_key(ku, base) {
            continue;
        }
        for (kv, cv) in partial {
            if kv.len == 0 || kv > ku || !is_convergent_key(kv, base) {
                continue;
            }
            if (ku.len + kv.len) as usize > trunc {
                continue;
            }
            let mut residual = cu.mul(cv);
            for (kw, mult) in shuffle_pair(ku, kv, base) {
                debug_assert!(is_convergent_key(&kw, base));
                let cw = partial.get(&kw).ok_or_else(|| {
                    Error::InvalidArgument("regularize: incomplete convergent input".into())
                })?;
                residual.sub_assign(&cw.mul_u64(mult));
            }
            if residual.abs() > *consistency_tol {
                return Err(Error::InconsistentInput {
                    u: crate::alphabet::format_word(&ku.unpack(level)),
                    v: crate::alphabet::format_word(&kv.unpack(level)),
                    residual: residual.abs().to_string_radix(10, Some(6)),
                });
            }
        }
    }
    regularize_generic(partial, CFloat::from_i64(1, bits), level, trunc, order)
}

//! Series file format.
//!
//! ```text
//! N=<n> W=<w> ring=<Q|C p=<bits>> [basis=lyndon]
//! <word> : <coeff>
//! ```
//!
//! One line per nonzero term, ordered by weight and then lexicographically.
//! Words use the alphabet text format; the empty word is written `1` (inside
//! a dotted word the token `1` still means e_1 — a bare `1` in the word
//! column of a file always denotes the empty word, and e_1 as a whole word
//! is always written `w^0`). Rationals are `p/q`; complex values are
//! `<re> <im>` in decimal exponent notation with enough digits to round-trip.

use std::collections::BTreeMap;

use rug::Rational;

use crate::alphabet::{format_word, parse_word, Level, Word};
use crate::error::Error;
use crate::lie::{is_lyndon, LyndonCoords};
use crate::scalar::{parse_scalar, scalar_to_string, Ring, Scalar};
use crate::series::{Series, WordKey};

fn header(level: Level, trunc: usize, ring: Ring, basis: Option<&str>) -> String {
    let mut h = format!("N={} W={} ring={}", level.n(), trunc, ring);
    if let Some(b) = basis {
        h.push_str(&format!(" basis={b}"));
    }
    h
}

struct Header {
    level: Level,
    trunc: usize,
    ring: Ring,
    basis: Option<String>,
}

fn parse_header(line: &str) -> Result<Header, Error> {
    let mut n = None;
    let mut w = None;
    let mut ring_kind = None;
    let mut bits = None;
    let mut basis = None;
    for token in line.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| Error::FileFormat(format!("bad header token {token:?}")))?;
        match key {
            "N" => {
                n = Some(value.parse::<u32>().map_err(|_| {
                    Error::FileFormat(format!("bad level in header: {value:?}"))
                })?)
            }
            "W" => {
                w = Some(value.parse::<usize>().map_err(|_| {
                    Error::FileFormat(format!("bad truncation in header: {value:?}"))
                })?)
            }
            "ring" => ring_kind = Some(value.to_string()),
            "p" => {
                bits = Some(value.parse::<u32>().map_err(|_| {
                    Error::FileFormat(format!("bad precision in header: {value:?}"))
                })?)
            }
            "basis" => basis = Some(value.to_string()),
            _ => return Err(Error::FileFormat(format!("unknown header key {key:?}"))),
        }
    }
    let level = Level::new(n.ok_or_else(|| Error::FileFormat("missing N=".into()))?)?;
    let trunc = w.ok_or_else(|| Error::FileFormat("missing W=".into()))?;
    let ring = match ring_kind.as_deref() {
        Some("Q") => Ring::ExactRational,
        Some("C") => Ring::ComplexFloat {
            bits: bits.ok_or_else(|| Error::FileFormat("ring=C needs p=<bits>".into()))?,
        },
        other => return Err(Error::FileFormat(format!("bad ring {other:?}"))),
    };
    Ok(Header { level, trunc, ring, basis })
}

fn word_field(w: &Word) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        format_word(w)
    }
}

fn parse_word_field(field: &str, level: Level) -> Result<Word, Error> {
    if field == "1" {
        Ok(Word::empty())
    } else {
        parse_word(field, level)
    }
}

pub fn write_series(s: &Series) -> String {
    let mut out = header(s.level(), s.trunc(), s.ring(), None);
    out.push('\n');
    for (w, c) in s.terms() {
        out.push_str(&format!("{} : {}\n", word_field(&w), scalar_to_string(c)));
    }
    out
}

pub fn read_series(text: &str) -> Result<Series, Error> {
    let mut lines = text.lines();
    let head =
        parse_header(lines.next().ok_or_else(|| Error::FileFormat("empty file".into()))?)?;
    if head.basis.is_some() {
        return Err(Error::FileFormat(
            "file carries basis= coordinates; use read_lyndon_coords".into(),
        ));
    }
    let mut s = Series::zero(head.level, head.trunc, head.ring);
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (word_text, coeff_text) = line
            .split_once(" : ")
            .ok_or_else(|| Error::FileFormat(format!("bad term line {line:?}")))?;
        let w = parse_word_field(word_text.trim(), head.level)?;
        let c = parse_scalar(coeff_text.trim(), head.ring)?;
        s.set_coeff(&w, c)?;
    }
    Ok(s)
}

pub fn write_lyndon_coords(c: &LyndonCoords) -> String {
    let mut out = header(c.level, c.trunc, Ring::ExactRational, Some("lyndon"));
    out.push('\n');
    for (w, q) in c.terms() {
        out.push_str(&format!(
            "{} : {}\n",
            word_field(&w),
            scalar_to_string(&Scalar::Q(q.clone()))
        ));
    }
    out
}

pub fn read_lyndon_coords(text: &str) -> Result<LyndonCoords, Error> {
    let mut lines = text.lines();
    let head =
        parse_header(lines.next().ok_or_else(|| Error::FileFormat("empty file".into()))?)?;
    if head.basis.as_deref() != Some("lyndon") {
        return Err(Error::FileFormat("expected basis=lyndon header".into()));
    }
    if head.ring != Ring::ExactRational {
        return Err(Error::FileFormat("Lyndon coordinates use the exact ring".into()));
    }
    let mut coords: BTreeMap<WordKey, Rational> = BTreeMap::new();
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (word_text, coeff_text) = line
            .split_once(" : ")
            .ok_or_else(|| Error::FileFormat(format!("bad term line {line:?}")))?;
        let w = parse_word_field(word_text.trim(), head.level)?;
        if !is_lyndon(&w) {
            return Err(Error::NotLyndon(format_word(&w)));
        }
        if w.weight() > head.trunc {
            return Err(Error::WeightOverflow { weight: w.weight(), trunc: head.trunc });
        }
        let c = parse_scalar(coeff_text.trim(), Ring::ExactRational)?;
        let q = c.as_rational().expect("exact ring").clone();
        if q != 0 {
            coords.insert(WordKey::pack(&w, head.level)?, q);
        }
    }
    Ok(LyndonCoords { level: head.level, trunc: head.trunc, coords })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfloat::CFloat;
    use rug::Float;

    fn lvl(n: u32) -> Level {
        Level::new(n).unwrap()
    }

    #[test]
    fn exact_series_round_trip() {
        let level = lvl(2);
        let mut s = Series::one(level, 3, Ring::ExactRational);
        s.set_coeff(
            &parse_word("0.w^1", level).unwrap(),
            Scalar::Q(Rational::from((-3, 7))),
        )
        .unwrap();
        s.set_coeff(&parse_word("w^0", level).unwrap(), Scalar::Q(Rational::from(2))).unwrap();
        let text = write_series(&s);
        assert!(text.starts_with("N=2 W=3 ring=Q\n"));
        assert!(text.contains("1 : 1/1\n"));
        assert!(text.contains("w^0 : 2/1\n"));
        assert!(text.contains("0.w^1 : -3/7\n"));
        let back = read_series(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn complex_series_round_trip() {
        let level = lvl(1);
        let bits = 128;
        let ring = Ring::ComplexFloat { bits };
        let mut s = Series::one(level, 2, ring);
        let c = CFloat::from_parts(
            Float::with_val(bits, 1) / 3u32,
            Float::with_val(bits, -1) / 7u32,
        );
        s.set_coeff(&parse_word("0.1", level).unwrap(), Scalar::C(c)).unwrap();
        let text = write_series(&s);
        assert!(text.starts_with("N=1 W=2 ring=C p=128\n"));
        let back = read_series(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn term_order_is_weight_then_lex() {
        let level = lvl(1);
        let mut s = Series::zero(level, 3, Ring::ExactRational);
        for w in ["1.0", "0.1", "0", "1", "0.0.1"] {
            s.set_coeff(&parse_word(w, level).unwrap(), Scalar::Q(Rational::from(1))).unwrap();
        }
        let text = write_series(&s);
        let words: Vec<&str> =
            text.lines().skip(1).map(|l| l.split_once(" : ").unwrap().0).collect();
        assert_eq!(words, vec!["0", "w^0", "0.w^0", "w^0.0", "0.0.w^0"]);
    }

    #[test]
    fn lyndon_coords_round_trip() {
        let level = lvl(1);
        let mut coords = BTreeMap::new();
        let w = parse_word("0.1", level).unwrap();
        coords.insert(WordKey::pack(&w, level).unwrap(), Rational::from((5, 2)));
        let lc = LyndonCoords { level, trunc: 4, coords };
        let text = write_lyndon_coords(&lc);
        assert!(text.starts_with("N=1 W=4 ring=Q basis=lyndon\n"));
        assert_eq!(read_lyndon_coords(&text).unwrap(), lc);
        // a non-Lyndon word in the file is rejected
        let bad = text.replace("0.w^0", "w^0.0");
        assert!(read_lyndon_coords(&bad).is_err());
    }

    #[test]
    fn header_errors() {
        assert!(read_series("W=3 ring=Q\n").is_err());
        assert!(read_series("N=1 W=3 ring=C\n").is_err());
        assert!(read_series("N=1 W=3 ring=Z\n").is_err());
        assert!(read_series("N=1 W=1 ring=Q\n0.w^0 : 1/1\n").is_err()); // overweight
    }
}

//! Coefficient rings: exact rationals and fixed-precision complex floats.
//!
//! The ring is runtime data on each series, not a type parameter, so a
//! single [`Scalar`] enum carries both kinds of coefficient. Mixing rings
//! (or mixing float precisions) in one operation is an error.

use std::fmt;

use rug::Complete;
use rug::{Float, Rational};

use crate::cfloat::CFloat;
use crate::error::Error;

/// Coefficient ring of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ring {
    /// Fully reduced fractions of arbitrary-precision integers.
    ExactRational,
    /// Complex floats at a fixed binary precision.
    ComplexFloat { bits: u32 },
}

impl Ring {
    pub fn is_exact(&self) -> bool {
        matches!(self, Ring::ExactRational)
    }

    pub fn bits(&self) -> Option<u32> {
        match self {
            Ring::ExactRational => None,
            Ring::ComplexFloat { bits } => Some(*bits),
        }
    }

    /// Default group-likeness tolerance: zero for the exact ring, half the
    /// working precision for floats (the other half absorbs summation error).
    pub fn default_tolerance(&self) -> Float {
        match self {
            Ring::ExactRational => Float::with_val(64, 0),
            Ring::ComplexFloat { bits } => {
                let mut t = Float::with_val(*bits, 1u32);
                t >>= bits / 2;
                t
            }
        }
    }

    pub fn check_same(&self, other: &Ring) -> Result<(), Error> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{self} vs {other}")))
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::ExactRational => write!(f, "Q"),
            Ring::ComplexFloat { bits } => write!(f, "C p={bits}"),
        }
    }
}

/// A coefficient in one of the two rings.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Q(Rational),
    C(CFloat),
}

impl Scalar {
    pub fn zero(ring: Ring) -> Scalar {
        match ring {
            Ring::ExactRational => Scalar::Q(Rational::new()),
            Ring::ComplexFloat { bits } => Scalar::C(CFloat::zero(bits)),
        }
    }

    pub fn one(ring: Ring) -> Scalar {
        Scalar::from_i64(1, ring)
    }

    pub fn from_i64(v: i64, ring: Ring) -> Scalar {
        match ring {
            Ring::ExactRational => Scalar::Q(Rational::from(v)),
            Ring::ComplexFloat { bits } => Scalar::C(CFloat::from_i64(v, bits)),
        }
    }

    pub fn from_rational(q: Rational, ring: Ring) -> Scalar {
        match ring {
            Ring::ExactRational => Scalar::Q(q),
            Ring::ComplexFloat { bits } => Scalar::C(CFloat::from_rational(&q, bits)),
        }
    }

    pub fn ring(&self) -> Ring {
        match self {
            Scalar::Q(_) => Ring::ExactRational,
            Scalar::C(c) => Ring::ComplexFloat { bits: c.prec() },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.cmp0() == std::cmp::Ordering::Equal,
            Scalar::C(c) => c.is_zero(),
        }
    }

    pub fn add_assign(&mut self, other: &Scalar) -> Result<(), Error> {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => {
                *a += b;
                Ok(())
            }
            (Scalar::C(a), Scalar::C(b)) => {
                a.add_assign(b);
                Ok(())
            }
            (a, b) => Err(Error::RingMismatch(format!("{} vs {}", a.ring(), b.ring()))),
        }
    }

    pub fn sub_assign(&mut self, other: &Scalar) -> Result<(), Error> {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => {
                *a -= b;
                Ok(())
            }
            (Scalar::C(a), Scalar::C(b)) => {
                a.sub_assign(b);
                Ok(())
            }
            (a, b) => Err(Error::RingMismatch(format!("{} vs {}", a.ring(), b.ring()))),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(q) => Scalar::Q((-q).complete()),
            Scalar::C(c) => Scalar::C(c.neg()),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar, Error> {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Ok(Scalar::Q((a * b).complete())),
            (Scalar::C(a), Scalar::C(b)) => Ok(Scalar::C(a.mul(b))),
            (a, b) => Err(Error::RingMismatch(format!("{} vs {}", a.ring(), b.ring()))),
        }
    }

    /// Multiply by a small integer (shuffle multiplicities etc.).
    pub fn mul_u64(&self, m: u64) -> Scalar {
        match self {
            Scalar::Q(q) => Scalar::Q(q * Rational::from(m)),
            Scalar::C(c) => Scalar::C(c.mul_u64(m)),
        }
    }

    pub fn div_u64(&self, m: u64) -> Scalar {
        match self {
            Scalar::Q(q) => Scalar::Q(q / Rational::from(m)),
            Scalar::C(c) => Scalar::C(c.div_u64(m)),
        }
    }

    /// |self| as a float (exact values are converted at 128 bits).
    pub fn abs_float(&self) -> Float {
        match self {
            Scalar::Q(q) => Float::with_val(128, q).abs(),
            Scalar::C(c) => c.abs(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Q(q) => Some(q),
            Scalar::C(_) => None,
        }
    }

    pub fn as_complex(&self) -> Option<&CFloat> {
        match self {
            Scalar::C(c) => Some(c),
            Scalar::Q(_) => None,
        }
    }
}

/// Lossless decimal text for a float (enough digits to recover the value).
pub fn float_to_string(f: &Float) -> String {
    f.to_string_radix(10, None)
}

pub fn parse_float(s: &str, bits: u32) -> Result<Float, Error> {
    let incomplete =
        Float::parse(s).map_err(|e| Error::FileFormat(format!("bad float {s:?}: {e}")))?;
    Ok(Float::with_val(bits, incomplete))
}

/// Scalar in the file format: `p/q` for rationals, `<re> <im>` for complex.
pub fn scalar_to_string(s: &Scalar) -> String {
    match s {
        Scalar::Q(q) => format!("{}/{}", q.numer(), q.denom()),
        Scalar::C(c) => format!("{} {}", float_to_string(c.re()), float_to_string(c.im())),
    }
}

pub fn parse_scalar(text: &str, ring: Ring) -> Result<Scalar, Error> {
    match ring {
        Ring::ExactRational => {
            let incomplete = Rational::parse(text.trim())
                .map_err(|e| Error::FileFormat(format!("bad rational {text:?}: {e}")))?;
            Ok(Scalar::Q(Rational::from(incomplete)))
        }
        Ring::ComplexFloat { bits } => {
            let mut parts = text.split_whitespace();
            let re = parts
                .next()
                .ok_or_else(|| Error::FileFormat(format!("missing real part in {text:?}")))?;
            let im = parts
                .next()
                .ok_or_else(|| Error::FileFormat(format!("missing imaginary part in {text:?}")))?;
            if parts.next().is_some() {
                return Err(Error::FileFormat(format!("trailing data in {text:?}")));
            }
            Ok(Scalar::C(CFloat::from_parts(parse_float(re, bits)?, parse_float(im, bits)?)))
        }
    }
}

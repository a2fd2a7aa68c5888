//! Arbitrary-precision complex floats on top of `rug::Float`.
//!
//! Every value carries its binary precision; binary operations require equal
//! precisions (enforced by the callers through [`crate::scalar::Ring`]).

use rug::ops::CompleteRound;
use rug::{Float, Rational};

/// A complex number re + i·im at a fixed binary precision.
#[derive(Clone, Debug, PartialEq)]
pub struct CFloat {
    re: Float,
    im: Float,
}

impl CFloat {
    pub fn zero(bits: u32) -> CFloat {
        CFloat { re: Float::new(bits), im: Float::new(bits) }
    }

    pub fn from_real(re: Float) -> CFloat {
        let bits = re.prec();
        CFloat { re, im: Float::new(bits) }
    }

    pub fn from_parts(re: Float, im: Float) -> CFloat {
        assert_eq!(re.prec(), im.prec(), "mixed precisions in one complex value");
        CFloat { re, im }
    }

    pub fn from_i64(v: i64, bits: u32) -> CFloat {
        CFloat::from_real(Float::with_val(bits, v))
    }

    pub fn from_rational(q: &Rational, bits: u32) -> CFloat {
        CFloat::from_real(Float::with_val(bits, q))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn into_parts(self) -> (Float, Float) {
        (self.re, self.im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add_assign(&mut self, other: &CFloat) {
        self.re += &other.re;
        self.im += &other.im;
    }

    pub fn sub_assign(&mut self, other: &CFloat) {
        self.re -= &other.re;
        self.im -= &other.im;
    }

    pub fn neg(&self) -> CFloat {
        let p = self.prec();
        CFloat { re: Float::with_val(p, -&self.re), im: Float::with_val(p, -&self.im) }
    }

    pub fn conj(&self) -> CFloat {
        CFloat { re: self.re.clone(), im: Float::with_val(self.prec(), -&self.im) }
    }

    pub fn mul(&self, other: &CFloat) -> CFloat {
        let p = self.prec();
        let re = (&self.re * &other.re).complete(p) - (&self.im * &other.im).complete(p);
        let im = (&self.re * &other.im).complete(p) + (&self.im * &other.re).complete(p);
        CFloat { re, im }
    }

    pub fn div(&self, other: &CFloat) -> CFloat {
        let p = self.prec();
        let denom = (&other.re * &other.re).complete(p) + (&other.im * &other.im).complete(p);
        let num = self.mul(&other.conj());
        CFloat { re: num.re / &denom, im: num.im / &denom }
    }

    pub fn recip(&self) -> CFloat {
        CFloat::from_i64(1, self.prec()).div(self)
    }

    pub fn mul_float(&self, f: &Float) -> CFloat {
        let p = self.prec();
        CFloat { re: (&self.re * f).complete(p), im: (&self.im * f).complete(p) }
    }

    pub fn div_float(&self, f: &Float) -> CFloat {
        let p = self.prec();
        CFloat { re: (&self.re / f).complete(p), im: (&self.im / f).complete(p) }
    }

    pub fn mul_u64(&self, m: u64) -> CFloat {
        self.mul_float(&Float::with_val(self.prec(), m))
    }

    pub fn div_u64(&self, m: u64) -> CFloat {
        self.div_float(&Float::with_val(self.prec(), m))
    }

    pub fn mul_i64(&self, m: i64) -> CFloat {
        self.mul_float(&Float::with_val(self.prec(), m))
    }

    /// |self|, as a real float.
    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    /// Round to a lower precision.
    pub fn to_prec(&self, bits: u32) -> CFloat {
        CFloat {
            re: Float::with_val(bits, &self.re),
            im: Float::with_val(bits, &self.im),
        }
    }
}

/// exp(2πi·k/N) at the given precision, with the four axis values exact.
pub fn root_of_unity(k: i64, n: u32, bits: u32) -> CFloat {
    let k = k.rem_euclid(i64::from(n)) as u32;
    let (num, den) = (4 * k, n); // angle = (num/den)·(π/2)
    if num % den == 0 {
        // multiples of π/2: ±1, ±i exactly
        return match (num / den) % 4 {
            0 => CFloat::from_i64(1, bits),
            1 => CFloat::from_parts(Float::new(bits), Float::with_val(bits, 1)),
            2 => CFloat::from_i64(-1, bits),
            _ => CFloat::from_parts(Float::new(bits), Float::with_val(bits, -1)),
        };
    }
    let two_pi = Float::with_val(bits, rug::float::Constant::Pi) * 2u32;
    let angle = two_pi * Float::with_val(bits, k) / Float::with_val(bits, n);
    let (sin, cos) = angle.sin_cos(Float::new(bits));
    CFloat::from_parts(cos, sin)
}

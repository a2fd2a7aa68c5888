//! Reusable property suites behind the `check` subcommand: seeded exact
//! checks of the algebraic laws, and tolerance checks of the numeric series.
//! Every outcome carries a residual and the tolerance it was compared
//! against, so reports are machine-readable and reproducible from the seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::ops::CompleteRound;
use rug::{Float, Rational};

use crate::alphabet::{DihedralElement, Level};
use crate::cfloat::CFloat;
use crate::error::Error;
use crate::ihara::{
    circ, circ_inverse, dihedral_series, exp_ihara, ihara_bracket_series, rotate,
    special_derivation, twist_auto, GroupElement,
};
use crate::lie::{bracket_series, random_lie_series, LieElement};
use crate::polylog::{dch_detailed, stuffle_check, Embedding, PrecisionCfg};
use crate::scalar::Ring;
use crate::series::Series;

/// One check outcome; residuals and tolerances are decimal strings so that
/// exact-ring zeros print as "0".
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub test: String,
    pub residual: String,
    pub tolerance: String,
    pub pass: bool,
}

impl CheckOutcome {
    fn exact(test: &str, worst: &Float) -> CheckOutcome {
        let zero = worst.is_zero();
        CheckOutcome {
            test: test.to_string(),
            residual: if zero { "0".into() } else { worst.to_string_radix(10, Some(6)) },
            tolerance: "0".into(),
            pass: zero,
        }
    }

    fn with_tol(test: &str, residual: &Float, tol: &Float) -> CheckOutcome {
        CheckOutcome {
            test: test.to_string(),
            residual: residual.to_string_radix(10, Some(6)),
            tolerance: tol.to_string_radix(10, Some(4)),
            pass: residual <= tol,
        }
    }
}

fn max_abs(worst: &mut Float, s: &Series) {
    let m = s.max_abs();
    if m > *worst {
        *worst = m;
    }
}

/// Seeded exact property suite for the twisted algebraic structures.
pub fn ihara_suite(
    level: Level,
    weight: usize,
    seed: u64,
    samples: usize,
) -> Result<Vec<CheckOutcome>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let trunc = weight;
    let ring = Ring::ExactRational;

    // antisymmetry and Jacobi for the twisted bracket
    let mut worst = Float::with_val(64, 0);
    for _ in 0..samples {
        let a = random_lie_series(level, trunc, weight.min(3), &mut rng);
        let b = random_lie_series(level, trunc, weight.min(3), &mut rng);
        let c = random_lie_series(level, trunc, weight.min(2), &mut rng);
        let anti = ihara_bracket_series(&a, &b)?.add(&ihara_bracket_series(&b, &a)?)?;
        max_abs(&mut worst, &anti);
        let j1 = ihara_bracket_series(&ihara_bracket_series(&a, &b)?, &c)?;
        let j2 = ihara_bracket_series(&ihara_bracket_series(&b, &c)?, &a)?;
        let j3 = ihara_bracket_series(&ihara_bracket_series(&c, &a)?, &b)?;
        let jac = j1.add(&j2)?.add(&j3)?;
        max_abs(&mut worst, &jac);
    }
    out.push(CheckOutcome::exact("twisted bracket antisymmetry and Jacobi", &worst));

    // derivation homomorphism on every generator
    let mut worst = Float::with_val(64, 0);
    for _ in 0..samples {
        let a = random_lie_series(level, trunc, weight.min(3), &mut rng);
        let b = random_lie_series(level, trunc, weight.min(3), &mut rng);
        let tb = ihara_bracket_series(&a, &b)?;
        for l in level.letters() {
            let gen = Series::letter(level, trunc, ring, l)?;
            let lhs = special_derivation(&a, &special_derivation(&b, &gen)?)?
                .sub(&special_derivation(&b, &special_derivation(&a, &gen)?)?)?;
            let rhs = special_derivation(&tb, &gen)?;
            max_abs(&mut worst, &lhs.sub(&rhs)?);
        }
    }
    out.push(CheckOutcome::exact("derivation commutator realizes the twisted bracket", &worst));

    // e_1 is central
    let mut worst = Float::with_val(64, 0);
    let e1 = Series::letter(level, trunc, ring, crate::alphabet::Letter::Root(0))?;
    for _ in 0..samples {
        let a = random_lie_series(level, trunc, weight, &mut rng);
        max_abs(&mut worst, &ihara_bracket_series(&a, &e1)?);
    }
    out.push(CheckOutcome::exact("e_1 is central for the twisted bracket", &worst));

    // twisted group law: unit, associativity, inverse
    let mut worst = Float::with_val(64, 0);
    let one = GroupElement::one(level, trunc, ring);
    for _ in 0..samples.min(5) {
        let a = GroupElement::from_grouplike_unchecked(
            random_lie_series(level, trunc, weight.min(3), &mut rng).exp_concat()?,
        );
        let b = GroupElement::from_grouplike_unchecked(
            random_lie_series(level, trunc, weight.min(3), &mut rng).exp_concat()?,
        );
        let c = GroupElement::from_grouplike_unchecked(
            random_lie_series(level, trunc, weight.min(2), &mut rng).exp_concat()?,
        );
        max_abs(&mut worst, &circ(&one, &a)?.body().sub(a.body())?);
        max_abs(&mut worst, &circ(&a, &one)?.body().sub(a.body())?);
        let assoc =
            circ(&circ(&a, &b)?, &c)?.body().sub(circ(&a, &circ(&b, &c)?)?.body())?;
        max_abs(&mut worst, &assoc);
        let inv = circ_inverse(&a)?;
        max_abs(&mut worst, &circ(&a, &inv)?.body().sub(one.body())?);
        max_abs(&mut worst, &circ(&inv, &a)?.body().sub(one.body())?);
    }
    out.push(CheckOutcome::exact("twisted group law: unit, associativity, inverse", &worst));

    // one-parameter law for the non-standard exponential
    let mut worst = Float::with_val(64, 0);
    for _ in 0..samples.min(5) {
        let a = random_lie_series(level, trunc, weight.min(3), &mut rng);
        let s = Rational::from((2, 3));
        let t = Rational::from((-1, 2));
        let es = exp_ihara(&LieElement::from_primitive_unchecked(a.scale_rational(&s)))?;
        let et = exp_ihara(&LieElement::from_primitive_unchecked(a.scale_rational(&t)))?;
        let sum = exp_ihara(&LieElement::from_primitive_unchecked(
            a.scale_rational(&(s + t)),
        ))?;
        max_abs(&mut worst, &circ(&es, &et)?.body().sub(sum.body())?);
    }
    out.push(CheckOutcome::exact("one-parameter law of the twisted exponential", &worst));

    // twist automorphisms compose along the twisted product
    let mut worst = Float::with_val(64, 0);
    for _ in 0..samples.min(5) {
        let a = GroupElement::from_grouplike_unchecked(
            random_lie_series(level, trunc, weight.min(3), &mut rng).exp_concat()?,
        );
        let b = GroupElement::from_grouplike_unchecked(
            random_lie_series(level, trunc, weight.min(3), &mut rng).exp_concat()?,
        );
        let ab = circ(&a, &b)?;
        for l in level.letters() {
            let gen = Series::letter(level, trunc, ring, l)?;
            let lhs = twist_auto(&ab, &gen)?;
            let rhs = twist_auto(&a, &twist_auto(&b, &gen)?)?;
            max_abs(&mut worst, &lhs.sub(&rhs)?);
        }
    }
    out.push(CheckOutcome::exact("twist automorphisms compose along the product", &worst));

    // dihedral: flip involution, bracket compatibility, rotation-derivation
    // commutation
    let mut worst = Float::with_val(64, 0);
    let flip = DihedralElement::flip();
    for _ in 0..samples.min(5) {
        let x = random_lie_series(level, trunc, weight.min(3), &mut rng);
        let y = random_lie_series(level, trunc, weight.min(3), &mut rng);
        max_abs(&mut worst, &dihedral_series(&flip, &dihedral_series(&flip, &x)?)?.sub(&x)?);
        let lhs = dihedral_series(&flip, &bracket_series(&x, &y)?)?;
        let rhs = bracket_series(&dihedral_series(&flip, &x)?, &dihedral_series(&flip, &y)?)?;
        max_abs(&mut worst, &lhs.sub(&rhs)?);
        for xi in 1..level.n().min(4) {
            let rot_d = rotate(i64::from(xi), &special_derivation(&x, &y)?);
            let d_rot = special_derivation(&x, &rotate(i64::from(xi), &y))?;
            max_abs(&mut worst, &rot_d.sub(&d_rot)?);
            let rot_lhs = rotate(i64::from(xi), &bracket_series(&x, &y)?);
            let rot_rhs =
                bracket_series(&rotate(i64::from(xi), &x), &rotate(i64::from(xi), &y))?;
            max_abs(&mut worst, &rot_lhs.sub(&rot_rhs)?);
        }
    }
    out.push(CheckOutcome::exact(
        "dihedral action: involution, bracket compatibility, derivations commute with rotations",
        &worst,
    ));

    Ok(out)
}

/// Tolerance suite for the numeric series: group-likeness, reality for
/// N ≤ 2, the stuffle identity for N = 1, and the 2πi-rationality of root
/// coefficient differences for N ≥ 3.
pub fn dch_suite(
    level: Level,
    weight: usize,
    sigma: &Embedding,
    cfg: &PrecisionCfg,
) -> Result<Vec<CheckOutcome>, Error> {
    let bits = cfg.bits;
    let (d, _worst_err) = dch_detailed(level, weight, sigma, cfg)?;
    let mut out = Vec::new();

    let mut tol10 = cfg.target_tol.clone();
    tol10 *= 10u32;
    let residual = d.body().grouplike_residual()?;
    out.push(CheckOutcome::with_tol("group-like residual", &residual, &tol10));

    if level.n() <= 2 {
        let mut worst = Float::with_val(bits, 0);
        for (_, c) in d.body().iter() {
            if let Some(cf) = c.as_complex() {
                let im = cf.im().clone().abs();
                if im > worst {
                    worst = im;
                }
            }
        }
        out.push(CheckOutcome::with_tol("reality of all coefficients", &worst, &tol10));
    }

    if level.n() == 1 && weight >= 4 {
        let mut worst = Float::with_val(bits, 0);
        for (n, m) in [(2u32, 2u32), (2, 3), (3, 2)] {
            if (n + m) as usize > weight {
                continue;
            }
            let r = stuffle_check(n, m, &d)?;
            if r > worst {
                worst = r;
            }
        }
        let tol = Float::with_val(bits, 1e-15);
        out.push(CheckOutcome::with_tol("stuffle identity residual", &worst, &tol));
    }

    if level.n() >= 3 {
        // the difference of conjugate root coefficients is a rational
        // multiple of 2πi with denominator dividing 2N
        let pi = Float::with_val(bits, rug::float::Constant::Pi);
        let two_pi = pi * 2u32;
        let mut worst = Float::with_val(bits, 0);
        for k in 1..level.n() {
            let inv_k = level.reduce(-(i64::from(k)));
            if inv_k == k {
                continue; // ζ = ±1 excluded
            }
            let w = crate::alphabet::Word(vec![crate::alphabet::Letter::Root(k)]);
            let w_inv = crate::alphabet::Word(vec![crate::alphabet::Letter::Root(inv_k)]);
            let c = d.body().coeff(&w)?;
            let c_inv = d.body().coeff(&w_inv)?;
            let mut diff = c.as_complex().cloned().unwrap_or(CFloat::zero(bits));
            diff.sub_assign(c_inv.as_complex().unwrap_or(&CFloat::zero(bits)));
            // diff/(2πi) = Im(diff)/(2π) − i·Re(diff)/(2π)
            let ratio_re = (diff.im() / &two_pi).complete(bits);
            let ratio_im = -(diff.re() / &two_pi).complete(bits);
            let denom = 2 * level.n();
            let scaled = (&ratio_re * &Float::with_val(bits, denom)).complete(bits);
            let frac_residual = (scaled.clone() - scaled.round()).abs() / Float::with_val(bits, denom);
            let total = frac_residual + ratio_im.abs();
            if total > worst {
                worst = total;
            }
        }
        let tol = Float::with_val(bits, 1e-12);
        out.push(CheckOutcome::with_tol(
            "root coefficient differences are rational multiples of 2πi",
            &worst,
            &tol,
        ));
    }

    Ok(out)
}

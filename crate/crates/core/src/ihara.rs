//! Structures on the pro-unipotent group Π and its completed Lie algebra:
//! rotations `[ξ]`, the dihedral action, the twisted automorphisms ⟨a⟩₀, the
//! special derivations ∂_a, the Ihara bracket {·,·}, the twisted group law
//! ∘, the torsor action, and the non-standard exponential.
//!
//! Conventions, fixed once:
//! - `ad_g(x) = g·x·g⁻¹`, so ⟨a⟩₀ sends `e_ζ ↦ ([ζ]a)⁻¹·e_ζ·([ζ]a)`;
//! - `∂_a(e_0) = 0` and `∂_a(e_ζ) = [−[ζ]a, e_ζ]`, extended by Leibniz;
//! - `{a,b} = [a,b] + ∂_a(b) − ∂_b(a)`;
//! - a ∘ b = a·⟨a⟩₀(b);
//! - torsor action x ↦ a·x + ∂_a(x);
//! - exp_ihara(a) = Σ (μ_a + ∂_a)ⁿ(1)/n!, which is not the concatenation
//!   exponential.
//!
//! Every ∂_a commutes with the rotations `[ξ]` (the rotation of the subscript
//! by the target letter is built into the defining formula); this is the
//! equivariance that makes a derivation fixing e_0 determined by its value
//! on e_1.

use crate::alphabet::{permute_point, DihedralElement, ExtendedPoint, Letter, Level};
use crate::error::Error;
use crate::lie::{bracket_series, LieElement};
use crate::scalar::Ring;
use crate::series::{Series, WordKey};

/// A group-like series (a point of Π); checked on entry through [`GroupElement::new`].
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    body: Series,
}

impl GroupElement {
    /// Wrap a series after verifying group-likeness at the ring's default
    /// tolerance (exactly, in the rational ring).
    pub fn new(body: Series) -> Result<GroupElement, Error> {
        let tol = body.ring().default_tolerance();
        if let Some((u, v, r)) = body.grouplike_violation(&tol)? {
            return Err(Error::NotGrouplike {
                residual: r.to_string_radix(10, Some(6)),
                u: crate::alphabet::format_word(&u),
                v: crate::alphabet::format_word(&v),
            });
        }
        Ok(GroupElement { body })
    }

    /// Wrap a series produced by an operation that preserves group-likeness.
    pub fn from_grouplike_unchecked(body: Series) -> GroupElement {
        GroupElement { body }
    }

    pub fn one(level: Level, trunc: usize, ring: Ring) -> GroupElement {
        GroupElement { body: Series::one(level, trunc, ring) }
    }

    pub fn body(&self) -> &Series {
        &self.body
    }

    pub fn into_series(self) -> Series {
        self.body
    }

    pub fn inverse(&self) -> Result<GroupElement, Error> {
        Ok(GroupElement { body: self.body.grouplike_inverse()? })
    }
}

/// A point of the right-module copy of the ambient series space.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsorPoint {
    pub body: Series,
}

/// The automorphism `[ξ]`: e_0 ↦ e_0, `e_{ζ^k} ↦ e_{ζ^{k+ξ}}`, applied
/// letterwise to every word.
pub fn rotate(xi: i64, x: &Series) -> Series {
    let level = x.level();
    let n = u64::from(level.n());
    let base = n + 1;
    let shift = xi.rem_euclid(level.n() as i64) as u64;
    if shift == 0 {
        return x.clone();
    }
    let mut out = Series::zero(level, x.trunc(), x.ring());
    for (key, c) in x.iter() {
        let mut digits = Vec::with_capacity(key.len as usize);
        let mut code = key.code;
        for _ in 0..key.len {
            digits.push(code % base);
            code /= base;
        }
        let mut new_code: u64 = 0;
        for &d in digits.iter().rev() {
            let nd = if d == 0 { 0 } else { (d - 1 + shift) % n + 1 };
            new_code = new_code * base + nd;
        }
        out.add_to_coeff(WordKey { len: key.len, code: new_code }, c).expect("same ring");
    }
    out
}

/// Series of the eliminated-generator image of a marked point:
/// 0 ↦ e_0, ζ^k ↦ e_{ζ^k}, ∞ ↦ −(e_0 + Σ_ζ e_ζ).
pub fn point_series(
    p: ExtendedPoint,
    level: Level,
    trunc: usize,
    ring: Ring,
) -> Result<Series, Error> {
    match p {
        ExtendedPoint::Zero => Series::letter(level, trunc, ring, Letter::Zero),
        ExtendedPoint::Root(k) => Series::letter(level, trunc, ring, Letter::Root(k)),
        ExtendedPoint::Infinity => {
            let mut sum = Series::letter(level, trunc, ring, Letter::Zero)?;
            for k in 0..level.n() {
                sum = sum.add(&Series::letter(level, trunc, ring, Letter::Root(k))?)?;
            }
            Ok(sum.negate())
        }
    }
}

/// Extend a letter-image assignment to the algebra endomorphism of the
/// concatenation algebra and apply it to x.
fn substitute(x: &Series, images: &[Series]) -> Result<Series, Error> {
    let level = x.level();
    let trunc = x.trunc();
    let ring = x.ring();
    let base = u64::from(level.num_letters());
    let mut out = Series::zero(level, trunc, ring);
    for (key, c) in x.iter() {
        let mut acc = Series::one(level, trunc, ring);
        let mut code = key.code;
        let mut digits = Vec::with_capacity(key.len as usize);
        for _ in 0..key.len {
            digits.push(code % base);
            code /= base;
        }
        for &d in digits.iter().rev() {
            acc = acc.concat_mul(&images[d as usize])?;
            if acc.is_zero() {
                break;
            }
        }
        out = out.add(&acc.scale(c)?)?;
    }
    Ok(out)
}

/// The Lie endomorphism induced by a dihedral symmetry of the marked points:
/// e_x ↦ e_{g·x}, with e_∞ eliminated as −(e_0 + Σ_ζ e_ζ).
pub fn dihedral_series(g: &DihedralElement, x: &Series) -> Result<Series, Error> {
    let level = x.level();
    let trunc = x.trunc();
    let ring = x.ring();
    let mut images = Vec::with_capacity(level.num_letters() as usize);
    images.push(point_series(permute_point(g, ExtendedPoint::Zero, level), level, trunc, ring)?);
    for k in 0..level.n() {
        images.push(point_series(
            permute_point(g, ExtendedPoint::Root(k), level),
            level,
            trunc,
            ring,
        )?);
    }
    substitute(x, &images)
}

/// Dihedral action on Lie elements; the result is again primitive.
pub fn dihedral(g: &DihedralElement, x: &LieElement) -> Result<LieElement, Error> {
    let body = dihedral_series(g, x.body())?;
    Ok(LieElement::from_primitive_unchecked(body))
}

/// The special derivation ∂_a: e_0 ↦ 0, `e_ζ ↦ [−[ζ]a, e_ζ]`, extended to all
/// of x by the Leibniz rule over concatenation. The operand a may be any
/// series with zero constant term (intermediate operands in [`exp_ihara`]
/// are not primitive).
pub fn special_derivation(a: &Series, x: &Series) -> Result<Series, Error> {
    if a.level() != x.level() {
        return Err(Error::LevelMismatch(a.level().n(), x.level().n()));
    }
    a.ring().check_same(&x.ring())?;
    if !a.constant_term().is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let level = x.level();
    let trunc = x.trunc();
    let ring = x.ring();
    let base = u64::from(level.num_letters());

    // image of each root letter: e_ζ·([ζ]a) − ([ζ]a)·e_ζ
    let mut der_images: Vec<Series> = Vec::with_capacity(level.num_letters() as usize);
    der_images.push(Series::zero(level, trunc, ring)); // ∂(e_0) = 0
    for k in 0..level.n() {
        let rotated = rotate(i64::from(k), a);
        let letter = Series::letter(level, trunc, ring, Letter::Root(k))?;
        der_images.push(letter.concat_mul(&rotated)?.sub(&rotated.concat_mul(&letter)?)?);
    }

    let mut out = Series::zero(level, trunc, ring);
    for (key, c) in x.iter() {
        let len = key.len;
        let mut digits = vec![0u64; len as usize];
        let mut code = key.code;
        for slot in digits.iter_mut().rev() {
            *slot = code % base;
            code /= base;
        }
        // prefix . ∂(letter_i) . suffix for each position i
        for i in 0..len as usize {
            let d = digits[i];
            if d == 0 {
                continue;
            }
            let img = &der_images[d as usize];
            if img.is_zero() {
                continue;
            }
            let prefix_len = i as u32;
            let suffix_len = len - prefix_len - 1;
            let mut prefix_code: u64 = 0;
            for &pd in &digits[..i] {
                prefix_code = prefix_code * base + pd;
            }
            let mut suffix_code: u64 = 0;
            for &sd in &digits[i + 1..] {
                suffix_code = suffix_code * base + sd;
            }
            let prefix = WordKey { len: prefix_len, code: prefix_code };
            let suffix = WordKey { len: suffix_len, code: suffix_code };
            for (ka, ca) in img.iter() {
                let full = prefix.concat(ka, base).concat(&suffix, base);
                if full.len as usize <= trunc {
                    out.add_to_coeff(full, &c.mul(ca)?)?;
                }
            }
        }
    }
    Ok(out)
}

/// The Ihara bracket `{a,b} = [a,b] + ∂_a(b) − ∂_b(a)` on series.
pub fn ihara_bracket_series(a: &Series, b: &Series) -> Result<Series, Error> {
    let amb = bracket_series(a, b)?;
    let da_b = special_derivation(a, b)?;
    let db_a = special_derivation(b, a)?;
    amb.add(&da_b)?.sub(&db_a)
}

/// The Ihara bracket on Lie elements; the result is primitive.
pub fn ihara_bracket(a: &LieElement, b: &LieElement) -> Result<LieElement, Error> {
    if a.body().level() != b.body().level() {
        return Err(Error::LevelMismatch(a.body().level().n(), b.body().level().n()));
    }
    Ok(LieElement::from_primitive_unchecked(ihara_bracket_series(a.body(), b.body())?))
}

/// The automorphism ⟨a⟩₀: e_0 ↦ e_0, `e_ζ ↦ ([ζ]a)⁻¹·e_ζ·([ζ]a)`, applied to x.
pub fn twist_auto(a: &GroupElement, x: &Series) -> Result<Series, Error> {
    let level = x.level();
    let trunc = x.trunc();
    let ring = x.ring();
    if a.body().level() != level {
        return Err(Error::LevelMismatch(a.body().level().n(), level.n()));
    }
    a.body().ring().check_same(&ring)?;
    let a_inv = a.body().grouplike_inverse()?;
    let mut images = Vec::with_capacity(level.num_letters() as usize);
    images.push(Series::letter(level, trunc, ring, Letter::Zero)?);
    for k in 0..level.n() {
        let g = rotate(i64::from(k), a.body()).truncated(trunc);
        let g_inv = rotate(i64::from(k), &a_inv).truncated(trunc);
        let letter = Series::letter(level, trunc, ring, Letter::Root(k))?;
        images.push(g_inv.concat_mul(&letter)?.concat_mul(&g)?);
    }
    substitute(x, &images)
}

/// The twisted group law a ∘ b = a·⟨a⟩₀(b).
pub fn circ(a: &GroupElement, b: &GroupElement) -> Result<GroupElement, Error> {
    let twisted = twist_auto(a, b.body())?;
    Ok(GroupElement::from_grouplike_unchecked(a.body().concat_mul(&twisted)?))
}

/// Inverse for ∘, solved degree by degree: x ↦ 1 − (a∘x) + x gains one
/// correct weight per iteration because a∘x − x only involves strictly
/// lower-weight parts of x.
pub fn circ_inverse(a: &GroupElement) -> Result<GroupElement, Error> {
    let body = a.body();
    let one = Series::one(body.level(), body.trunc(), body.ring());
    let mut x = one.clone();
    for _ in 0..=body.trunc() {
        let ax = circ(a, &GroupElement::from_grouplike_unchecked(x.clone()))?;
        x = one.sub(ax.body())?.add(&x)?;
    }
    Ok(GroupElement::from_grouplike_unchecked(x))
}

/// The torsor action x ↦ a·x + ∂_a(x).
pub fn torsor_act(a: &Series, x: &TorsorPoint) -> Result<TorsorPoint, Error> {
    if !a.constant_term().is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let body = a.concat_mul(&x.body)?.add(&special_derivation(a, &x.body)?)?;
    Ok(TorsorPoint { body })
}

/// The exponential Lie V → V transported to the series model:
/// a ↦ Σ (μ_a + ∂_a)ⁿ(1)/n!. Each application of μ_a + ∂_a raises the
/// minimum weight by at least one, so the sum truncates after W steps.
pub fn exp_ihara(a: &LieElement) -> Result<GroupElement, Error> {
    Ok(GroupElement::from_grouplike_unchecked(exp_ihara_series(a.body())?))
}

/// Series-level exp_ihara; does not enforce primitivity of the input.
pub fn exp_ihara_series(a: &Series) -> Result<Series, Error> {
    if !a.constant_term().is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let mut acc = Series::one(a.level(), a.trunc(), a.ring());
    let mut term = acc.clone();
    for n in 1..=(a.trunc() as u64) {
        term = a.concat_mul(&term)?.add(&special_derivation(a, &term)?)?;
        term = term.map_div_u64(n);
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::parse_word;
    use crate::lie::{is_primitive, random_lie_series};
    use crate::scalar::Scalar;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rug::Rational;

    fn lvl(n: u32) -> Level {
        Level::new(n).unwrap()
    }

    fn mono(s: &str, level: Level, trunc: usize) -> Series {
        let w = parse_word(s, level).unwrap();
        Series::monomial(level, trunc, Ring::ExactRational, &w, Scalar::Q(Rational::from(1)))
            .unwrap()
    }

    #[test]
    fn rotate_relabels_letterwise() {
        let level = lvl(4);
        let x = mono("w^1.0", level, 3);
        let r = rotate(1, &x);
        assert_eq!(r, mono("w^2.0", level, 3));
        assert_eq!(rotate(0, &x), x);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let y = random_lie_series(level, 4, 3, &mut rng);
        assert_eq!(rotate(1, &rotate(2, &y)), rotate(3, &y));
        assert_eq!(rotate(3, &rotate(1, &y)), rotate(0, &rotate(4, &y)));
    }

    #[test]
    fn dihedral_flip_eliminates_infinity() {
        // N=1 flip: e_0 ↦ −(e_0+e_1), e_1 ↦ e_1
        let level = lvl(1);
        let g = DihedralElement::flip();
        let e0 = mono("0", level, 3);
        let img = dihedral_series(&g, &e0).unwrap();
        let expect = mono("0", level, 3).add(&mono("1", level, 3)).unwrap().negate();
        assert_eq!(img, expect);
        let e1 = mono("1", level, 3);
        assert_eq!(dihedral_series(&g, &e1).unwrap(), e1);
    }

    #[test]
    fn dihedral_flip_twice_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in [1u32, 3] {
            let level = lvl(n);
            let g = DihedralElement::flip();
            for _ in 0..3 {
                let x = random_lie_series(level, 5, 3, &mut rng);
                let twice = dihedral_series(&g, &dihedral_series(&g, &x).unwrap()).unwrap();
                assert_eq!(twice, x);
                assert!(is_primitive(&dihedral_series(&g, &x).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn dihedral_rotation_part_agrees_with_rotate() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let level = lvl(3);
        let g = DihedralElement::rotation(2, level);
        let x = random_lie_series(level, 4, 3, &mut rng);
        assert_eq!(dihedral_series(&g, &x).unwrap(), rotate(2, &x));
    }

    #[test]
    fn derivation_examples() {
        let level = lvl(1);
        // ∂_{e_1} = 0 at N=1
        let e1 = mono("1", level, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let x = random_lie_series(level, 5, 4, &mut rng);
        assert!(special_derivation(&e1, &x).unwrap().is_zero());

        // ∂_{e_0}(e_1) = e_1e_0 − e_0e_1
        let e0 = mono("0", level, 5);
        let d = special_derivation(&e0, &e1).unwrap();
        let expect = mono("1.0", level, 5).sub(&mono("0.1", level, 5)).unwrap();
        assert_eq!(d, expect);

        // ∂_a(e_0) = 0 for any a
        let a = random_lie_series(level, 5, 3, &mut rng);
        assert!(special_derivation(&a, &e0).unwrap().is_zero());

        // nonzero constant term is rejected
        let bad = Series::one(level, 5, Ring::ExactRational);
        assert!(special_derivation(&bad, &e1).is_err());
    }

    #[test]
    fn derivations_commute_with_rotations() {
        // [ξ]∘∂_a = ∂_a∘[ξ]: the subscript twist [ζ] in the defining formula
        // absorbs the relabeling.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let level = lvl(4);
        for _ in 0..3 {
            let a = random_lie_series(level, 5, 2, &mut rng);
            let x = random_lie_series(level, 5, 3, &mut rng);
            for xi in 1..4 {
                let lhs = rotate(xi, &special_derivation(&a, &x).unwrap());
                let rhs = special_derivation(&a, &rotate(xi, &x)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn ihara_bracket_examples() {
        let level = lvl(1);
        let e0 = mono("0", level, 6);
        let e1 = mono("1", level, 6);
        assert!(ihara_bracket_series(&e0, &e1).unwrap().is_zero());

        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..5 {
            let a = random_lie_series(level, 6, 4, &mut rng);
            // e_1 is central
            assert!(ihara_bracket_series(&a, &e1).unwrap().is_zero());
            // antisymmetry in the diagonal
            assert!(ihara_bracket_series(&a, &a).unwrap().is_zero());
        }
    }

    #[test]
    fn twist_examples() {
        let level = lvl(1);
        let one = GroupElement::one(level, 5, Ring::ExactRational);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let x = random_lie_series(level, 5, 3, &mut rng);
        assert_eq!(twist_auto(&one, &x).unwrap(), x);

        let e0 = mono("0", level, 5);
        let g = GroupElement::new(e0.exp_concat().unwrap()).unwrap();
        assert_eq!(twist_auto(&g, &e0).unwrap(), e0);

        // algebra automorphisms preserve group-likes
        let h = random_lie_series(level, 5, 3, &mut rng).exp_concat().unwrap();
        let img = twist_auto(&g, &h).unwrap();
        let tol = rug::Float::with_val(64, 0);
        assert!(img.is_grouplike(&tol).unwrap());
    }

    #[test]
    fn circ_group_law_basics() {
        let level = lvl(1);
        let one = GroupElement::one(level, 5, Ring::ExactRational);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let a = GroupElement::new(random_lie_series(level, 5, 3, &mut rng).exp_concat().unwrap())
            .unwrap();
        assert_eq!(circ(&one, &a).unwrap(), a);
        assert_eq!(circ(&a, &one).unwrap(), a);

        // one-parameter subgroup in e_0: ⟨exp(s·e_0)⟩₀ fixes e_0
        let e0 = mono("0", level, 5);
        let gs = GroupElement::new(e0.scale_rational(&Rational::from((2, 3))).exp_concat().unwrap())
            .unwrap();
        let gt = GroupElement::new(e0.scale_rational(&Rational::from((1, 2))).exp_concat().unwrap())
            .unwrap();
        let sum = GroupElement::new(
            e0.scale_rational(&Rational::from((7, 6))).exp_concat().unwrap(),
        )
        .unwrap();
        assert_eq!(circ(&gs, &gt).unwrap(), sum);
    }

    #[test]
    fn circ_inverse_examples() {
        let level = lvl(1);
        let one = GroupElement::one(level, 5, Ring::ExactRational);
        assert_eq!(circ_inverse(&one).unwrap(), one);

        let e0 = mono("0", level, 5);
        let g = GroupElement::new(e0.scale_rational(&Rational::from(3)).exp_concat().unwrap())
            .unwrap();
        let ginv = circ_inverse(&g).unwrap();
        assert_eq!(ginv.body(), &e0.scale_rational(&Rational::from(-3)).exp_concat().unwrap());

        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for n in [1u32, 2] {
            let level = lvl(n);
            let a = GroupElement::new(
                random_lie_series(level, 5, 3, &mut rng).exp_concat().unwrap(),
            )
            .unwrap();
            let inv = circ_inverse(&a).unwrap();
            assert_eq!(circ(&a, &inv).unwrap(), GroupElement::one(level, 5, Ring::ExactRational));
            assert_eq!(circ(&inv, &a).unwrap(), GroupElement::one(level, 5, Ring::ExactRational));
        }
    }

    #[test]
    fn torsor_action_examples() {
        let level = lvl(1);
        let one = TorsorPoint { body: Series::one(level, 5, Ring::ExactRational) };
        let e1 = mono("1", level, 5);
        assert_eq!(torsor_act(&e1, &one).unwrap().body, e1);

        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let a = random_lie_series(level, 5, 3, &mut rng);
        assert_eq!(torsor_act(&a, &one).unwrap().body, a);

        // linearity in a at fixed x
        let b = random_lie_series(level, 5, 3, &mut rng);
        let x = TorsorPoint { body: random_lie_series(level, 5, 2, &mut rng) };
        let lhs = torsor_act(&a.add(&b).unwrap(), &x).unwrap().body;
        let rhs = torsor_act(&a, &x).unwrap().body.add(&torsor_act(&b, &x).unwrap().body).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exp_ihara_examples() {
        let level = lvl(1);
        let zero = LieElement::new(Series::zero(level, 4, Ring::ExactRational)).unwrap();
        assert_eq!(
            exp_ihara(&zero).unwrap(),
            GroupElement::one(level, 4, Ring::ExactRational)
        );

        // ∂_{e_1} = 0 collapses exp_ihara to the concatenation exponential
        let e1 = mono("1", level, 5);
        let x = LieElement::new(e1.clone()).unwrap();
        assert_eq!(exp_ihara(&x).unwrap().body(), &e1.exp_concat().unwrap());

        // the result is group-like
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = LieElement::new(random_lie_series(lvl(2), 5, 3, &mut rng)).unwrap();
        let g = exp_ihara(&a).unwrap();
        let tol = rug::Float::with_val(64, 0);
        assert!(g.body().is_grouplike(&tol).unwrap());
    }

    #[test]
    fn exp_ihara_low_degree_expansion() {
        // degree ≤ 3: a + (a² + ∂_a(a))/2 + (a³ + 2a·∂_a(a) + ∂_a(a)·a + ∂_a²(a))/6
        let level = lvl(1);
        let trunc = 3;
        let e0 = mono("0", level, trunc);
        let b01 = mono("0.1", level, trunc).sub(&mono("1.0", level, trunc)).unwrap();
        let a = e0.scale_rational(&Rational::from(2)).add(&b01.scale_rational(&Rational::from((1, 3)))).unwrap();

        let got = exp_ihara_series(&a).unwrap();

        let da_a = special_derivation(&a, &a).unwrap();
        let one = Series::one(level, trunc, Ring::ExactRational);
        let a2 = a.concat_mul(&a).unwrap();
        let a3 = a2.concat_mul(&a).unwrap();
        let deg2 = a2.add(&da_a).unwrap().scale_rational(&Rational::from((1, 2)));
        let deg3 = a3
            .add(&a.concat_mul(&da_a).unwrap().scale_rational(&Rational::from(2)))
            .unwrap()
            .add(&da_a.concat_mul(&a).unwrap())
            .unwrap()
            .add(&special_derivation(&a, &da_a).unwrap())
            .unwrap()
            .scale_rational(&Rational::from((1, 6)));
        let expect = one.add(&a).unwrap().add(&deg2).unwrap().add(&deg3).unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn twisted_bracket_is_graded() {
        // {L_m, L_n} ⊆ L_{m+n}: the bracket of homogeneous elements is
        // supported in the single weight m+n
        let level = lvl(2);
        for m in 1..=3usize {
            for n in 1..=3usize {
                for lm in crate::lie::lyndon_words(level, m) {
                    for ln in crate::lie::lyndon_words(level, n) {
                        let a = crate::lie::lyndon_expand(&lm, level, 6).unwrap();
                        let b = crate::lie::lyndon_expand(&ln, level, 6).unwrap();
                        let br = ihara_bracket_series(&a, &b).unwrap();
                        for (key, _) in br.iter() {
                            assert_eq!(key.len as usize, m + n);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn operator_identity_on_generators() {
        // [∂_a, ∂_b] = ∂_{{a,b}} evaluated on every generator
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for n in [1u32, 2, 3] {
            let level = lvl(n);
            let trunc = if n == 3 { 5 } else { 6 };
            let a = random_lie_series(level, trunc, 3, &mut rng);
            let b = random_lie_series(level, trunc, 3, &mut rng);
            let ihara = ihara_bracket_series(&a, &b).unwrap();
            for l in level.letters() {
                let gen = Series::letter(level, trunc, Ring::ExactRational, l).unwrap();
                let ab = special_derivation(&a, &special_derivation(&b, &gen).unwrap()).unwrap();
                let ba = special_derivation(&b, &special_derivation(&a, &gen).unwrap()).unwrap();
                let lhs = ab.sub(&ba).unwrap();
                let rhs = special_derivation(&ihara, &gen).unwrap();
                assert_eq!(lhs, rhs, "N={n} generator {l:?}");
            }
        }
    }
}

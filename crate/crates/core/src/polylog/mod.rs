//! Numeric construction of the regularized straight-path series: convergent
//! cyclotomic multiple zeta values by accelerated nested sums, shuffle
//! regularization of the divergent coefficients, the assembled group-like
//! series, and the classical stuffle cross-check.
//!
//! A convergent coefficient is indexed by a composition (s₁,…,s_m) with
//! root-of-unity exponents (k₁,…,k_m): the word
//! e_0^{s₁−1} e_{ζ^{k₁}} … e_0^{s_m−1} e_{ζ^{k_m}} carries the value
//!
//!   (−1)^m Σ_{n₁>…>n_m>0} σ(ζ^{k₁})^{n₂−n₁} ⋯ σ(ζ^{k_m})^{−n_m}
//!            / (n₁^{s₁} ⋯ n_m^{s_m}),
//!
//! which the evaluator rewrites as a nested character sum with per-level
//! frequencies χ_j = σ(ζ^{k_{j−1}−k_j}).

mod quadrature;
mod regularize;
mod tails;

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::Float;

use crate::alphabet::{format_word, Letter, Level, Word};
use crate::cfloat::CFloat;
use crate::error::Error;
use crate::ihara::GroupElement;
use crate::scalar::{Ring, Scalar};
use crate::series::{keys_of_weight, Series, WordKey};

pub use quadrature::quadrature_oracle;
pub use regularize::{is_convergent_key, regularize, regularize_generic, RegCoeff, StripOrder};
use tails::{nested_sum, TailParams};

/// Composition (s₁,…,s_m) with root exponents (k₁,…,k_m) mod N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiIndex {
    pub level: Level,
    pub s: Vec<u32>,
    pub zetas: Vec<u32>,
}

impl MultiIndex {
    pub fn new(level: Level, s: Vec<u32>, zetas: Vec<i64>) -> Result<MultiIndex, Error> {
        if s.is_empty() || s.len() != zetas.len() {
            return Err(Error::InvalidArgument(
                "multi-index needs matching nonempty exponent lists".into(),
            ));
        }
        if s.contains(&0) {
            return Err(Error::InvalidArgument("multi-index entries must be >= 1".into()));
        }
        let zetas = zetas.into_iter().map(|k| level.reduce(k)).collect();
        Ok(MultiIndex { level, s, zetas })
    }

    pub fn depth(&self) -> usize {
        self.s.len()
    }

    pub fn weight(&self) -> usize {
        self.s.iter().map(|&x| x as usize).sum()
    }

    /// Convergent iff not (s₁ = 1 and ζ₁ = 1).
    pub fn is_admissible(&self) -> bool {
        !(self.s[0] == 1 && self.zetas[0] == 0)
    }

    /// The word e_0^{s₁−1} e_{ζ₁} … e_0^{s_m−1} e_{ζ_m}.
    pub fn word(&self) -> Word {
        let mut letters = Vec::with_capacity(self.weight());
        for (si, ki) in self.s.iter().zip(&self.zetas) {
            for _ in 1..*si {
                letters.push(Letter::Zero);
            }
            letters.push(Letter::Root(*ki));
        }
        Word(letters)
    }

    /// Inverse of [`MultiIndex::word`]; defined for words not ending in e_0.
    pub fn from_word(w: &Word, level: Level) -> Result<MultiIndex, Error> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        if *w.letters().last().unwrap() == Letter::Zero {
            return Err(Error::InvalidArgument(format!(
                "word {} ends in e_0 and has no multi-index",
                format_word(w)
            )));
        }
        let mut s = Vec::new();
        let mut zetas = Vec::new();
        let mut run = 0u32;
        for l in w.letters() {
            match l {
                Letter::Zero => run += 1,
                Letter::Root(k) => {
                    s.push(run + 1);
                    zetas.push(*k);
                    run = 0;
                }
            }
        }
        Ok(MultiIndex { level, s, zetas })
    }
}

/// An embedding of the cyclotomic field in C: ζ ↦ exp(2πi·k/N), gcd(k,N)=1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub level: Level,
    pub k: u32,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Embedding {
    pub fn new(level: Level, k: i64) -> Result<Embedding, Error> {
        let k = level.reduce(k);
        let k = if level.n() == 1 { 0 } else { k };
        if level.n() > 1 && gcd(k, level.n()) != 1 {
            return Err(Error::InvalidArgument(format!(
                "embedding exponent {k} is not coprime to N={}",
                level.n()
            )));
        }
        Ok(Embedding { level, k })
    }

    pub fn standard(level: Level) -> Embedding {
        Embedding { level, k: if level.n() == 1 { 0 } else { 1 } }
    }
}

/// Working precision and budget for the nested-sum evaluator.
#[derive(Clone, Debug)]
pub struct PrecisionCfg {
    pub bits: u32,
    pub target_tol: Float,
    pub max_terms: u64,
    pub accel_order: usize,
}

impl PrecisionCfg {
    /// Sixteen guard bits are reserved: target_tol must be ≥ 2^{−bits+16}.
    pub fn new(
        bits: u32,
        target_tol: Float,
        max_terms: u64,
        accel_order: usize,
    ) -> Result<PrecisionCfg, Error> {
        if bits < 64 {
            return Err(Error::InvalidArgument("precision below 64 bits".into()));
        }
        let mut floor = Float::with_val(bits, 1);
        floor >>= bits - 16;
        if target_tol < floor {
            return Err(Error::InvalidArgument(format!(
                "target tolerance {} below the guard floor 2^-{} for {} bits",
                target_tol.to_string_radix(10, Some(4)),
                bits - 16,
                bits
            )));
        }
        Ok(PrecisionCfg { bits, target_tol, max_terms, accel_order })
    }

    pub fn with_tol_pow10(
        bits: u32,
        digits: u32,
        max_terms: u64,
        accel_order: usize,
    ) -> Result<PrecisionCfg, Error> {
        let tol = Float::with_val(bits, 10).pow(-(digits as i32));
        PrecisionCfg::new(bits, tol, max_terms, accel_order)
    }

    /// Desk-scale default: 192 bits, 1e−30, 2·10⁵ terms, order 12.
    pub fn default_cfg() -> PrecisionCfg {
        PrecisionCfg::with_tol_pow10(192, 30, 200_000, 12).expect("valid default")
    }

    /// Documented degradation at weights 6–8: 1e−12 target.
    pub fn default_for_weight(weight: usize) -> PrecisionCfg {
        if weight <= 5 {
            PrecisionCfg::default_cfg()
        } else {
            PrecisionCfg::with_tol_pow10(192, 12, 200_000, 12).expect("valid default")
        }
    }

    /// Precision sized for relation mining at a decimal-digit target.
    pub fn for_digits(digits: u32) -> PrecisionCfg {
        let bits = (digits * 10 / 3 + 96).div_ceil(64) * 64;
        PrecisionCfg::with_tol_pow10(bits, digits, 400_000, 16).expect("valid digits cfg")
    }

    /// Decimal digits the configured tolerance corresponds to.
    pub fn digits(&self) -> u32 {
        let lg = -self.target_tol.clone().log10();
        lg.to_f64().floor().max(0.0) as u32
    }
}

/// A computed coefficient with its order-agreement error estimate.
#[derive(Clone, Debug)]
pub struct MplValue {
    pub value: CFloat,
    pub error_estimate: Float,
}

fn choose_params(cfg: &PrecisionCfg, depth: usize) -> Result<TailParams, Error> {
    let digits = cfg.digits() as f64;
    let max_p = depth + 2;
    let mut cutoff: u64 = 1200;
    loop {
        let log10_m0 = (cutoff as f64).log10();
        let ln_m0 = (cutoff as f64).ln();
        // model: log^P(M₀)·M₀^{−(J−2)} with a generous safety margin
        let needed = digits + 8.0 + (max_p as f64) * ln_m0.log10();
        let order = (needed / log10_m0).ceil() as usize + 3;
        let order = order.max(cfg.accel_order);
        if order <= 48 {
            return Ok(TailParams { bits: cfg.bits, cutoff, order, max_p });
        }
        if cutoff >= cfg.max_terms {
            return Err(Error::ToleranceNotMet {
                target: cfg.target_tol.to_string_radix(10, Some(4)),
                detail: format!(
                    "needs expansion order {order} > 48 at the max_terms cutoff {}",
                    cfg.max_terms
                ),
            });
        }
        cutoff = (cutoff * 2).min(cfg.max_terms);
    }
}

/// The convergent coefficient attached to a multi-index: the alternating
/// nested character sum, with the (−1)^m prefactor.
pub fn mpl(idx: &MultiIndex, sigma: &Embedding, cfg: &PrecisionCfg) -> Result<MplValue, Error> {
    if idx.level != sigma.level {
        return Err(Error::LevelMismatch(idx.level.n(), sigma.level.n()));
    }
    if !idx.is_admissible() {
        return Err(Error::NotAdmissible);
    }
    let n = idx.level.n();
    let m = idx.depth();
    // per-level frequency exponents: q_j = k_σ·(k_{j−1} − k_j) mod N, k_0 = 0
    let mut q = Vec::with_capacity(m);
    for j in 0..m {
        let prev = if j == 0 { 0i64 } else { i64::from(idx.zetas[j - 1]) };
        let diff = prev - i64::from(idx.zetas[j]);
        q.push(idx.level.reduce(diff * i64::from(sigma.k)));
    }
    let params = choose_params(cfg, m)?;
    let (raw, err) = nested_sum(&idx.s, &q, n, &params)?;
    if err > cfg.target_tol {
        return Err(Error::ToleranceNotMet {
            target: cfg.target_tol.to_string_radix(10, Some(4)),
            detail: format!(
                "order-agreement estimate {} for index {:?}",
                err.to_string_radix(10, Some(4)),
                idx.s
            ),
        });
    }
    let value = if m % 2 == 1 { raw.neg() } else { raw };
    Ok(MplValue { value, error_estimate: err })
}

/// All convergent coefficients of weight ≤ trunc, keyed by word, together
/// with the worst per-coefficient error estimate.
pub fn convergent_coefficients(
    level: Level,
    trunc: usize,
    sigma: &Embedding,
    cfg: &PrecisionCfg,
) -> Result<(BTreeMap<WordKey, CFloat>, Float), Error> {
    let base = u64::from(level.num_letters());
    let mut out = BTreeMap::new();
    let mut worst = Float::with_val(cfg.bits, 0);
    for w in 1..=trunc {
        for key in keys_of_weight(level, w as u32) {
            if !is_convergent_key(&key, base) {
                continue;
            }
            let word = key.unpack(level);
            let idx = MultiIndex::from_word(&word, level)?;
            let v = mpl(&idx, sigma, cfg)?;
            if v.error_estimate > worst {
                worst = v.error_estimate.clone();
            }
            out.insert(key, v.value);
        }
    }
    Ok((out, worst))
}

/// The regularized straight-path series: convergent coefficients from the
/// evaluator, the rest forced by the shuffle relations with
/// c(e_0) = c(e_1) = 0.
pub fn dch(
    level: Level,
    trunc: usize,
    sigma: &Embedding,
    cfg: &PrecisionCfg,
) -> Result<GroupElement, Error> {
    Ok(dch_detailed(level, trunc, sigma, cfg)?.0)
}

/// As [`dch`], also returning the worst per-coefficient error estimate.
pub fn dch_detailed(
    level: Level,
    trunc: usize,
    sigma: &Embedding,
    cfg: &PrecisionCfg,
) -> Result<(GroupElement, Float), Error> {
    let (partial, worst) = convergent_coefficients(level, trunc, sigma, cfg)?;
    let mut consistency = cfg.target_tol.clone();
    consistency *= 100u32;
    let full = regularize(
        &partial,
        level,
        trunc,
        cfg.bits,
        &consistency,
        StripOrder::LeadingThenTrailing,
    )?;
    let ring = Ring::ComplexFloat { bits: cfg.bits };
    let mut body = Series::zero(level, trunc, ring);
    for (key, c) in full {
        if key.len as usize <= trunc {
            body.set_coeff_key(key, Scalar::C(c))?;
        }
    }
    Ok((GroupElement::from_grouplike_unchecked(body), worst))
}

/// Residual of the classical double-shuffle (stuffle) identity
/// ζ(n)·ζ(m) = ζ(n,m) + ζ(m,n) + ζ(n+m) read through the coefficients of
/// the series at N=1:
/// |c(u_n)·c(u_m) − c(u_n u_m) − c(u_m u_n) + c(u_{n+m})| with
/// u_s = e_0^{s−1}e_1. Depth-one coefficients carry sign −1 and depth-two
/// carry +1, which fixes the signs in the residual.
pub fn stuffle_check(n: u32, m: u32, d: &GroupElement) -> Result<Float, Error> {
    let body = d.body();
    let level = body.level();
    if level.n() != 1 {
        return Err(Error::InvalidArgument("stuffle check is the N=1 identity".into()));
    }
    if n < 2 || m < 2 {
        return Err(Error::InvalidArgument("stuffle check needs n, m >= 2".into()));
    }
    if (n + m) as usize > body.trunc() {
        return Err(Error::WeightOverflow { weight: (n + m) as usize, trunc: body.trunc() });
    }
    let word_u = |s: u32| -> Word {
        let mut letters = vec![Letter::Zero; s as usize - 1];
        letters.push(Letter::Root(0));
        Word(letters)
    };
    let cat =
        |a: &Word, b: &Word| -> Word { Word(a.letters().iter().chain(b.letters()).copied().collect()) };
    let cw = |w: &Word| -> Result<CFloat, Error> {
        Ok(body
            .coeff(w)?
            .as_complex()
            .ok_or_else(|| Error::RingMismatch("stuffle check needs the complex ring".into()))?
            .clone())
    };
    let un = word_u(n);
    let um = word_u(m);
    let mut acc = cw(&un)?.mul(&cw(&um)?);
    acc.sub_assign(&cw(&cat(&un, &um))?);
    acc.sub_assign(&cw(&cat(&um, &un))?);
    acc.add_assign(&cw(&word_u(n + m))?);
    Ok(acc.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::CompleteRound;

    fn lvl(n: u32) -> Level {
        Level::new(n).unwrap()
    }

    fn cfg_digits(bits: u32, digits: u32) -> PrecisionCfg {
        PrecisionCfg::with_tol_pow10(bits, digits, 200_000, 12).unwrap()
    }

    #[test]
    fn multi_index_word_round_trip() {
        let level = lvl(3);
        let idx = MultiIndex::new(level, vec![2, 1, 3], vec![0, 2, 1]).unwrap();
        let w = idx.word();
        assert_eq!(crate::alphabet::format_word(&w), "0.w^0.w^2.0.0.w^1");
        assert_eq!(MultiIndex::from_word(&w, level).unwrap(), idx);
        assert_eq!(idx.weight(), 6);
        assert!(idx.is_admissible());
        let bad = MultiIndex::new(level, vec![1, 2], vec![0, 1]).unwrap();
        assert!(!bad.is_admissible());
    }

    #[test]
    fn embedding_validation() {
        assert!(Embedding::new(lvl(4), 2).is_err());
        assert_eq!(Embedding::new(lvl(4), -1).unwrap().k, 3);
        assert_eq!(Embedding::standard(lvl(1)).k, 0);
    }

    #[test]
    fn precision_cfg_guard() {
        // 1e−60 at 192 bits violates the 2^{−176} ≈ 1e−53 floor
        assert!(PrecisionCfg::with_tol_pow10(192, 60, 1000, 8).is_err());
        assert!(PrecisionCfg::with_tol_pow10(256, 60, 1000, 8).is_ok());
    }

    #[test]
    fn mpl_zeta2_sign_and_value() {
        let level = lvl(1);
        let sigma = Embedding::standard(level);
        let cfg = cfg_digits(192, 30);
        let idx = MultiIndex::new(level, vec![2], vec![0]).unwrap();
        let v = mpl(&idx, &sigma, &cfg).unwrap();
        let pi = Float::with_val(192, rug::float::Constant::Pi);
        let target = -(pi.square() / 6u32);
        let diff = (v.value.re() - &target).complete(192).abs();
        assert!(diff.to_f64() < 1e-29, "diff {}", diff);
        assert!(v.value.im().is_zero());
    }

    #[test]
    fn mpl_log2_at_level_two() {
        let level = lvl(2);
        let sigma = Embedding::standard(level);
        let cfg = cfg_digits(192, 30);
        let idx = MultiIndex::new(level, vec![1], vec![1]).unwrap();
        let v = mpl(&idx, &sigma, &cfg).unwrap();
        let ln2 = Float::with_val(192, 2).ln();
        let diff = (v.value.re() - &ln2).complete(192).abs();
        assert!(diff.to_f64() < 1e-29, "diff {}", diff);
    }

    #[test]
    fn mpl_euler_zeta21() {
        let level = lvl(1);
        let sigma = Embedding::standard(level);
        let cfg = cfg_digits(192, 30);
        let z21 =
            mpl(&MultiIndex::new(level, vec![2, 1], vec![0, 0]).unwrap(), &sigma, &cfg).unwrap();
        let z3 = mpl(&MultiIndex::new(level, vec![3], vec![0]).unwrap(), &sigma, &cfg).unwrap();
        // ζ(2,1) enters with sign (−1)² = +1 and ζ(3) with −1
        let mut sum = z21.value.clone();
        sum.add_assign(&z3.value);
        assert!(sum.abs().to_f64() < 1e-28, "sum {}", sum.abs());
    }

    #[test]
    fn mpl_rejects_divergent_index() {
        let level = lvl(1);
        let sigma = Embedding::standard(level);
        let cfg = cfg_digits(128, 20);
        let idx = MultiIndex::new(level, vec![1], vec![0]).unwrap();
        assert!(matches!(mpl(&idx, &sigma, &cfg), Err(Error::NotAdmissible)));
    }

    #[test]
    fn dch_weight_two_matches_display() {
        // 1 − ζ(2)·[e_0,e_1] through weight 2
        let level = lvl(1);
        let sigma = Embedding::standard(level);
        let cfg = cfg_digits(192, 25);
        let d = dch(level, 2, &sigma, &cfg).unwrap();
        let pi = Float::with_val(192, rug::float::Constant::Pi);
        let zeta2 = pi.square() / 6u32;
        let c01 = d.body().coeff(&crate::alphabet::parse_word("0.1", level).unwrap()).unwrap();
        let c10 = d.body().coeff(&crate::alphabet::parse_word("1.0", level).unwrap()).unwrap();
        let c0 = d.body().coeff(&crate::alphabet::parse_word("0", level).unwrap()).unwrap();
        let c1 = d.body().coeff(&crate::alphabet::parse_word("1", level).unwrap()).unwrap();
        assert!(c0.is_zero() && c1.is_zero());
        let r01 = (c01.as_complex().unwrap().re() + &zeta2).complete(192).abs();
        let r10 = (c10.as_complex().unwrap().re() - &zeta2).complete(192).abs();
        assert!(r01.to_f64() < 1e-24, "c(e0e1) off by {}", r01);
        assert!(r10.to_f64() < 1e-24, "c(e1e0) off by {}", r10);
        let tol = Float::with_val(192, 1e-20);
        assert!(d.body().is_grouplike(&tol).unwrap());
    }

    #[test]
    fn stuffle_identity_residuals() {
        let level = lvl(1);
        let sigma = Embedding::standard(level);
        let cfg = cfg_digits(192, 25);
        let d = dch(level, 5, &sigma, &cfg).unwrap();
        for (n, m) in [(2u32, 2u32), (2, 3), (3, 2)] {
            let r = stuffle_check(n, m, &d).unwrap();
            assert!(r.to_f64() < 1e-15, "stuffle ({n},{m}) residual {}", r);
        }
        let a = stuffle_check(2, 3, &d).unwrap();
        let b = stuffle_check(3, 2, &d).unwrap();
        let diff = (a - b).abs();
        assert!(diff.to_f64() < 1e-25);
    }

    #[test]
    fn oracle_agrees_with_series_evaluator() {
        let level = lvl(1);
        let sigma = Embedding::standard(level);
        let cfg = cfg_digits(128, 15);
        let w = crate::alphabet::parse_word("0.1", level).unwrap();
        let idx = MultiIndex::from_word(&w, level).unwrap();
        let v = mpl(&idx, &sigma, &cfg).unwrap();
        let ((re, im), _) = quadrature_oracle(&w, &sigma, 1e-9).unwrap();
        assert!((v.value.re().to_f64() - re).abs() < 1e-8);
        assert!((v.value.im().to_f64() - im).abs() < 1e-8);
    }

    #[test]
    fn level_three_values_match_oracle() {
        // third roots of unity exercise genuinely complex frequencies
        let level = lvl(3);
        let sigma = Embedding::standard(level);
        let cfg = cfg_digits(160, 20);
        for text in ["w^1", "w^2", "0.w^1", "w^2.w^1", "0.w^2"] {
            let w = crate::alphabet::parse_word(text, level).unwrap();
            let idx = MultiIndex::from_word(&w, level).unwrap();
            let v = mpl(&idx, &sigma, &cfg).unwrap();
            let ((re, im), _) = quadrature_oracle(&w, &sigma, 1e-9).unwrap();
            let d = ((v.value.re().to_f64() - re).powi(2)
                + (v.value.im().to_f64() - im).powi(2))
            .sqrt();
            assert!(d < 1e-8, "{text}: evaluator vs oracle differ by {d:e}");
        }
        // single-letter closed form: c(e_ζ) = log(1 − σ(ζ)⁻¹)
        let idx = MultiIndex::new(level, vec![1], vec![1]).unwrap();
        let v = mpl(&idx, &sigma, &cfg).unwrap().value;
        let bits = 160;
        let zeta_inv = crate::cfloat::root_of_unity(-1, 3, bits);
        let mut arg = CFloat::from_i64(1, bits);
        arg.sub_assign(&zeta_inv);
        let modulus = arg.abs().ln();
        let angle_ratio = (arg.im() / arg.re()).complete(bits); // first quadrant here
        let angle = angle_ratio.atan();
        let dre = (v.re() - &modulus).complete(bits).abs();
        let dim = (v.im() - &angle).complete(bits).abs();
        assert!(dre.to_f64() < 1e-19 && dim.to_f64() < 1e-19);
    }

    #[test]
    fn weight_four_pi_power_family() {
        // the weight-4 convergent values are classical rational multiples of
        // π⁴: ζ(4) = π⁴/90, ζ(3,1) = π⁴/360, ζ(2,2) = π⁴/120,
        // ζ(2,1,1) = π⁴/90; signs follow the depth parity
        let bits = 224;
        let level = lvl(1);
        let sigma = Embedding::standard(level);
        let cfg = cfg_digits(bits, 40);
        let pi4 = Float::with_val(bits, rug::float::Constant::Pi).pow(4u32);
        let cases: [(Vec<u32>, i64, i64); 4] = [
            (vec![4], -1, 90),
            (vec![3, 1], 1, 360),
            (vec![2, 2], 1, 120),
            (vec![2, 1, 1], -1, 90),
        ];
        for (s, sign, denom) in cases {
            let m = s.len();
            let idx = MultiIndex::new(level, s.clone(), vec![0; m]).unwrap();
            let v = mpl(&idx, &sigma, &cfg).unwrap();
            let expect = (&pi4 * &Float::with_val(bits, sign)).complete(bits)
                / Float::with_val(bits, denom);
            let diff = (v.value.re() - &expect).complete(bits).abs();
            assert!(diff.to_f64() < 1e-38, "index {s:?}: off by {}", diff);
        }
    }

    #[test]
    fn conjugate_embeddings_conjugate_the_coefficients() {
        // swapping σ(ζ) = i for σ(ζ) = −i conjugates every value, because
        // the summand coefficients are real
        let level = lvl(4);
        let cfg = cfg_digits(192, 25);
        let sigma1 = Embedding::new(level, 1).unwrap();
        let sigma3 = Embedding::new(level, 3).unwrap();
        for (s, zetas) in [(vec![1], vec![1i64]), (vec![2, 1], vec![3, 2]), (vec![1, 1], vec![2, 1])]
        {
            let idx = MultiIndex::new(level, s, zetas).unwrap();
            let a = mpl(&idx, &sigma1, &cfg).unwrap().value;
            let b = mpl(&idx, &sigma3, &cfg).unwrap().value;
            let mut diff = a.conj();
            diff.sub_assign(&b);
            assert!(diff.abs().to_f64() < 1e-24, "index not conjugated: {}", diff.abs());
        }
    }
}

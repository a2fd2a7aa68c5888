//! Empirical discovery of Q-linear relations among numeric coefficients,
//! weight by weight: LLL-based integer relation detection, greedy Q-rank
//! estimation, and comparison against the dimension bounds.
//!
//! Relations are sought isobarically — one weight at a time — because every
//! polynomial relation among the coefficients splits into isobaric pieces.
//! A cross-weight scan exists purely as a diagnostic and is expected to
//! find nothing at desk precision.

mod lll;

use rug::ops::{CompleteRound, Pow};
use rug::{Complete, Float, Integer};

use crate::alphabet::Word;
use crate::dims::BoundTable;
use crate::error::Error;
use crate::ihara::GroupElement;
use crate::series::keys_of_weight;

pub use lll::lll_reduce;

/// A verified integer relation Σ vᵢ·xᵢ ≈ 0 among weight-w coefficients.
#[derive(Clone, Debug)]
pub struct RelationCandidate {
    pub weight: usize,
    pub words: Vec<Word>,
    /// coprime, not all zero, first nonzero positive
    pub coefficients: Vec<Integer>,
    /// residual at the verification precision, decimal text
    pub residual: String,
    pub verified_at_bits: u32,
}

/// Per-weight scan outcome.
#[derive(Clone, Debug)]
pub struct RankReport {
    pub weight: usize,
    pub num_coefficients: usize,
    pub estimated_rank: usize,
    pub bound_d_n: Integer,
    /// whether estimated_rank ≤ D_n (flagged, never asserted: the bound is
    /// a theorem, so a violation indicates a numeric or implementation bug)
    pub within_bound: bool,
    pub relations: Vec<RelationCandidate>,
}

fn required_prec_bits(digits: u32) -> u32 {
    (digits as f64 * 3.33).ceil() as u32 + 16
}

/// LLL-based detector over one or more stacked value columns (a relation
/// must annihilate every column simultaneously; complex data passes its
/// real and imaginary parts as two columns).
///
/// Returns coprime integers v with |Σ vᵢxᵢ| < 10^{−digits/2} per column and
/// max |vᵢ| ≤ coeff_bound, or None. The caller re-verifies any returned
/// relation at higher precision before acceptance.
pub fn find_integer_relation_cols(
    cols: &[Vec<Float>],
    digits: u32,
    coeff_bound: u64,
) -> Result<Option<Vec<Integer>>, Error> {
    let ncols = cols.len();
    if ncols == 0 || cols[0].is_empty() {
        return Ok(None);
    }
    let n = cols[0].len();
    let need = required_prec_bits(digits);
    for col in cols {
        if col.len() != n {
            return Err(Error::InvalidArgument("ragged relation columns".into()));
        }
        for x in col {
            if x.prec() < need {
                return Err(Error::InsufficientPrecision {
                    requested: digits,
                    available: (x.prec() as f64 / 3.33) as u32,
                });
            }
        }
    }
    let scale = Integer::from(10).pow(digits);
    let mut basis: Vec<Vec<Integer>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![Integer::new(); n + ncols];
        row[i] = Integer::from(1);
        for (c, col) in cols.iter().enumerate() {
            let scaled = (&col[i] * &Float::with_val(col[i].prec(), &scale)).complete(col[i].prec());
            row[n + c] = scaled
                .round()
                .to_integer()
                .ok_or_else(|| Error::InvalidArgument("non-finite value in relation input".into()))?;
        }
        basis.push(row);
    }
    lll_reduce(&mut basis, (99, 100));

    let threshold = {
        let p = cols[0][0].prec();
        Float::with_val(p, 10).pow(-(digits as i32) / 2)
    };
    for row in &basis {
        let coeffs = &row[..n];
        if coeffs.iter().all(|c| *c == 0) {
            continue;
        }
        if coeffs.iter().any(|c| c.clone().abs() > coeff_bound) {
            continue;
        }
        let mut ok = true;
        for col in cols {
            let p = col[0].prec();
            let mut acc = Float::with_val(p, 0);
            for (c, x) in coeffs.iter().zip(col) {
                acc += Float::with_val(p, c) * x;
            }
            if acc.abs() >= threshold {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(normalize_relation(coeffs)));
        }
    }
    Ok(None)
}

/// Single-column convenience form.
pub fn find_integer_relation(
    xs: &[Float],
    digits: u32,
    coeff_bound: u64,
) -> Result<Option<Vec<Integer>>, Error> {
    find_integer_relation_cols(&[xs.to_vec()], digits, coeff_bound)
}

fn normalize_relation(v: &[Integer]) -> Vec<Integer> {
    let mut g = Integer::new();
    for x in v {
        g = g.gcd(x);
    }
    if g == 0 {
        return v.to_vec();
    }
    let mut out: Vec<Integer> = v.iter().map(|x| (x / &g).complete()).collect();
    if let Some(first) = out.iter().find(|x| **x != 0) {
        if *first < 0 {
            for x in &mut out {
                *x = (-&*x).complete();
            }
        }
    }
    out
}

fn residual_of(cols: &[Vec<Float>], v: &[Integer]) -> Float {
    let p = cols[0][0].prec();
    let mut worst = Float::with_val(p, 0);
    for col in cols {
        let mut acc = Float::with_val(p, 0);
        for (c, x) in v.iter().zip(col) {
            acc += Float::with_val(p, c) * x;
        }
        let a = acc.abs();
        if a > worst {
            worst = a;
        }
    }
    worst
}

/// Extract the value columns of one weight from a complex series: the real
/// parts, with the imaginary parts stacked as a second column for N ≥ 3.
fn coefficient_columns(
    d: &GroupElement,
    weight: usize,
) -> Result<(Vec<Word>, Vec<Vec<Float>>), Error> {
    let body = d.body();
    let level = body.level();
    let bits = body
        .ring()
        .bits()
        .ok_or_else(|| Error::RingMismatch("relation scan needs the complex ring".into()))?;
    let mut words = Vec::new();
    let mut re = Vec::new();
    let mut im = Vec::new();
    for key in keys_of_weight(level, weight as u32) {
        let c = body.coeff_key(&key);
        let cf = c.as_complex().cloned().unwrap_or(crate::cfloat::CFloat::zero(bits));
        words.push(key.unpack(level));
        re.push(cf.re().clone());
        im.push(cf.im().clone());
    }
    let cols = if level.n() >= 3 { vec![re, im] } else { vec![re] };
    Ok((words, cols))
}

fn select(cols: &[Vec<Float>], idx: &[usize]) -> Vec<Vec<Float>> {
    cols.iter()
        .map(|col| idx.iter().map(|&i| col[i].clone()).collect())
        .collect()
}

/// Greedy isobaric scan: build a maximal relation-free subset of the
/// weight-w coefficients (the estimated Q-rank), recording every relation
/// that survives re-verification on the higher-precision series `d_hi`.
pub fn weight_scan(
    d: &GroupElement,
    d_hi: &GroupElement,
    weight: usize,
    bounds: &BoundTable,
    digits: u32,
    coeff_bound: u64,
) -> Result<RankReport, Error> {
    if weight == 0 {
        return Err(Error::InvalidArgument("weight scan needs weight >= 1".into()));
    }
    if weight > d.body().trunc() || weight > d_hi.body().trunc() {
        return Err(Error::WeightOverflow { weight, trunc: d.body().trunc() });
    }
    if weight >= bounds.coeffs.len() {
        return Err(Error::InvalidArgument("bound table too short for this weight".into()));
    }
    let (words, cols_lo) = coefficient_columns(d, weight)?;
    let (_, cols_hi) = coefficient_columns(d_hi, weight)?;
    let hi_bits = d_hi.body().ring().bits().unwrap_or(64);

    let p = cols_hi[0][0].prec();
    let verify_threshold = Float::with_val(p, 10).pow(-((digits / 2 + 10) as i32));

    let mut independent: Vec<usize> = Vec::new();
    let mut relations = Vec::new();
    for i in 0..words.len() {
        let mut cand = independent.clone();
        cand.push(i);
        let lo = select(&cols_lo, &cand);
        match find_integer_relation_cols(&lo, digits, coeff_bound)? {
            Some(v) => {
                let hi = select(&cols_hi, &cand);
                let r_hi = residual_of(&hi, &v);
                if r_hi < verify_threshold {
                    relations.push(RelationCandidate {
                        weight,
                        words: cand.iter().map(|&j| words[j].clone()).collect(),
                        coefficients: v,
                        residual: r_hi.to_string_radix(10, Some(6)),
                        verified_at_bits: hi_bits,
                    });
                } else {
                    // discovery-precision artifact: keep the value as independent
                    independent.push(i);
                }
            }
            None => independent.push(i),
        }
    }

    let estimated_rank = independent.len();
    let bound_d_n = bounds.coeffs[weight].clone();
    let within_bound = estimated_rank as u64 <= bound_d_n;
    Ok(RankReport {
        weight,
        num_coefficients: words.len(),
        estimated_rank,
        bound_d_n,
        within_bound,
        relations,
    })
}

/// Diagnostic: mix the independent representatives of two different weights
/// and look for a joint relation. Isobaricity predicts none.
pub fn cross_weight_diagnostic(
    d: &GroupElement,
    d_hi: &GroupElement,
    weight_a: usize,
    weight_b: usize,
    bounds: &BoundTable,
    digits: u32,
    coeff_bound: u64,
) -> Result<Option<RelationCandidate>, Error> {
    let report_a = weight_scan(d, d_hi, weight_a, bounds, digits, coeff_bound)?;
    let report_b = weight_scan(d, d_hi, weight_b, bounds, digits, coeff_bound)?;
    let (words_a, cols_a) = coefficient_columns(d, weight_a)?;
    let (words_b, cols_b) = coefficient_columns(d, weight_b)?;
    let (_, cols_a_hi) = coefficient_columns(d_hi, weight_a)?;
    let (_, cols_b_hi) = coefficient_columns(d_hi, weight_b)?;

    // indices of the independent representatives inside each weight block
    let indep = |report: &RankReport, words: &[Word]| -> Vec<usize> {
        let related: std::collections::BTreeSet<String> = report
            .relations
            .iter()
            .filter_map(|r| r.words.last().map(crate::alphabet::format_word))
            .collect();
        (0..words.len())
            .filter(|&i| !related.contains(&crate::alphabet::format_word(&words[i])))
            .collect()
    };
    let ia = indep(&report_a, &words_a);
    let ib = indep(&report_b, &words_b);
    if ia.is_empty() || ib.is_empty() {
        return Ok(None);
    }

    let ncols = cols_a.len().max(cols_b.len());
    let pad = |cols: &[Vec<Float>], idx: &[usize]| -> Vec<Vec<Float>> {
        let mut out = select(cols, idx);
        while out.len() < ncols {
            let p = out[0][0].prec();
            out.push(vec![Float::with_val(p, 0); idx.len()]);
        }
        out
    };
    let mut joint: Vec<Vec<Float>> = pad(&cols_a, &ia);
    let jb = pad(&cols_b, &ib);
    for (col, extra) in joint.iter_mut().zip(jb) {
        col.extend(extra);
    }
    let mut joint_hi = pad(&cols_a_hi, &ia);
    let jb_hi = pad(&cols_b_hi, &ib);
    for (col, extra) in joint_hi.iter_mut().zip(jb_hi) {
        col.extend(extra);
    }
    let mut words: Vec<Word> = ia.iter().map(|&i| words_a[i].clone()).collect();
    words.extend(ib.iter().map(|&i| words_b[i].clone()));

    if let Some(v) = find_integer_relation_cols(&joint, digits, coeff_bound)? {
        let p = joint_hi[0][0].prec();
        let r_hi = residual_of(&joint_hi, &v);
        let verify_threshold = Float::with_val(p, 10).pow(-((digits / 2 + 10) as i32));
        if r_hi < verify_threshold {
            return Ok(Some(RelationCandidate {
                weight: 0,
                words,
                coefficients: v,
                residual: r_hi.to_string_radix(10, Some(6)),
                verified_at_bits: d_hi.body().ring().bits().unwrap_or(64),
            }));
        }
    }
    Ok(None)
}

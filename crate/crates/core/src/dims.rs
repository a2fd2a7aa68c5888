//! Dimension-bound generating series: the free-generator series f(t), and
//! per-weight upper bounds D_n for the Q-span of weight-n coefficients.
//!
//! Two sources are exposed. `ProofDerived` expands
//! 1/(1−t^{d₀}) · 1/(1−f(t)) with d₀ = 2 for N ≤ 2 and 1 otherwise, f being
//! the generator series of the relevant graded free associative algebra.
//! `Printed` expands the literal closed forms. The two agree for N = 1, 2;
//! for N ≥ 3 the printed degree-one coefficient is smaller than what the
//! recipe yields (φ(N)/2 + ν − 1 versus φ(N)/2 + ν), and both tables are
//! reported rather than silently choosing one.

use rug::{Complete, Integer};

use crate::error::Error;
use crate::lie::witt_dim;

/// Which construction a bound table came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundSource {
    ProofDerived,
    Printed,
}

/// Per-weight dimension bounds D_n together with the level invariants they
/// were computed from.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundTable {
    pub level: u32,
    /// number of distinct prime factors of N
    pub nu: u32,
    /// Euler totient φ(N)
    pub phi: u32,
    /// degree of the extra polynomial generator t₀ (2 for N ≤ 2, else 1)
    pub t0_degree: u32,
    /// D_0 .. D_maxw
    pub coeffs: Vec<Integer>,
    pub source: BoundSource,
}

pub fn euler_phi(n: u32) -> u32 {
    let mut n = u64::from(n);
    let mut result = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as u32
}

pub fn num_prime_factors(n: u32) -> u32 {
    let mut n = u64::from(n);
    let mut count = 0;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            count += 1;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        count += 1;
    }
    count
}

/// Coefficients through degree maxw of the free-generator series f(t):
/// t³/(1−t²) for N=1, t/(1−t²) for N=2, and
/// (φ(N)/2)·t/(1−t) + (ν−1)·t for N ≥ 3.
pub fn generator_series(level: u32, maxw: usize) -> Result<Vec<Integer>, Error> {
    if level == 0 {
        return Err(Error::InvalidArgument("level N must be >= 1".into()));
    }
    let mut f = vec![Integer::new(); maxw + 1];
    match level {
        1 => {
            let mut d = 3;
            while d <= maxw {
                f[d] = Integer::from(1);
                d += 2;
            }
        }
        2 => {
            let mut d = 1;
            while d <= maxw {
                f[d] = Integer::from(1);
                d += 2;
            }
        }
        n => {
            let half_phi = euler_phi(n) / 2;
            let nu = num_prime_factors(n);
            if maxw >= 1 {
                f[1] = Integer::from(half_phi + nu - 1);
            }
            for slot in f.iter_mut().take(maxw + 1).skip(2) {
                *slot = Integer::from(half_phi);
            }
        }
    }
    Ok(f)
}

/// 1/(1−g) for a series g with g(0) = 0, through degree maxw.
fn geometric_inverse(g: &[Integer], maxw: usize) -> Vec<Integer> {
    debug_assert!(g[0] == 0);
    let mut h = vec![Integer::new(); maxw + 1];
    h[0] = Integer::from(1);
    for n in 1..=maxw {
        let mut acc = Integer::new();
        for j in 1..=n {
            acc += (&g[j] * &h[n - j]).complete();
        }
        h[n] = acc;
    }
    h
}

fn mul_series(a: &[Integer], b: &[Integer], maxw: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); maxw + 1];
    for (i, ai) in a.iter().enumerate().take(maxw + 1) {
        if *ai == 0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(maxw + 1 - i) {
            out[i + j] += (ai * bj).complete();
        }
    }
    out
}

/// 1/d(t) for a polynomial with constant term 1, through degree maxw.
fn poly_inverse(d: &[i64], maxw: usize) -> Vec<Integer> {
    debug_assert!(d[0] == 1);
    let mut h = vec![Integer::new(); maxw + 1];
    h[0] = Integer::from(1);
    for n in 1..=maxw {
        let mut acc = Integer::new();
        for (j, dj) in d.iter().enumerate().skip(1) {
            if j > n {
                break;
            }
            acc -= &h[n - j] * Integer::from(*dj);
        }
        h[n] = acc;
    }
    h
}

/// The bound table D_0..D_maxw for the chosen source.
pub fn bound_table(level: u32, maxw: usize, source: BoundSource) -> Result<BoundTable, Error> {
    if level == 0 {
        return Err(Error::InvalidArgument("level N must be >= 1".into()));
    }
    let phi = euler_phi(level);
    let nu = num_prime_factors(level);
    let t0_degree = if level <= 2 { 2 } else { 1 };
    let coeffs = match source {
        BoundSource::ProofDerived => {
            let f = generator_series(level, maxw)?;
            let enveloping = geometric_inverse(&f, maxw);
            let mut t0_poly = vec![Integer::new(); maxw + 1];
            t0_poly[0] = Integer::from(1);
            // 1/(1−t^{d0}) = Σ t^{k·d0}
            let mut d = 0;
            while d <= maxw {
                t0_poly[d] = Integer::from(1);
                d += t0_degree as usize;
            }
            mul_series(&t0_poly, &enveloping, maxw)
        }
        BoundSource::Printed => match level {
            1 => poly_inverse(&[1, 0, -1, -1], maxw),
            2 => poly_inverse(&[1, -1, -1], maxw),
            n => {
                let a = i64::from(euler_phi(n) / 2 + (num_prime_factors(n) - 1));
                let b = i64::from(num_prime_factors(n)) - 1;
                poly_inverse(&[1, -a, b], maxw)
            }
        },
    };
    debug_assert!(coeffs[0] == 1);
    debug_assert!(coeffs.iter().all(|c| *c >= 0));
    Ok(BoundTable { level, nu, phi, t0_degree, coeffs, source })
}

/// Graded dimensions of the ambient free Lie algebra on N+1 letters
/// (index 0 holds 0), for context columns in reports.
pub fn lie_v_dims(level: u32, maxw: usize) -> Vec<u64> {
    let mut out = vec![0u64; maxw + 1];
    for (n, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = witt_dim(u64::from(level) + 1, n as u64);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn generator_series_examples() {
        assert_eq!(generator_series(1, 8).unwrap(), ints(&[0, 0, 0, 1, 0, 1, 0, 1, 0]));
        assert_eq!(generator_series(2, 6).unwrap(), ints(&[0, 1, 0, 1, 0, 1, 0]));
        // N=6: φ=2, ν=2 → degree-1 coefficient φ/2+ν−1 = 2, then φ/2 = 1
        assert_eq!(generator_series(6, 4).unwrap(), ints(&[0, 2, 1, 1, 1]));
    }

    #[test]
    fn proof_derived_tables() {
        let t = bound_table(1, 11, BoundSource::ProofDerived).unwrap();
        assert_eq!(t.coeffs, ints(&[1, 0, 1, 1, 1, 2, 2, 3, 4, 5, 7, 9]));
        assert_eq!((t.phi, t.nu, t.t0_degree), (1, 0, 2));

        let t2 = bound_table(2, 10, BoundSource::ProofDerived).unwrap();
        assert_eq!(t2.coeffs, ints(&[1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89]));

        let t3 = bound_table(3, 8, BoundSource::ProofDerived).unwrap();
        assert_eq!(t3.coeffs, ints(&[1, 2, 4, 8, 16, 32, 64, 128, 256]));
    }

    #[test]
    fn printed_tables() {
        let t = bound_table(1, 11, BoundSource::Printed).unwrap();
        assert_eq!(t.coeffs, ints(&[1, 0, 1, 1, 1, 2, 2, 3, 4, 5, 7, 9]));
        let t3 = bound_table(3, 6, BoundSource::Printed).unwrap();
        assert_eq!(t3.coeffs, ints(&[1, 1, 1, 1, 1, 1, 1]));
    }

    #[test]
    fn sources_agree_for_small_levels_through_40() {
        for level in [1u32, 2] {
            let a = bound_table(level, 40, BoundSource::ProofDerived).unwrap();
            let b = bound_table(level, 40, BoundSource::Printed).unwrap();
            assert_eq!(a.coeffs, b.coeffs, "N={level}");
        }
    }

    #[test]
    fn degree_one_bound_for_higher_levels() {
        // proof-derived D_1 = φ(N)/2 + ν = d_1 + 1
        for level in [3u32, 4, 5, 6, 8, 12] {
            let t = bound_table(level, 2, BoundSource::ProofDerived).unwrap();
            let expect = euler_phi(level) / 2 + num_prime_factors(level);
            assert_eq!(t.coeffs[1], Integer::from(expect), "N={level}");
        }
    }

    #[test]
    fn lie_dims_examples() {
        let d1 = lie_v_dims(1, 4);
        assert_eq!(d1, vec![0, 2, 1, 2, 3]);
        assert_eq!(lie_v_dims(3, 1)[1], 4);
    }

    #[test]
    fn totient_and_omega() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(2), 1);
        assert_eq!(euler_phi(6), 2);
        assert_eq!(euler_phi(8), 4);
        assert_eq!(euler_phi(9), 6);
        assert_eq!(num_prime_factors(1), 0);
        assert_eq!(num_prime_factors(6), 2);
        assert_eq!(num_prime_factors(8), 1);
        assert_eq!(num_prime_factors(12), 2);
    }
}

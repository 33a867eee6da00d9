//! Exact ranks over the rationals.
//!
//! Two independent routines: fraction-free (Bareiss) elimination over the
//! integers, and a multi-modular elimination whose prime count is fixed by a
//! Hadamard bound so the result is exact rather than probabilistic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::matrix::IntegerMatrix;
use crate::error::{Error, Result};

/// Rank over Q by fraction-free Gaussian elimination.
pub fn rank_bareiss(m: &IntegerMatrix) -> usize {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.to_rows();
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        // Shortest nonzero pivot keeps intermediate minors small in practice.
        let pivot = (rank..rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| a[i][c].bits());
        let Some(p) = pivot else { continue };
        a.swap(rank, p);
        let (top, bottom) = a.split_at_mut(rank + 1);
        let prow = &top[rank];
        let pv = &prow[c];
        for row in bottom.iter_mut() {
            let f = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let mut v = pv * &row[j];
                if !f.is_zero() && !prow[j].is_zero() {
                    v -= &f * &prow[j];
                }
                if !v.is_zero() {
                    v /= &prev;
                }
                row[j] = v;
            }
        }
        prev = top[rank][c].clone();
        rank += 1;
    }
    rank
}

const PRIME_FLOOR_BITS: u32 = 61;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes just below 2^62, descending; all exceed 2^61.
fn large_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime_u64(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
}

fn rank_mod_p(m: &IntegerMatrix, p: u64) -> usize {
    let pb = BigInt::from(p);
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<u64>> = (0..rows)
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| x.mod_floor(&pb).to_u64().expect("reduced mod p"))
                .collect()
        })
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = pow_mod(a[rank][c], p - 2, p);
        let (top, bottom) = a.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in bottom.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = mul_mod(row[c], inv, p);
            for j in c..cols {
                if prow[j] != 0 {
                    let t = mul_mod(f, prow[j], p);
                    row[j] = if row[j] >= t { row[j] - t } else { row[j] + p - t };
                }
            }
        }
        rank += 1;
    }
    rank
}

/// log₂ of the Hadamard bound on every square minor: the product of the
/// `min(rows, cols)` largest nonzero column norms.
fn hadamard_log2(m: &IntegerMatrix) -> f64 {
    let mut norms: Vec<f64> = (0..m.cols())
        .map(|j| {
            let sq: BigInt = (0..m.rows()).map(|i| &m[(i, j)] * &m[(i, j)]).sum();
            if sq.is_zero() {
                0.0
            } else {
                // bits() overestimates log₂ by < 1, which is the safe direction.
                sq.bits() as f64 / 2.0
            }
        })
        .filter(|&x| x > 0.0)
        .collect();
    norms.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    norms.iter().take(m.rows().min(m.cols())).sum()
}

/// Rank over Q from ranks modulo enough primes above 2^61 that at least one
/// of them cannot divide the gcd of the maximal nonvanishing minors.
pub fn rank_multimodular(m: &IntegerMatrix) -> usize {
    let cap = m.rows().min(m.cols());
    if cap == 0 {
        return 0;
    }
    let needed = (hadamard_log2(m) / f64::from(PRIME_FLOOR_BITS)).floor() as usize + 1;
    let mut best = 0;
    for p in large_primes(needed) {
        best = best.max(rank_mod_p(m, p));
        if best == cap {
            break;
        }
    }
    best
}

fn check_square_family(mats: &[IntegerMatrix]) -> Result<usize> {
    let Some(first) = mats.first() else {
        return Err(Error::Invalid("empty matrix family".into()));
    };
    let n = first.rows();
    for m in mats {
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n}x{n}, found {}x{}",
                m.rows(),
                m.cols()
            )));
        }
    }
    Ok(n)
}

/// Dimension of the rational coinvariants `V / span{(Aᵢ − I)v}`.
pub fn coinvariant_rank(mats: &[IntegerMatrix]) -> Result<usize> {
    let n = check_square_family(mats)?;
    let blocks: Vec<IntegerMatrix> = mats.iter().map(IntegerMatrix::minus_identity).collect();
    let stacked = IntegerMatrix::hstack(n, &blocks)?;
    Ok(n - rank_bareiss(&stacked))
}

/// Dimension of the common fixed space `∩ ker(Aᵢ − I)` over Q.
pub fn invariant_rank(mats: &[IntegerMatrix]) -> Result<usize> {
    let n = check_square_family(mats)?;
    let blocks: Vec<IntegerMatrix> = mats.iter().map(IntegerMatrix::minus_identity).collect();
    let stacked = IntegerMatrix::vstack(n, &blocks)?;
    Ok(n - rank_multimodular(&stacked))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_agree_on_small_cases() {
        let cases = [
            IntegerMatrix::from_rows(&[[1, 2], [2, 4]]),
            IntegerMatrix::from_rows(&[[0, 0, 1], [0, 0, 2], [1, 1, 1]]),
            IntegerMatrix::zeros(3, 2),
            IntegerMatrix::identity(5),
            IntegerMatrix::from_rows(&[[6, 10, 15]]),
        ];
        let expect = [1, 2, 0, 5, 1];
        for (m, e) in cases.iter().zip(expect) {
            assert_eq!(rank_bareiss(m), e, "{m:?}");
            assert_eq!(rank_multimodular(m), e, "{m:?}");
        }
    }

    #[test]
    fn rank_with_huge_entries() {
        // Rank 1 matrix whose entries exceed any single prime.
        let big: BigInt = BigInt::from(1u64 << 62) * BigInt::from(1u64 << 62) + 1;
        let m = IntegerMatrix::from_entries(
            2,
            2,
            vec![big.clone(), big.clone() * 3, big.clone() * 2, big * 6],
        )
        .unwrap();
        assert_eq!(rank_bareiss(&m), 1);
        assert_eq!(rank_multimodular(&m), 1);
    }

    #[test]
    fn coinvariant_examples() {
        let minus = IntegerMatrix::identity(4).neg();
        assert_eq!(coinvariant_rank(&[minus.clone()]).unwrap(), 0);
        assert_eq!(invariant_rank(&[minus]).unwrap(), 0);
        assert_eq!(coinvariant_rank(&[IntegerMatrix::identity(4)]).unwrap(), 4);
        assert_eq!(invariant_rank(&[IntegerMatrix::identity(6)]).unwrap(), 6);
    }

    #[test]
    fn family_size_mismatch() {
        let r = coinvariant_rank(&[IntegerMatrix::identity(2), IntegerMatrix::identity(3)]);
        assert!(matches!(r, Err(Error::DimensionMismatch(_))));
        assert!(invariant_rank(&[IntegerMatrix::zeros(2, 3)]).is_err());
    }

    #[test]
    fn primes_are_prime() {
        let ps = large_primes(3);
        assert!(ps.iter().all(|&p| p > 1 << 61 && is_prime_u64(p)));
        assert!(!is_prime_u64(561));
        assert!(is_prime_u64(1_000_000_007));
    }
}

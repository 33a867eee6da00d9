//! Integer polynomials: characteristic polynomials and cyclotomic factors.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::IntegerMatrix;

/// Coefficients in increasing degree; no trailing zeros (zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(pub Vec<BigInt>);

impl IntPoly {
    pub fn from_i64(c: &[i64]) -> Self {
        let mut p = Self(c.iter().map(|&x| BigInt::from(x)).collect());
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.0.last().is_some_and(One::is_one)
    }

    /// Exact division by a monic divisor; `None` if the remainder is nonzero.
    pub fn div_exact_monic(&self, divisor: &IntPoly) -> Option<IntPoly> {
        assert!(divisor.is_monic());
        let dd = divisor.degree().expect("nonzero divisor");
        let Some(nd) = self.degree() else {
            return Some(IntPoly(Vec::new()));
        };
        if nd < dd {
            return None;
        }
        let mut rem = self.0.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.0.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
            quot[k] = c;
        }
        if rem.iter().all(Zero::is_zero) {
            let mut q = IntPoly(quot);
            q.trim();
            Some(q)
        } else {
            None
        }
    }
}

/// Characteristic polynomial `det(xI − A)` by the Faddeev–LeVerrier
/// recursion; all divisions are exact over the integers.
pub fn characteristic_polynomial(a: &IntegerMatrix) -> IntPoly {
    assert!(a.is_square());
    let n = a.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = IntegerMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1} I
        let mut next = a.mul(&m).expect("square");
        for i in 0..n {
            next[(i, i)] += &coeffs[n - k + 1];
        }
        m = next;
        let am = a.mul(&m).expect("square");
        let trace: BigInt = (0..n).map(|i| am[(i, i)].clone()).sum();
        let (q, r) = (-trace).div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        coeffs[n - k] = q;
    }
    IntPoly(coeffs)
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
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
    result
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `p(x^e)`
fn substitute_power(p: &IntPoly, e: usize) -> IntPoly {
    let deg = p.degree().expect("nonzero");
    let mut c = vec![BigInt::zero(); deg * e + 1];
    for (i, a) in p.0.iter().enumerate() {
        c[i * e] = a.clone();
    }
    IntPoly(c)
}

/// Φ_k via Φ_{np}(x) = Φ_n(x^p)/Φ_n(x) on the radical, then Φ_k(x) = Φ_rad(x^{k/rad}).
pub fn cyclotomic(k: u64) -> IntPoly {
    assert!(k >= 1);
    let mut phi = IntPoly::from_i64(&[-1, 1]);
    let mut rad = 1u64;
    for p in prime_factors(k) {
        let lifted = substitute_power(&phi, p as usize);
        phi = lifted.div_exact_monic(&phi).expect("cyclotomic recurrence");
        rad *= p;
    }
    if k == rad {
        phi
    } else {
        substitute_power(&phi, (k / rad) as usize)
    }
}

/// Every k with φ(k) ≤ `max_degree`, with its cyclotomic polynomial Φ_k.
///
/// φ(k) ≥ √(k/2) bounds the search at k ≤ 2·max_degree².
pub fn cyclotomic_table(max_degree: usize) -> BTreeMap<u64, IntPoly> {
    let bound = 2 * (max_degree as u64).pow(2) + 2;
    (1..=bound)
        .filter(|&k| euler_phi(k) as usize <= max_degree)
        .map(|k| (k, cyclotomic(k)))
        .collect()
}

/// Shared table covering at least `max_degree`; grown on demand.
fn cached_cyclotomics(max_degree: usize) -> Arc<BTreeMap<u64, IntPoly>> {
    static CACHE: OnceLock<Mutex<(usize, Arc<BTreeMap<u64, IntPoly>>)>> = OnceLock::new();
    let cell = CACHE.get_or_init(|| Mutex::new((0, Arc::new(BTreeMap::new()))));
    let mut guard = cell.lock().expect("cyclotomic cache poisoned");
    if guard.0 < max_degree {
        *guard = (max_degree, Arc::new(cyclotomic_table(max_degree)));
    }
    Arc::clone(&guard.1)
}

/// Result of removing cyclotomic factors from a monic polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicSplit {
    /// k ↦ multiplicity of Φ_k.
    pub factors: BTreeMap<u64, usize>,
    /// What remains; degree 0 means the input was a product of cyclotomics.
    pub residual: IntPoly,
}

impl CyclotomicSplit {
    pub fn is_fully_cyclotomic(&self) -> bool {
        self.residual.degree() == Some(0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.values().all(|&m| m == 1)
    }

    /// lcm of the orders of the roots of unity present.
    pub fn root_order_lcm(&self) -> u64 {
        self.factors.keys().fold(1, |acc, &k| acc.lcm(&k))
    }
}

pub fn split_cyclotomic(p: &IntPoly) -> CyclotomicSplit {
    assert!(p.is_monic(), "monic input required");
    let deg = p.degree().unwrap_or(0);
    let mut residual = p.clone();
    let mut factors = BTreeMap::new();
    if deg == 0 {
        return CyclotomicSplit { factors, residual };
    }
    for (&k, phi) in cached_cyclotomics(deg).iter() {
        if euler_phi(k) as usize > deg {
            continue;
        }
        while let Some(q) = residual.div_exact_monic(phi) {
            residual = q;
            *factors.entry(k).or_insert(0) += 1;
        }
        if residual.degree() == Some(0) {
            break;
        }
    }
    CyclotomicSplit { factors, residual }
}

/// Monic integer polynomial from rational Krylov coefficients, if integral.
pub fn monic_from_rational(coeffs_low: &[num_rational::BigRational]) -> Option<IntPoly> {
    let mut c: Vec<BigInt> = Vec::with_capacity(coeffs_low.len() + 1);
    for q in coeffs_low {
        if !q.is_integer() {
            return None;
        }
        c.push(q.to_integer());
    }
    c.push(BigInt::one());
    Some(IntPoly(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_small() {
        let a = IntegerMatrix::from_rows(&[[2, 1], [1, 1]]);
        assert_eq!(characteristic_polynomial(&a), IntPoly::from_i64(&[1, -3, 1]));
        let r = IntegerMatrix::from_rows(&[[0, -1], [1, 0]]);
        assert_eq!(characteristic_polynomial(&r), IntPoly::from_i64(&[1, 0, 1]));
        let i3 = IntegerMatrix::identity(3);
        assert_eq!(characteristic_polynomial(&i3), IntPoly::from_i64(&[-1, 3, -3, 1]));
    }

    #[test]
    fn cyclotomic_polynomials() {
        let t = cyclotomic_table(4);
        assert_eq!(t[&1], IntPoly::from_i64(&[-1, 1]));
        assert_eq!(t[&2], IntPoly::from_i64(&[1, 1]));
        assert_eq!(t[&6], IntPoly::from_i64(&[1, -1, 1]));
        assert_eq!(t[&10], IntPoly::from_i64(&[1, -1, 1, -1, 1]));
        assert_eq!(t[&12], IntPoly::from_i64(&[1, 0, -1, 0, 1]));
        // φ(k) ≤ 4 ⇔ k ∈ {1,2,3,4,5,6,8,10,12}
        assert_eq!(t.keys().copied().collect::<Vec<_>>(), vec![1, 2, 3, 4, 5, 6, 8, 10, 12]);
    }

    #[test]
    fn split_detects_residual() {
        // (x−1)²(x²−3x+1)
        let p = IntPoly::from_i64(&[1, -5, 8, -5, 1]);
        let s = split_cyclotomic(&p);
        assert_eq!(s.factors.get(&1), Some(&2));
        assert_eq!(s.residual, IntPoly::from_i64(&[1, -3, 1]));
        assert!(!s.is_fully_cyclotomic());

        let q = IntPoly::from_i64(&[1, -1, 1, -1, 1]);
        let s = split_cyclotomic(&q);
        assert!(s.is_fully_cyclotomic() && s.is_squarefree());
        assert_eq!(s.root_order_lcm(), 10);
    }

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(10), 4);
        assert_eq!(euler_phi(14), 6);
        assert_eq!(euler_phi(97), 96);
    }
}

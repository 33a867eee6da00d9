use serde::{Deserialize, Serialize};

use super::matrix::IntegerMatrix;
use super::poly::{characteristic_polynomial, split_cyclotomic, IntPoly};

/// Why a matrix has infinite order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfiniteOrderCertificate {
    /// Characteristic polynomial keeps a factor with no root of unity among its roots.
    NonCyclotomicFactor { residual: Vec<String> },
    /// Every eigenvalue is a root of unity of order dividing `exponent`, yet
    /// `A^exponent ≠ I`, so `A^exponent` is a nontrivial unipotent.
    Unipotent { exponent: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixOrder {
    Finite(u64),
    Infinite(InfiniteOrderCertificate),
    Unknown,
}

fn poly_strings(p: &IntPoly) -> Vec<String> {
    p.0.iter().map(ToString::to_string).collect()
}

/// Multiplicative order of a square integer matrix, capped at `cap`.
///
/// A finite-order matrix has a characteristic polynomial that is a product
/// of cyclotomic factors; when it is, the order divides the lcm `L` of their
/// indices and the minimal divisor of `L` with `A^d = I` is the order.
pub fn matrix_order(a: &IntegerMatrix, cap: u64) -> MatrixOrder {
    assert!(a.is_square(), "matrix_order needs a square matrix");
    if a.is_identity() {
        return MatrixOrder::Finite(1);
    }
    let split = split_cyclotomic(&characteristic_polynomial(a));
    if !split.is_fully_cyclotomic() {
        return MatrixOrder::Infinite(InfiniteOrderCertificate::NonCyclotomicFactor {
            residual: poly_strings(&split.residual),
        });
    }
    let l = split.root_order_lcm();
    if !a.pow(l).is_identity() {
        return MatrixOrder::Infinite(InfiniteOrderCertificate::Unipotent { exponent: l });
    }
    let mut divisors: Vec<u64> = (1..=l).filter(|d| l % d == 0 && *d <= cap).collect();
    divisors.sort_unstable();
    for d in divisors {
        if a.pow(d).is_identity() {
            return MatrixOrder::Finite(d);
        }
    }
    MatrixOrder::Unknown
}

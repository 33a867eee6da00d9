//! Smith normal form over the integers.
//!
//! Pivoting picks the nonzero entry of smallest absolute value in the active
//! submatrix, ties broken by the lowest `(row, col)`. Row operations are
//! mirrored into `U` (and, on request, into `U⁻¹` as the inverse column
//! operation); column operations into `V`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
    /// Nonzero diagonal entries of `d`, each dividing the next.
    pub invariant_factors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

/// Finitely generated abelian group `Z^free_rank ⊕ ⊕ Z/tᵢ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    /// Entries > 1 in divisibility order.
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn has_torsion_divisible_by(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        self.torsion.iter().any(|t| t.is_multiple_of(&p))
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, t| acc * t)
    }

    /// Direct sum; the torsion chain is re-normalized.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut diag: Vec<BigInt> = self.torsion.clone();
        diag.extend(other.torsion.iter().cloned());
        let torsion = if diag.is_empty() {
            Vec::new()
        } else {
            let m = IntegerMatrix::diagonal(&diag);
            smith_invariant_factors(&m)
                .into_iter()
                .filter(|d| !d.is_one())
                .collect()
        };
        Self {
            free_rank: self.free_rank + other.free_rank,
            torsion,
        }
    }
}

struct Engine {
    a: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
    u: Option<Vec<Vec<BigInt>>>,
    u_inv: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
}

impl Engine {
    fn new(m: &IntegerMatrix, track_u: bool, track_u_inv: bool, track_v: bool) -> Self {
        let ident = |n: usize| -> Vec<Vec<BigInt>> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                        .collect()
                })
                .collect()
        };
        Self {
            a: m.to_rows(),
            rows: m.rows(),
            cols: m.cols(),
            u: track_u.then(|| ident(m.rows())),
            u_inv: track_u_inv.then(|| ident(m.rows())),
            v: track_v.then(|| ident(m.cols())),
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row_i += c · row_j
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt, from_col: usize) {
        let (src, dst) = borrow_two(&mut self.a, j, i);
        axpy(dst, src, c, from_col);
        if let Some(u) = &mut self.u {
            let (src, dst) = borrow_two(u, j, i);
            axpy(dst, src, c, 0);
        }
        if let Some(ui) = &mut self.u_inv {
            // inverse: col_j -= c · col_i
            for row in ui.iter_mut() {
                if !row[i].is_zero() {
                    let t = c * &row[i];
                    row[j] -= t;
                }
            }
        }
    }

    /// col_i += c · col_j
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt, from_row: usize) {
        for row in self.a[from_row..].iter_mut() {
            if !row[j].is_zero() {
                let t = c * &row[j];
                row[i] += t;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                if !row[j].is_zero() {
                    let t = c * &row[j];
                    row[i] += t;
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in u[i].iter_mut() {
                *x = -&*x;
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                row[i] = -&row[i];
            }
        }
    }

    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                    let unit = ax.is_one();
                    best = Some((i, j, ax));
                    if unit {
                        return best.map(|(i, j, _)| (i, j));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(&mut self) -> usize {
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            let Some((pi, pj)) = self.find_pivot(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                self.clear_cross(t);
                // Divisibility: every remaining entry must be a multiple of the pivot.
                let p = self.a[t][t].clone();
                let bad = (t + 1..self.rows).find(|&i| {
                    (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(&p))
                });
                match bad {
                    Some(i) => self.add_row(t, i, &BigInt::one(), t),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }

    /// Clears row t and column t outside the pivot, swapping in smaller
    /// remainders until both are clean.
    fn clear_cross(&mut self, t: usize) {
        loop {
            let p = self.a[t][t].clone();
            let mut smallest: Option<(bool, usize, BigInt)> = None;
            for i in t + 1..self.rows {
                if self.a[i][t].is_zero() {
                    continue;
                }
                let q = self.a[i][t].div_floor(&p);
                if !q.is_zero() {
                    self.add_row(i, t, &-q, t);
                }
                let r = &self.a[i][t];
                if !r.is_zero() {
                    let ar = r.abs();
                    if smallest.as_ref().is_none_or(|(_, _, b)| ar < *b) {
                        smallest = Some((true, i, ar));
                    }
                }
            }
            for j in t + 1..self.cols {
                if self.a[t][j].is_zero() {
                    continue;
                }
                let q = self.a[t][j].div_floor(&p);
                if !q.is_zero() {
                    self.add_col(j, t, &-q, t);
                }
                let r = &self.a[t][j];
                if !r.is_zero() {
                    let ar = r.abs();
                    if smallest.as_ref().is_none_or(|(_, _, b)| ar < *b) {
                        smallest = Some((false, j, ar));
                    }
                }
            }
            match smallest {
                None => return,
                Some((true, i, _)) => self.swap_rows(t, i),
                Some((false, j, _)) => self.swap_cols(t, j),
            }
        }
    }

    fn diagonal(&self, rank: usize) -> Vec<BigInt> {
        (0..rank).map(|i| self.a[i][i].clone()).collect()
    }
}

fn borrow_two(rows: &mut [Vec<BigInt>], src: usize, dst: usize) -> (&[BigInt], &mut [BigInt]) {
    assert_ne!(src, dst);
    if src < dst {
        let (lo, hi) = rows.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}

fn axpy(dst: &mut [BigInt], src: &[BigInt], c: &BigInt, from: usize) {
    for (d, s) in dst[from..].iter_mut().zip(&src[from..]) {
        if !s.is_zero() {
            *d += c * s;
        }
    }
}

fn rows_to_matrix(cols: usize, rows: Vec<Vec<BigInt>>) -> IntegerMatrix {
    IntegerMatrix::from_row_vecs(cols, rows)
}

/// Full decomposition `U·A·V = D`.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithDecomposition {
    let mut e = Engine::new(a, true, false, true);
    let rank = e.run();
    let invariant_factors = e.diagonal(rank);
    let mut d = IntegerMatrix::zeros(a.rows(), a.cols());
    for (i, x) in invariant_factors.iter().enumerate() {
        d[(i, i)] = x.clone();
    }
    SmithDecomposition {
        u: rows_to_matrix(a.rows(), e.u.take().unwrap()),
        d,
        v: rows_to_matrix(a.cols(), e.v.take().unwrap()),
        invariant_factors,
    }
}

/// Left transform of the Smith form together with its inverse, plus the
/// invariant factors. Used where the quotient map `Zⁿ → coker` is needed.
pub fn smith_left_transform(a: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix, Vec<BigInt>) {
    let mut e = Engine::new(a, true, true, false);
    let rank = e.run();
    let factors = e.diagonal(rank);
    (
        rows_to_matrix(a.rows(), e.u.take().unwrap()),
        rows_to_matrix(a.rows(), e.u_inv.take().unwrap()),
        factors,
    )
}

/// Invariant factors only; no transforms tracked.
pub fn smith_invariant_factors(a: &IntegerMatrix) -> Vec<BigInt> {
    let mut e = Engine::new(a, false, false, false);
    let rank = e.run();
    e.diagonal(rank)
}

/// Invariants of `Z^rows / column-span(A)`.
pub fn cokernel_invariants(a: &IntegerMatrix) -> AbelianInvariants {
    let factors = smith_invariant_factors(a);
    AbelianInvariants {
        free_rank: a.rows() - factors.len(),
        torsion: factors.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(a: &IntegerMatrix) -> SmithDecomposition {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        for w in s.invariant_factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn identity_case() {
        let s = check(&IntegerMatrix::identity(2));
        assert_eq!(s.invariant_factors, big(&[1, 1]));
        assert!(s.d.is_identity());
    }

    #[test]
    fn two_by_two() {
        let s = check(&IntegerMatrix::from_rows(&[[2, 4], [6, 8]]));
        assert_eq!(s.invariant_factors, big(&[2, 4]));
        assert_eq!(s.d, IntegerMatrix::from_rows(&[[2, 0], [0, 4]]));
    }

    #[test]
    fn zero_and_empty() {
        let s = check(&IntegerMatrix::zeros(2, 3));
        assert!(s.invariant_factors.is_empty());
        assert!(s.d.is_zero());
        let e = check(&IntegerMatrix::zeros(4, 0));
        assert!(e.invariant_factors.is_empty());
        assert_eq!(e.u, IntegerMatrix::identity(4));
    }

    #[test]
    fn needs_divisibility_fix() {
        // diag(2,3) is not in normal form; gcd 1, product 6.
        let s = check(&IntegerMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(s.invariant_factors, big(&[1, 6]));
    }

    #[test]
    fn cokernel_examples() {
        let d = IntegerMatrix::from_rows(&[[1, 0, 0], [0, 2, 0], [0, 0, 0]]);
        let c = cokernel_invariants(&d);
        assert_eq!(c.free_rank, 1);
        assert_eq!(c.torsion, big(&[2]));

        let c = cokernel_invariants(&IntegerMatrix::from_rows(&[[2, 4], [6, 8]]));
        assert_eq!(c.free_rank, 0);
        assert_eq!(c.torsion, big(&[2, 4]));

        let c = cokernel_invariants(&IntegerMatrix::zeros(4, 0));
        assert_eq!(c, AbelianInvariants { free_rank: 4, torsion: vec![] });
    }

    #[test]
    fn left_transform_inverse() {
        let a = IntegerMatrix::from_rows(&[[3, 1, 4], [1, 5, 9], [2, 6, 5], [3, 5, 8]]);
        let (u, u_inv, f) = smith_left_transform(&a);
        assert!(u.mul(&u_inv).unwrap().is_identity());
        assert_eq!(f, smith_invariant_factors(&a));
    }

    #[test]
    fn direct_sum_renormalizes() {
        let a = AbelianInvariants { free_rank: 1, torsion: big(&[2]) };
        let b = AbelianInvariants { free_rank: 0, torsion: big(&[3]) };
        let s = a.direct_sum(&b);
        assert_eq!(s.free_rank, 1);
        assert_eq!(s.torsion, big(&[6]));
    }
}

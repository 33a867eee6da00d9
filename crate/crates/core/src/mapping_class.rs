//! Concrete mapping classes of the closed genus-g surface.
//!
//! Homology basis `a₁, b₁, …, a_g, b_g` with `⟨aᵢ, bᵢ⟩ = +1`. The twist along
//! a curve of class `c` acts as the transvection `x ↦ x + ⟨x, c⟩·c`, and every
//! automorphism table below is normalized to that convention.
//!
//! Humphries curves, in order: the chain `a₁, b₁, γ₁, b₂, γ₂, …, γ_{g−1}, b_g`
//! followed by `a₂`, where `γᵢ = bᵢ·aᵢ⁻¹·bᵢ⁻¹·aᵢ₊₁` is a simple loop (it is a
//! subword of the relator) with class `aᵢ₊₁ − aᵢ`. Consecutive chain classes
//! pair to ±1 and non-consecutive ones to 0; `a₂` meets only `b₂`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::IntegerMatrix;
use crate::words::surface::{a, b};
use crate::words::{GroupAutomorphism, GroupWord, Letter, SurfacePresentation};

/// The standard symplectic form as a `2g × 2g` matrix.
pub fn symplectic_form(genus: usize) -> IntegerMatrix {
    let mut j = IntegerMatrix::zeros(2 * genus, 2 * genus);
    for i in 0..genus {
        j[(2 * i, 2 * i + 1)] = BigInt::from(1);
        j[(2 * i + 1, 2 * i)] = BigInt::from(-1);
    }
    j
}

/// `⟨x, y⟩ = xᵀ J y`
pub fn pairing(x: &[i64], y: &[i64]) -> i64 {
    assert_eq!(x.len(), y.len());
    (0..x.len() / 2)
        .map(|i| x[2 * i] * y[2 * i + 1] - x[2 * i + 1] * y[2 * i])
        .sum()
}

/// True iff `Mᵀ J M = J`.
pub fn verify_symplectic(m: &IntegerMatrix, genus: usize) -> Result<bool> {
    if m.rows() != 2 * genus || m.cols() != 2 * genus {
        return Err(Error::DimensionMismatch(format!(
            "expected {0}x{0} for genus {genus}, found {1}x{2}",
            2 * genus,
            m.rows(),
            m.cols()
        )));
    }
    let j = symplectic_form(genus);
    Ok(m.transpose().mul(&j)?.mul(m)? == j)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticMatrix {
    genus: usize,
    matrix: IntegerMatrix,
}

impl SymplecticMatrix {
    pub fn new(matrix: IntegerMatrix, genus: usize) -> Result<Self> {
        if !verify_symplectic(&matrix, genus)? {
            return Err(Error::Invalid("matrix does not preserve the symplectic form".into()));
        }
        Ok(Self { genus, matrix })
    }

    pub fn identity(genus: usize) -> Self {
        Self {
            genus,
            matrix: IntegerMatrix::identity(2 * genus),
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> IntegerMatrix {
        self.matrix
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            genus: self.genus,
            matrix: self.matrix.mul(&other.matrix).expect("same genus"),
        }
    }

    /// `J⁻¹ Mᵀ J`, exact for symplectic matrices.
    pub fn inverse(&self) -> Self {
        let j = symplectic_form(self.genus);
        let jinv = j.neg();
        Self {
            genus: self.genus,
            matrix: jinv
                .mul(&self.matrix.transpose())
                .and_then(|m| m.mul(&j))
                .expect("square"),
        }
    }
}

/// Symplectic transvection `x ↦ x + ⟨x, c⟩·c`.
pub fn transvection(c: &[i64]) -> Result<SymplecticMatrix> {
    if c.len() % 2 != 0 || c.is_empty() {
        return Err(Error::DimensionMismatch(format!("vector of odd length {}", c.len())));
    }
    if c.iter().all(|&x| x == 0) {
        return Err(Error::Invalid("transvection along the zero vector".into()));
    }
    let n = c.len();
    // column j is e_j + ⟨e_j, c⟩ c
    let m = IntegerMatrix::from_fn(n, n, |i, j| {
        let mut e = vec![0; n];
        e[j] = 1;
        BigInt::from(i64::from(i == j) + pairing(&e, c) * c[i])
    });
    SymplecticMatrix::new(m, n / 2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingClass {
    pub automorphism: GroupAutomorphism,
    pub symplectic: SymplecticMatrix,
    pub label: String,
}

impl MappingClass {
    /// Wraps an automorphism; the symplectic image is its abelianization.
    pub fn from_automorphism(label: impl Into<String>, automorphism: GroupAutomorphism, genus: usize) -> Result<Self> {
        let symplectic = SymplecticMatrix::new(automorphism.abelianize(), genus)?;
        Ok(Self {
            automorphism,
            symplectic,
            label: label.into(),
        })
    }

    pub fn genus(&self) -> usize {
        self.symplectic.genus()
    }

    /// Both invariants: abelianization equals the stored matrix, and the
    /// automorphism passes the surface-group check.
    pub fn verify(&self, surface: &SurfacePresentation) -> bool {
        self.automorphism.abelianize() == *self.symplectic.matrix()
            && self.automorphism.verify_surface(surface)
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            automorphism: self.automorphism.compose(&other.automorphism)?,
            symplectic: self.symplectic.mul(&other.symplectic),
            label: format!("{}*{}", self.label, other.label),
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            automorphism: self.automorphism.inverse(),
            symplectic: self.symplectic.inverse(),
            label: format!("({})^-1", self.label),
        }
    }
}

fn word(letters: &[Letter]) -> GroupWord {
    GroupWord::new(letters.iter().copied())
}

/// Twist along the curve `aᵢ` (0-based handle): `bᵢ ↦ bᵢ·aᵢ⁻¹`.
fn twist_a(genus: usize, i: usize) -> GroupAutomorphism {
    GroupAutomorphism::from_changes(
        2 * genus,
        &[(b(i).generator, word(&[b(i), a(i).inv()]))],
        &[(b(i).generator, word(&[b(i), a(i)]))],
    )
}

/// Twist along the curve `bᵢ`: `aᵢ ↦ aᵢ·bᵢ`.
fn twist_b(genus: usize, i: usize) -> GroupAutomorphism {
    GroupAutomorphism::from_changes(
        2 * genus,
        &[(a(i).generator, word(&[a(i), b(i)]))],
        &[(a(i).generator, word(&[a(i), b(i).inv()]))],
    )
}

/// `γᵢ = bᵢ·aᵢ⁻¹·bᵢ⁻¹·aᵢ₊₁`
fn gamma(i: usize) -> GroupWord {
    word(&[b(i), a(i).inv(), b(i).inv(), a(i + 1)])
}

/// Twist along `γᵢ`. In the generating set `(γᵢ, bᵢ₊₁, bᵢ₊₁·bᵢ, aᵢ⁻¹)` the
/// relator becomes (a conjugate of) a product of two commutators with `γᵢ`
/// in the `a`-slot, so the twist is `bᵢ₊₁ ↦ bᵢ₊₁·γᵢ⁻¹` there; rewritten in
/// the original generators:
///
/// `bᵢ ↦ γ·bᵢ`, `aᵢ₊₁ ↦ γ·bᵢ·aᵢ·bᵢ⁻¹`, `bᵢ₊₁ ↦ bᵢ₊₁·γ⁻¹`.
fn twist_gamma(genus: usize, i: usize) -> GroupAutomorphism {
    let g = gamma(i);
    let gi = g.inverse();
    let conj_a = word(&[b(i), a(i), b(i).inv()]);
    GroupAutomorphism::from_changes(
        2 * genus,
        &[
            (b(i).generator, g.mul(&word(&[b(i)]))),
            (a(i + 1).generator, g.mul(&conj_a)),
            (b(i + 1).generator, word(&[b(i + 1)]).mul(&gi)),
        ],
        &[
            (b(i).generator, gi.mul(&word(&[b(i)]))),
            (a(i + 1).generator, gi.mul(&conj_a).mul(&g).mul(&g)),
            (b(i + 1).generator, word(&[b(i + 1)]).mul(&g)),
        ],
    )
}

fn unit(genus: usize, k: usize) -> Vec<i64> {
    let mut v = vec![0; 2 * genus];
    v[k] = 1;
    v
}

/// Homology classes of the Humphries curves, in the order of [`humphries_twists`].
pub fn humphries_classes(genus: usize) -> Vec<Vec<i64>> {
    let mut out = vec![unit(genus, 0), unit(genus, 1)];
    for i in 1..genus {
        let mut g = unit(genus, 2 * i);
        g[2 * (i - 1)] = -1;
        out.push(g);
        out.push(unit(genus, 2 * i + 1));
    }
    out.push(unit(genus, 2));
    out
}

/// The 2g+1 Humphries twist generators; the first 2g form a chain.
pub fn humphries_twists(genus: usize) -> Result<Vec<MappingClass>> {
    if genus < 2 {
        return Err(Error::Invalid(format!("genus {genus} < 2")));
    }
    let mut out = Vec::with_capacity(2 * genus + 1);
    out.push(MappingClass::from_automorphism("T(a1)", twist_a(genus, 0), genus)?);
    out.push(MappingClass::from_automorphism("T(b1)", twist_b(genus, 0), genus)?);
    for i in 1..genus {
        out.push(MappingClass::from_automorphism(
            format!("T(g{i})"),
            twist_gamma(genus, i - 1),
            genus,
        )?);
        out.push(MappingClass::from_automorphism(
            format!("T(b{})", i + 1),
            twist_b(genus, i),
            genus,
        )?);
    }
    out.push(MappingClass::from_automorphism("T(a2)", twist_a(genus, 1), genus)?);
    Ok(out)
}

/// Product `t_{c₁} ∘ t_{c₂} ∘ ⋯ ∘ t_{c_{2g}}` along the chain; a periodic
/// class of order 4g+2.
pub fn chain_periodic_element(genus: usize) -> Result<MappingClass> {
    let twists = humphries_twists(genus)?;
    let chain = &twists[..2 * genus];
    let automorphism =
        GroupAutomorphism::compose_all(2 * genus, chain.iter().map(|t| &t.automorphism))?;
    MappingClass::from_automorphism(format!("chain{genus}"), automorphism, genus)
}

/// Two conjugate periodic generators and the nonseparating twist relating them.
#[derive(Clone, Debug)]
pub struct KorkmazPair {
    pub x: MappingClass,
    pub y: MappingClass,
    pub delta: MappingClass,
}

/// `x` = chain element, `δ` = twist along `a₂`, `y = δ∘x∘δ⁻¹`.
pub fn korkmaz_pair(genus: usize) -> Result<KorkmazPair> {
    if genus < 3 {
        return Err(Error::Invalid(format!(
            "the two-generator construction needs genus ≥ 3, got {genus}"
        )));
    }
    let x = chain_periodic_element(genus)?;
    let delta = MappingClass::from_automorphism("T(a2)", twist_a(genus, 1), genus)?;
    let mut y = delta.compose(&x)?.compose(&delta.inverse())?;
    y.label = format!("T(a2)*chain{genus}*T(a2)^-1");
    Ok(KorkmazPair { x, y, delta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{coinvariant_rank, matrix_order, MatrixOrder};

    #[test]
    fn symplectic_checks() {
        assert!(verify_symplectic(&IntegerMatrix::identity(4), 2).unwrap());
        assert!(verify_symplectic(&IntegerMatrix::identity(4).neg(), 2).unwrap());
        let mut d = IntegerMatrix::identity(4);
        d[(0, 0)] = BigInt::from(2);
        assert!(!verify_symplectic(&d, 2).unwrap());
        assert!(verify_symplectic(&IntegerMatrix::identity(3), 2).is_err());
    }

    #[test]
    fn transvection_examples() {
        let c = unit(2, 0);
        let t = transvection(&c).unwrap();
        let cv: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(t.matrix().mul_vec(&cv), cv);
        // b1 ↦ b1 + ⟨b1, a1⟩ a1 = b1 − a1
        let img = t.matrix().column(1);
        assert_eq!(img, vec![-1, 1, 0, 0].into_iter().map(BigInt::from).collect::<Vec<_>>());
        assert!(transvection(&[0, 0, 0, 0]).is_err());
        assert!(transvection(&[1, 2, -3, 1, 0, 5]).is_ok());
    }

    #[test]
    fn humphries_classes_pair_as_a_chain() {
        for g in 2..=5 {
            let cls = humphries_classes(g);
            assert_eq!(cls.len(), 2 * g + 1);
            for i in 0..2 * g {
                for j in i + 1..2 * g {
                    let p = pairing(&cls[i], &cls[j]).abs();
                    assert_eq!(p, i64::from(j == i + 1), "chain {i},{j}");
                }
            }
            let extra = &cls[2 * g];
            for (i, c) in cls[..2 * g].iter().enumerate() {
                assert_eq!(pairing(extra, c).abs(), i64::from(i == 3));
            }
        }
    }

    #[test]
    fn humphries_twists_are_valid() {
        for g in [2, 3] {
            let s = SurfacePresentation::new(g);
            let twists = humphries_twists(g).unwrap();
            assert_eq!(twists.len(), 2 * g + 1);
            for (t, c) in twists.iter().zip(humphries_classes(g)) {
                assert!(t.verify(&s), "{}", t.label);
                assert_eq!(t.symplectic, transvection(&c).unwrap(), "{}", t.label);
                let back = t.automorphism.compose(&t.automorphism.inverse()).unwrap();
                assert_eq!(back, GroupAutomorphism::identity(2 * g));
            }
        }
    }

    #[test]
    fn chain_element_order() {
        for g in 2..=5 {
            let x = chain_periodic_element(g).unwrap();
            let order = (4 * g + 2) as u64;
            assert_eq!(matrix_order(x.symplectic.matrix(), 100), MatrixOrder::Finite(order));
            assert!(x.symplectic.matrix().minus_identity().determinant() != BigInt::from(0));
        }
        let x = chain_periodic_element(2).unwrap();
        assert_eq!(coinvariant_rank(&[x.symplectic.matrix().clone()]).unwrap(), 0);
        assert!(x.verify(&SurfacePresentation::new(2)));
    }

    #[test]
    fn korkmaz_pair_is_conjugate() {
        assert!(korkmaz_pair(2).is_err());
        let k = korkmaz_pair(3).unwrap();
        assert_eq!(matrix_order(k.x.symplectic.matrix(), 100), MatrixOrder::Finite(14));
        assert_eq!(matrix_order(k.y.symplectic.matrix(), 100), MatrixOrder::Finite(14));
        let conj = k.delta.symplectic.mul(&k.x.symplectic).mul(&k.delta.symplectic.inverse());
        assert_eq!(conj, k.y.symplectic);
        let mats = [k.x.symplectic.matrix().clone(), k.y.symplectic.matrix().clone()];
        assert_eq!(coinvariant_rank(&mats).unwrap(), 0);
        assert!(k.y.verify(&SurfacePresentation::new(3)));
    }

    #[test]
    fn symplectic_inverse() {
        let t = transvection(&[1, 2, 0, -1]).unwrap();
        assert!(t.mul(&t.inverse()).matrix().is_identity());
    }
}

//! Mod-m homology covers of the genus-g surface group.
//!
//! `K̃ = ker(K → H₁(K; Z/m))`. Cosets are the tuples of `(Z/m)^{2g}` in
//! lexicographic order (first coordinate most significant); the coset of
//! `c` is represented by `a₁^{c₁} b₁^{c₂} ⋯ b_g^{c_{2g}}`.
//!
//! `H₁(K̃)` is the cokernel of the relation matrix whose columns are the
//! rewritten lifts `t_c·R·t_c⁻¹`. A Smith left transform `U` of that matrix
//! yields the projection `Z^N → H₁(K̃)` (the last `2g̃` rows of `U`) and lifts
//! of a basis (the last `2g̃` columns of `U⁻¹`).

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{smith_left_transform, IntegerMatrix};
use crate::schreier::SchreierSystem;
use crate::words::{GroupAutomorphism, GroupWord, SurfacePresentation};

/// Largest index `m^{2g}` accepted by [`mod_m_cover`].
pub const DEFAULT_INDEX_CAP: u64 = 4096;

#[derive(Clone, Debug)]
pub struct FiberCover {
    genus: usize,
    modulus: u64,
    index: usize,
    cover_genus: usize,
    schreier: SchreierSystem,
    subgroup_generators: Vec<GroupWord>,
    /// `2g̃ × N`, rows `r..N` of the Smith left transform.
    projection: IntegerMatrix,
    /// `N × 2g̃`, columns `r..N` of its inverse.
    basis_lift: IntegerMatrix,
}

/// Matrix of an automorphism of `K̃` on `H₁(K̃; Z)` in the cover basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverHomologyAction {
    pub label: String,
    pub matrix: IntegerMatrix,
}

pub fn mod_m_cover(genus: usize, modulus: u64) -> Result<FiberCover> {
    mod_m_cover_capped(genus, modulus, DEFAULT_INDEX_CAP)
}

pub fn mod_m_cover_capped(genus: usize, modulus: u64, cap: u64) -> Result<FiberCover> {
    if genus < 2 {
        return Err(Error::Invalid(format!("fiber genus {genus} < 2")));
    }
    if modulus == 0 {
        return Err(Error::Invalid("modulus must be positive".into()));
    }
    let rank = 2 * genus;
    let index = modulus
        .checked_pow(rank as u32)
        .filter(|&i| i <= cap)
        .ok_or_else(|| {
            Error::CapExceeded(format!("index {modulus}^{rank} exceeds the cap {cap}"))
        })? as usize;
    let m = modulus as usize;
    let place: Vec<usize> = (0..rank).map(|j| m.pow((rank - 1 - j) as u32)).collect();
    let digit = |p: usize, j: usize| (p / place[j]) % m;

    let action: Vec<Vec<u32>> = (0..rank)
        .map(|j| {
            (0..index)
                .map(|p| {
                    let d = digit(p, j);
                    let q = if d + 1 == m { p - d * place[j] } else { p + place[j] };
                    q as u32
                })
                .collect()
        })
        .collect();
    let parent: Vec<Option<(u32, u32)>> = (0..index)
        .map(|p| {
            (0..rank)
                .rev()
                .find(|&j| digit(p, j) != 0)
                .map(|j| ((p - place[j]) as u32, j as u32))
        })
        .collect();
    let schreier = SchreierSystem::with_tree(action, &parent)?;

    let n = schreier.generator_count();
    let surface = SurfacePresentation::new(genus);
    let relations: Vec<Vec<BigInt>> = schreier
        .transversal()
        .par_iter()
        .map(|t| {
            let (v, end) = schreier.rewrite(&surface.relator().conjugate_by(t));
            debug_assert_eq!(end, 0);
            v.into_iter().map(BigInt::from).collect()
        })
        .collect();
    let relation_matrix = IntegerMatrix::from_columns(n, &relations);
    let (u, u_inv, factors) = smith_left_transform(&relation_matrix);
    let r = factors.len();
    let cover_genus = 1 + index * (genus - 1);
    if r != index - 1 || factors.iter().any(|f| !f.is_one()) || n - r != 2 * cover_genus {
        return Err(Error::Invalid(format!(
            "cover relation module has rank {r} with factors {factors:?}; expected a free quotient of rank {}",
            2 * cover_genus
        )));
    }
    let dim = n - r;
    let projection = IntegerMatrix::from_fn(dim, n, |i, j| u[(r + i, j)].clone());
    let basis_lift = IntegerMatrix::from_fn(n, dim, |i, j| u_inv[(i, r + j)].clone());
    let subgroup_generators = schreier.generator_words();
    Ok(FiberCover {
        genus,
        modulus,
        index,
        cover_genus,
        schreier,
        subgroup_generators,
        projection,
        basis_lift,
    })
}

impl FiberCover {
    pub fn genus_base(&self) -> usize {
        self.genus
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn cover_genus(&self) -> usize {
        self.cover_genus
    }

    /// `2·cover_genus`.
    pub fn homology_rank(&self) -> usize {
        2 * self.cover_genus
    }

    /// Coset tuples in enumeration order.
    pub fn cosets(&self) -> Vec<Vec<u64>> {
        let m = self.modulus;
        let rank = 2 * self.genus;
        (0..self.index as u64)
            .map(|mut p| {
                let mut c = vec![0; rank];
                for x in c.iter_mut().rev() {
                    *x = p % m;
                    p /= m;
                }
                c
            })
            .collect()
    }

    pub fn transversal(&self) -> &[GroupWord] {
        self.schreier.transversal()
    }

    pub fn subgroup_generators(&self) -> &[GroupWord] {
        &self.subgroup_generators
    }

    pub fn schreier(&self) -> &SchreierSystem {
        &self.schreier
    }

    /// Exponent vector of `w` reduced mod m.
    pub fn coset_of(&self, w: &GroupWord) -> Vec<u64> {
        let m = self.modulus as i64;
        w.exponent_vector(2 * self.genus)
            .into_iter()
            .map(|x| x.rem_euclid(m) as u64)
            .collect()
    }

    pub fn contains(&self, w: &GroupWord) -> bool {
        w.generator_bound() as usize <= 2 * self.genus && self.coset_of(w).iter().all(|&x| x == 0)
    }

    fn check_membership(&self, w: &GroupWord) -> Result<()> {
        if w.generator_bound() as usize > 2 * self.genus {
            return Err(Error::IndexOutOfRange {
                index: w.generator_bound() as usize - 1,
                rank: 2 * self.genus,
            });
        }
        if !self.contains(w) {
            return Err(Error::Membership(w.exponent_vector(2 * self.genus)));
        }
        Ok(())
    }

    fn project(&self, v: &[i64]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.homology_rank()];
        for (k, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = BigInt::from(x);
            for (i, o) in out.iter_mut().enumerate() {
                let p = &self.projection[(i, k)];
                if !p.is_zero() {
                    *o += p * &x;
                }
            }
        }
        out
    }

    /// Class of `w ∈ K̃` in `H₁(K̃; Z)`.
    pub fn rewrite_in_cover(&self, w: &GroupWord) -> Result<Vec<BigInt>> {
        self.check_membership(w)?;
        let (v, _) = self.schreier.rewrite(w);
        Ok(self.project(&v))
    }

    /// Matrix of the endomorphism of `H₁(K̃)` induced by a map `f` of `K`
    /// preserving `K̃`; column `j` is the image of basis element `j`.
    pub fn action_matrix<F>(&self, f: F) -> Result<IntegerMatrix>
    where
        F: Fn(&GroupWord) -> Result<GroupWord> + Sync,
    {
        let n = self.subgroup_generators.len();
        let dim = self.homology_rank();
        let needed: Vec<usize> = (0..n)
            .filter(|&k| (0..dim).any(|j| !self.basis_lift[(k, j)].is_zero()))
            .collect();
        let images: Vec<(usize, Vec<BigInt>)> = needed
            .par_iter()
            .map(|&k| {
                let img = f(&self.subgroup_generators[k])?;
                self.check_membership(&img)
                    .map_err(|e| Error::Invalid(format!("map does not preserve the cover subgroup: {e}")))?;
                let (v, _) = self.schreier.rewrite(&img);
                Ok((k, self.project(&v)))
            })
            .collect::<Result<_>>()?;
        let mut m = IntegerMatrix::zeros(dim, dim);
        for (k, y) in &images {
            for j in 0..dim {
                let c = &self.basis_lift[(*k, j)];
                if c.is_zero() {
                    continue;
                }
                for (i, yi) in y.iter().enumerate() {
                    if !yi.is_zero() {
                        m[(i, j)] += yi * c;
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn induced_action(&self, phi: &GroupAutomorphism) -> Result<CoverHomologyAction> {
        if phi.rank() != 2 * self.genus {
            return Err(Error::DimensionMismatch(format!(
                "automorphism of rank {} on a genus-{} fiber",
                phi.rank(),
                self.genus
            )));
        }
        Ok(CoverHomologyAction {
            label: "induced".into(),
            matrix: self.action_matrix(|w| phi.apply(w))?,
        })
    }

    /// Action of `x ↦ k·x·k⁻¹`.
    pub fn conjugation_action(&self, k: &GroupWord) -> Result<CoverHomologyAction> {
        if k.generator_bound() as usize > 2 * self.genus {
            return Err(Error::IndexOutOfRange {
                index: k.generator_bound() as usize - 1,
                rank: 2 * self.genus,
            });
        }
        let kinv = k.inverse();
        Ok(CoverHomologyAction {
            label: format!("conj({k})"),
            matrix: self.action_matrix(|w| Ok(k.mul(w).mul(&kinv)))?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping_class::humphries_twists;

    #[test]
    fn trivial_cover() {
        let c = mod_m_cover(2, 1).unwrap();
        assert_eq!((c.index(), c.cover_genus()), (1, 2));
        assert_eq!(c.transversal(), &[GroupWord::identity()]);
        let a1 = GroupWord::generator(0);
        assert_eq!(
            c.rewrite_in_cover(&a1).unwrap(),
            vec![1, 0, 0, 0].into_iter().map(BigInt::from).collect::<Vec<_>>()
        );
        // on the trivial cover the induced action is the abelianization
        for t in humphries_twists(2).unwrap() {
            let m = c.induced_action(&t.automorphism).unwrap().matrix;
            assert_eq!(&m, t.symplectic.matrix());
        }
    }

    #[test]
    fn genus_and_rank() {
        let c = mod_m_cover(2, 2).unwrap();
        assert_eq!((c.index(), c.cover_genus(), c.homology_rank()), (16, 17, 34));
        assert_eq!(c.subgroup_generators().len(), 16 * 4 - 16 + 1);
        for w in c.subgroup_generators() {
            assert!(c.contains(w));
        }
        assert!(matches!(mod_m_cover_capped(2, 3, 50), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn rewriting() {
        let c = mod_m_cover(2, 2).unwrap();
        assert!(c.rewrite_in_cover(&GroupWord::identity()).unwrap().iter().all(Zero::is_zero));
        let a1sq = GroupWord::generator(0).pow(2);
        assert!(c.rewrite_in_cover(&a1sq).unwrap().iter().any(|x| !x.is_zero()));
        assert!(matches!(
            c.rewrite_in_cover(&GroupWord::generator(0)),
            Err(Error::Membership(_))
        ));
        let s = c.subgroup_generators();
        let sum: Vec<BigInt> = c
            .rewrite_in_cover(&s[3])
            .unwrap()
            .into_iter()
            .zip(c.rewrite_in_cover(&s[7]).unwrap())
            .map(|(x, y)| x + y)
            .collect();
        assert_eq!(c.rewrite_in_cover(&s[3].mul(&s[7])).unwrap(), sum);
        // the lifted relator is trivial in homology
        let r = SurfacePresentation::new(2).relator().clone();
        assert!(c.rewrite_in_cover(&r.conjugate_by(&GroupWord::generator(1))).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn conjugations() {
        let c = mod_m_cover(2, 2).unwrap();
        assert!(c.conjugation_action(&GroupWord::identity()).unwrap().matrix.is_identity());
        let k = GroupWord::from_signed(&[1, 2, 1, -2]);
        assert!(c.conjugation_action(&k).unwrap().matrix.is_identity());
        let a1 = c.conjugation_action(&GroupWord::generator(0)).unwrap().matrix;
        assert!(!a1.is_identity());
        assert!(a1.mul(&a1).unwrap().is_identity());
    }

    #[test]
    fn induced_action_is_a_homomorphism() {
        let c = mod_m_cover(2, 2).unwrap();
        let t = humphries_twists(2).unwrap();
        let (f, g) = (&t[1].automorphism, &t[2].automorphism);
        let fg = f.compose(g).unwrap();
        let mf = c.induced_action(f).unwrap().matrix;
        let mg = c.induced_action(g).unwrap().matrix;
        assert_eq!(c.induced_action(&fg).unwrap().matrix, mf.mul(&mg).unwrap());
        let inv = c.induced_action(&f.inverse()).unwrap().matrix;
        assert!(mf.mul(&inv).unwrap().is_identity());
    }
}

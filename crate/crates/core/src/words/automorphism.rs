use num_bigint::BigInt;

use super::surface::SurfacePresentation;
use super::word::{GroupWord, Letter};
use crate::error::{Error, Result};
use crate::linalg::IntegerMatrix;

/// Automorphism given by generator images, carrying explicit inverse images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupAutomorphism {
    images: Vec<GroupWord>,
    inverse_images: Vec<GroupWord>,
}

fn substitute(images: &[GroupWord], w: &GroupWord) -> Result<GroupWord> {
    let mut out: Vec<Letter> = Vec::new();
    for l in w.letters() {
        let img = images.get(l.generator as usize).ok_or(Error::IndexOutOfRange {
            index: l.generator as usize,
            rank: images.len(),
        })?;
        let piece = if l.inverse { img.inverse() } else { img.clone() };
        for x in piece.letters() {
            if out.last() == Some(&x.inv()) {
                out.pop();
            } else {
                out.push(*x);
            }
        }
    }
    Ok(GroupWord::new(out))
}

impl GroupAutomorphism {
    pub fn new(images: Vec<GroupWord>, inverse_images: Vec<GroupWord>) -> Result<Self> {
        if images.len() != inverse_images.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} images but {} inverse images",
                images.len(),
                inverse_images.len()
            )));
        }
        let rank = images.len() as u32;
        if let Some(w) = images
            .iter()
            .chain(&inverse_images)
            .find(|w| w.generator_bound() > rank)
        {
            return Err(Error::IndexOutOfRange {
                index: w.generator_bound() as usize - 1,
                rank: rank as usize,
            });
        }
        Ok(Self {
            images,
            inverse_images,
        })
    }

    pub fn identity(rank: usize) -> Self {
        let images: Vec<GroupWord> = (0..rank as u32).map(GroupWord::generator).collect();
        Self {
            inverse_images: images.clone(),
            images,
        }
    }

    /// Automorphism altering only the listed generators.
    pub fn from_changes(
        rank: usize,
        changes: &[(u32, GroupWord)],
        inverse_changes: &[(u32, GroupWord)],
    ) -> Self {
        let mut id = Self::identity(rank);
        for (g, w) in changes {
            id.images[*g as usize] = w.clone();
        }
        for (g, w) in inverse_changes {
            id.inverse_images[*g as usize] = w.clone();
        }
        id
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[GroupWord] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[GroupWord] {
        &self.inverse_images
    }

    pub fn apply(&self, w: &GroupWord) -> Result<GroupWord> {
        substitute(&self.images, w)
    }

    pub fn apply_inverse(&self, w: &GroupWord) -> Result<GroupWord> {
        substitute(&self.inverse_images, w)
    }

    pub fn inverse(&self) -> Self {
        Self {
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::DimensionMismatch(format!(
                "composing automorphisms of rank {} and {}",
                self.rank(),
                other.rank()
            )));
        }
        let images = other
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>>>()?;
        let inverse_images = self
            .inverse_images
            .iter()
            .map(|w| other.apply_inverse(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            images,
            inverse_images,
        })
    }

    /// Composite of a sequence, applied right to left like `f₀ ∘ f₁ ∘ ⋯`.
    pub fn compose_all<'a>(rank: usize, parts: impl IntoIterator<Item = &'a Self>) -> Result<Self> {
        parts
            .into_iter()
            .try_fold(Self::identity(rank), |acc, f| acc.compose(f))
    }

    pub fn power(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.rank());
        for _ in 0..e.unsigned_abs() {
            acc = acc.compose(&base)?;
        }
        Ok(acc)
    }

    /// Conjugation `x ↦ k·x·k⁻¹`.
    pub fn inner(rank: usize, k: &GroupWord) -> Self {
        let kinv = k.inverse();
        let images = (0..rank as u32)
            .map(|g| GroupWord::generator(g).conjugate_by(k))
            .collect();
        let inverse_images = (0..rank as u32)
            .map(|g| GroupWord::generator(g).conjugate_by(&kinv))
            .collect();
        Self {
            images,
            inverse_images,
        }
    }

    /// Column j is the exponent vector of the image of generator j.
    pub fn abelianize(&self) -> IntegerMatrix {
        let n = self.rank();
        let cols: Vec<Vec<BigInt>> = self
            .images
            .iter()
            .map(|w| w.exponent_vector(n).into_iter().map(BigInt::from).collect())
            .collect();
        IntegerMatrix::from_columns(n, &cols)
    }

    pub fn is_identity_on_generators(&self, surface: &SurfacePresentation) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(g, w)| surface.equal(w, &GroupWord::generator(g as u32)))
    }

    /// Both the images and the inverse images send the relator to a
    /// free conjugate of itself, and the two tables are mutually inverse in
    /// the surface group.
    pub fn verify_surface(&self, surface: &SurfacePresentation) -> bool {
        if self.rank() != surface.rank() {
            return false;
        }
        let r = surface.relator();
        let relator_ok = |f: &[GroupWord]| {
            substitute(f, r).is_ok_and(|img| img.is_free_conjugate(r))
        };
        if !relator_ok(&self.images) || !relator_ok(&self.inverse_images) {
            return false;
        }
        let (Ok(there), Ok(back)) = (self.compose(&self.inverse()), self.inverse().compose(self))
        else {
            return false;
        };
        there.is_identity_on_generators(surface) && back.is_identity_on_generators(surface)
    }

    /// In the free group on `rank` generators.
    pub fn verify_free(&self) -> bool {
        let (Ok(there), Ok(back)) = (self.compose(&self.inverse()), self.inverse().compose(self))
        else {
            return false;
        };
        let id = Self::identity(self.rank());
        there == id && back == id
    }
}

pub fn verify_surface_automorphism(phi: &GroupAutomorphism, genus: usize) -> bool {
    phi.verify_surface(&SurfacePresentation::new(genus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::surface::{a, b};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(letters: &[Letter]) -> GroupWord {
        GroupWord::new(letters.iter().copied())
    }

    /// a1 ↦ a1·b1, everything else fixed; a twist along b1.
    fn twist_b1(genus: usize) -> GroupAutomorphism {
        GroupAutomorphism::from_changes(
            2 * genus,
            &[(0, w(&[a(0), b(0)]))],
            &[(0, w(&[a(0), b(0).inv()]))],
        )
    }

    fn twist_a2(genus: usize) -> GroupAutomorphism {
        GroupAutomorphism::from_changes(
            2 * genus,
            &[(3, w(&[b(1), a(1).inv()]))],
            &[(3, w(&[b(1), a(1)]))],
        )
    }

    #[test]
    fn apply_examples() {
        let id = GroupAutomorphism::identity(4);
        let word = w(&[a(0), b(1).inv(), a(1)]);
        assert_eq!(id.apply(&word).unwrap(), word);
        let phi = twist_b1(2);
        assert_eq!(phi.apply(&w(&[a(0), b(0).inv()])).unwrap(), w(&[a(0)]));
        assert!(matches!(
            phi.apply(&GroupWord::generator(7)),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn homomorphism_and_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let phi = twist_b1(2);
        let psi = twist_a2(2);
        let both = phi.compose(&psi).unwrap();
        for _ in 0..100 {
            let len = rng.gen_range(0..10);
            let u = GroupWord::new((0..len).map(|_| Letter::new(rng.gen_range(0..4), rng.gen())));
            let v = GroupWord::new((0..len).map(|_| Letter::new(rng.gen_range(0..4), rng.gen())));
            assert_eq!(both.apply(&u).unwrap(), phi.apply(&psi.apply(&u).unwrap()).unwrap());
            assert_eq!(
                phi.apply(&u.mul(&v)).unwrap(),
                phi.apply(&u).unwrap().mul(&phi.apply(&v).unwrap())
            );
        }
        assert_eq!(
            both.abelianize(),
            phi.abelianize().mul(&psi.abelianize()).unwrap()
        );
        assert_eq!(GroupAutomorphism::identity(4).compose(&psi).unwrap(), psi);
        assert_eq!(phi.compose(&phi.inverse()).unwrap(), GroupAutomorphism::identity(4));
    }

    #[test]
    fn abelianization_of_twist() {
        let m = twist_b1(2).abelianize();
        let mut expect = IntegerMatrix::identity(4);
        expect[(1, 0)] = BigInt::from(1);
        assert_eq!(m, expect);
        assert!(GroupAutomorphism::identity(4).abelianize().is_identity());
        let inv = twist_b1(2).inverse().abelianize();
        assert!(m.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn surface_verification() {
        let s = SurfacePresentation::new(2);
        assert!(GroupAutomorphism::identity(4).verify_surface(&s));
        assert!(twist_b1(2).verify_surface(&s));
        assert!(twist_a2(2).verify_surface(&s));
        let kill = GroupAutomorphism::from_changes(4, &[(0, GroupWord::identity())], &[]);
        assert!(!kill.verify_surface(&s));
        // inner automorphisms preserve the relator up to conjugacy
        let inner = GroupAutomorphism::inner(4, &w(&[a(1), b(0)]));
        assert!(inner.verify_surface(&s));
    }

    #[test]
    fn free_verification() {
        assert!(twist_b1(2).verify_free());
        let bogus = GroupAutomorphism::from_changes(2, &[(0, w(&[a(0), a(0)]))], &[]);
        assert!(!bogus.verify_free());
    }
}

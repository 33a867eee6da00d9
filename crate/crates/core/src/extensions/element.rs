use crate::error::Result;
use crate::words::{GroupWord, SurfacePresentation};

use super::spec::MonodromySpec;

/// `(b, k)` with `b` a base word and `k` a fiber word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtensionElement {
    pub base_word: GroupWord,
    pub fiber_word: GroupWord,
}

impl ExtensionElement {
    pub fn new(base_word: GroupWord, fiber_word: GroupWord) -> Self {
        Self {
            base_word,
            fiber_word,
        }
    }

    pub fn identity() -> Self {
        Self::new(GroupWord::identity(), GroupWord::identity())
    }

    pub fn base(generator: u32) -> Self {
        Self::new(GroupWord::generator(generator), GroupWord::identity())
    }

    pub fn fiber(word: GroupWord) -> Self {
        Self::new(GroupWord::identity(), word)
    }
}

impl MonodromySpec {
    /// `(b₁,k₁)(b₂,k₂) = (b₁b₂, φ_{b₂}⁻¹(k₁)·k₂)`
    pub fn multiply(&self, x: &ExtensionElement, y: &ExtensionElement) -> Result<ExtensionElement> {
        let moved = self.act_inverse(&y.base_word, &x.fiber_word)?;
        Ok(ExtensionElement::new(
            x.base_word.mul(&y.base_word),
            moved.mul(&y.fiber_word),
        ))
    }

    /// `(b,k)⁻¹ = (b⁻¹, φ_b(k)⁻¹)`
    pub fn invert(&self, x: &ExtensionElement) -> Result<ExtensionElement> {
        Ok(ExtensionElement::new(
            x.base_word.inverse(),
            self.act(&x.base_word, &x.fiber_word)?.inverse(),
        ))
    }

    /// Base words compared in the free group, fiber words in the surface group.
    pub fn elements_equal(&self, x: &ExtensionElement, y: &ExtensionElement) -> bool {
        x.base_word == y.base_word
            && SurfacePresentation::new(self.fiber_genus()).equal(&x.fiber_word, &y.fiber_word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extensions::spec::{BaseGroup, Monodromy};
    use crate::mapping_class::humphries_twists;
    use crate::words::Letter;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec() -> MonodromySpec {
        let t = humphries_twists(2).unwrap();
        MonodromySpec::new(
            2,
            BaseGroup::Free(2),
            vec![Monodromy::Class(t[1].clone()), Monodromy::Class(t[2].clone())],
        )
        .unwrap()
    }

    fn random_element(rng: &mut ChaCha8Rng) -> ExtensionElement {
        let b = GroupWord::new((0..rng.gen_range(0..4)).map(|_| Letter::new(rng.gen_range(0..2), rng.gen())));
        let k = GroupWord::new((0..rng.gen_range(0..5)).map(|_| Letter::new(rng.gen_range(0..4), rng.gen())));
        ExtensionElement::new(b, k)
    }

    #[test]
    fn associativity_and_projection() {
        let s = spec();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let (x, y, z) = (random_element(&mut rng), random_element(&mut rng), random_element(&mut rng));
            let left = s.multiply(&s.multiply(&x, &y).unwrap(), &z).unwrap();
            let right = s.multiply(&x, &s.multiply(&y, &z).unwrap()).unwrap();
            assert!(s.elements_equal(&left, &right));
            assert_eq!(left.base_word, x.base_word.mul(&y.base_word).mul(&z.base_word));
            let inv = s.invert(&x).unwrap();
            assert!(s.elements_equal(&s.multiply(&x, &inv).unwrap(), &ExtensionElement::identity()));
        }
    }

    #[test]
    fn conjugation_realizes_the_monodromy() {
        // x·y·x⁻¹ = φ_x(y)
        let s = spec();
        let x = ExtensionElement::base(0);
        let y = ExtensionElement::fiber(GroupWord::generator(0));
        let conj = s
            .multiply(&s.multiply(&x, &y).unwrap(), &s.invert(&x).unwrap())
            .unwrap();
        let expect = s.act(&GroupWord::generator(0), &GroupWord::generator(0)).unwrap();
        assert!(s.elements_equal(&conj, &ExtensionElement::fiber(expect)));
    }
}

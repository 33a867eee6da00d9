//! The genus-g surface group `⟨a₁,b₁,…,a_g,b_g | [a₁,b₁]⋯[a_g,b_g]⟩` and
//! Dehn's algorithm for its word problem.

use std::collections::HashMap;

use super::word::{GroupWord, Letter};

#[derive(Clone, Debug)]
pub struct SurfacePresentation {
    genus: usize,
    relator: GroupWord,
    /// Every length-(2g+1) prefix of a cyclic permutation of `r^{±1}`,
    /// mapped to the inverse of the remaining 2g−1 letters.
    shortcuts: HashMap<Vec<Letter>, Vec<Letter>>,
}

pub fn a(i: usize) -> Letter {
    Letter::pos(2 * i as u32)
}

pub fn b(i: usize) -> Letter {
    Letter::pos(2 * i as u32 + 1)
}

impl SurfacePresentation {
    pub fn new(genus: usize) -> Self {
        assert!(genus >= 1, "surface genus must be positive");
        let mut letters = Vec::with_capacity(4 * genus);
        for i in 0..genus {
            letters.extend([a(i), b(i), a(i).inv(), b(i).inv()]);
        }
        let relator = GroupWord::new(letters);
        let n = relator.len();
        let window = n / 2 + 1;
        let mut shortcuts = HashMap::with_capacity(2 * n);
        for r in [relator.clone(), relator.inverse()] {
            let l = r.letters();
            for shift in 0..n {
                let rot: Vec<Letter> = (0..n).map(|k| l[(shift + k) % n]).collect();
                let key = rot[..window].to_vec();
                let rest: Vec<Letter> = rot[window..].iter().rev().map(|x| x.inv()).collect();
                shortcuts.insert(key, rest);
            }
        }
        Self {
            genus,
            relator,
            shortcuts,
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn rank(&self) -> usize {
        2 * self.genus
    }

    pub fn relator(&self) -> &GroupWord {
        &self.relator
    }

    /// Freely reduced word with no subword longer than half a relator.
    ///
    /// Letters are pushed onto an output stack; whenever the top 2g+1 letters
    /// form more than half of a relator they are replaced by the inverse of
    /// the complementary piece, which is fed back through the input.
    pub fn dehn_reduce(&self, w: &GroupWord) -> GroupWord {
        let window = self.relator.len() / 2 + 1;
        let mut input: Vec<Letter> = w.letters().iter().rev().copied().collect();
        let mut out: Vec<Letter> = Vec::with_capacity(w.len());
        while let Some(x) = input.pop() {
            if out.last() == Some(&x.inv()) {
                out.pop();
                continue;
            }
            out.push(x);
            if out.len() >= window {
                let start = out.len() - window;
                if let Some(rep) = self.shortcuts.get(&out[start..]) {
                    out.truncate(start);
                    input.extend(rep.iter().rev().copied());
                }
            }
        }
        GroupWord::new(out)
    }

    /// Word problem; valid because the relator satisfies C'(1/6) for g ≥ 2.
    pub fn is_trivial(&self, w: &GroupWord) -> bool {
        debug_assert!(self.genus >= 2, "Dehn's algorithm needs genus ≥ 2");
        self.dehn_reduce(w).is_empty()
    }

    pub fn equal(&self, u: &GroupWord, v: &GroupWord) -> bool {
        self.is_trivial(&u.mul(&v.inverse()))
    }
}

/// `surface_word_is_trivial` convenience wrapper.
pub fn surface_word_is_trivial(w: &GroupWord, genus: usize) -> bool {
    SurfacePresentation::new(genus).is_trivial(w)
}

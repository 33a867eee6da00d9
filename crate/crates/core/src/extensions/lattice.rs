//! Finite-index normal subgroups of the base: kernels of maps onto finite
//! abelian groups, read through the free group on the base generators.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

use crate::error::Result;
use crate::schreier::SchreierSystem;
use crate::words::GroupWord;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseCoverKind {
    Trivial,
    /// Kernel of reduction onto `(Z/q)^rank`.
    Full { modulus: u64 },
    /// Kernel of the surjection `xⱼ ↦ χⱼ` onto `Z/q`.
    Character { modulus: u64, character: Vec<u64> },
}

impl fmt::Display for BaseCoverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseCoverKind::Trivial => write!(f, "trivial"),
            BaseCoverKind::Full { modulus } => write!(f, "full mod {modulus}"),
            BaseCoverKind::Character { modulus, character } => {
                let c: Vec<String> = character.iter().map(u64::to_string).collect();
                write!(f, "character mod {modulus} ({})", c.join(","))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct BaseCover {
    pub kind: BaseCoverKind,
    rank: usize,
    schreier: SchreierSystem,
}

impl BaseCoverKind {
    /// Image of a base word in the finite quotient, as a tuple.
    pub fn label(&self, rank: usize, w: &GroupWord) -> Vec<u64> {
        let e = w.exponent_vector(rank);
        match self {
            BaseCoverKind::Trivial => Vec::new(),
            BaseCoverKind::Full { modulus } => {
                e.iter().map(|x| x.rem_euclid(*modulus as i64) as u64).collect()
            }
            BaseCoverKind::Character { modulus, character } => {
                let q = *modulus as i64;
                let s: i64 = e
                    .iter()
                    .zip(character)
                    .map(|(x, c)| (x.rem_euclid(q) * *c as i64) % q)
                    .sum();
                vec![s.rem_euclid(q) as u64]
            }
        }
    }

    pub fn index(&self, rank: usize) -> u64 {
        match self {
            BaseCoverKind::Trivial => 1,
            BaseCoverKind::Full { modulus } => modulus.pow(rank as u32),
            BaseCoverKind::Character { modulus, .. } => *modulus,
        }
    }
}

impl BaseCover {
    pub fn new(kind: BaseCoverKind, rank: usize) -> Result<Self> {
        let size = kind.index(rank) as usize;
        let step = |j: usize, p: usize| -> usize {
            match &kind {
                BaseCoverKind::Trivial => p,
                BaseCoverKind::Full { modulus } => {
                    let q = *modulus as usize;
                    let place = q.pow((rank - 1 - j) as u32);
                    let d = (p / place) % q;
                    if d + 1 == q {
                        p - d * place
                    } else {
                        p + place
                    }
                }
                BaseCoverKind::Character { modulus, character } => {
                    (p + character[j] as usize) % *modulus as usize
                }
            }
        };
        let action: Vec<Vec<u32>> = (0..rank)
            .map(|j| (0..size).map(|p| step(j, p) as u32).collect())
            .collect();
        let schreier = SchreierSystem::bfs(action)?;
        Ok(Self {
            kind,
            rank,
            schreier,
        })
    }

    pub fn index(&self) -> usize {
        self.schreier.points()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Free generators of the subgroup of the free group on the base generators.
    pub fn generators(&self) -> Vec<GroupWord> {
        self.schreier.generator_words()
    }

    pub fn transversal(&self) -> &[GroupWord] {
        self.schreier.transversal()
    }
}

/// Characters onto `Z/q` up to multiplication by units, lexicographically
/// least representative of each class.
pub fn surjective_characters(rank: usize, q: u64) -> Vec<Vec<u64>> {
    let units: Vec<u64> = (1..q).filter(|u| u.gcd(&q) == 1).collect();
    let mut seen = BTreeSet::new();
    let total = q.pow(rank as u32);
    for code in 0..total {
        let mut c = vec![0u64; rank];
        let mut x = code;
        for v in c.iter_mut().rev() {
            *v = x % q;
            x /= q;
        }
        let g = c.iter().fold(q, |acc, &v| acc.gcd(&v));
        if g != 1 {
            continue;
        }
        let canon = units
            .iter()
            .map(|u| c.iter().map(|v| v * u % q).collect::<Vec<_>>())
            .min()
            .unwrap_or(c);
        seen.insert(canon);
    }
    seen.into_iter().collect()
}

/// Trivial cover, then for each `q > 1`: character kernels, then the full
/// kernel when it differs from them (rank ≥ 2). Duplicates removed.
pub fn base_cover_kinds(rank: usize, base_mods: &[u64]) -> Vec<BaseCoverKind> {
    let mut out = vec![BaseCoverKind::Trivial];
    let mut mods: Vec<u64> = base_mods.iter().copied().filter(|&q| q > 1).collect();
    mods.sort_unstable();
    mods.dedup();
    for q in mods {
        for c in surjective_characters(rank, q) {
            out.push(BaseCoverKind::Character {
                modulus: q,
                character: c,
            });
        }
        if rank >= 2 {
            out.push(BaseCoverKind::Full { modulus: q });
        }
    }
    out
}

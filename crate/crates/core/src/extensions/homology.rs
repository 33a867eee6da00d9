use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::covers::mod_m_cover_capped;
use crate::error::{Error, Result};
use crate::linalg::{
    cokernel_invariants, coinvariant_rank, invariant_rank, AbelianInvariants, IntegerMatrix,
};
use crate::mapping_class::{chain_periodic_element, korkmaz_pair, SymplecticMatrix};

use super::lattice::{base_cover_kinds, BaseCover, BaseCoverKind};
use super::spec::{big_to_json, BaseGroup, Monodromy, MonodromySpec};

fn ser_bigs<S: Serializer>(xs: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(big_to_json))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub b1: usize,
    #[serde(serialize_with = "ser_bigs")]
    pub torsion: Vec<BigInt>,
    pub excessive_dim: usize,
    pub albanese_one: bool,
}

fn stacked_minus_identity(mats: &[IntegerMatrix]) -> Result<IntegerMatrix> {
    let n = mats
        .first()
        .ok_or_else(|| Error::Invalid("empty acting set".into()))?
        .rows();
    let blocks: Vec<IntegerMatrix> = mats.iter().map(IntegerMatrix::minus_identity).collect();
    IntegerMatrix::hstack(n, &blocks)
}

/// `H₁(G) = Z^{base rank} ⊕ H₁(K)/⟨(Φᵢ − I)H₁(K)⟩`.
pub fn excessive_homology(spec: &MonodromySpec) -> Result<HomologyReport> {
    let mats = spec.symplectic_matrices();
    let coker = cokernel_invariants(&stacked_minus_identity(&mats)?);
    let excessive_dim = coinvariant_rank(&mats)?;
    debug_assert_eq!(excessive_dim, coker.free_rank);
    Ok(HomologyReport {
        b1: spec.base().rank() + excessive_dim,
        torsion: coker.torsion,
        excessive_dim,
        albanese_one: excessive_dim == 0,
    })
}

/// Free base of rank 1 acting by the chain element.
pub fn build_pi(genus: usize) -> Result<MonodromySpec> {
    MonodromySpec::new(
        genus,
        BaseGroup::Free(1),
        vec![Monodromy::Class(chain_periodic_element(genus)?)],
    )
}

/// Free base of rank 2 acting by the two conjugate periodic generators.
pub fn build_pi_amalgam(genus: usize) -> Result<MonodromySpec> {
    let pair = korkmaz_pair(genus)?;
    MonodromySpec::new(
        genus,
        BaseGroup::Free(2),
        vec![Monodromy::Class(pair.x), Monodromy::Class(pair.y)],
    )
}

/// Homology of one cell of the cover lattice: the subgroup `K̃_m ⋊ B̃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellHomology {
    pub base_index: usize,
    pub fiber_index: usize,
    /// Rank of `H₁` of the base cover.
    pub base_rank: usize,
    pub fiber_rank: usize,
    pub excessive_dim: usize,
    pub invariant_dim: usize,
    /// `H₁(K̃)` modulo the acting set.
    pub coinvariants: AbelianInvariants,
    pub h1: AbelianInvariants,
}

/// Matrices of the base generators and their inverses on `H₁(K̃_m)`.
struct FiberData {
    index: usize,
    forward: Vec<IntegerMatrix>,
    backward: Vec<IntegerMatrix>,
}

fn fiber_data(spec: &MonodromySpec, m: u64, cap: u64) -> Result<FiberData> {
    if m == 1 {
        return Ok(FiberData {
            index: 1,
            forward: spec.symplectic_matrices(),
            backward: spec.inverse_symplectic_matrices(),
        });
    }
    let autos = spec.split_automorphisms()?;
    let cover = mod_m_cover_capped(spec.fiber_genus(), m, cap)?;
    let act = |f: &crate::words::GroupAutomorphism| cover.induced_action(f).map(|a| a.matrix);
    Ok(FiberData {
        index: cover.index(),
        forward: autos.iter().map(|f| act(f)).collect::<Result<_>>()?,
        backward: autos.iter().map(|f| act(&f.inverse())).collect::<Result<_>>()?,
    })
}

fn base_cover_rank(base: BaseGroup, index: usize) -> usize {
    match base {
        BaseGroup::Free(n) => index * (n - 1) + 1,
        BaseGroup::Surface(h) => 2 * (1 + index * (h - 1)),
    }
}

fn cell_from_data(spec: &MonodromySpec, base: &BaseCover, fiber: &FiberData) -> Result<CellHomology> {
    let dim = fiber.forward[0].rows();
    let acting: Vec<IntegerMatrix> = base
        .generators()
        .iter()
        .map(|w| {
            w.letters().iter().try_fold(IntegerMatrix::identity(dim), |acc, l| {
                let m = if l.inverse {
                    &fiber.backward[l.generator as usize]
                } else {
                    &fiber.forward[l.generator as usize]
                };
                acc.mul(m)
            })
        })
        .collect::<Result<_>>()?;
    let coinvariants = cokernel_invariants(&stacked_minus_identity(&acting)?);
    let excessive_dim = coinvariant_rank(&acting)?;
    let invariant_dim = invariant_rank(&acting)?;
    let base_rank = base_cover_rank(spec.base(), base.index());
    let h1 = AbelianInvariants {
        free_rank: base_rank + coinvariants.free_rank,
        torsion: coinvariants.torsion.clone(),
    };
    Ok(CellHomology {
        base_index: base.index(),
        fiber_index: fiber.index,
        base_rank,
        fiber_rank: dim,
        excessive_dim,
        invariant_dim,
        coinvariants,
        h1,
    })
}

/// Homology of the single cell `(base cover, fiber modulus)`.
pub fn cell_homology(
    spec: &MonodromySpec,
    base: &BaseCoverKind,
    fiber_modulus: u64,
    cap: u64,
) -> Result<CellHomology> {
    let cover = BaseCover::new(base.clone(), spec.base().rank())?;
    let fiber = fiber_data(spec, fiber_modulus, cap)?;
    cell_from_data(spec, &cover, &fiber)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    FoundExcess,
    ExhaustedCap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverSearchEntry {
    pub base_cover: String,
    pub base_index: usize,
    pub fiber_modulus: u64,
    pub fiber_index: usize,
    pub index: usize,
    pub excessive_dim: usize,
    pub invariant_dim: usize,
    #[serde(serialize_with = "ser_bigs")]
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverSearchReport {
    pub entries: Vec<CoverSearchEntry>,
    pub verdict: Verdict,
    /// Cells of the lattice skipped because their index exceeds the cap.
    pub skipped_cells: usize,
    pub note: String,
}

struct Cell {
    kind: BaseCoverKind,
    base_index: usize,
    fiber_modulus: u64,
    fiber_index: usize,
}

impl Cell {
    fn index(&self) -> usize {
        self.base_index * self.fiber_index
    }
}

/// Lattice cells within the cap in exploration order, plus the number skipped.
fn lattice(spec: &MonodromySpec, fiber_mods: &[u64], base_mods: &[u64], cap: u64) -> (Vec<Cell>, usize) {
    let rank = spec.base().rank();
    let mut mods: Vec<u64> = fiber_mods.iter().copied().filter(|&m| m >= 1).collect();
    if mods.is_empty() {
        mods.push(1);
    }
    mods.sort_unstable();
    mods.dedup();
    let fiber_rank = 2 * spec.fiber_genus() as u32;
    let mut cells = Vec::new();
    let mut skipped = 0;
    for (order, kind) in base_cover_kinds(rank, base_mods).into_iter().enumerate() {
        for &m in &mods {
            let bi = kind.index(rank);
            let fi = m.checked_pow(fiber_rank);
            match fi.and_then(|fi| fi.checked_mul(bi)) {
                Some(total) if total <= cap => cells.push((
                    order,
                    Cell {
                        kind: kind.clone(),
                        base_index: bi as usize,
                        fiber_modulus: m,
                        fiber_index: fi.expect("checked") as usize,
                    },
                )),
                _ => skipped += 1,
            }
        }
    }
    cells.sort_by_key(|(order, c)| (c.index(), c.base_index, *order, c.fiber_modulus));
    (cells.into_iter().map(|(_, c)| c).collect(), skipped)
}

/// Runs cells in increasing total index, a batch of equal index at a time,
/// until `stop` holds; results up to and including the first hit.
fn explore<T: Send>(
    spec: &MonodromySpec,
    cells: &[Cell],
    cap: u64,
    eval: impl Fn(&Cell, &CellHomology) -> T + Sync,
    stop: impl Fn(&T) -> bool,
) -> Result<(Vec<T>, bool)> {
    let rank = spec.base().rank();
    let mut fibers: BTreeMap<u64, FiberData> = BTreeMap::new();
    for c in cells {
        if let std::collections::btree_map::Entry::Vacant(e) = fibers.entry(c.fiber_modulus) {
            e.insert(fiber_data(spec, c.fiber_modulus, cap)?);
        }
    }
    let mut out = Vec::new();
    let mut start = 0;
    while start < cells.len() {
        let idx = cells[start].index();
        let end = start + cells[start..].iter().take_while(|c| c.index() == idx).count();
        let batch: Vec<T> = cells[start..end]
            .par_iter()
            .map(|c| {
                let base = BaseCover::new(c.kind.clone(), rank)?;
                let h = cell_from_data(spec, &base, &fibers[&c.fiber_modulus])?;
                Ok(eval(c, &h))
            })
            .collect::<Result<_>>()?;
        for t in batch {
            let hit = stop(&t);
            out.push(t);
            if hit {
                return Ok((out, true));
            }
        }
        start = end;
    }
    Ok((out, false))
}

const SEARCH_NOTE: &str = "lattice: kernels of base maps onto (Z/q)^rank and onto cyclic Z/q, times mod-m fiber covers; ExhaustedCap means not found within this lattice and cap, not that no finite-index subgroup has excessive homology";

pub fn virtual_excessive_search(
    spec: &MonodromySpec,
    fiber_mods: &[u64],
    base_mods: &[u64],
    cap: u64,
) -> Result<CoverSearchReport> {
    let (cells, skipped_cells) = lattice(spec, fiber_mods, base_mods, cap);
    let (entries, found) = explore(
        spec,
        &cells,
        cap,
        |c, h| CoverSearchEntry {
            base_cover: c.kind.to_string(),
            base_index: c.base_index,
            fiber_modulus: c.fiber_modulus,
            fiber_index: c.fiber_index,
            index: c.index(),
            excessive_dim: h.excessive_dim,
            invariant_dim: h.invariant_dim,
            torsion: h.coinvariants.torsion.clone(),
        },
        |e| e.excessive_dim > 0,
    )?;
    Ok(CoverSearchReport {
        entries,
        verdict: if found { Verdict::FoundExcess } else { Verdict::ExhaustedCap },
        skipped_cells,
        note: SEARCH_NOTE.into(),
    })
}

/// Rank-2 abelian base: the torus group with commuting homology monodromies.
pub fn torus_base_check(
    phi_a: &SymplecticMatrix,
    phi_b: &SymplecticMatrix,
    base_mods: &[u64],
    cap: u64,
) -> Result<CoverSearchReport> {
    let genus = phi_a.genus();
    let (ab, ba) = (phi_a.mul(phi_b), phi_b.mul(phi_a));
    if ab != ba {
        return Err(Error::Invalid("torus-base monodromies must commute".into()));
    }
    let spec = MonodromySpec::new(
        genus,
        BaseGroup::Surface(1),
        vec![
            Monodromy::Symplectic(phi_a.clone()),
            Monodromy::Symplectic(phi_b.clone()),
        ],
    )?;
    virtual_excessive_search(&spec, &[1], base_mods, cap)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TorsionVerdict {
    Found,
    ExhaustedCap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionEntry {
    #[serde(skip)]
    pub base_kind: BaseCoverKind,
    pub base_cover: String,
    pub base_index: usize,
    pub fiber_modulus: u64,
    pub fiber_index: usize,
    pub index: usize,
    pub b1: usize,
    #[serde(serialize_with = "ser_bigs")]
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionReport {
    pub p: u64,
    pub entries: Vec<TorsionEntry>,
    pub verdict: TorsionVerdict,
    pub skipped_cells: usize,
}

/// First cell whose `H₁` has torsion of order divisible by `p`.
pub fn p_torsion_search(
    spec: &MonodromySpec,
    p: u64,
    fiber_mods: &[u64],
    base_mods: &[u64],
    cap: u64,
) -> Result<TorsionReport> {
    if p < 2 {
        return Err(Error::Invalid(format!("p = {p} is not a prime")));
    }
    let (cells, skipped_cells) = lattice(spec, fiber_mods, base_mods, cap);
    let (entries, found) = explore(
        spec,
        &cells,
        cap,
        |c, h| TorsionEntry {
            base_kind: c.kind.clone(),
            base_cover: c.kind.to_string(),
            base_index: c.base_index,
            fiber_modulus: c.fiber_modulus,
            fiber_index: c.fiber_index,
            index: c.index(),
            b1: h.h1.free_rank,
            torsion: h.h1.torsion.clone(),
        },
        |e| AbelianInvariants { free_rank: 0, torsion: e.torsion.clone() }.has_torsion_divisible_by(p),
    )?;
    Ok(TorsionReport {
        p,
        entries,
        verdict: if found { TorsionVerdict::Found } else { TorsionVerdict::ExhaustedCap },
        skipped_cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping_class::{humphries_twists, MappingClass};
    use crate::words::GroupAutomorphism;

    fn trivial(genus: usize, base: BaseGroup) -> MonodromySpec {
        let id = MappingClass::from_automorphism("id", GroupAutomorphism::identity(2 * genus), genus).unwrap();
        MonodromySpec::new(genus, base, vec![Monodromy::Class(id); base.rank()]).unwrap()
    }

    #[test]
    fn product_homology() {
        let r = excessive_homology(&trivial(2, BaseGroup::Free(2))).unwrap();
        assert_eq!((r.b1, r.excessive_dim, r.albanese_one), (6, 4, false));
        assert!(r.torsion.is_empty());
    }

    #[test]
    fn flagship_numbers() {
        for g in 2..=3 {
            let r = excessive_homology(&build_pi(g).unwrap()).unwrap();
            assert_eq!((r.b1, r.excessive_dim), (1, 0));
        }
        let r = excessive_homology(&build_pi_amalgam(3).unwrap()).unwrap();
        assert_eq!((r.b1, r.excessive_dim), (2, 0));
        assert!(build_pi_amalgam(2).is_err());
    }

    #[test]
    fn searches() {
        let r = virtual_excessive_search(&trivial(2, BaseGroup::Free(2)), &[1, 2], &[2], 1000).unwrap();
        assert_eq!(r.verdict, Verdict::FoundExcess);
        assert_eq!((r.entries.len(), r.entries[0].index, r.entries[0].excessive_dim), (1, 1, 4));

        let pi = build_pi(2).unwrap();
        let r = virtual_excessive_search(&pi, &[1], &[10], 100).unwrap();
        assert_eq!(r.verdict, Verdict::FoundExcess);
        let last = r.entries.last().unwrap();
        assert_eq!((last.base_index, last.excessive_dim), (10, 4));
        for e in &r.entries {
            assert_eq!(e.excessive_dim, e.invariant_dim);
        }
        let r = virtual_excessive_search(&pi, &[1], &[2], 100).unwrap();
        assert_eq!(r.verdict, Verdict::ExhaustedCap);
    }

    #[test]
    fn fiber_cover_cells_are_consistent() {
        // Φ^{10} = I makes the base cover a product, so every fiber cover
        // sees a trivial action.
        let pi = build_pi(2).unwrap();
        let kind = BaseCoverKind::Character { modulus: 10, character: vec![1] };
        let h = cell_homology(&pi, &kind, 2, 10_000).unwrap();
        assert_eq!((h.fiber_rank, h.excessive_dim), (34, 34));
        let h = cell_homology(&pi, &BaseCoverKind::Trivial, 2, 10_000).unwrap();
        assert_eq!(h.excessive_dim, h.invariant_dim);
    }

    #[test]
    fn torus_checks() {
        let id = SymplecticMatrix::identity(2);
        let phi = chain_periodic_element(2).unwrap().symplectic;
        let r = torus_base_check(&id, &id, &[10], 100).unwrap();
        assert_eq!((r.entries[0].index, r.entries[0].excessive_dim), (1, 4));
        for (a, b) in [(&phi, &id), (&phi, &phi)] {
            let r = torus_base_check(a, b, &[10], 100).unwrap();
            assert_eq!(r.verdict, Verdict::FoundExcess);
            let last = r.entries.last().unwrap();
            assert_eq!((last.base_index, last.excessive_dim), (10, 4));
        }
        let t = humphries_twists(2).unwrap();
        assert!(torus_base_check(&t[0].symplectic, &t[1].symplectic, &[2], 100).is_err());
    }

    #[test]
    fn torsion_search() {
        let minus = SymplecticMatrix::new(IntegerMatrix::identity(4).neg(), 2).unwrap();
        let spec = MonodromySpec::new(2, BaseGroup::Free(1), vec![Monodromy::Symplectic(minus)]).unwrap();
        let r = p_torsion_search(&spec, 2, &[1], &[], 10).unwrap();
        assert_eq!(r.verdict, TorsionVerdict::Found);
        assert_eq!(r.entries[0].torsion, vec![BigInt::from(2); 4]);
        let r = p_torsion_search(&trivial(2, BaseGroup::Free(1)), 2, &[1], &[2], 10).unwrap();
        assert_eq!(r.verdict, TorsionVerdict::ExhaustedCap);
        assert!(r.entries.iter().all(|e| e.torsion.is_empty()));
    }
}

//! Brute-force cross-checks that share no code path with the main pipelines
//! beyond word and matrix primitives.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::extensions::{BaseCoverKind, BaseGroup, MonodromySpec};
use crate::linalg::{cokernel_invariants, AbelianInvariants, IntegerMatrix};
use crate::linalg::poly::prime_factors;
use crate::words::{GroupWord, Letter, SurfacePresentation};

/// Lower-triangular basis of the column lattice via gcd column operations;
/// `None` when the lattice has lower rank than the ambient space.
fn hermite_basis(a: &IntegerMatrix) -> Option<Vec<Vec<BigInt>>> {
    let r = a.rows();
    let mut cols: Vec<Vec<BigInt>> = (0..a.cols()).map(|j| a.column(j)).collect();
    let mut basis = Vec::with_capacity(r);
    for i in 0..r {
        // fold every column's row-i entry into one pivot column
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::new();
        for c in cols.drain(..) {
            if c[i].is_zero() {
                rest.push(c);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(c),
                Some(p) => {
                    let e = p[i].extended_gcd(&c[i]);
                    let (pa, ca) = (&p[i] / &e.gcd, &c[i] / &e.gcd);
                    let new_p: Vec<BigInt> = p.iter().zip(&c).map(|(x, y)| &e.x * x + &e.y * y).collect();
                    let killed: Vec<BigInt> = p.iter().zip(&c).map(|(x, y)| &ca * x - &pa * y).collect();
                    rest.push(killed);
                    pivot = Some(new_p);
                }
            }
        }
        let mut p = pivot?;
        if p[i].is_negative() {
            p.iter_mut().for_each(|x| *x = -&*x);
        }
        basis.push(p);
        cols = rest;
    }
    Some(basis)
}

fn reduce(x: &mut [BigInt], basis: &[Vec<BigInt>]) {
    for (i, b) in basis.iter().enumerate() {
        let q = x[i].div_floor(&b[i]);
        if !q.is_zero() {
            for (xk, bk) in x.iter_mut().zip(b).skip(i) {
                *xk -= &q * bk;
            }
        }
    }
}

/// Invariants of `Z^rows / column-span(A)` by enumerating the quotient, when
/// it is finite of order at most `limit`.
pub fn brute_force_cokernel(a: &IntegerMatrix, limit: u64) -> Option<AbelianInvariants> {
    let basis = hermite_basis(a)?;
    let h: Vec<u64> = basis
        .iter()
        .enumerate()
        .map(|(i, b)| b[i].to_u64())
        .collect::<Option<_>>()?;
    let order = h.iter().try_fold(1u64, |acc, &x| acc.checked_mul(x))?;
    if order > limit {
        return None;
    }
    let r = h.len();
    // every residue tuple 0 ≤ xᵢ < hᵢ is one group element
    let elements: Vec<Vec<BigInt>> = (0..order)
        .map(|mut code| {
            let mut x = vec![BigInt::zero(); r];
            for (i, hi) in h.iter().enumerate().rev() {
                x[i] = BigInt::from(code % hi);
                code /= hi;
            }
            x
        })
        .collect();
    let killed_by = |k: u64| -> u64 {
        elements
            .iter()
            .filter(|x| {
                let mut y: Vec<BigInt> = x.iter().map(|v| v * k).collect();
                reduce(&mut y, &basis);
                y.iter().all(Zero::is_zero)
            })
            .count() as u64
    };
    // exponents of each p-primary part, largest first
    let mut primary: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for p in prime_factors(order) {
        // counts[e] = log_p |{x : pᵉx = 0}|
        let mut counts = vec![0u32];
        let mut pe = 1u64;
        loop {
            pe *= p;
            let c = killed_by(pe).ilog(p);
            if c == *counts.last().expect("nonempty") {
                break;
            }
            counts.push(c);
        }
        let mut exps = Vec::new();
        for t in 1.. {
            let e = (1..counts.len()).filter(|&e| counts[e] - counts[e - 1] >= t).count() as u32;
            if e == 0 {
                break;
            }
            exps.push(e);
        }
        primary.insert(p, exps);
    }
    let len = primary.values().map(Vec::len).max().unwrap_or(0);
    let mut torsion: Vec<BigInt> = (0..len)
        .map(|t| {
            primary
                .iter()
                .map(|(&p, e)| BigInt::from(p).pow(e.get(t).copied().unwrap_or(0)))
                .product()
        })
        .collect();
    torsion.reverse();
    torsion.retain(|t| !t.is_one());
    Some(AbelianInvariants {
        free_rank: 0,
        torsion,
    })
}

fn apply_mod(m: &IntegerMatrix, v: &[i64], modulus: i64) -> Vec<i64> {
    (0..m.rows())
        .map(|i| {
            let s: BigInt = (0..m.cols()).map(|j| &m[(i, j)] * v[j]).sum();
            s.mod_floor(&BigInt::from(modulus)).to_i64().expect("small")
        })
        .collect()
}

/// `H₁` of the finite-index subgroup of the extension group that maps onto
/// the base cover `kind` and meets the fiber in the mod-`m` cover, computed
/// by Reidemeister–Schreier from the full presentation
/// `⟨xⱼ, a, b | R, xⱼ·y·xⱼ⁻¹·φⱼ(y)⁻¹⟩`.
pub fn extension_subgroup_homology(
    spec: &MonodromySpec,
    kind: &BaseCoverKind,
    modulus: u64,
) -> Result<AbelianInvariants> {
    let BaseGroup::Free(n) = spec.base() else {
        return Err(Error::Invalid("presentation oracle handles free bases only".into()));
    };
    let autos = spec
        .automorphisms()
        .ok_or_else(|| Error::Invalid("presentation oracle needs automorphisms".into()))?;
    let g = spec.fiber_genus();
    let fr = 2 * g;
    let gens = n + fr;
    let m = modulus as i64;

    // relators in generators 0..n (base) and n..n+2g (fiber)
    let shift = |w: &GroupWord| -> Vec<Letter> {
        w.letters()
            .iter()
            .map(|l| Letter::new(l.generator + n as u32, l.inverse))
            .collect()
    };
    let mut relators: Vec<Vec<Letter>> = vec![shift(SurfacePresentation::new(g).relator())];
    for (j, f) in autos.iter().enumerate() {
        for y in 0..fr {
            let mut r = vec![Letter::pos(j as u32), Letter::pos((n + y) as u32), Letter::neg(j as u32)];
            r.extend(shift(&f.images()[y].inverse()));
            relators.push(r);
        }
    }

    // coset labels (base image, fiber class mod m)
    let forward: Vec<IntegerMatrix> = autos.iter().map(|f| f.abelianize()).collect();
    let backward: Vec<IntegerMatrix> = autos.iter().map(|f| f.inverse().abelianize()).collect();
    let base_step = |j: usize, beta: &[u64], sign: i64| -> Vec<u64> {
        match kind {
            BaseCoverKind::Trivial => Vec::new(),
            BaseCoverKind::Full { modulus: q } => {
                let mut b = beta.to_vec();
                b[j] = (b[j] as i64 + sign).rem_euclid(*q as i64) as u64;
                b
            }
            BaseCoverKind::Character { modulus: q, character } => {
                vec![(beta[0] as i64 + sign * character[j] as i64).rem_euclid(*q as i64) as u64]
            }
        }
    };
    type Label = (Vec<u64>, Vec<i64>);
    let step = |label: &Label, l: Letter| -> Label {
        let (beta, kappa) = label;
        let gi = l.generator as usize;
        let sign = if l.inverse { -1 } else { 1 };
        if gi < n {
            let mat = if l.inverse { &forward[gi] } else { &backward[gi] };
            (base_step(gi, beta, sign), apply_mod(mat, kappa, m))
        } else {
            let mut k = kappa.clone();
            k[gi - n] = (k[gi - n] + sign).rem_euclid(m);
            (beta.clone(), k)
        }
    };
    let origin: Label = (
        match kind {
            BaseCoverKind::Trivial => Vec::new(),
            BaseCoverKind::Full { .. } => vec![0; n],
            BaseCoverKind::Character { .. } => vec![0],
        },
        vec![0; fr],
    );
    // breadth-first coset table; tree edges are the discovery edges
    let mut index: HashMap<Label, usize> = HashMap::from([(origin.clone(), 0)]);
    let mut labels = vec![origin];
    let mut table: Vec<Vec<usize>> = Vec::new();
    let mut tree_edges = Vec::new();
    let mut p = 0;
    while p < labels.len() {
        let mut row = Vec::with_capacity(gens);
        for gi in 0..gens {
            let next = step(&labels[p], Letter::pos(gi as u32));
            let q = *index.entry(next.clone()).or_insert_with(|| {
                labels.push(next);
                tree_edges.push((p, gi));
                labels.len() - 1
            });
            row.push(q);
        }
        table.push(row);
        p += 1;
    }
    let cosets = labels.len();
    let mut inverse = vec![vec![0usize; gens]; cosets];
    for (p, row) in table.iter().enumerate() {
        for (gi, &q) in row.iter().enumerate() {
            inverse[q][gi] = p;
        }
    }
    let mut edge = vec![0usize; cosets * gens];
    for &(p, gi) in &tree_edges {
        edge[p * gens + gi] = usize::MAX;
    }
    let mut count = 0;
    for e in edge.iter_mut() {
        if *e != usize::MAX {
            *e = count;
            count += 1;
        }
    }
    let columns: Vec<Vec<BigInt>> = (0..cosets)
        .flat_map(|p| relators.iter().map(move |r| (p, r)))
        .map(|(p, r)| {
            let mut v = vec![BigInt::zero(); count];
            let mut c = p;
            for l in r {
                let gi = l.generator as usize;
                if l.inverse {
                    let q = inverse[c][gi];
                    if edge[q * gens + gi] != usize::MAX {
                        v[edge[q * gens + gi]] -= 1;
                    }
                    c = q;
                } else {
                    if edge[c * gens + gi] != usize::MAX {
                        v[edge[c * gens + gi]] += 1;
                    }
                    c = table[c][gi];
                }
            }
            debug_assert_eq!(c, p);
            v
        })
        .collect();
    Ok(cokernel_invariants(&IntegerMatrix::from_columns(count, &columns)))
}

/// Homomorphisms of the surface group onto permutation groups of `degree`
/// points, as generator images; found by fixing random images of all but the
/// last generator and searching the last one exhaustively.
pub fn surface_permutation_quotients(genus: usize, degree: usize, tries: usize, seed: u64) -> Vec<Vec<Vec<u8>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perms = all_permutations(degree);
    let mut out = Vec::new();
    for _ in 0..tries {
        let fixed: Vec<Vec<u8>> = (0..2 * genus - 1)
            .map(|_| perms[rng.gen_range(0..perms.len())].clone())
            .collect();
        for last in &perms {
            let mut images = fixed.clone();
            images.push(last.clone());
            let r = SurfacePresentation::new(genus).relator().clone();
            if evaluate(&images, &r).iter().enumerate().all(|(i, &x)| i == x as usize) {
                out.push(images);
            }
        }
    }
    out
}

fn all_permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut p: Vec<u8> = (0..n as u8).collect();
    fn rec(k: usize, p: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// Image of a word as a permutation (acting on the right).
pub fn evaluate(images: &[Vec<u8>], w: &GroupWord) -> Vec<u8> {
    let n = images[0].len();
    let inverses: Vec<Vec<u8>> = images
        .iter()
        .map(|p| {
            let mut q = vec![0u8; n];
            for (i, &x) in p.iter().enumerate() {
                q[x as usize] = i as u8;
            }
            q
        })
        .collect();
    let mut state: Vec<u8> = (0..n as u8).collect();
    for l in w.letters() {
        let p = if l.inverse { &inverses[l.generator as usize] } else { &images[l.generator as usize] };
        state = state.iter().map(|&x| p[x as usize]).collect();
    }
    state
}

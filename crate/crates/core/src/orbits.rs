//! Orbits of rational vectors under finitely generated integer matrix
//! groups: breadth-first closure for finite orbits, and certificates of
//! infinitude from the minimal polynomial of a word on the cyclic subspace
//! of the vector.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::covers::mod_m_cover;
use crate::error::{Error, Result};
use crate::linalg::poly::{monic_from_rational, split_cyclotomic, IntPoly};
use crate::linalg::{coinvariant_rank, invariant_rank, IntegerMatrix};
use crate::mapping_class::humphries_twists;

pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CertificateKind {
    /// The minimal polynomial on the cyclic subspace has a factor that is not cyclotomic.
    NonCyclotomic,
    /// It is a product of cyclotomics with one of them repeated, so some
    /// power of the word acts as a nontrivial unipotent there.
    RepeatedCyclotomic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCertificate {
    /// Generator indices; the word acts as `M[w₀]·M[w₁]⋯`.
    pub word: Vec<usize>,
    pub kind: CertificateKind,
    /// Coefficients, constant term first.
    pub minimal_polynomial: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OrbitStatus {
    Finite { size: usize },
    Infinite { certificate: OrbitCertificate },
    Unknown { budget_spent: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub status: OrbitStatus,
    pub vector: Vec<String>,
    pub generators: Vec<String>,
    /// Seed of the random certificate words.
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitOptions {
    /// Largest number of distinct orbit points explored.
    pub budget: usize,
    /// Longest certificate word tried.
    pub word_cap: usize,
    /// Pseudo-random words tried beyond the exhaustive lengths.
    pub random_words: usize,
    pub seed: u64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            word_cap: 8,
            random_words: 64,
            seed: 0,
        }
    }
}

/// Exhaustive certificate search covers words up to this length.
const EXHAUSTIVE_LENGTH: usize = 3;

fn apply_word(mats: &[IntegerMatrix], word: &[usize], v: &[BigInt]) -> Vec<BigInt> {
    word.iter().rev().fold(v.to_vec(), |x, &i| mats[i].mul_vec(&x))
}

/// Integer vector and positive scale with `v = w / scale`.
fn clear_denominators(v: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let scale = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let w = v.iter().map(|q| q.numer() * (&scale / q.denom())).collect();
    (w, scale)
}

/// Minimal polynomial of `W` restricted to the span of `v, Wv, W²v, …`.
pub fn local_minimal_polynomial(mats: &[IntegerMatrix], word: &[usize], v: &[BigInt]) -> Option<IntPoly> {
    struct Row {
        pivot: usize,
        vec: Vec<BigRational>,
        comb: Vec<BigRational>,
    }
    let n = v.len();
    let mut rows: Vec<Row> = Vec::new();
    let mut x = v.to_vec();
    for k in 0..=n {
        let mut vec: Vec<BigRational> = x.iter().cloned().map(BigRational::from_integer).collect();
        let mut comb = vec![BigRational::zero(); n + 1];
        comb[k] = BigRational::one();
        for r in &rows {
            if vec[r.pivot].is_zero() {
                continue;
            }
            let f = &vec[r.pivot] / &r.vec[r.pivot];
            for (a, b) in vec.iter_mut().zip(&r.vec) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
            for (a, b) in comb.iter_mut().zip(&r.comb) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
        }
        match vec.iter().position(|q| !q.is_zero()) {
            Some(pivot) => rows.push(Row { pivot, vec, comb }),
            None => return monic_from_rational(&comb[..k]),
        }
        x = apply_word(mats, word, &x);
    }
    None
}

fn certify(mats: &[IntegerMatrix], word: &[usize], v: &[BigInt]) -> Option<OrbitCertificate> {
    let mu = local_minimal_polynomial(mats, word, v)?;
    let split = split_cyclotomic(&mu);
    let kind = if !split.is_fully_cyclotomic() {
        CertificateKind::NonCyclotomic
    } else if !split.is_squarefree() {
        CertificateKind::RepeatedCyclotomic
    } else {
        return None;
    };
    Some(OrbitCertificate {
        word: word.to_vec(),
        kind,
        minimal_polynomial: mu.0.iter().map(ToString::to_string).collect(),
    })
}

/// First certifying word of `words` in the given order.
fn first_certificate(mats: &[IntegerMatrix], words: &[Vec<usize>], v: &[BigInt]) -> Option<OrbitCertificate> {
    words
        .par_iter()
        .map(|w| certify(mats, w, v))
        .find_first(Option::is_some)
        .flatten()
}

fn words_of_length(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..k).map(move |i| {
                    let mut w = w.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
    }
    out
}

/// Breadth-first closure; `Ok(size)` when closed within budget, `Err(spent)` otherwise.
fn closure(mats: &[IntegerMatrix], v: &[BigInt], budget: usize) -> std::result::Result<(usize, Vec<Vec<BigInt>>), usize> {
    let mut seen: HashSet<Vec<BigInt>> = HashSet::from([v.to_vec()]);
    let mut order = vec![v.to_vec()];
    let mut frontier = vec![v.to_vec()];
    while !frontier.is_empty() {
        let images: Vec<Vec<BigInt>> = frontier
            .par_iter()
            .flat_map_iter(|x| mats.iter().map(move |m| m.mul_vec(x)))
            .collect();
        let mut next = Vec::new();
        for y in images {
            if !seen.contains(&y) {
                if seen.len() >= budget {
                    return Err(seen.len());
                }
                seen.insert(y.clone());
                order.push(y.clone());
                next.push(y);
            }
        }
        frontier = next;
    }
    Ok((seen.len(), order))
}

fn check_square(mats: &[IntegerMatrix], n: usize) -> Result<()> {
    if mats.is_empty() {
        return Err(Error::Invalid("no acting matrices".into()));
    }
    for m in mats {
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix acting on vectors of length {n}",
                m.rows(),
                m.cols()
            )));
        }
    }
    Ok(())
}

/// Finite, certified infinite, or unknown within the budget.
///
/// Words of length 1 to 3 are tried exhaustively first, then the orbit is
/// closed up breadth-first, then seeded random longer words are tried.
pub fn orbit_status(
    mats: &[IntegerMatrix],
    labels: &[String],
    v: &[BigRational],
    options: &OrbitOptions,
) -> Result<OrbitReport> {
    if v.iter().all(Zero::is_zero) {
        return Err(Error::Invalid("orbit of the zero vector".into()));
    }
    check_square(mats, v.len())?;
    let (w, _) = clear_denominators(v);
    let report = |status| OrbitReport {
        status,
        vector: v.iter().map(ToString::to_string).collect(),
        generators: labels.to_vec(),
        seed: options.seed,
    };
    for len in 1..=EXHAUSTIVE_LENGTH.min(options.word_cap) {
        if let Some(c) = first_certificate(mats, &words_of_length(mats.len(), len), &w) {
            return Ok(report(OrbitStatus::Infinite { certificate: c }));
        }
    }
    let spent = match closure(mats, &w, options.budget) {
        Ok((size, _)) => return Ok(report(OrbitStatus::Finite { size })),
        Err(spent) => spent,
    };
    if options.word_cap > EXHAUSTIVE_LENGTH {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        let mut words: Vec<Vec<usize>> = (0..options.random_words)
            .map(|_| {
                let len = rng.gen_range(EXHAUSTIVE_LENGTH + 1..=options.word_cap);
                (0..len).map(|_| rng.gen_range(0..mats.len())).collect()
            })
            .collect();
        words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        words.dedup();
        if let Some(c) = first_certificate(mats, &words, &w) {
            return Ok(report(OrbitStatus::Infinite { certificate: c }));
        }
    }
    Ok(report(OrbitStatus::Unknown { budget_spent: spent }))
}

/// Replays a verdict: a finite orbit is recomputed and checked closed with
/// the stated size; a certificate is recomputed from its word.
pub fn verify_orbit_report(mats: &[IntegerMatrix], report: &OrbitReport) -> Result<bool> {
    let v: Vec<BigRational> = report
        .vector
        .iter()
        .map(|s| s.parse::<BigRational>().map_err(|e| Error::Parse(format!("{s}: {e}"))))
        .collect::<Result<_>>()?;
    check_square(mats, v.len())?;
    let (w, _) = clear_denominators(&v);
    Ok(match &report.status {
        OrbitStatus::Finite { size } => match closure(mats, &w, *size) {
            Ok((n, points)) => {
                let set: HashSet<&Vec<BigInt>> = points.iter().collect();
                n == *size && points.iter().all(|x| mats.iter().all(|m| set.contains(&m.mul_vec(x))))
            }
            Err(_) => false,
        },
        OrbitStatus::Infinite { certificate } => {
            certificate.word.iter().all(|&i| i < mats.len())
                && apply_word(mats, &certificate.word, &w) != w
                && certify(mats, &certificate.word, &w).as_ref() == Some(certificate)
        }
        OrbitStatus::Unknown { .. } => true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PrymOrbitEntry {
    pub source: String,
    pub report: OrbitReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrymReport {
    pub genus: usize,
    pub modulus: u64,
    pub cover_genus: usize,
    pub homology_dim: usize,
    pub acting_set_size: usize,
    pub coinvariant_rank: usize,
    pub invariant_rank: usize,
    pub ranks_agree: bool,
    pub seed: u64,
    pub budget: usize,
    pub orbits: Vec<PrymOrbitEntry>,
    pub note: String,
}

const PRYM_NOTE: &str = "invariant_rank = 0 rules out nonzero fixed vectors only; infinite orbits for the sampled vectors are evidence about the no-finite-orbit conjecture for this cover, not a proof, since only sampled vectors and one characteristic cover were examined";

/// Twist actions and conjugation by every coset representative on
/// `H₁` of the mod-m cover, then orbits of sampled vectors.
pub fn prym_experiment(genus: usize, modulus: u64, samples: usize, options: &OrbitOptions) -> Result<PrymReport> {
    let cover = mod_m_cover(genus, modulus)?;
    let twists = humphries_twists(genus)?;
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    for t in &twists {
        mats.push(cover.induced_action(&t.automorphism)?.matrix);
        labels.push(t.label.clone());
    }
    let conj: Vec<(String, IntegerMatrix)> = cover
        .transversal()
        .par_iter()
        .map(|k| cover.conjugation_action(k).map(|a| (a.label, a.matrix)))
        .collect::<Result<_>>()?;
    for (l, m) in conj {
        labels.push(l);
        mats.push(m);
    }
    let dim = cover.homology_rank();
    let coinvariant = coinvariant_rank(&mats)?;
    let invariant = invariant_rank(&mats)?;

    let mut vectors: Vec<(String, Vec<BigRational>)> = Vec::new();
    for i in 0..samples.min(dim) {
        let mut e = vec![BigRational::zero(); dim];
        e[i] = BigRational::one();
        vectors.push((format!("basis {}", i + 1), e));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    for i in 0..samples {
        let v = loop {
            let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
            if v.iter().any(|x| *x != 0) {
                break v;
            }
        };
        vectors.push((
            format!("random {}", i + 1),
            v.into_iter().map(|x| BigRational::from_integer(x.into())).collect(),
        ));
    }
    let orbits = vectors
        .into_iter()
        .map(|(source, v)| {
            Ok(PrymOrbitEntry {
                source,
                report: orbit_status(&mats, &labels, &v, options)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(PrymReport {
        genus,
        modulus,
        cover_genus: cover.cover_genus(),
        homology_dim: dim,
        acting_set_size: mats.len(),
        coinvariant_rank: coinvariant,
        invariant_rank: invariant,
        ranks_agree: coinvariant == invariant,
        seed: options.seed,
        budget: options.budget,
        orbits,
        note: PRYM_NOTE.into(),
    })
}

/// Rational vector from integers.
pub fn rational_vector(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping_class::{chain_periodic_element, transvection};

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("M{i}")).collect()
    }

    #[test]
    fn minus_identity() {
        let m = vec![IntegerMatrix::identity(4).neg()];
        let r = orbit_status(&m, &labels(1), &rational_vector(&[1, 0, 2, 0]), &OrbitOptions::default()).unwrap();
        assert_eq!(r.status, OrbitStatus::Finite { size: 2 });
        assert!(verify_orbit_report(&m, &r).unwrap());
    }

    #[test]
    fn transvection_is_infinite() {
        let t = transvection(&[1, 0, 0, 0]).unwrap().into_matrix();
        let m = vec![t];
        // ⟨b₁, a₁⟩ ≠ 0
        let r = orbit_status(&m, &labels(1), &rational_vector(&[0, 1, 0, 0]), &OrbitOptions::default()).unwrap();
        match &r.status {
            OrbitStatus::Infinite { certificate } => {
                assert_eq!(certificate.word, vec![0]);
                assert_eq!(certificate.kind, CertificateKind::RepeatedCyclotomic);
            }
            s => panic!("{s:?}"),
        }
        assert!(verify_orbit_report(&m, &r).unwrap());
        // a fixed vector has orbit of size one
        let r = orbit_status(&m, &labels(1), &rational_vector(&[1, 0, 0, 0]), &OrbitOptions::default()).unwrap();
        assert_eq!(r.status, OrbitStatus::Finite { size: 1 });
    }

    #[test]
    fn periodic_orbit() {
        let phi = chain_periodic_element(2).unwrap().symplectic.into_matrix();
        let m = vec![phi];
        let v = vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::zero(),
            BigRational::from_integer(3.into()),
            BigRational::zero(),
        ];
        let r = orbit_status(&m, &labels(1), &v, &OrbitOptions::default()).unwrap();
        match r.status {
            OrbitStatus::Finite { size } => assert!(size <= 10 && 10 % size == 0),
            s => panic!("{s:?}"),
        }
        assert!(verify_orbit_report(&m, &r).unwrap());
    }

    #[test]
    fn hyperbolic_word_found() {
        // t_a·t_b has trace 3 on the first handle
        let ta = transvection(&[1, 0]).unwrap().into_matrix();
        let tb = transvection(&[0, 1]).unwrap().into_matrix();
        let m = vec![ta, tb];
        let r = orbit_status(&m, &labels(2), &rational_vector(&[1, 1]), &OrbitOptions::default()).unwrap();
        assert!(matches!(r.status, OrbitStatus::Infinite { .. }));
        assert!(verify_orbit_report(&m, &r).unwrap());
        let mut forged = r.clone();
        if let OrbitStatus::Infinite { certificate } = &mut forged.status {
            certificate.kind = CertificateKind::NonCyclotomic;
        }
        assert!(!verify_orbit_report(&m, &forged).unwrap());
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        let t = transvection(&[1, 0]).unwrap().into_matrix();
        let opts = OrbitOptions { budget: 5, word_cap: 0, ..OrbitOptions::default() };
        let r = orbit_status(&[t], &labels(1), &rational_vector(&[0, 1]), &opts).unwrap();
        assert_eq!(r.status, OrbitStatus::Unknown { budget_spent: 5 });
        assert!(orbit_status(&[IntegerMatrix::identity(2)], &labels(1), &rational_vector(&[0, 0]), &opts).is_err());
    }

    #[test]
    fn small_prym_run() {
        let opts = OrbitOptions { budget: 1000, ..OrbitOptions::default() };
        let r = prym_experiment(2, 1, 2, &opts).unwrap();
        assert_eq!((r.homology_dim, r.invariant_rank, r.coinvariant_rank), (4, 0, 0));
        for o in &r.orbits {
            assert!(matches!(o.report.status, OrbitStatus::Infinite { .. }));
        }
    }
}

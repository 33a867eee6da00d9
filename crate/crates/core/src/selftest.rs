//! Acceptance suite: one named check per criterion, each returning a
//! pass/fail verdict with a short deterministic detail line.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::covers::mod_m_cover;
use crate::error::Result;
use crate::extensions::{
    build_pi, build_pi_amalgam, cell_homology, excessive_homology, p_torsion_search, torus_base_check,
    BaseCoverKind, BaseGroup, Monodromy, MonodromySpec, Verdict,
};
use crate::linalg::{
    cokernel_invariants, coinvariant_rank, invariant_rank, matrix_order, smith_normal_form, IntegerMatrix,
    MatrixOrder,
};
use crate::mapping_class::{
    chain_periodic_element, humphries_classes, humphries_twists, transvection, MappingClass, SymplecticMatrix,
};
use crate::oracle::{brute_force_cokernel, extension_subgroup_homology};
use crate::orbits::{
    orbit_status, prym_experiment, rational_vector, verify_orbit_report, OrbitOptions, OrbitStatus,
};
use crate::words::{verify_surface_automorphism, GroupAutomorphism};

/// Invariant rank on `H₁` of the genus-17 mod-2 cover of a genus-2 surface
/// under the twist and conjugation actions; recorded from the first run.
pub const PRYM_GOLDEN_INVARIANT_RANK: usize = 0;

#[derive(Clone, Debug)]
pub struct SelftestOptions {
    pub seed: u64,
    pub prym_time_limit: Duration,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        Self {
            seed: 2024,
            prym_time_limit: Duration::from_secs(30 * 60),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub const CRITERIA: [&str; 12] = [
    "flagship Betti numbers",
    "chain element order",
    "chain element coinvariants",
    "coinvariant/invariant duality",
    "Smith normal form properties",
    "mapping-class integrity",
    "cover arithmetic",
    "torus-base searches",
    "orbit verdicts",
    "p-torsion oracle equivalence",
    "Prym desk run",
    "monotonicity on nested covers",
];

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn within(limit: Duration, start: Instant, what: &str) -> std::result::Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

fn flagship() -> Check {
    let mut parts = Vec::new();
    for g in 2..=5 {
        let t = Instant::now();
        let r = lift(build_pi(g).and_then(|s| excessive_homology(&s)))?;
        within(Duration::from_secs(1), t, &format!("b1 of the mapping torus, g={g}"))?;
        ensure(r.b1 == 1, || format!("g={g}: mapping torus b1 = {}", r.b1))?;
        parts.push(format!("g={g}:1"));
    }
    for g in 3..=4 {
        let t = Instant::now();
        let r = lift(build_pi_amalgam(g).and_then(|s| excessive_homology(&s)))?;
        within(Duration::from_secs(1), t, &format!("b1 of the amalgam, g={g}"))?;
        ensure(r.b1 == 2, || format!("g={g}: amalgam b1 = {}", r.b1))?;
        parts.push(format!("amalgam g={g}:2"));
    }
    Ok(format!("b1 {}", parts.join(" ")))
}

fn chain_order() -> Check {
    let mut orders = Vec::new();
    for g in 2..=5 {
        let t = Instant::now();
        let phi = lift(chain_periodic_element(g))?;
        let o = matrix_order(phi.symplectic.matrix(), 1000);
        within(Duration::from_secs(1), t, &format!("order at g={g}"))?;
        let want = MatrixOrder::Finite(4 * g as u64 + 2);
        ensure(o == want, || format!("g={g}: {o:?}, expected {want:?}"))?;
        orders.push((4 * g + 2).to_string());
    }
    Ok(format!("orders {}", orders.join(",")))
}

fn chain_coinvariants() -> Check {
    for g in 2..=5 {
        let phi = lift(chain_periodic_element(g))?;
        let r = lift(coinvariant_rank(&[phi.symplectic.into_matrix()]))?;
        ensure(r == 0, || format!("g={g}: coinvariant rank {r}"))?;
    }
    Ok("coinvariant rank 0 for g=2..5".into())
}

fn random_symplectic(rng: &mut ChaCha8Rng, genus: usize, support: usize) -> SymplecticMatrix {
    let mut m = SymplecticMatrix::identity(genus);
    for _ in 0..rng.gen_range(1..=4) {
        let c: Vec<i64> = (0..2 * genus)
            .map(|i| if i < support { rng.gen_range(-2..=2) } else { 0 })
            .collect();
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        let t = transvection(&c).expect("nonzero class");
        m = if rng.gen_bool(0.5) { m.mul(&t) } else { m.mul(&t.inverse()) };
    }
    m
}

fn duality(seed: u64) -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positive = 0;
    for trial in 0..100 {
        let genus = 2 + trial % 2;
        // restricting the support to a few coordinates leaves fixed vectors
        let support = rng.gen_range(2..=2 * genus);
        let k = rng.gen_range(1..=3);
        let mats: Vec<IntegerMatrix> = (0..k)
            .map(|_| random_symplectic(&mut rng, genus, support).into_matrix())
            .collect();
        let co = lift(coinvariant_rank(&mats))?;
        let inv = lift(invariant_rank(&mats))?;
        ensure(co == inv, || format!("trial {trial}: coinvariant {co} ≠ invariant {inv}"))?;
        positive += usize::from(co > 0);
    }
    within(Duration::from_secs(30), start, "duality suite")?;
    Ok(format!("100 tuples agree ({positive} with positive rank)"))
}

fn random_matrix(rng: &mut ChaCha8Rng) -> IntegerMatrix {
    let r = rng.gen_range(1..=20);
    let c = rng.gen_range(1..=20);
    if rng.gen_bool(0.5) {
        let bound = rng.gen_range(1..=9);
        return IntegerMatrix::from_fn(r, c, |_, _| BigInt::from(rng.gen_range(-bound..=bound)));
    }
    // U·D·V with small diagonal keeps the cokernel small enough to enumerate
    let n = rng.gen_range(1..=8);
    const SMALL: [i64; 8] = [1, 1, 1, 2, 2, 3, 4, 6];
    let diag: Vec<BigInt> = (0..n).map(|_| BigInt::from(SMALL[rng.gen_range(0..SMALL.len())])).collect();
    let mut u = IntegerMatrix::identity(n);
    let mut v = IntegerMatrix::identity(n);
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            let s = BigInt::from(rng.gen_range(-2..=2));
            let ui = IntegerMatrix::from_fn(n, n, |a, b| {
                if a == b {
                    BigInt::one()
                } else if (a, b) == (i, j) {
                    s.clone()
                } else {
                    BigInt::zero()
                }
            });
            u = u.mul(&ui).expect("square");
            v = ui.transpose().mul(&v).expect("square");
        }
    }
    u.mul(&IntegerMatrix::diagonal(&diag)).and_then(|x| x.mul(&v)).expect("square")
}

fn divides(a: &BigInt, b: &BigInt) -> bool {
    if a.is_zero() {
        b.is_zero()
    } else {
        (b % a).is_zero()
    }
}

fn smith_suite(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut oracle_checks = 0;
    for trial in 0..200 {
        let a = random_matrix(&mut rng);
        let s = smith_normal_form(&a);
        let uav = lift(s.u.mul(&a).and_then(|x| x.mul(&s.v)))?;
        ensure(uav == s.d, || format!("trial {trial}: U·A·V ≠ D"))?;
        let unimodular = |m: &IntegerMatrix| {
            let d = m.determinant();
            d == BigInt::one() || d == -BigInt::one()
        };
        ensure(unimodular(&s.u) && unimodular(&s.v), || format!("trial {trial}: transform not unimodular"))?;
        let f = &s.invariant_factors;
        ensure(f.windows(2).all(|w| divides(&w[0], &w[1])), || format!("trial {trial}: divisibility chain broken"))?;
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                let want = if i == j && i < f.len() { f[i].clone() } else { BigInt::zero() };
                ensure(s.d[(i, j)] == want, || format!("trial {trial}: D is not the diagonal of the factors"))?;
            }
        }
        if let Some(b) = brute_force_cokernel(&a, 10_000) {
            oracle_checks += 1;
            let c = cokernel_invariants(&a);
            ensure(c == b, || format!("trial {trial}: cokernel {c:?} vs enumeration {b:?}"))?;
        }
    }
    Ok(format!("200 matrices; {oracle_checks} cokernels enumerated"))
}

fn mapping_class_integrity() -> Check {
    let mut count = 0;
    for g in 2..=3 {
        let twists = lift(humphries_twists(g))?;
        for (t, c) in twists.iter().zip(humphries_classes(g)) {
            ensure(verify_surface_automorphism(&t.automorphism, g), || format!("{} fails the surface check", t.label))?;
            let tv = lift(transvection(&c))?;
            ensure(t.automorphism.abelianize() == *tv.matrix(), || format!("{} abelianizes wrongly", t.label))?;
            ensure(t.symplectic == tv, || format!("{} stores the wrong matrix", t.label))?;
            count += 1;
        }
    }
    Ok(format!("{count} twists verified"))
}

fn cover_arithmetic(seed: u64) -> Check {
    let start = Instant::now();
    for (g, m) in [(2usize, 1u64), (2, 2), (2, 3), (3, 2)] {
        let c = lift(mod_m_cover(g, m))?;
        let want = 1 + (m as usize).pow(2 * g as u32) * (g - 1);
        ensure(c.cover_genus() == want, || format!("(g,m)=({g},{m}): genus {} ≠ {want}", c.cover_genus()))?;
    }
    let cover = lift(mod_m_cover(2, 2))?;
    let twists = lift(humphries_twists(2))?;
    let actions: Vec<IntegerMatrix> = twists
        .iter()
        .map(|t| cover.induced_action(&t.automorphism).map(|a| a.matrix))
        .collect::<Result<_>>()
        .map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..50 {
        let (i, j) = (rng.gen_range(0..twists.len()), rng.gen_range(0..twists.len()));
        let (f, h) = (&twists[i].automorphism, &twists[j].automorphism);
        let (f, mf) = if rng.gen_bool(0.5) {
            (f.clone(), actions[i].clone())
        } else {
            let inv = f.inverse();
            let m = lift(cover.induced_action(&inv))?.matrix;
            (inv, m)
        };
        let composed = lift(cover.induced_action(&lift(f.compose(h))?))?.matrix;
        ensure(composed == lift(mf.mul(&actions[j]))?, || format!("homomorphism fails on pair ({i},{j})"))?;
    }
    for k in cover.subgroup_generators().iter().take(20) {
        let m = lift(cover.conjugation_action(k))?.matrix;
        ensure(m.is_identity(), || format!("conjugation by {k} is not the identity"))?;
    }
    within(Duration::from_secs(120), start, "cover arithmetic")?;
    Ok("genera 2,17,82,129; 50 pairs compose; inner actions trivial".into())
}

fn torus_searches() -> Check {
    let phi = lift(chain_periodic_element(2))?.symplectic;
    let id = SymplecticMatrix::identity(2);
    let cases = [("(I,I)", &id, &id, 1), ("(P,I)", &phi, &id, 10), ("(P,P)", &phi, &phi, 10)];
    let mut out = Vec::new();
    for (name, a, b, max_base) in cases {
        let r = lift(torus_base_check(a, b, &[2, 5, 10], 100))?;
        let hit = r.entries.last().filter(|_| r.verdict == Verdict::FoundExcess);
        let hit = hit.ok_or_else(|| format!("{name}: no excess within the cap"))?;
        ensure(hit.base_index <= max_base, || format!("{name}: found only at base index {}", hit.base_index))?;
        ensure(hit.excessive_dim == 4, || format!("{name}: excessive_dim {}", hit.excessive_dim))?;
        out.push(format!("{name} index {} dim 4", hit.base_index));
    }
    Ok(out.join("; "))
}

fn orbit_verdicts() -> Check {
    let opts = OrbitOptions::default();
    let label = vec!["M".to_string()];
    let minus = vec![IntegerMatrix::identity(4).neg()];
    let r = lift(orbit_status(&minus, &label, &rational_vector(&[1, 2, 0, -1]), &opts))?;
    ensure(r.status == OrbitStatus::Finite { size: 2 }, || format!("-I: {:?}", r.status))?;

    let t = vec![lift(transvection(&[1, 0, 0, 0]))?.into_matrix()];
    let r = lift(orbit_status(&t, &label, &rational_vector(&[0, 1, 0, 0]), &opts))?;
    ensure(matches!(r.status, OrbitStatus::Infinite { .. }), || format!("transvection: {:?}", r.status))?;
    ensure(lift(verify_orbit_report(&t, &r))?, || "transvection certificate does not replay".into())?;

    let p = vec![lift(chain_periodic_element(2))?.symplectic.into_matrix()];
    let r = lift(orbit_status(&p, &label, &rational_vector(&[1, -1, 2, 0]), &opts))?;
    let size = match r.status {
        OrbitStatus::Finite { size } if size <= 10 => size,
        s => return Err(format!("order-10 element: {s:?}")),
    };
    ensure(lift(verify_orbit_report(&p, &r))?, || "finite orbit does not replay".into())?;
    Ok(format!("-I: 2; transvection: certified infinite; order 10: {size}"))
}

fn random_free_spec(rng: &mut ChaCha8Rng, twists: &[MappingClass]) -> Result<MonodromySpec> {
    let n = rng.gen_range(1..=2);
    let monodromies = (0..n)
        .map(|_| {
            let mut m = MappingClass::from_automorphism("id", GroupAutomorphism::identity(4), 2)?;
            for _ in 0..rng.gen_range(1..=3) {
                let t = &twists[rng.gen_range(0..twists.len())];
                let t = if rng.gen_bool(0.5) { t.clone() } else { t.inverse() };
                m = m.compose(&t)?;
            }
            Ok(Monodromy::Class(m))
        })
        .collect::<Result<_>>()?;
    MonodromySpec::new(2, BaseGroup::Free(n), monodromies)
}

fn torsion_oracle(seed: u64) -> Check {
    let start = Instant::now();
    let twists = lift(humphries_twists(2))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells = 0;
    for trial in 0..20 {
        let spec = lift(random_free_spec(&mut rng, &twists))?;
        let p = [2, 3][rng.gen_range(0..2)];
        let report = lift(p_torsion_search(&spec, p, &[1, 2], &[2], 32))?;
        for e in &report.entries {
            let h = lift(extension_subgroup_homology(&spec, &e.base_kind, e.fiber_modulus))?;
            ensure(h.free_rank == e.b1 && h.torsion == e.torsion, || {
                format!(
                    "trial {trial}, cell {} m={}: search b1={} torsion={:?}, presentation {h:?}",
                    e.base_cover, e.fiber_modulus, e.b1, e.torsion
                )
            })?;
            cells += 1;
        }
    }
    within(Duration::from_secs(300), start, "p-torsion oracle suite")?;
    Ok(format!("20 specs, {cells} cells agree"))
}

fn prym_run(seed: u64, limit: Duration) -> Check {
    let start = Instant::now();
    let opts = OrbitOptions { budget: 100_000, seed, ..OrbitOptions::default() };
    let first = lift(prym_experiment(2, 2, 2, &opts))?;
    let second = lift(prym_experiment(2, 2, 2, &opts))?;
    within(limit, start, "two Prym runs")?;
    let a = serde_json::to_string(&first).map_err(|e| e.to_string())?;
    let b = serde_json::to_string(&second).map_err(|e| e.to_string())?;
    ensure(a == b, || "reports differ between runs".into())?;
    ensure(first.homology_dim == 34, || format!("dimension {}", first.homology_dim))?;
    ensure(first.ranks_agree, || {
        format!("coinvariant {} vs invariant {}", first.coinvariant_rank, first.invariant_rank)
    })?;
    ensure(first.invariant_rank == PRYM_GOLDEN_INVARIANT_RANK, || {
        format!("invariant rank {} differs from the recorded {PRYM_GOLDEN_INVARIANT_RANK}", first.invariant_rank)
    })?;
    Ok(format!("dim 34, ranks {}/{}, reports identical", first.coinvariant_rank, first.invariant_rank))
}

/// Name, spec and cells `(base cover, fiber modulus)`, each contained in the next.
type Chain = (String, MonodromySpec, Vec<(BaseCoverKind, u64)>);

fn nested_chains() -> Result<Vec<Chain>> {
    let ch = |q: u64, c: &[u64]| BaseCoverKind::Character { modulus: q, character: c.to_vec() };
    let trivial2 = {
        let id = MappingClass::from_automorphism("id", GroupAutomorphism::identity(4), 2)?;
        MonodromySpec::new(2, BaseGroup::Free(2), vec![Monodromy::Class(id); 2])?
    };
    let phi = chain_periodic_element(2)?.symplectic;
    let torus = MonodromySpec::new(
        2,
        BaseGroup::Surface(1),
        vec![Monodromy::Symplectic(phi), Monodromy::Symplectic(SymplecticMatrix::identity(2))],
    )?;
    Ok(vec![
        (
            "mapping torus, base".into(),
            build_pi(2)?,
            vec![(BaseCoverKind::Trivial, 1), (ch(2, &[1]), 1), (ch(10, &[1]), 1)],
        ),
        (
            "mapping torus, fiber".into(),
            build_pi(2)?,
            vec![(BaseCoverKind::Trivial, 1), (BaseCoverKind::Trivial, 2), (ch(2, &[1]), 2)],
        ),
        (
            "product".into(),
            trivial2,
            vec![(BaseCoverKind::Trivial, 1), (BaseCoverKind::Full { modulus: 2 }, 1), (BaseCoverKind::Full { modulus: 2 }, 2)],
        ),
        (
            "torus base".into(),
            torus,
            vec![
                (BaseCoverKind::Trivial, 1),
                (ch(2, &[1, 0]), 1),
                (ch(10, &[1, 0]), 1),
                (BaseCoverKind::Full { modulus: 10 }, 1),
            ],
        ),
    ])
}

fn monotonicity() -> Check {
    let mut out = Vec::new();
    for (name, spec, chain) in lift(nested_chains())? {
        let dims: Vec<usize> = chain
            .iter()
            .map(|(k, m)| cell_homology(&spec, k, *m, 1 << 16).map(|h| h.excessive_dim))
            .collect::<Result<_>>()
            .map_err(|e| e.to_string())?;
        ensure(dims.windows(2).all(|w| w[0] <= w[1]), || format!("{name}: {dims:?} decreases"))?;
        let d: Vec<String> = dims.iter().map(usize::to_string).collect();
        out.push(format!("{name} {}", d.join("<=")));
    }
    Ok(out.join("; "))
}

pub fn run_criterion(id: usize, options: &SelftestOptions) -> CriterionResult {
    let seed = options.seed;
    let outcome = match id {
        1 => flagship(),
        2 => chain_order(),
        3 => chain_coinvariants(),
        4 => duality(seed),
        5 => smith_suite(seed),
        6 => mapping_class_integrity(),
        7 => cover_arithmetic(seed),
        8 => torus_searches(),
        9 => orbit_verdicts(),
        10 => torsion_oracle(seed),
        11 => prym_run(seed, options.prym_time_limit),
        12 => monotonicity(),
        _ => Err(format!("no criterion {id}")),
    };
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult {
        id,
        name: CRITERIA.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
        passed,
        detail,
    }
}

pub fn run_all(options: &SelftestOptions) -> Vec<CriterionResult> {
    (1..=CRITERIA.len()).map(|id| run_criterion(id, options)).collect()
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

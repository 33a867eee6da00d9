use fiberscope::covers::mod_m_cover;
use fiberscope::extensions::{
    build_pi, build_pi_amalgam, excessive_homology, p_torsion_search, virtual_excessive_search, MonodromySpec,
    TorsionVerdict, Verdict,
};
use fiberscope::mapping_class::{chain_periodic_element, humphries_twists, korkmaz_pair};
use fiberscope::oracle::{evaluate, surface_permutation_quotients};
use fiberscope::words::{GroupWord, SurfacePresentation};

#[test]
fn spec_files_round_trip() {
    for spec in [build_pi(2).unwrap(), build_pi_amalgam(3).unwrap()] {
        let text = spec.to_json();
        let back = MonodromySpec::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert_eq!(excessive_homology(&back).unwrap(), excessive_homology(&spec).unwrap());
    }
}

#[test]
fn conjugate_generators_share_their_order() {
    let k = korkmaz_pair(4).unwrap();
    assert_ne!(k.x.symplectic, k.y.symplectic);
    for m in [&k.x, &k.y] {
        assert!(m.symplectic.matrix().pow(18).is_identity());
        assert!(!m.symplectic.matrix().pow(9).is_identity());
        assert!(!m.symplectic.matrix().pow(6).is_identity());
    }
}

#[test]
fn mapping_torus_search() {
    let spec = build_pi(2).unwrap();
    let r = virtual_excessive_search(&spec, &[1], &[2, 5, 10], 100).unwrap();
    assert_eq!(r.verdict, Verdict::FoundExcess);
    let last = r.entries.last().unwrap();
    assert_eq!((last.base_index, last.excessive_dim), (10, 4));
    // excessive and invariant dimensions agree on every explored cell
    assert!(r.entries.iter().all(|e| e.excessive_dim == e.invariant_dim));
    assert!(r.entries.windows(2).all(|w| w[0].index <= w[1].index));
}

#[test]
fn two_generator_fiber_cover_cells() {
    let spec = build_pi_amalgam(3).unwrap();
    let r = virtual_excessive_search(&spec, &[1], &[2], 16).unwrap();
    assert!(r.entries.iter().all(|e| e.excessive_dim == e.invariant_dim));
    let t = p_torsion_search(&spec, 2, &[1], &[2], 16).unwrap();
    assert!(matches!(t.verdict, TorsionVerdict::Found | TorsionVerdict::ExhaustedCap));
}

#[test]
fn periodic_monodromy_trivial_on_cover_after_full_period() {
    let cover = mod_m_cover(2, 2).unwrap();
    let phi = chain_periodic_element(2).unwrap();
    let p10 = phi.automorphism.power(10).unwrap();
    let m = cover.induced_action(&p10).unwrap().matrix;
    // φ¹⁰ is inner on the surface group, so it acts on the cover as a deck
    // transformation of the (Z/2)⁴ cover
    assert!(m.pow(2).is_identity());
}

#[test]
fn twists_respect_permutation_quotients() {
    // an automorphism maps the relator to a trivial word, so its image under every quotient is trivial
    let s = SurfacePresentation::new(2);
    let quotients = surface_permutation_quotients(2, 5, 20, 3);
    assert!(!quotients.is_empty());
    for t in humphries_twists(2).unwrap() {
        let img = t.automorphism.apply(s.relator()).unwrap();
        assert!(s.is_trivial(&img));
        for q in &quotients {
            let p = evaluate(q, &img);
            assert!(p.iter().enumerate().all(|(i, &x)| i == x as usize));
        }
    }
    assert!(!s.is_trivial(&GroupWord::generator(0)));
}

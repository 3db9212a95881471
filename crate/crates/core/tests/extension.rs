use std::collections::BTreeMap;

use pasting::bracketed::{
    bracketed_isomorphism, check_associativity, check_consistent, collapse, verify_extension,
    FaceShapes,
};
use pasting::bracketing::{associator_chain, enumerate_bracketings};
use pasting::fixtures;
use pasting::harness::{
    alternate_certificate, random_bracketed_graph, trial_rng, GeneratorConfig, Strategy,
};
use pasting::scheme::{enumerate_presentations, find_presentation, MAX_ENUMERATION_FACES};
use pasting::{BracketedGraph, Bracketing, CompositionScheme, ExtensionCertificate, FaceId};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn config(max_faces: usize) -> GeneratorConfig {
    GeneratorConfig {
        seed: 0,
        max_faces,
        max_path_len: 5,
        max_object_size: 3,
        trials: 1,
    }
}

fn b(s: &str) -> Bracketing {
    s.parse().unwrap()
}

fn certificates(g: &BracketedGraph, seed: u64) -> Vec<(Strategy, ExtensionCertificate)> {
    let p = find_presentation(&g.anchored).unwrap();
    let mut rng = trial_rng(seed, 1);
    Strategy::ALL
        .iter()
        .filter_map(|&s| {
            alternate_certificate(g, &p, s, &mut rng)
                .ok()
                .map(|c| (s, c))
        })
        .collect()
}

#[test]
fn already_consistent_graph_needs_no_associativity_factors() {
    let g = fixtures::left_normalized_bracketing(fixtures::bigon());
    let p = find_presentation(&g.anchored).unwrap();
    let cert = alternate_certificate(&g, &p, Strategy::Canonical, &mut trial_rng(0, 0)).unwrap();
    assert!(cert.assoc_indices.is_empty());
    assert_eq!(cert.scheme.len(), 1);
    assert!(verify_extension(&cert, &g));
}

#[test]
fn redundant_pair_on_an_atomic_graph() {
    let g = fixtures::left_normalized_bracketing(fixtures::atomic_example());
    let p = find_presentation(&g.anchored).unwrap();
    let base = alternate_certificate(&g, &p, Strategy::Canonical, &mut trial_rng(0, 0)).unwrap();
    let cert =
        alternate_certificate(&g, &p, Strategy::RedundantPair, &mut trial_rng(0, 0)).unwrap();
    assert_eq!(cert.assoc_indices.len(), base.assoc_indices.len() + 2);
    let collapsed = collapse(&cert.scheme, &cert.assoc_indices).unwrap();
    assert!(bracketed_isomorphism(&collapsed.graph, &g).is_some());
}

/// The atomic example `f (h1 h2) g => f (h3 h4 h5) g` with outer shape `outer`
/// on both sides and the given face shapes.
fn whiskered_atomic(outer: &Bracketing, dom: &Bracketing, cod: &Bracketing) -> BracketedGraph {
    let face_shapes = BTreeMap::from([(
        FaceId::from("F"),
        FaceShapes {
            domain: dom.clone(),
            codomain: cod.clone(),
        },
    )]);
    BracketedGraph::new(
        fixtures::atomic_example(),
        outer.substitute_leaf(1, dom).unwrap(),
        outer.substitute_leaf(1, cod).unwrap(),
        face_shapes,
    )
    .unwrap()
}

#[test]
fn outer_whiskering_costs_the_chain_on_collapsed_trees() {
    let canonical_outer = b("(--)-");
    for outer in enumerate_bracketings(3).unwrap() {
        for cod in enumerate_bracketings(3).unwrap() {
            let g = whiskered_atomic(&outer, &b("--"), &cod);
            let p = find_presentation(&g.anchored).unwrap();
            let cert =
                alternate_certificate(&g, &p, Strategy::Canonical, &mut trial_rng(0, 0)).unwrap();
            let expected = associator_chain(&outer, &canonical_outer).unwrap().len()
                + associator_chain(&canonical_outer, &outer).unwrap().len();
            assert_eq!(
                cert.assoc_indices.len(),
                expected,
                "outer {outer}, codomain {cod}"
            );
            assert!(verify_extension(&cert, &g));
        }
    }
}

#[test]
fn dropping_an_associativity_index_breaks_the_certificate() {
    let g = fixtures::running_example();
    let p = find_presentation(&g.anchored).unwrap();
    let cert = alternate_certificate(&g, &p, Strategy::Canonical, &mut trial_rng(0, 0)).unwrap();
    for drop in 0..cert.assoc_indices.len() {
        let mut broken = cert.clone();
        broken.assoc_indices.remove(drop);
        assert!(!verify_extension(&broken, &g));
    }
    let mut all = cert.clone();
    all.assoc_indices = (0..cert.scheme.len()).collect();
    assert!(!verify_extension(&all, &g));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_strategy_round_trips(seed in any::<u64>(), max_faces in 1usize..=5) {
        let (g, _) = random_bracketed_graph(&config(max_faces), &mut trial_rng(seed, 0)).unwrap();
        let certs = certificates(&g, seed);
        prop_assert!(certs.len() >= 2);
        for (strategy, cert) in &certs {
            prop_assert!(verify_extension(cert, &g), "{strategy:?}");
            let kinds = cert.kinds();
            prop_assert_eq!(kinds.len(), cert.scheme.len());
            for (i, factor) in cert.scheme.factors.iter().enumerate() {
                prop_assert_eq!(&check_consistent(&factor.graph).unwrap(), factor);
                if cert.assoc_indices.contains(&i) {
                    prop_assert!(check_associativity(factor).is_ok());
                }
            }
            let faces = cert.scheme.len() - cert.assoc_indices.len();
            prop_assert_eq!(faces, g.anchored.faces.len());
        }
    }

    #[test]
    fn contiguous_sublists_are_schemes(seed in any::<u64>(), cut in any::<(u16, u16)>()) {
        let (g, _) = random_bracketed_graph(&config(5), &mut trial_rng(seed, 0)).unwrap();
        let (_, cert) = certificates(&g, seed).remove(0);
        let n = cert.scheme.len();
        let i = cut.0 as usize % n;
        let j = i + 1 + cut.1 as usize % (n - i);
        let sub = CompositionScheme::from_factors(cert.scheme.factors[i..j].to_vec()).unwrap();
        prop_assert_eq!(sub.composite.shape_dom.clone(), cert.scheme.factors[i].graph.shape_dom.clone());
        prop_assert_eq!(sub.composite.shape_cod.clone(), cert.scheme.factors[j - 1].graph.shape_cod.clone());
        prop_assert!(sub.composite.anchored.validate().is_ok());
    }

    #[test]
    fn collapse_order_does_not_matter(seed in any::<u64>()) {
        let (g, _) = random_bracketed_graph(&config(5), &mut trial_rng(seed, 0)).unwrap();
        let mut rng = trial_rng(seed, 2);
        for (_, cert) in certificates(&g, seed) {
            let reference = collapse(&cert.scheme, &cert.assoc_indices).unwrap();
            let mut order = cert.assoc_indices.clone();
            order.shuffle(&mut rng);
            prop_assert_eq!(&collapse(&cert.scheme, &order).unwrap(), &reference);
        }
    }

    #[test]
    fn partial_collapses_are_pasting_schemes(seed in any::<u64>()) {
        let (g, _) = random_bracketed_graph(&config(5), &mut trial_rng(seed, 0)).unwrap();
        let mut rng = trial_rng(seed, 3);
        for (_, cert) in certificates(&g, seed) {
            let subset: Vec<usize> = cert.assoc_indices.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            let partial = collapse(&cert.scheme, &subset).unwrap();
            let a = &partial.graph.anchored;
            prop_assert!(a.validate().is_ok());
            prop_assert!(find_presentation(a).is_ok());
            if a.faces.len() <= MAX_ENUMERATION_FACES {
                prop_assert!(!enumerate_presentations(a, MAX_ENUMERATION_FACES).unwrap().is_empty());
            }
            prop_assert_eq!(a.faces.len(), cert.scheme.len() - subset.len());
        }
    }
}

mod common;

use chainmail_core::family::{
    canonical_spec, evaluate_chain, obstruction_threshold, verify_family_invariance, FamilySpec,
};
use chainmail_core::graph::{parse_graph, serialize_graph};
use chainmail_core::pi1::{abelianization, presentation_from_graph, weight_one_certificate};
use chainmail_core::spin::{characteristic_subgraphs, corank_mod2, homology_group, homology_order};
use chainmail_core::tait::{checkerboard_coloring, complete_to_tait, mirror, parse_pd, reduce_tait, white_tait_graph, Color};
use chainmail_core::{ChainmailGraph, VertexSubset};
use common::{brute_force_characteristic, random_graph};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;

fn d_ex() -> ChainmailGraph {
    parse_graph(
        r#"{"vertices": [{"id": "v1", "weight": -5}, {"id": "v2", "weight": 0},
                         {"id": "v3", "weight": 0}, {"id": "v4", "weight": -4}],
            "edges": [{"u": "v1", "v": "v2", "sign": 1}, {"u": "v1", "v": "v3", "sign": 1},
                      {"u": "v1", "v": "v3", "sign": 1}, {"u": "v1", "v": "v3", "sign": 1},
                      {"u": "v2", "v": "v4", "sign": 1}, {"u": "v3", "v": "v4", "sign": 1}]}"#,
    )
    .unwrap()
}

#[test]
fn certificate_is_sound_and_minimal() {
    let spec = FamilySpec::new(d_ex(), "v1").unwrap();
    let cert = obstruction_threshold(&spec).unwrap();
    let n = cert.threshold;
    for m in n..=n + 200 {
        assert!(cert.holds_at(m));
    }
    assert!(cert.per_spin.iter().any(|s| !evaluate_chain(&cert.bounds, s.f_at(n - 1)).holds));
    assert_eq!(cert.render(), obstruction_threshold(&spec).unwrap().render());
}

#[test]
fn canonical_spec_keeps_hypotheses() {
    let spec = canonical_spec(&FamilySpec::new(d_ex(), "v1").unwrap()).unwrap();
    assert!(verify_family_invariance(&spec, 20).unwrap().passed());
    assert_eq!(obstruction_threshold(&spec).unwrap().threshold, 25);
}

#[test]
fn tait_roots_and_mirrors() {
    for (text, det) in [
        ("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]", 3),
        ("X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]", 5),
        // (5,2) torus knot
        ("X[1,6,2,7] X[3,8,4,9] X[5,10,6,1] X[7,2,8,3] X[9,4,10,5]", 5),
    ] {
        let pd = parse_pd(text).unwrap();
        for diagram in [pd.clone(), mirror(&pd).unwrap()] {
            for outer in [Color::Black, Color::White] {
                let t = white_tait_graph(&diagram, &checkerboard_coloring(&diagram, outer).unwrap()).unwrap();
                assert!(t.satisfies_weight_relation());
                for v in t.underlying.vertices() {
                    let reduced = reduce_tait(&t, &v.id).unwrap();
                    assert_eq!(homology_order(&reduced), BigInt::from(det), "{text} {outer} root {}", v.id);
                }
                let text = serialize_graph(&t.underlying);
                assert_eq!(parse_graph(&text).unwrap(), t.underlying);
            }
        }
    }
}

#[test]
fn characteristic_sets_match_brute_force() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
    for _ in 0..100 {
        let n = rand::Rng::gen_range(&mut rng, 0..=10);
        let g = random_graph(&mut rng, n, 3, (-5, 5));
        let mut fast: Vec<Vec<usize>> =
            characteristic_subgraphs(&g).unwrap().into_iter().map(|s| s.subgraph.indices().to_vec()).collect();
        fast.sort();
        let mut brute = brute_force_characteristic(&g);
        brute.sort();
        assert_eq!(fast, brute);
        assert_eq!(fast.len(), 1 << corank_mod2(&g));
    }
}

proptest! {
    #[test]
    fn completion_round_trip(seed in any::<u64>(), n in 0usize..=7) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, 4, (-9, 9));
        let t = complete_to_tait(&g);
        prop_assert!(t.satisfies_weight_relation());
        prop_assert_eq!(reduce_tait(&t, &t.root).unwrap(), g);
        let total: i64 = t.underlying.vertices().iter().map(|v| v.weight).sum();
        let edges: i64 = t.underlying.edges().iter().map(|e| e.sign.value()).sum();
        prop_assert_eq!(total, -2 * edges);
    }

    #[test]
    fn abelianization_is_homology(seed in any::<u64>(), n in 0usize..=6) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, 3, (-6, 6));
        let p = presentation_from_graph(&g);
        prop_assert_eq!(abelianization(&p), homology_group(&g).padded(n));
        let neg: Vec<Vec<i64>> = g.laplacian().neg().to_i64_rows().unwrap();
        prop_assert_eq!(p.exponent_matrix(), neg);
    }

    #[test]
    fn certificate_logs_replay(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, 2, (-4, 4));
        let p = presentation_from_graph(&g);
        let cert = weight_one_certificate(&p, 0);
        for e in &cert.elimination_log {
            prop_assert_eq!(e.relator_word.occurrences(e.generator), 1);
            prop_assert!(e.relator_word.substitute(e.generator, &e.solution).is_identity());
        }
        if cert.is_valid() {
            // A normal generator kills H_1 modulo its image, so H_1 is cyclic.
            let torsion = homology_group(&g).padded(n);
            prop_assert!(torsion.free_rank() + torsion.torsion().len() <= 1);
        }
    }

    #[test]
    fn induced_subgraph_f(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, 4, (-9, 9));
        let s = VertexSubset::from_indices((0..n).filter(|i| i % 2 == 0));
        let h = g.induced_subgraph(&s).unwrap();
        let all = VertexSubset::all(&h);
        prop_assert_eq!(
            chainmail_core::spin::f_value(&h, &all).unwrap(),
            chainmail_core::spin::f_value(&g, &s).unwrap()
        );
    }
}

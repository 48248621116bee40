mod common;

use std::collections::BTreeMap;

use chainmail_core::spin::{f_value, kaplan_invariants, simulate_kaplan, simulate_kaplan_with, ContractionOrder, SpinStructure};
use chainmail_core::{ChainmailGraph, VertexSubset};
use common::{quadratic_form, random_graph};
use proptest::prelude::*;
use rand::SeedableRng;

/// Every sequence of `(kept, absorbed)` merges reducing `ids` to one vertex.
fn all_schedules(ids: &[String]) -> Vec<Vec<(String, String)>> {
    if ids.len() <= 1 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for kept in ids {
        for absorbed in ids {
            if kept == absorbed {
                continue;
            }
            let rest: Vec<String> = ids.iter().filter(|x| *x != absorbed).cloned().collect();
            for tail in all_schedules(&rest) {
                let mut s = vec![(kept.clone(), absorbed.clone())];
                s.extend(tail);
                out.push(s);
            }
        }
    }
    out
}

#[test]
fn every_merge_schedule_ends_at_f() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
    for _ in 0..12 {
        let g = random_graph(&mut rng, 5, 3, (-6, 6));
        for mask in 1u32..(1 << 5) {
            let s = VertexSubset::from_indices((0..5).filter(|i| mask >> i & 1 == 1));
            let f = f_value(&g, &s).unwrap();
            assert_eq!(f, quadratic_form(&g, s.indices()));
            let ids: Vec<String> = s.ids(&g).into_iter().map(String::from).collect();
            for schedule in all_schedules(&ids) {
                let trace = simulate_kaplan_with(&g, &s, &ContractionOrder::Pairs(schedule.clone())).unwrap();
                assert_eq!(trace.final_framing, f);
                // Each intermediate framing is f of the vertices merged so far.
                let mut merged: BTreeMap<String, Vec<usize>> =
                    ids.iter().map(|id| (id.clone(), vec![g.index_of(id).unwrap()])).collect();
                for step in &trace.steps {
                    let absorbed = merged.remove(&step.absorbed).unwrap();
                    let kept = merged.get_mut(&step.kept).unwrap();
                    kept.extend(absorbed);
                    assert_eq!(step.weight, quadratic_form(&g, kept));
                }
            }
        }
    }
}

#[test]
fn schedule_errors() {
    let g = ChainmailGraph::from_lists(&[("a", 1), ("b", 2)], &[("a", "b", 1)]).unwrap();
    let all = VertexSubset::all(&g);
    let bad = ContractionOrder::Pairs(vec![("a".into(), "zz".into())]);
    assert!(simulate_kaplan_with(&g, &all, &bad).is_err());
    assert!(simulate_kaplan_with(&g, &all, &ContractionOrder::Pairs(vec![])).is_err());
    assert!(simulate_kaplan_with(&g, &all, &ContractionOrder::Sequence(vec![])).is_err());
    assert!(simulate_kaplan(&g, &VertexSubset::default()).is_err());
    let zero = SpinStructure { subgraph: all, f: 0 };
    assert!(kaplan_invariants(&g, &zero).is_err());
}

proptest! {
    #[test]
    fn lexicographic_and_sequence_orders_agree(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, 4, (-9, 9));
        let s = VertexSubset::all(&g);
        let f = f_value(&g, &s).unwrap();
        prop_assert_eq!(simulate_kaplan(&g, &s).unwrap().final_framing, f);
        let mut ids: Vec<String> = s.ids(&g).into_iter().map(String::from).collect();
        ids.reverse();
        let rev = simulate_kaplan_with(&g, &s, &ContractionOrder::Sequence(ids)).unwrap();
        prop_assert_eq!(rev.final_framing, f);
    }
}

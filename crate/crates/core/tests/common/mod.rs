#![allow(dead_code)]

use chainmail_core::ChainmailGraph;
use rand::Rng;

/// Random weighted signed multigraph with ids `v1..vn`. Each pair carries up
/// to `max_mult` parallel edges of independent random sign.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, max_mult: usize, weights: (i64, i64)) -> ChainmailGraph {
    let ids: Vec<String> = (1..=n).map(|k| format!("v{k}")).collect();
    let vertices: Vec<(&str, i64)> = ids.iter().map(|id| (id.as_str(), rng.gen_range(weights.0..=weights.1))).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.5) {
                continue;
            }
            for _ in 0..rng.gen_range(1..=max_mult) {
                edges.push((ids[i].as_str(), ids[j].as_str(), if rng.gen_bool(0.5) { 1 } else { -1 }));
            }
        }
    }
    ChainmailGraph::from_lists(&vertices, &edges).unwrap()
}

/// `1ᵀ_S A 1_S` straight from the Laplacian entries.
pub fn quadratic_form(g: &ChainmailGraph, members: &[usize]) -> i64 {
    let a = g.laplacian().to_i64_rows().unwrap();
    members.iter().map(|&i| members.iter().map(|&j| a[i][j]).sum::<i64>()).sum()
}

/// All characteristic subsets by checking every indicator vector.
pub fn brute_force_characteristic(g: &ChainmailGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let a = g.laplacian().to_i64_rows().unwrap();
    (0u32..(1 << n))
        .filter(|mask| {
            (0..n).all(|i| {
                let s: i64 = (0..n).filter(|&j| mask >> j & 1 == 1).map(|j| a[i][j]).sum();
                (s - a[i][i]).rem_euclid(2) == 0
            })
        })
        .map(|mask| (0..n).filter(|&j| mask >> j & 1 == 1).collect())
        .collect()
}

//! Canonical labelling of weighted signed graphs.
//!
//! The key of an ordering is the weight sequence followed by the signed
//! adjacency read column by column over the strict upper triangle:
//! `(0,1), (0,2), (1,2), (0,3), (1,3), (2,3), …`. The canonical form is the
//! lexicographically least key. Column `k` depends only on the first `k + 1`
//! positions, so the search keeps only those partial orderings whose key
//! prefix is minimal at every depth.

use super::{FamilyError, FamilySpec};
use crate::graph::ChainmailGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub weights: Vec<i64>,
    /// Column-wise strict upper triangle of the signed adjacency.
    pub adjacency: Vec<i64>,
    /// `order[k]` is the original index placed at canonical position `k`.
    pub order: Vec<usize>,
    /// Every optimal ordering, each an automorphism of the canonical graph
    /// when read as `position -> order[position]` relative to `order`.
    pub optimal_orders: Vec<Vec<usize>>,
}

impl CanonicalForm {
    pub fn key(&self) -> (&[i64], &[i64]) {
        (&self.weights, &self.adjacency)
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn adjacency_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.weights.len();
        let mut adj = vec![vec![0; n]; n];
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                adj[i][j] = self.adjacency[k];
                adj[j][i] = self.adjacency[k];
                k += 1;
            }
        }
        adj
    }

    /// The canonical graph with ids `v1..vn`.
    pub fn graph(&self) -> ChainmailGraph {
        let ids: Vec<String> = (1..=self.weights.len()).map(|k| format!("v{k}")).collect();
        ChainmailGraph::from_matrix(&ids, &self.weights, &self.adjacency_matrix())
    }

    /// Orbits of canonical positions under the automorphism group, as the
    /// least position in each orbit.
    pub fn orbit_representatives(&self) -> Vec<usize> {
        let n = self.weights.len();
        let mut inverse = vec![0; n];
        for (k, &v) in self.order.iter().enumerate() {
            inverse[v] = k;
        }
        let mut rep: Vec<usize> = (0..n).collect();
        for other in &self.optimal_orders {
            // Position k of this ordering holds the vertex at canonical
            // position inverse[other[k]]; k and that position share an orbit.
            for k in 0..n {
                let j = inverse[other[k]];
                let (a, b) = (find(&mut rep, k), find(&mut rep, j));
                if a != b {
                    rep[a.max(b)] = a.min(b);
                }
            }
        }
        (0..n).map(|k| find(&mut rep, k)).collect()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub(crate) fn canonical_from_parts(weights: &[i64], adj: &[Vec<i64>]) -> CanonicalForm {
    let n = weights.len();
    let mut sorted = weights.to_vec();
    sorted.sort_unstable();

    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    let mut adjacency = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for depth in 0..n {
        let target = sorted[depth];
        let mut best: Option<Vec<i64>> = None;
        let mut next = Vec::new();
        for partial in &frontier {
            for v in 0..n {
                if weights[v] != target || partial.contains(&v) {
                    continue;
                }
                let column: Vec<i64> = partial.iter().map(|&u| adj[u][v]).collect();
                match &best {
                    Some(b) if column > *b => continue,
                    Some(b) if column < *b => next.clear(),
                    _ => {}
                }
                best = Some(column);
                let mut extended = partial.clone();
                extended.push(v);
                next.push(extended);
            }
        }
        adjacency.extend(best.unwrap_or_default());
        frontier = next;
    }
    frontier.sort();
    let order = frontier[0].clone();
    CanonicalForm { weights: sorted, adjacency, order, optimal_orders: frontier }
}

pub fn canonical_form(g: &ChainmailGraph) -> CanonicalForm {
    canonical_from_parts(&g.weights(), &g.signed_adjacency())
}

/// Relabels a family spec canonically. The pivot becomes the least canonical
/// position in its automorphism orbit, so isomorphic specs coincide.
pub fn canonical_spec(spec: &FamilySpec) -> Result<FamilySpec, FamilyError> {
    let form = canonical_form(&spec.base);
    let p = spec.pivot_index();
    let position = form.order.iter().position(|&v| v == p).expect("order is a permutation");
    let rep = form.orbit_representatives()[position];
    FamilySpec::new(form.graph(), &format!("v{}", rep + 1))
}

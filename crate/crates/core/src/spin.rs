//! Spin structures of chainmail surgery diagrams.
//!
//! Spin structures on the surgered manifold correspond to characteristic
//! subgraphs: vertex subsets `S` whose indicator `x` solves
//! `A x ≡ diag(A) (mod 2)` for the Laplacian `A`. Each carries the integer
//! `f = xᵀ A x`, the framing left on the single unknot once every other
//! component of the characteristic sublink has been slid off, which fixes the
//! second Betti number and signature of the associated spin filling.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::graph::{ChainmailGraph, GraphError, VertexSubset};
use crate::linalg::{determinant, gf2_rank, signature, smith_normal_form, solve_affine_gf2, SnfDiagonal};

#[derive(Debug, Error)]
pub enum SpinError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("characteristic equation has no solution")]
    NoSpinStructure,
    #[error("final framing is 0; no ±1 unknot to blow down")]
    DegenerateFraming,
    #[error("vertex subset is empty")]
    EmptySubset,
    #[error("bad contraction schedule: {0}")]
    Schedule(String),
}

/// A characteristic subgraph with its invariant `f`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinStructure {
    pub subgraph: VertexSubset,
    pub f: i64,
}

/// Second Betti number and signature of the Kaplan spin filling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FillingInvariants {
    pub b2: u64,
    pub sigma: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KaplanStep {
    /// Component slid over `absorbed`; survives with the new framing.
    pub kept: String,
    pub absorbed: String,
    pub weight: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KaplanTrace {
    pub steps: Vec<KaplanStep>,
    pub final_framing: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ContractionOrder {
    /// Always merge the first two remaining vertices in declaration order.
    #[default]
    Lexicographic,
    /// Merge vertices into the first listed one, in the listed order.
    Sequence(Vec<String>),
    /// Explicit `(kept, absorbed)` pairs over current vertex ids.
    Pairs(Vec<(String, String)>),
}

/// `Σ_{v∈S} w(v) + 2·Σ_{{v,v'}⊆S} μ(E(v,v'))`, the pair sum running over
/// unordered pairs of distinct vertices. Equals `1_Sᵀ A 1_S`.
pub fn f_value(g: &ChainmailGraph, s: &VertexSubset) -> Result<i64, GraphError> {
    s.check(g)?;
    let weights: i64 = s.indices().iter().map(|&i| g.weight(i)).sum();
    let pairs: i64 = g
        .edges()
        .iter()
        .filter(|e| s.contains(e.u) && s.contains(e.v))
        .map(|e| e.sign.value())
        .sum();
    Ok(weights + 2 * pairs)
}

/// All characteristic subgraphs, particular solution first and then in
/// Gray-code order over the kernel basis.
pub fn characteristic_subgraphs(g: &ChainmailGraph) -> Result<Vec<SpinStructure>, SpinError> {
    let a = g.laplacian();
    let set = solve_affine_gf2(a.as_matrix(), &a.diagonal_parity()).expect("square system");
    if !set.is_consistent() {
        return Err(SpinError::NoSpinStructure);
    }
    set.solutions()
        .map(|x| {
            let subgraph = VertexSubset::from_indices(x.ones());
            let f = f_value(g, &subgraph)?;
            Ok(SpinStructure { subgraph, f })
        })
        .collect()
}

/// Dimension of the kernel of the Laplacian over GF(2).
pub fn corank_mod2(g: &ChainmailGraph) -> usize {
    g.vertex_count() - gf2_rank(g.laplacian().as_matrix())
}

/// `b₂ = |V| + |f| − 2` and `σ = σ(A) − f` for the filling obtained by
/// blowing up `|f| − 1` meridians and blowing down the final unknot.
pub fn kaplan_invariants(g: &ChainmailGraph, s: &SpinStructure) -> Result<FillingInvariants, SpinError> {
    if s.f == 0 {
        return Err(SpinError::DegenerateFraming);
    }
    Ok(filling_from_parts(g.vertex_count() as u64, signature(&g.laplacian()), s.f))
}

pub(crate) fn filling_from_parts(vertex_count: u64, sigma_a: i64, f: i64) -> FillingInvariants {
    FillingInvariants { b2: vertex_count + f.unsigned_abs() - 2, sigma: sigma_a - f }
}

pub fn simulate_kaplan(g: &ChainmailGraph, s: &VertexSubset) -> Result<KaplanTrace, SpinError> {
    simulate_kaplan_with(g, s, &ContractionOrder::Lexicographic)
}

/// Replays the handle slides on the characteristic sublink as vertex
/// contractions until one component remains.
pub fn simulate_kaplan_with(
    g: &ChainmailGraph,
    s: &VertexSubset,
    order: &ContractionOrder,
) -> Result<KaplanTrace, SpinError> {
    if s.is_empty() {
        return Err(SpinError::EmptySubset);
    }
    let mut h = g.induced_subgraph(s)?;
    let pairs: Vec<(String, String)> = match order {
        ContractionOrder::Lexicographic => {
            let first = h.id(0).to_string();
            (1..h.vertex_count()).map(|k| (first.clone(), h.id(k).to_string())).collect()
        }
        ContractionOrder::Sequence(ids) => {
            let Some(first) = ids.first() else {
                return Err(SpinError::Schedule("empty sequence".into()));
            };
            ids[1..].iter().map(|id| (first.clone(), id.clone())).collect()
        }
        ContractionOrder::Pairs(pairs) => pairs.clone(),
    };
    let mut steps = Vec::with_capacity(pairs.len());
    for (kept, absorbed) in pairs {
        h = h.contract_vertices(&kept, &absorbed).map_err(|e| SpinError::Schedule(e.to_string()))?;
        let weight = h.weight(h.index_of(&kept)?);
        steps.push(KaplanStep { kept, absorbed, weight });
    }
    if h.vertex_count() != 1 {
        return Err(SpinError::Schedule(format!("{} components remain", h.vertex_count())));
    }
    Ok(KaplanTrace { steps, final_framing: h.weight(0) })
}

/// `|H₁|` as `|det A|`; zero encodes infinite homology.
pub fn homology_order(g: &ChainmailGraph) -> BigInt {
    determinant(&g.laplacian()).abs()
}

pub fn homology_group(g: &ChainmailGraph) -> SnfDiagonal {
    smith_normal_form(g.laplacian().as_matrix())
}

/// One line per spin structure: members, f, b2, sigma.
pub fn render_spin_table(g: &ChainmailGraph, spins: &[SpinStructure]) -> String {
    let sigma_a = signature(&g.laplacian());
    let mut out = String::new();
    for s in spins {
        let members = s.subgraph.render(g);
        if s.f == 0 {
            writeln!(out, "{members} f=0 b2=degenerate sigma=degenerate").unwrap();
        } else {
            let inv = filling_from_parts(g.vertex_count() as u64, sigma_a, s.f);
            writeln!(out, "{members} f={} b2={} sigma={}", s.f, inv.b2, inv.sigma).unwrap();
        }
    }
    out
}

//! One-parameter families `D_n` obtained by lowering a pivot weight by `2n`,
//! their hypothesis checks, and explicit threshold certificates ruling out
//! knot surgery for every `n ≥ N`.

mod canonical;
mod certificate;
mod prospect;

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::graph::{ChainmailGraph, GraphError, VertexSubset};
use crate::linalg::determinant;
use crate::spin::{characteristic_subgraphs, SpinError};

pub use canonical::{canonical_form, canonical_spec, CanonicalForm};
pub use certificate::{
    evaluate_chain, obstruction_threshold, BoundParameters, ChainValues, ObstructionCertificate, SpinChain,
};
pub use prospect::{prospect_base_graphs, ProspectBounds, ProspectResult, MAX_PROSPECT_VERTICES};

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error("|H_1| = {0} is odd; the obstruction needs an even homology order")]
    OddHomology(BigInt),
    #[error("family hypotheses fail:\n{0}")]
    HypothesesFailed(String),
    #[error("value out of range: {0}")]
    Overflow(String),
    #[error("bounds outside desk scale: {0}")]
    Bounds(String),
}

/// Base graph `D = D_0` with the pivot whose weight drops by `2n` in `D_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub base: ChainmailGraph,
    pub pivot: String,
}

impl FamilySpec {
    pub fn new(base: ChainmailGraph, pivot: &str) -> Result<Self, FamilyError> {
        base.index_of(pivot)?;
        Ok(FamilySpec { base, pivot: pivot.to_string() })
    }

    pub fn pivot_index(&self) -> usize {
        self.base.index_of(&self.pivot).expect("pivot checked at construction")
    }
}

/// `D_n`: the base graph with `w(pivot) − 2n`.
pub fn family_member(spec: &FamilySpec, n: u64) -> ChainmailGraph {
    let p = spec.pivot_index();
    let w = spec.base.weight(p) - 2 * n as i64;
    spec.base.with_weight(&spec.pivot, w).expect("pivot exists")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport {
    pub det: BigInt,
    pub det_nonzero: bool,
    pub det_even: bool,
    pub pivot_in_all_characteristic: bool,
    pub mirror_pair: Option<(String, String)>,
    pub all_pass: bool,
}

impl HypothesisReport {
    pub fn render(&self, pivot: &str) -> String {
        let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
        let mut out = String::new();
        writeln!(
            out,
            "(1) det = {} (nonzero: {}, even: {}): {}",
            self.det,
            self.det_nonzero,
            self.det_even,
            mark(self.det_nonzero && self.det_even)
        )
        .unwrap();
        writeln!(
            out,
            "(2) {pivot} in every characteristic subgraph: {}",
            mark(self.pivot_in_all_characteristic)
        )
        .unwrap();
        match &self.mirror_pair {
            Some((a, b)) => writeln!(out, "(3) mirror pair ({a}, {b}): pass").unwrap(),
            None => writeln!(out, "(3) mirror pair: none found: FAIL").unwrap(),
        }
        writeln!(out, "all hypotheses: {}", mark(self.all_pass)).unwrap();
        out
    }
}

/// First ordered pair `(a, b)` of distinct non-pivot vertices with equal
/// signed adjacency to every other non-pivot vertex and
/// `μ(a, b) = w(a) = w(b)`.
pub(crate) fn find_mirror_pair(weights: &[i64], adj: &[Vec<i64>], pivot: usize) -> Option<(usize, usize)> {
    let n = weights.len();
    for a in 0..n {
        for b in 0..n {
            if a == b || a == pivot || b == pivot {
                continue;
            }
            if adj[a][b] != weights[a] || weights[a] != weights[b] {
                continue;
            }
            if (0..n).filter(|&x| x != pivot && x != a && x != b).all(|x| adj[x][a] == adj[x][b]) {
                return Some((a, b));
            }
        }
    }
    None
}

pub fn check_genex_hypotheses(g: &ChainmailGraph, pivot: &str) -> Result<HypothesisReport, FamilyError> {
    let p = g.index_of(pivot)?;
    let det = determinant(&g.laplacian());
    let det_nonzero = !det.is_zero();
    let det_even = det.is_even();
    let spins = characteristic_subgraphs(g)?;
    let pivot_in_all_characteristic = spins.iter().all(|s| s.subgraph.contains(p));
    let mirror_pair = find_mirror_pair(&g.weights(), &g.signed_adjacency(), p)
        .map(|(a, b)| (g.id(a).to_string(), g.id(b).to_string()));
    let all_pass = det_nonzero && det_even && pivot_in_all_characteristic && mirror_pair.is_some();
    Ok(HypothesisReport { det, det_nonzero, det_even, pivot_in_all_characteristic, mirror_pair, all_pass })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvarianceFailure {
    DeterminantDrift { expected: BigInt, got: BigInt },
    SpinSetChanged { base: Vec<VertexSubset>, member: Vec<VertexSubset> },
    FValue { subgraph: VertexSubset, expected: i64, got: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub n: u64,
    pub failure: InvarianceFailure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceReport {
    pub n_max: u64,
    pub base_det: BigInt,
    /// `(subgraph, f_0)` for each base spin structure.
    pub base_spins: Vec<(VertexSubset, i64)>,
    pub counterexamples: Vec<Counterexample>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn render(&self, spec: &FamilySpec) -> String {
        let g = &spec.base;
        let mut out = String::new();
        writeln!(out, "checked n = 0..={}", self.n_max).unwrap();
        writeln!(out, "det(A^(D_n)) = {} expected for all n", self.base_det).unwrap();
        let p = spec.pivot_index();
        for (s, f0) in &self.base_spins {
            let slope = if s.contains(p) { " - 2n" } else { "" };
            writeln!(out, "spin {}: f(n) = {f0}{slope}", s.render(g)).unwrap();
        }
        if self.counterexamples.is_empty() {
            writeln!(out, "invariance: pass").unwrap();
        } else {
            writeln!(out, "invariance: FAIL ({} counterexamples)", self.counterexamples.len()).unwrap();
            for c in &self.counterexamples {
                match &c.failure {
                    InvarianceFailure::DeterminantDrift { expected, got } => {
                        writeln!(out, "  n = {}: det {got}, expected {expected}", c.n).unwrap()
                    }
                    InvarianceFailure::SpinSetChanged { .. } => {
                        writeln!(out, "  n = {}: characteristic subgraphs changed", c.n).unwrap()
                    }
                    InvarianceFailure::FValue { subgraph, expected, got } => writeln!(
                        out,
                        "  n = {}: f on {} is {got}, expected {expected}",
                        c.n,
                        subgraph.render(g)
                    )
                    .unwrap(),
                }
            }
        }
        out
    }
}

/// Recomputes determinant, spin structures and `f` for `n = 0..=n_max` and
/// compares them against the base graph.
pub fn verify_family_invariance(spec: &FamilySpec, n_max: u64) -> Result<InvarianceReport, FamilyError> {
    let p = spec.pivot_index();
    let base_det = determinant(&spec.base.laplacian());
    let base_spins: Vec<(VertexSubset, i64)> =
        characteristic_subgraphs(&spec.base)?.into_iter().map(|s| (s.subgraph, s.f)).collect();
    let mut base_sets: Vec<VertexSubset> = base_spins.iter().map(|(s, _)| s.clone()).collect();
    base_sets.sort();
    let mut counterexamples = Vec::new();
    for n in 0..=n_max {
        let g = family_member(spec, n);
        let det = determinant(&g.laplacian());
        if det != base_det {
            counterexamples.push(Counterexample {
                n,
                failure: InvarianceFailure::DeterminantDrift { expected: base_det.clone(), got: det },
            });
        }
        let spins = characteristic_subgraphs(&g)?;
        let mut sets: Vec<VertexSubset> = spins.iter().map(|s| s.subgraph.clone()).collect();
        sets.sort();
        if sets != base_sets {
            counterexamples.push(Counterexample {
                n,
                failure: InvarianceFailure::SpinSetChanged { base: base_sets.clone(), member: sets },
            });
            continue;
        }
        for s in spins {
            let f0 = base_spins.iter().find(|(b, _)| *b == s.subgraph).map(|(_, f)| *f).unwrap();
            let expected = if s.subgraph.contains(p) { f0 - 2 * n as i64 } else { f0 };
            if s.f != expected {
                counterexamples.push(Counterexample {
                    n,
                    failure: InvarianceFailure::FValue { subgraph: s.subgraph, expected, got: s.f },
                });
            }
        }
    }
    Ok(InvarianceReport { n_max, base_det, base_spins, counterexamples })
}

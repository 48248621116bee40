//! Exhaustive search for base graphs satisfying the family hypotheses.
//!
//! Up to isomorphism a passing `(graph, pivot, pair)` can be placed with the
//! pivot at index 0 and the mirror pair at 1 and 2. Then `w1 = w2 = A12 = m`
//! and rows 1 and 2 agree on every index from 3 on. Only those graphs are
//! generated; everything else is free within the bounds. Parallel edges of
//! mixed sign are not generated since every invariant here factors through
//! the signed adjacency.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::canonical::canonical_from_parts;
use super::{check_genex_hypotheses, FamilyError, FamilySpec};
use crate::linalg::{determinant, SymmetricIntMatrix};

pub const MAX_PROSPECT_VERTICES: usize = 8;
const MAX_ABS_WEIGHT: i64 = 1000;
const MAX_MULTIPLICITY: i64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProspectBounds {
    pub max_vertices: usize,
    pub max_multiplicity: i64,
    /// Inclusive weight range.
    pub weight_range: (i64, i64),
    /// Candidates examined before giving up with a partial result.
    pub candidate_limit: u64,
}

impl ProspectBounds {
    pub const DEFAULT_CANDIDATE_LIMIT: u64 = 50_000_000;

    pub fn new(max_vertices: usize, max_multiplicity: i64, weight_range: (i64, i64)) -> Self {
        ProspectBounds {
            max_vertices,
            max_multiplicity,
            weight_range,
            candidate_limit: Self::DEFAULT_CANDIDATE_LIMIT,
        }
    }

    fn check(&self) -> Result<(), FamilyError> {
        if self.max_vertices > MAX_PROSPECT_VERTICES {
            return Err(FamilyError::Bounds(format!(
                "max_vertices = {} exceeds {MAX_PROSPECT_VERTICES}",
                self.max_vertices
            )));
        }
        let (lo, hi) = self.weight_range;
        if lo > hi {
            return Err(FamilyError::Bounds(format!("empty weight range {lo}..={hi}")));
        }
        if lo < -MAX_ABS_WEIGHT || hi > MAX_ABS_WEIGHT {
            return Err(FamilyError::Bounds(format!("weights must lie in -{MAX_ABS_WEIGHT}..={MAX_ABS_WEIGHT}")));
        }
        if !(0..=MAX_MULTIPLICITY).contains(&self.max_multiplicity) {
            return Err(FamilyError::Bounds(format!("max_multiplicity must lie in 0..={MAX_MULTIPLICITY}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProspectResult {
    /// Canonical specs sorted by vertex count, then canonical key, then pivot.
    pub specs: Vec<FamilySpec>,
    pub candidates_examined: u64,
    /// Set when the candidate limit cut the search short.
    pub partial: bool,
}

/// One free parameter of the generated graphs with its inclusive range.
#[derive(Debug, Clone, Copy)]
enum Slot {
    /// Shared value `m = w1 = w2 = A12`.
    Mirror,
    Weight(usize),
    Edge(usize, usize),
    /// `A1x = A2x`.
    Twin(usize),
}

struct Layout {
    n: usize,
    slots: Vec<(Slot, i64, i64)>,
    total: u128,
}

impl Layout {
    fn new(n: usize, b: &ProspectBounds) -> Option<Layout> {
        let (lo, hi) = b.weight_range;
        let mm = b.max_multiplicity;
        let mut slots = vec![(Slot::Mirror, lo.max(-mm), hi.min(mm)), (Slot::Weight(0), lo, hi)];
        slots.extend((3..n).map(|x| (Slot::Weight(x), lo, hi)));
        slots.push((Slot::Edge(0, 1), -mm, mm));
        slots.push((Slot::Edge(0, 2), -mm, mm));
        for x in 3..n {
            slots.push((Slot::Twin(x), -mm, mm));
            slots.push((Slot::Edge(0, x), -mm, mm));
            for y in 3..x {
                slots.push((Slot::Edge(y, x), -mm, mm));
            }
        }
        let mut total: u128 = 1;
        for &(_, a, z) in &slots {
            if a > z {
                return None;
            }
            total = total.saturating_mul((z - a + 1) as u128);
        }
        Some(Layout { n, slots, total })
    }

    fn decode(&self, mut index: u128) -> (Vec<i64>, Vec<Vec<i64>>) {
        let n = self.n;
        let mut w = vec![0; n];
        let mut adj = vec![vec![0; n]; n];
        let put = |adj: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
            adj[i][j] = v;
            adj[j][i] = v;
        };
        for &(slot, a, z) in self.slots.iter().rev() {
            let radix = (z - a + 1) as u128;
            let v = a + (index % radix) as i64;
            index /= radix;
            match slot {
                Slot::Mirror => {
                    w[1] = v;
                    w[2] = v;
                    put(&mut adj, 1, 2, v);
                }
                Slot::Weight(x) => w[x] = v,
                Slot::Edge(i, j) => put(&mut adj, i, j, v),
                Slot::Twin(x) => {
                    put(&mut adj, 1, x, v);
                    put(&mut adj, 2, x, v);
                }
            }
        }
        (w, adj)
    }
}

fn laplacian_rows(w: &[i64], adj: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i64>> = adj.to_vec();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = w[i];
    }
    a
}

/// Bareiss elimination in `i128`; `None` on overflow.
fn small_determinant(rows: &[Vec<i64>]) -> Option<i128> {
    let n = rows.len();
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev: i128 = 1;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j].checked_mul(a[k][k])?.checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = t / prev;
            }
        }
        prev = a[k][k];
    }
    Some(sign * if n == 0 { 1 } else { a[n - 1][n - 1] })
}

/// `vertex` lies in every solution of `A x ≡ diag(A) (mod 2)`.
fn in_every_characteristic(rows: &[Vec<i64>], vertex: usize) -> bool {
    let n = rows.len();
    // Row i: bits 0..n for coefficients, bit n for the right-hand side.
    let mut m: Vec<u32> = (0..n)
        .map(|i| {
            let mut r = 0u32;
            for (j, &x) in rows[i].iter().enumerate() {
                r |= ((x & 1) as u32) << j;
            }
            r | ((rows[i][i] & 1) as u32) << n
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..n).find(|&i| m[i] >> c & 1 == 1) else { continue };
        m.swap(r, p);
        for i in 0..n {
            if i != r && m[i] >> c & 1 == 1 {
                m[i] ^= m[r];
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|&row| row >> n & 1 == 1) {
        return false;
    }
    // Every solution has bit `vertex` set iff it is a pivot column whose row
    // has no free columns and right-hand side one.
    match pivots.iter().position(|&c| c == vertex) {
        None => false,
        Some(row) => {
            let free_mask: u32 = (0..n).filter(|c| !pivots.contains(c)).map(|c| 1u32 << c).sum();
            m[row] & free_mask == 0 && m[row] >> n & 1 == 1
        }
    }
}

fn passes_prefilter(w: &[i64], adj: &[Vec<i64>]) -> bool {
    let rows = laplacian_rows(w, adj);
    let det_ok = match small_determinant(&rows) {
        Some(d) => d != 0 && d % 2 == 0,
        None => {
            let d: BigInt = determinant(&SymmetricIntMatrix::from_i64_rows(&rows).expect("symmetric"));
            d != BigInt::from(0) && (&d % 2u8) == BigInt::from(0)
        }
    };
    det_ok && in_every_characteristic(&rows, 0)
}

type Found = (usize, Vec<i64>, Vec<i64>, usize);

/// All base graphs within the bounds that pass every family hypothesis for
/// some pivot, one spec per isomorphism class of `(graph, pivot)`.
pub fn prospect_base_graphs(bounds: &ProspectBounds) -> Result<ProspectResult, FamilyError> {
    bounds.check()?;
    let mut found: BTreeSet<Found> = BTreeSet::new();
    let mut remaining = bounds.candidate_limit as u128;
    let mut examined: u128 = 0;
    let mut partial = false;
    for n in 3..=bounds.max_vertices {
        let Some(layout) = Layout::new(n, bounds) else { continue };
        let take = layout.total.min(remaining);
        if take < layout.total {
            partial = true;
        }
        let hits: Vec<Found> = (0..take as u64)
            .into_par_iter()
            .filter_map(|index| {
                let (w, adj) = layout.decode(index as u128);
                if !passes_prefilter(&w, &adj) {
                    return None;
                }
                let form = canonical_from_parts(&w, &adj);
                let pos = form.order.iter().position(|&v| v == 0).unwrap();
                let pivot = form.orbit_representatives()[pos];
                Some((n, form.weights, form.adjacency, pivot))
            })
            .collect();
        found.extend(hits);
        examined += take;
        remaining -= take;
        if partial {
            break;
        }
    }

    let mut specs = Vec::with_capacity(found.len());
    for (n, weights, adjacency, pivot) in found {
        let form = super::CanonicalForm { weights, adjacency, order: (0..n).collect(), optimal_orders: vec![] };
        let spec = FamilySpec::new(form.graph(), &format!("v{}", pivot + 1))?;
        let report = check_genex_hypotheses(&spec.base, &spec.pivot)?;
        debug_assert!(report.all_pass, "prefilter admitted a failing spec");
        if report.all_pass {
            specs.push(spec);
        }
    }
    Ok(ProspectResult { specs, candidates_examined: examined as u64, partial })
}

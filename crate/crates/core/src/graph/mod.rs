//! Weighted, signed plane multigraphs and the operations every other module
//! consumes: signed edge counts, the Laplacian (linking) matrix, induced
//! subgraphs and vertex contraction.

mod io;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::linalg::SymmetricIntMatrix;

pub use io::{parse_graph, serialize_graph, EdgeEntry, GraphFile, VertexEntry};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("expected two distinct vertices, got `{0}` twice")]
    SameVertex(String),
    #[error("vertex index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("invalid graph: {0}")]
    Invalid(ValidationReport),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
}

/// Sign of a clasp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(value: i64) -> Option<Sign> {
        match value {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn of(value: i64) -> Option<Sign> {
        match value.signum() {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub weight: i64,
}

/// An edge between two vertex indices, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub sign: Sign,
}

impl Edge {
    pub fn other(&self, end: usize) -> usize {
        if self.u == end {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
}

/// Signed multiplicity of the edges joining two vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedEdgeCount(pub i64);

impl fmt::Display for SignedEdgeCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A single problem found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateId(String),
    SelfLoop { edge: usize, id: String },
    DanglingEndpoint { edge: usize, id: String },
    InvalidSign { edge: usize, sign: i64 },
    Rotation { vertex: String, reason: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateId(id) => write!(f, "duplicate vertex id `{id}`"),
            Violation::SelfLoop { edge, id } => write!(f, "self-loop: edge #{edge} joins `{id}` to itself"),
            Violation::DanglingEndpoint { edge, id } => {
                write!(f, "dangling endpoint: edge #{edge} references undeclared vertex `{id}`")
            }
            Violation::InvalidSign { edge, sign } => {
                write!(f, "invalid sign: edge #{edge} has sign {sign}, expected 1 or -1")
            }
            Violation::Rotation { vertex, reason } => {
                write!(f, "inconsistent rotation at `{vertex}`: {reason}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the structural invariants of a graph description.
pub fn validate(file: &GraphFile) -> ValidationReport {
    let mut violations = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (k, v) in file.vertices.iter().enumerate() {
        if index.insert(v.id.as_str(), k).is_some() {
            violations.push(Violation::DuplicateId(v.id.clone()));
        }
    }
    for (k, e) in file.edges.iter().enumerate() {
        for end in [&e.u, &e.v] {
            if !index.contains_key(end.as_str()) {
                violations.push(Violation::DanglingEndpoint { edge: k, id: end.clone() });
            }
        }
        if e.u == e.v {
            violations.push(Violation::SelfLoop { edge: k, id: e.u.clone() });
        }
        if Sign::from_value(e.sign).is_none() {
            violations.push(Violation::InvalidSign { edge: k, sign: e.sign });
        }
    }
    if let Some(rotation) = &file.rotation {
        for (vertex, order) in rotation {
            if !index.contains_key(vertex.as_str()) {
                violations.push(Violation::Rotation {
                    vertex: vertex.clone(),
                    reason: "not a declared vertex".into(),
                });
                continue;
            }
            let mut seen = vec![false; file.edges.len()];
            for &k in order {
                let Some(e) = file.edges.get(k) else {
                    violations.push(Violation::Rotation {
                        vertex: vertex.clone(),
                        reason: format!("edge index {k} out of range"),
                    });
                    continue;
                };
                if e.u != *vertex && e.v != *vertex {
                    violations.push(Violation::Rotation {
                        vertex: vertex.clone(),
                        reason: format!("edge #{k} is not incident"),
                    });
                } else if seen[k] {
                    violations.push(Violation::Rotation {
                        vertex: vertex.clone(),
                        reason: format!("edge #{k} listed twice"),
                    });
                }
                seen[k] = true;
            }
            for (k, e) in file.edges.iter().enumerate() {
                if (e.u == *vertex || e.v == *vertex) && !seen[k] {
                    violations.push(Violation::Rotation {
                        vertex: vertex.clone(),
                        reason: format!("incident edge #{k} missing"),
                    });
                }
            }
        }
        for (k, v) in file.vertices.iter().enumerate() {
            let has_edges = file.edges.iter().any(|e| e.u == v.id || e.v == v.id);
            if has_edges && !rotation.contains_key(&v.id) && index.get(v.id.as_str()) == Some(&k) {
                violations.push(Violation::Rotation {
                    vertex: v.id.clone(),
                    reason: "no cyclic order given".into(),
                });
            }
        }
    }
    ValidationReport { violations }
}

/// A validated weighted, signed multigraph.
///
/// Vertex order is declaration order and fixes matrix indices. Edges are kept
/// sorted by `(u, v, sign)` over vertex indices; parallel edges, including
/// ones of opposite sign, are all retained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainmailGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    rotation: Option<Vec<Vec<usize>>>,
    index: HashMap<String, usize>,
}

impl Default for ChainmailGraph {
    fn default() -> Self {
        ChainmailGraph::empty()
    }
}

impl TryFrom<GraphFile> for ChainmailGraph {
    type Error = GraphError;

    fn try_from(file: GraphFile) -> Result<Self, GraphError> {
        let report = validate(&file);
        if !report.is_ok() {
            return Err(GraphError::Invalid(report));
        }
        let vertices: Vec<Vertex> = file
            .vertices
            .into_iter()
            .map(|v| Vertex { id: v.id, weight: v.weight })
            .collect();
        let index: HashMap<String, usize> =
            vertices.iter().enumerate().map(|(k, v)| (v.id.clone(), k)).collect();
        let raw: Vec<Edge> = file
            .edges
            .iter()
            .map(|e| {
                let (a, b) = (index[&e.u], index[&e.v]);
                Edge { u: a.min(b), v: a.max(b), sign: Sign::from_value(e.sign).unwrap() }
            })
            .collect();
        let rotation = file.rotation.map(|rot| {
            let mut per_vertex = vec![Vec::new(); vertices.len()];
            for (id, order) in rot {
                per_vertex[index[&id]] = order;
            }
            per_vertex
        });
        Ok(ChainmailGraph::assemble(vertices, raw, rotation))
    }
}

impl ChainmailGraph {
    pub fn empty() -> Self {
        ChainmailGraph { vertices: Vec::new(), edges: Vec::new(), rotation: None, index: HashMap::new() }
    }

    /// Convenience constructor from `(id, weight)` and `(u, v, sign)` lists.
    pub fn from_lists<S: AsRef<str>>(
        vertices: &[(S, i64)],
        edges: &[(S, S, i64)],
    ) -> Result<Self, GraphError> {
        let file = GraphFile {
            vertices: vertices
                .iter()
                .map(|(id, w)| VertexEntry { id: id.as_ref().to_string(), weight: *w })
                .collect(),
            edges: edges
                .iter()
                .map(|(u, v, s)| EdgeEntry { u: u.as_ref().to_string(), v: v.as_ref().to_string(), sign: *s })
                .collect(),
            rotation: None,
        };
        ChainmailGraph::try_from(file)
    }

    /// Builds a graph from already-checked parts. Edge endpoints are
    /// normalised to `u < v`, edges sorted stably, and the rotation system
    /// (indices into `edges`) remapped accordingly.
    pub(crate) fn assemble(vertices: Vec<Vertex>, edges: Vec<Edge>, rotation: Option<Vec<Vec<usize>>>) -> Self {
        let index = vertices.iter().enumerate().map(|(k, v)| (v.id.clone(), k)).collect();
        let edges: Vec<Edge> = edges
            .into_iter()
            .map(|e| Edge { u: e.u.min(e.v), v: e.u.max(e.v), sign: e.sign })
            .collect();
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by_key(|&k| (edges[k].u, edges[k].v, edges[k].sign));
        let mut new_position = vec![0; edges.len()];
        for (new, &old) in order.iter().enumerate() {
            new_position[old] = new;
        }
        let sorted = order.iter().map(|&k| edges[k]).collect();
        let rotation = rotation.map(|rot| {
            rot.into_iter()
                .map(|cycle| cycle.into_iter().map(|k| new_position[k]).collect())
                .collect()
        });
        ChainmailGraph { vertices, edges: sorted, rotation, index }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Cyclic edge order per vertex (indices into [`edges`](Self::edges)).
    pub fn rotation(&self) -> Option<&[Vec<usize>]> {
        self.rotation.as_deref()
    }

    pub fn index_of(&self, id: &str) -> Result<usize, GraphError> {
        self.index.get(id).copied().ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn id(&self, i: usize) -> &str {
        &self.vertices[i].id
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.vertices[i].weight
    }

    pub fn weights(&self) -> Vec<i64> {
        self.vertices.iter().map(|v| v.weight).collect()
    }

    /// Signed count of edges between two vertex indices.
    pub fn mu(&self, i: usize, j: usize) -> i64 {
        let (u, v) = (i.min(j), i.max(j));
        self.edges
            .iter()
            .filter(|e| e.u == u && e.v == v)
            .map(|e| e.sign.value())
            .sum()
    }

    pub fn signed_edge_count(&self, u: &str, v: &str) -> Result<SignedEdgeCount, GraphError> {
        let i = self.index_of(u)?;
        let j = self.index_of(v)?;
        if i == j {
            return Err(GraphError::SameVertex(u.to_string()));
        }
        Ok(SignedEdgeCount(self.mu(i, j)))
    }

    /// Sum of the signs of all edges incident to vertex `i`.
    pub fn incident_sign_sum(&self, i: usize) -> i64 {
        self.edges.iter().filter(|e| e.touches(i)).map(|e| e.sign.value()).sum()
    }

    /// Edge indices incident to `i`: rotation order when present, otherwise
    /// stored edge order (which is sorted by the other endpoint).
    pub fn incident_edges(&self, i: usize) -> Vec<usize> {
        match &self.rotation {
            Some(rot) if !rot[i].is_empty() => rot[i].clone(),
            _ => (0..self.edges.len()).filter(|&k| self.edges[k].touches(i)).collect(),
        }
    }

    /// Signed adjacency as a dense `n × n` table of `i64`.
    pub fn signed_adjacency(&self) -> Vec<Vec<i64>> {
        let n = self.vertices.len();
        let mut a = vec![vec![0i64; n]; n];
        for e in &self.edges {
            a[e.u][e.v] += e.sign.value();
            a[e.v][e.u] += e.sign.value();
        }
        a
    }

    /// The Laplacian (linking) matrix: weights on the diagonal, signed edge
    /// counts off it, rows in declaration order.
    pub fn laplacian(&self) -> SymmetricIntMatrix {
        let mut a = self.signed_adjacency();
        for (i, v) in self.vertices.iter().enumerate() {
            a[i][i] = v.weight;
        }
        SymmetricIntMatrix::from_rows(
            a.into_iter()
                .map(|row| row.into_iter().map(BigInt::from).collect())
                .collect(),
        )
        .expect("laplacian is symmetric by construction")
    }

    pub fn induced_subgraph(&self, subset: &VertexSubset) -> Result<ChainmailGraph, GraphError> {
        subset.check(self)?;
        let keep = subset.indicator(self.vertex_count());
        let mut new_index = vec![usize::MAX; self.vertex_count()];
        let mut vertices = Vec::new();
        for &i in subset.indices() {
            new_index[i] = vertices.len();
            vertices.push(self.vertices[i].clone());
        }
        let mut edge_map = vec![usize::MAX; self.edges.len()];
        let mut edges = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            if keep[e.u] && keep[e.v] {
                edge_map[k] = edges.len();
                edges.push(Edge { u: new_index[e.u], v: new_index[e.v], sign: e.sign });
            }
        }
        let rotation = self.rotation.as_ref().map(|rot| {
            subset
                .indices()
                .iter()
                .map(|&i| {
                    rot[i]
                        .iter()
                        .filter(|&&k| edge_map[k] != usize::MAX)
                        .map(|&k| edge_map[k])
                        .collect()
                })
                .collect()
        });
        Ok(ChainmailGraph::assemble(vertices, edges, rotation))
    }

    /// Slides the component of `i` over that of `j`: the two vertices merge
    /// into one that keeps `i`'s id and position, with weight
    /// `w(i) + w(j) + 2·μ(i, j)`. Edges between `i` and `j` disappear; all
    /// other edges of `j` move to the merged vertex with their signs. The
    /// rotation system is dropped.
    pub fn contract_vertices(&self, i: &str, j: &str) -> Result<ChainmailGraph, GraphError> {
        let a = self.index_of(i)?;
        let b = self.index_of(j)?;
        if a == b {
            return Err(GraphError::SameVertex(i.to_string()));
        }
        Ok(self.contract_indices(a, b))
    }

    pub(crate) fn contract_indices(&self, a: usize, b: usize) -> ChainmailGraph {
        let merged_weight = self.weight(a) + self.weight(b) + 2 * self.mu(a, b);
        let remap = |x: usize| -> usize {
            let x = if x == b { a } else { x };
            if x > b {
                x - 1
            } else {
                x
            }
        };
        let mut vertices = self.vertices.clone();
        vertices[a].weight = merged_weight;
        vertices.remove(b);
        let edges = self
            .edges
            .iter()
            .filter(|e| !(e.touches(a) && e.touches(b)))
            .map(|e| Edge { u: remap(e.u), v: remap(e.v), sign: e.sign })
            .collect();
        ChainmailGraph::assemble(vertices, edges, None)
    }

    /// Copy of the graph with one vertex weight replaced.
    pub fn with_weight(&self, id: &str, weight: i64) -> Result<ChainmailGraph, GraphError> {
        let i = self.index_of(id)?;
        let mut g = self.clone();
        g.vertices[i].weight = weight;
        Ok(g)
    }

    /// Relabels vertices: `order[k]` is the old index placed at position `k`,
    /// and it receives id `ids[k]`.
    pub fn permuted(&self, order: &[usize], ids: &[String]) -> ChainmailGraph {
        let mut new_index = vec![0; order.len()];
        for (k, &old) in order.iter().enumerate() {
            new_index[old] = k;
        }
        let vertices = order
            .iter()
            .zip(ids)
            .map(|(&old, id)| Vertex { id: id.clone(), weight: self.vertices[old].weight })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { u: new_index[e.u], v: new_index[e.v], sign: e.sign })
            .collect();
        let rotation = self
            .rotation
            .as_ref()
            .map(|rot| order.iter().map(|&old| rot[old].clone()).collect());
        ChainmailGraph::assemble(vertices, edges, rotation)
    }

    /// Graph whose edge multiset realises a signed adjacency table with
    /// `|m|` parallel edges of sign `sgn(m)` per pair.
    pub fn from_matrix(ids: &[String], weights: &[i64], adjacency: &[Vec<i64>]) -> ChainmailGraph {
        let vertices =
            ids.iter().zip(weights).map(|(id, &weight)| Vertex { id: id.clone(), weight }).collect();
        let mut edges = Vec::new();
        for i in 0..ids.len() {
            for j in i + 1..ids.len() {
                let m = adjacency[i][j];
                if let Some(sign) = Sign::of(m) {
                    for _ in 0..m.unsigned_abs() {
                        edges.push(Edge { u: i, v: j, sign });
                    }
                }
            }
        }
        ChainmailGraph::assemble(vertices, edges, None)
    }

    pub(crate) fn push_vertex_with_edges(&self, id: String, weight: i64, edges: Vec<Edge>) -> ChainmailGraph {
        let mut vertices = self.vertices.clone();
        vertices.push(Vertex { id, weight });
        let mut all = self.edges.clone();
        all.extend(edges);
        ChainmailGraph::assemble(vertices, all, None)
    }
}

/// A set of vertices of some host graph, held as sorted declaration indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSubset {
    members: Vec<usize>,
}

impl VertexSubset {
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut members: Vec<usize> = indices.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        VertexSubset { members }
    }

    pub fn from_ids<S: AsRef<str>>(g: &ChainmailGraph, ids: &[S]) -> Result<Self, GraphError> {
        let indices = ids.iter().map(|id| g.index_of(id.as_ref())).collect::<Result<Vec<_>, _>>()?;
        Ok(VertexSubset::from_indices(indices))
    }

    pub fn from_indicator(bits: &[bool]) -> Self {
        VertexSubset { members: bits.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k).collect() }
    }

    pub fn all(g: &ChainmailGraph) -> Self {
        VertexSubset { members: (0..g.vertex_count()).collect() }
    }

    pub fn indices(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn indicator(&self, n: usize) -> Vec<bool> {
        let mut bits = vec![false; n];
        for &i in &self.members {
            bits[i] = true;
        }
        bits
    }

    pub fn check(&self, g: &ChainmailGraph) -> Result<(), GraphError> {
        match self.members.iter().find(|&&i| i >= g.vertex_count()) {
            Some(&i) => Err(GraphError::IndexOutOfRange(i)),
            None => Ok(()),
        }
    }

    pub fn ids<'g>(&self, g: &'g ChainmailGraph) -> Vec<&'g str> {
        self.members.iter().map(|&i| g.id(i)).collect()
    }

    /// `{v1,v4}` style rendering against a host graph.
    pub fn render(&self, g: &ChainmailGraph) -> String {
        format!("{{{}}}", self.ids(g).join(","))
    }
}

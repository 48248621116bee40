//! The JSON-compatible graph file format.
//!
//! ```text
//! {"vertices":[{"id":"v1","weight":-5},...],
//!  "edges":[{"u":"v1","v":"v3","sign":1},...],
//!  "rotation":{"v1":[0,1,2],...}}
//! ```
//!
//! One `edges` entry per parallel edge. Rotation lists are indices into the
//! `edges` array of the same file. The serializer writes vertices in
//! declaration order and edges sorted by endpoint indices, one entry per line.

use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::{ChainmailGraph, GraphError};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<VertexEntry>,
    #[serde(default)]
    pub edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<IndexMap<String, Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: String,
    pub weight: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub u: String,
    pub v: String,
    pub sign: i64,
}

impl From<&ChainmailGraph> for GraphFile {
    fn from(g: &ChainmailGraph) -> Self {
        GraphFile {
            vertices: g
                .vertices()
                .iter()
                .map(|v| VertexEntry { id: v.id.clone(), weight: v.weight })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeEntry { u: g.id(e.u).to_string(), v: g.id(e.v).to_string(), sign: e.sign.value() })
                .collect(),
            rotation: g.rotation().map(|rot| {
                rot.iter()
                    .enumerate()
                    .map(|(i, cycle)| (g.id(i).to_string(), cycle.clone()))
                    .collect()
            }),
        }
    }
}

pub fn parse_graph(text: &str) -> Result<ChainmailGraph, GraphError> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| GraphError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    ChainmailGraph::try_from(file)
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

pub fn serialize_graph(g: &ChainmailGraph) -> String {
    let mut out = String::from("{\n  \"vertices\": [");
    for (k, v) in g.vertices().iter().enumerate() {
        let sep = if k + 1 == g.vertex_count() { "" } else { "," };
        write!(out, "\n    {{\"id\": {}, \"weight\": {}}}{sep}", quote(&v.id), v.weight).unwrap();
    }
    out.push_str(if g.vertex_count() == 0 { "],\n" } else { "\n  ],\n" });
    out.push_str("  \"edges\": [");
    for (k, e) in g.edges().iter().enumerate() {
        let sep = if k + 1 == g.edge_count() { "" } else { "," };
        write!(
            out,
            "\n    {{\"u\": {}, \"v\": {}, \"sign\": {}}}{sep}",
            quote(g.id(e.u)),
            quote(g.id(e.v)),
            e.sign.value()
        )
        .unwrap();
    }
    out.push_str(if g.edge_count() == 0 { "]" } else { "\n  ]" });
    if let Some(rot) = g.rotation() {
        out.push_str(",\n  \"rotation\": {");
        for (i, cycle) in rot.iter().enumerate() {
            let sep = if i + 1 == rot.len() { "" } else { "," };
            let list: Vec<String> = cycle.iter().map(|k| k.to_string()).collect();
            write!(out, "\n    {}: [{}]{sep}", quote(g.id(i)), list.join(", ")).unwrap();
        }
        out.push_str(if rot.is_empty() { "}" } else { "\n  }" });
    }
    out.push_str("\n}\n");
    out
}

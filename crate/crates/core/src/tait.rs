//! Link diagrams in PD notation and their Tait graphs.
//!
//! A crossing `X[a,b,c,d]` lists its four arc ends counterclockwise, starting
//! at the incoming under-strand; the under-strand runs `a → c` and the
//! over-strand joins `b` and `d`. Position `p` of crossing `c` is the slot
//! `(c, p)`, and corner `k` is the region between slots `k` and `k + 1`.
//!
//! Faces are orbits of the map "follow the arc to its other end, then step
//! counterclockwise by one slot". The walk that arrives at slot `(c, p)` and
//! leaves through `(c, p + 1)` runs through corner `(c, p)`, so the face of
//! corner `(c, k)` is the face of the dart leaving through `(c, k + 1)`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{ChainmailGraph, Edge, GraphError, Sign, Vertex, VertexSubset};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TaitError {
    #[error("PD syntax error in tuple {tuple}: {message}")]
    Syntax { tuple: usize, message: String },
    #[error("arc {label} occurs {count} times (expected 2)")]
    ArcCount { label: u64, count: usize },
    #[error("inconsistent strand orientation through crossing {crossing}")]
    Orientation { crossing: usize },
    #[error("diagram is disconnected ({components} pieces); split diagrams are not supported")]
    Disconnected { components: usize },
    #[error("PD code is not planar: {faces} faces for {crossings} crossings")]
    NonPlanar { crossings: usize, faces: usize },
    #[error("face structure is not 2-colorable")]
    NotColorable,
    #[error("crossing {crossing} is nugatory: both white corners lie in face f{face}")]
    Nugatory { crossing: usize, face: usize },
    #[error("unknown root vertex {0:?}")]
    UnknownRoot(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarDiagramCode {
    pub crossings: Vec<[u64; 4]>,
}

impl fmt::Display for PlanarDiagramCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.crossings.iter().map(|x| format!("X[{},{},{},{}]", x[0], x[1], x[2], x[3])).collect();
        write!(f, "{}", parts.join(" "))
    }
}

type Slot = (usize, usize);

impl PlanarDiagramCode {
    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        self.crossings.len() * 2
    }

    /// The other end of the arc leaving through `slot`.
    fn partners(&self) -> BTreeMap<Slot, Slot> {
        let mut ends: BTreeMap<u64, Vec<Slot>> = BTreeMap::new();
        for (c, x) in self.crossings.iter().enumerate() {
            for (p, &label) in x.iter().enumerate() {
                ends.entry(label).or_default().push((c, p));
            }
        }
        let mut out = BTreeMap::new();
        for slots in ends.values() {
            out.insert(slots[0], slots[1]);
            out.insert(slots[1], slots[0]);
        }
        out
    }

    /// Direction of every slot: `true` when the strand enters the crossing
    /// there. Under-strands are oriented by the convention; over-strands
    /// inherit orientation along their component, falling back to ascending
    /// labels (`b → d` iff `d` follows `b`) for components that never pass
    /// under.
    pub fn slot_orientation(&self) -> Result<Vec<[bool; 4]>, TaitError> {
        let partner = self.partners();
        let n = self.crossings.len();
        let mut dir: Vec<[Option<bool>; 4]> = vec![[None; 4]; n];
        let mut queue = VecDeque::new();
        let assign = |dir: &mut Vec<[Option<bool>; 4]>, q: &mut VecDeque<Slot>, (c, p): Slot, incoming: bool| {
            match dir[c][p] {
                Some(d) if d != incoming => Err(TaitError::Orientation { crossing: c }),
                Some(_) => Ok(()),
                None => {
                    dir[c][p] = Some(incoming);
                    q.push_back((c, p));
                    Ok(())
                }
            }
        };
        for c in 0..n {
            assign(&mut dir, &mut queue, (c, 0), true)?;
            assign(&mut dir, &mut queue, (c, 2), false)?;
        }
        loop {
            while let Some((c, p)) = queue.pop_front() {
                let incoming = dir[c][p].unwrap();
                assign(&mut dir, &mut queue, (c, (p + 2) % 4), !incoming)?;
                assign(&mut dir, &mut queue, partner[&(c, p)], !incoming)?;
            }
            let Some(c) = (0..n).find(|&c| dir[c][1].is_none()) else { break };
            let (b, d) = (self.crossings[c][1], self.crossings[c][3]);
            let b_to_d = d == b + 1 || b > d + 1;
            assign(&mut dir, &mut queue, (c, 1), b_to_d)?;
        }
        Ok(dir.into_iter().map(|d| d.map(|x| x.unwrap())).collect())
    }
}

/// Parses whitespace-separated `X[a,b,c,d]` tokens; `#` starts a comment.
pub fn parse_pd(text: &str) -> Result<PlanarDiagramCode, TaitError> {
    let stripped: String = text
        .lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join(" ");
    let mut crossings = Vec::new();
    let mut rest = stripped.trim_start();
    while !rest.is_empty() {
        let tuple = crossings.len() + 1;
        let err = |message: String| TaitError::Syntax { tuple, message };
        let body = rest
            .strip_prefix("X[")
            .ok_or_else(|| err(format!("expected X[...], found {:?}", rest.split_whitespace().next().unwrap_or(""))))?;
        let close = body.find(']').ok_or_else(|| err("missing ]".to_string()))?;
        let labels: Vec<&str> = body[..close].split(',').map(str::trim).collect();
        if labels.len() != 4 {
            return Err(err(format!("expected 4 labels, found {}", labels.len())));
        }
        let mut x = [0u64; 4];
        for (slot, s) in x.iter_mut().zip(&labels) {
            *slot = s
                .parse()
                .ok()
                .filter(|&v: &u64| v > 0)
                .ok_or_else(|| err(format!("arc label {s:?} is not a positive integer")))?;
        }
        crossings.push(x);
        rest = body[close + 1..].trim_start();
        if let Some(c) = rest.chars().next() {
            if c != 'X' {
                return Err(TaitError::Syntax { tuple: tuple + 1, message: format!("unexpected {c:?}") });
            }
        }
    }
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for x in &crossings {
        for &label in x {
            *counts.entry(label).or_default() += 1;
        }
    }
    if let Some((&label, &count)) = counts.iter().find(|(_, &n)| n != 2) {
        return Err(TaitError::ArcCount { label, count });
    }
    let pd = PlanarDiagramCode { crossings };
    pd.slot_orientation()?;
    Ok(pd)
}

/// A face as the cyclic list of darts `(crossing, slot left through)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<(usize, usize)>,
}

impl Face {
    pub fn boundary_length(&self) -> usize {
        self.darts.len()
    }
}

fn connected_pieces(pd: &PlanarDiagramCode, partner: &BTreeMap<Slot, Slot>) -> usize {
    let n = pd.crossings.len();
    if n == 0 {
        return 1;
    }
    let mut seen = vec![false; n];
    let mut pieces = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        pieces += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(c) = stack.pop() {
            for p in 0..4 {
                let (d, _) = partner[&(c, p)];
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
    }
    pieces
}

/// Faces of the diagram's 4-valent plane graph. The crossingless unknot has
/// two faces with empty boundary.
pub fn trace_faces(pd: &PlanarDiagramCode) -> Result<Vec<Face>, TaitError> {
    let n = pd.crossings.len();
    if n == 0 {
        return Ok(vec![Face { darts: vec![] }, Face { darts: vec![] }]);
    }
    let partner = pd.partners();
    let pieces = connected_pieces(pd, &partner);
    if pieces > 1 {
        return Err(TaitError::Disconnected { components: pieces });
    }
    let mut seen = vec![[false; 4]; n];
    let mut faces = Vec::new();
    for c in 0..n {
        for p in 0..4 {
            if seen[c][p] {
                continue;
            }
            let mut darts = Vec::new();
            let mut dart = (c, p);
            while !seen[dart.0][dart.1] {
                seen[dart.0][dart.1] = true;
                darts.push(dart);
                let (d, q) = partner[&dart];
                dart = (d, (q + 1) % 4);
            }
            faces.push(Face { darts });
        }
    }
    if faces.len() != n + 2 {
        return Err(TaitError::NonPlanar { crossings: n, faces: faces.len() });
    }
    Ok(faces)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }
}

impl FromStr for Color {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "white" => Ok(Color::White),
            "black" => Ok(Color::Black),
            _ => Err(format!("expected white or black, got {s:?}")),
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::White => "white",
            Color::Black => "black",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckerboardColoring {
    pub faces: Vec<Face>,
    pub colors: Vec<Color>,
    /// The face treated as unbounded: the longest boundary, lowest index on
    /// ties.
    pub outer: usize,
    /// `corner_face[c][k]` is the face containing corner `k` of crossing `c`.
    pub corner_face: Vec<[usize; 4]>,
}

impl CheckerboardColoring {
    pub fn faces_of(&self, color: Color) -> Vec<usize> {
        (0..self.faces.len()).filter(|&f| self.colors[f] == color).collect()
    }

    pub fn corner_color(&self, c: usize, k: usize) -> Color {
        self.colors[self.corner_face[c][k]]
    }
}

pub fn checkerboard_coloring(pd: &PlanarDiagramCode, outer_color: Color) -> Result<CheckerboardColoring, TaitError> {
    let faces = trace_faces(pd)?;
    let n = pd.crossings.len();
    let mut dart_face = vec![[0usize; 4]; n];
    for (f, face) in faces.iter().enumerate() {
        for &(c, p) in &face.darts {
            dart_face[c][p] = f;
        }
    }
    let corner_face: Vec<[usize; 4]> =
        (0..n).map(|c| [0, 1, 2, 3].map(|k| dart_face[c][(k + 1) % 4])).collect();
    let outer = (0..faces.len()).fold(0, |best, f| {
        if faces[f].boundary_length() > faces[best].boundary_length() {
            f
        } else {
            best
        }
    });

    // Faces on the two sides of an arc are adjacent.
    let mut adjacent: Vec<Vec<usize>> = vec![Vec::new(); faces.len()];
    if n == 0 {
        adjacent[0].push(1);
        adjacent[1].push(0);
    }
    let partner = pd.partners();
    for (&(c, p), &(d, q)) in &partner {
        let (a, b) = (dart_face[c][p], dart_face[d][q]);
        adjacent[a].push(b);
    }

    let mut colors: Vec<Option<Color>> = vec![None; faces.len()];
    colors[outer] = Some(outer_color);
    let mut queue = VecDeque::from([outer]);
    while let Some(f) = queue.pop_front() {
        let opposite = colors[f].unwrap().other();
        for &g in &adjacent[f] {
            match colors[g] {
                None => {
                    colors[g] = Some(opposite);
                    queue.push_back(g);
                }
                Some(c) if c != opposite => return Err(TaitError::NotColorable),
                Some(_) => {}
            }
        }
    }
    let colors = colors.into_iter().map(|c| c.ok_or(TaitError::NotColorable)).collect::<Result<_, _>>()?;
    Ok(CheckerboardColoring { faces, colors, outer, corner_face })
}

/// `μ(c) = +1` when a quarter turn counterclockwise carries the under-strand
/// through the white corners onto the over-strand, that is when corner 0 is
/// white.
pub fn crossing_sign(coloring: &CheckerboardColoring, c: usize) -> i64 {
    match coloring.corner_color(c, 0) {
        Color::White => 1,
        Color::Black => -1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaitGraph {
    pub underlying: ChainmailGraph,
    pub root: String,
}

impl TaitGraph {
    /// `w(v) = −Σ μ(e)` over the edges at `v`.
    pub fn satisfies_weight_relation(&self) -> bool {
        let g = &self.underlying;
        (0..g.vertex_count()).all(|i| g.weight(i) == -g.incident_sign_sum(i))
    }

    pub fn with_root(mut self, root: &str) -> Result<TaitGraph, TaitError> {
        if !self.underlying.contains(root) {
            return Err(TaitError::UnknownRoot(root.to_string()));
        }
        self.root = root.to_string();
        Ok(self)
    }
}

/// White faces become vertices `f<index>`; crossing `c` becomes an edge of
/// sign `−μ(c)` between its two white corners. The root defaults to the white
/// face with the longest boundary.
pub fn white_tait_graph(pd: &PlanarDiagramCode, coloring: &CheckerboardColoring) -> Result<TaitGraph, TaitError> {
    let white = coloring.faces_of(Color::White);
    let mut position = vec![usize::MAX; coloring.faces.len()];
    for (k, &f) in white.iter().enumerate() {
        position[f] = k;
    }
    let mut edges = Vec::new();
    for c in 0..pd.crossings.len() {
        let corners: Vec<usize> = (0..4)
            .filter(|&k| coloring.corner_color(c, k) == Color::White)
            .map(|k| coloring.corner_face[c][k])
            .collect();
        if corners[0] == corners[1] {
            return Err(TaitError::Nugatory { crossing: c, face: corners[0] });
        }
        let sign = Sign::of(-crossing_sign(coloring, c)).unwrap();
        edges.push(Edge { u: position[corners[0]], v: position[corners[1]], sign });
    }
    // Rotation at a white face: its crossings in boundary order.
    let rotation: Vec<Vec<usize>> = white
        .iter()
        .map(|&f| coloring.faces[f].darts.iter().map(|&(c, _)| c).collect())
        .collect();
    let mut weights = vec![0i64; white.len()];
    for e in &edges {
        weights[e.u] -= e.sign.value();
        weights[e.v] -= e.sign.value();
    }
    let vertices = white
        .iter()
        .zip(&weights)
        .map(|(f, &weight)| Vertex { id: format!("f{f}"), weight })
        .collect();
    let underlying = ChainmailGraph::assemble(vertices, edges, Some(rotation));
    let root_face = white.iter().copied().fold(None, |best: Option<usize>, f| match best {
        Some(b) if coloring.faces[b].boundary_length() >= coloring.faces[f].boundary_length() => Some(b),
        _ => Some(f),
    });
    let root = root_face.map(|f| format!("f{f}")).unwrap_or_default();
    Ok(TaitGraph { underlying, root })
}

/// Deletes the root and its edges; remaining weights are kept.
pub fn reduce_tait(t: &TaitGraph, root: &str) -> Result<ChainmailGraph, TaitError> {
    let g = &t.underlying;
    let r = g.index_of(root).map_err(|_| TaitError::UnknownRoot(root.to_string()))?;
    let keep = VertexSubset::from_indices((0..g.vertex_count()).filter(|&i| i != r));
    Ok(g.induced_subgraph(&keep)?)
}

/// Adds a root `r` so that every vertex satisfies the Tait weight relation:
/// `|m_v|` edges of sign `sgn(m_v)` join `r` to `v`, where
/// `m_v = −w(v) − Σ μ(e)` over the existing edges at `v`.
pub fn complete_to_tait(g: &ChainmailGraph) -> TaitGraph {
    let mut root = "r".to_string();
    let mut k = 0;
    while g.contains(&root) {
        root = format!("r{k}");
        k += 1;
    }
    let r = g.vertex_count();
    let mut edges = Vec::new();
    let mut root_weight = 0;
    for v in 0..g.vertex_count() {
        let m = -g.weight(v) - g.incident_sign_sum(v);
        if let Some(sign) = Sign::of(m) {
            for _ in 0..m.unsigned_abs() {
                edges.push(Edge { u: v, v: r, sign });
            }
        }
        root_weight -= m;
    }
    let underlying = g.push_vertex_with_edges(root.clone(), root_weight, edges);
    TaitGraph { underlying, root }
}

/// Crossing change at every crossing, which is the mirror image up to planar
/// isotopy. The incoming under-strand of the new crossing is the old
/// incoming over-strand.
pub fn mirror(pd: &PlanarDiagramCode) -> Result<PlanarDiagramCode, TaitError> {
    let dir = pd.slot_orientation()?;
    let crossings = pd
        .crossings
        .iter()
        .zip(&dir)
        .map(|(&[a, b, c, d], o)| if o[1] { [b, c, d, a] } else { [d, a, b, c] })
        .collect();
    Ok(PlanarDiagramCode { crossings })
}

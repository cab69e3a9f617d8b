//! Graph model, canonical text format, profile validation and endpoint
//! derivation.
//!
//! A [`Graph`] is a simple graph on the dense vertex ids `0..N` with integer
//! edge weights. Its edge list is always kept in canonical order (sorted by
//! `(u, v)`, undirected edges stored with `u <= v`), which makes structural
//! equality, hashing and serialization agree.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub w: i64,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId, w: i64) -> Self {
        Self { u, v, w }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    fn key(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    directed: bool,
    num_vertices: usize,
    edges: Vec<Edge>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({u}, {v}) references a vertex outside 0..{n}")]
    VertexOutOfRange { u: VertexId, v: VertexId, n: usize },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: VertexId, v: VertexId },
    #[error("graph has no vertices")]
    EmptyGraph,
}

impl Graph {
    /// Graph with `n` isolated vertices.
    pub fn new(directed: bool, n: usize) -> Self {
        Self {
            directed,
            num_vertices: n,
            edges: Vec::new(),
        }
    }

    /// One vertex, no edges: the default starting seed.
    pub fn single_vertex(directed: bool) -> Self {
        Self::new(directed, 1)
    }

    /// Builds a graph from an arbitrary edge list, canonicalizing its order.
    pub fn from_edges(
        directed: bool,
        n: usize,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, GraphError> {
        let mut out = Vec::new();
        for e in edges {
            if e.u as usize >= n || e.v as usize >= n {
                return Err(GraphError::VertexOutOfRange { u: e.u, v: e.v, n });
            }
            out.push(canonical(directed, e));
        }
        out.sort_unstable_by_key(Edge::key);
        if let Some(pair) = out.windows(2).find(|p| p[0].key() == p[1].key()) {
            return Err(GraphError::DuplicateEdge {
                u: pair[0].u,
                v: pair[0].v,
            });
        }
        Ok(Self {
            directed,
            num_vertices: n,
            edges: out,
        })
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.find_edge(u, v).is_some()
    }

    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let probe = canonical(self.directed, Edge::new(u, v, 0)).key();
        self.edges.binary_search_by_key(&probe, Edge::key).ok()
    }

    /// Number of incident edge endpoints; a self-loop counts twice and for
    /// directed graphs in- and out-degree are summed.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.num_vertices];
        for e in &self.edges {
            deg[e.u as usize] += 1;
            deg[e.v as usize] += 1;
        }
        deg
    }

    /// Out-neighbour lists (both directions for undirected graphs, a
    /// self-loop listed once), in ascending neighbour order.
    pub fn adjacency(&self) -> Vec<Vec<(VertexId, i64)>> {
        let mut adj = vec![Vec::new(); self.num_vertices];
        for e in &self.edges {
            adj[e.u as usize].push((e.v, e.w));
            if !self.directed && !e.is_loop() {
                adj[e.v as usize].push((e.u, e.w));
            }
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(v, _)| v);
        }
        adj
    }

    /// Inserts an edge keeping canonical order. Returns false if the pair
    /// already exists or an endpoint is out of range.
    pub(crate) fn insert_edge(&mut self, e: Edge) -> bool {
        if e.u as usize >= self.num_vertices || e.v as usize >= self.num_vertices {
            return false;
        }
        let e = canonical(self.directed, e);
        match self.edges.binary_search_by_key(&e.key(), Edge::key) {
            Ok(_) => false,
            Err(pos) => {
                self.edges.insert(pos, e);
                true
            }
        }
    }

    pub(crate) fn remove_edge_at(&mut self, idx: usize) -> Edge {
        self.edges.remove(idx)
    }

    pub(crate) fn set_weight_at(&mut self, idx: usize, w: i64) {
        self.edges[idx].w = w;
    }

    pub(crate) fn add_vertex(&mut self) -> VertexId {
        self.num_vertices += 1;
        (self.num_vertices - 1) as VertexId
    }

    /// Keeps only the vertices for which `keep` is true, relabelling the
    /// survivors densely in ascending order. Edges touching a dropped vertex
    /// are removed; `keep_edge` may reject further edges after relabelling.
    pub(crate) fn retain_vertices(
        &mut self,
        keep: &[bool],
        mut keep_edge: impl FnMut(&Edge) -> bool,
    ) {
        debug_assert_eq!(keep.len(), self.num_vertices);
        let mut remap = vec![u32::MAX; self.num_vertices];
        let mut next = 0u32;
        for (v, &k) in keep.iter().enumerate() {
            if k {
                remap[v] = next;
                next += 1;
            }
        }
        let directed = self.directed;
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| keep[e.u as usize] && keep[e.v as usize])
            .map(|e| canonical(directed, Edge::new(remap[e.u as usize], remap[e.v as usize], e.w)))
            .filter(|e| keep_edge(e))
            .collect();
        // Relabelling is monotone, so the order survives; sort anyway to keep
        // the invariant independent of that argument.
        edges.sort_unstable_by_key(Edge::key);
        self.num_vertices = next as usize;
        self.edges = edges;
    }
}

fn canonical(directed: bool, e: Edge) -> Edge {
    if !directed && e.u > e.v {
        Edge::new(e.v, e.u, e.w)
    } else {
        e
    }
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

/// Canonical text encoding: `D N M` / `U N M`, then one `u v w` line per
/// edge, every line newline-terminated.
pub fn serialize(g: &Graph) -> String {
    use std::fmt::Write;
    let mut s = String::with_capacity(16 + 12 * g.edges.len());
    let tag = if g.directed { 'D' } else { 'U' };
    let _ = writeln!(s, "{tag} {} {}", g.num_vertices, g.edges.len());
    for e in &g.edges {
        let _ = writeln!(s, "{} {} {}", e.u, e.v, e.w);
    }
    s
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("malformed header")]
    MalformedHeader,
    #[error("malformed edge line")]
    MalformedEdge,
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: u64, n: usize },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: VertexId, v: VertexId },
    #[error("header declares {declared} edges, body has {found}")]
    CountMismatch { declared: usize, found: usize },
}

pub fn parse(text: &str) -> Result<Graph, ParseError> {
    let err = |line, kind| ParseError { line, kind };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or(err(1, ParseErrorKind::MalformedHeader))?;
    let hline = hline + 1;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let (directed, n, m) = match parts.as_slice() {
        [tag, n, m] => {
            let directed = match *tag {
                "D" => true,
                "U" => false,
                _ => return Err(err(hline, ParseErrorKind::MalformedHeader)),
            };
            let n: usize = n.parse().map_err(|_| err(hline, ParseErrorKind::MalformedHeader))?;
            let m: usize = m.parse().map_err(|_| err(hline, ParseErrorKind::MalformedHeader))?;
            (directed, n, m)
        }
        _ => return Err(err(hline, ParseErrorKind::MalformedHeader)),
    };

    let mut g = Graph::new(directed, n);
    let mut found = 0usize;
    let mut last_line = hline;
    for (idx, line) in lines {
        let lineno = idx + 1;
        last_line = lineno;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [u, v, w] = fields.as_slice() else {
            return Err(err(lineno, ParseErrorKind::MalformedEdge));
        };
        let u: u64 = u.parse().map_err(|_| err(lineno, ParseErrorKind::MalformedEdge))?;
        let v: u64 = v.parse().map_err(|_| err(lineno, ParseErrorKind::MalformedEdge))?;
        let w: i64 = w.parse().map_err(|_| err(lineno, ParseErrorKind::MalformedEdge))?;
        for vertex in [u, v] {
            if vertex >= n as u64 {
                return Err(err(lineno, ParseErrorKind::VertexOutOfRange { vertex, n }));
            }
        }
        let (u, v) = (u as VertexId, v as VertexId);
        if !g.insert_edge(Edge::new(u, v, w)) {
            return Err(err(lineno, ParseErrorKind::DuplicateEdge { u, v }));
        }
        found += 1;
    }
    if found != m {
        return Err(err(last_line, ParseErrorKind::CountMismatch { declared: m, found }));
    }
    Ok(g)
}

// ---------------------------------------------------------------------------
// Profiles
// ---------------------------------------------------------------------------

pub const DEFAULT_MAX_VERTICES: usize = 64;
pub const DEFAULT_MAX_EDGES: usize = 512;

/// Validity constraints a problem imposes on its input graphs. Bipartite
/// profiles partition vertices by id parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphProfile {
    pub directed: bool,
    pub weighted: bool,
    pub weight_min: i64,
    pub weight_max: i64,
    pub allow_self_loops: bool,
    pub require_bipartite: bool,
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl GraphProfile {
    pub fn unweighted(directed: bool) -> Self {
        Self {
            directed,
            weighted: false,
            weight_min: 1,
            weight_max: 1,
            allow_self_loops: false,
            require_bipartite: false,
            max_vertices: DEFAULT_MAX_VERTICES,
            max_edges: DEFAULT_MAX_EDGES,
        }
    }

    pub fn weighted(directed: bool, weight_min: i64, weight_max: i64) -> Self {
        Self {
            weighted: true,
            weight_min,
            weight_max,
            ..Self::unweighted(directed)
        }
    }

    pub fn with_self_loops(mut self) -> Self {
        self.allow_self_loops = true;
        self
    }

    pub fn bipartite(mut self) -> Self {
        self.require_bipartite = true;
        self
    }

    pub fn with_caps(mut self, max_vertices: usize, max_edges: usize) -> Self {
        self.max_vertices = max_vertices;
        self.max_edges = max_edges;
        self
    }

    pub(crate) fn weight_bounds(&self) -> (i64, i64) {
        if self.weighted {
            (self.weight_min, self.weight_max)
        } else {
            (1, 1)
        }
    }

    /// Whether an edge between `u` and `v` may exist under this profile
    /// (ignoring whether it already does).
    pub fn pair_allowed(&self, u: VertexId, v: VertexId) -> bool {
        if u == v {
            return self.allow_self_loops && !self.require_bipartite;
        }
        !self.require_bipartite || (u % 2) != (v % 2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Directedness { graph_directed: bool },
    TooManyVertices { n: usize, max: usize },
    TooManyEdges { m: usize, max: usize },
    WeightRange { edge: Edge, min: i64, max: i64 },
    SelfLoop { edge: Edge },
    Bipartite { edge: Edge },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Directedness { graph_directed } => {
                write!(f, "directedness: graph directed={graph_directed}")
            }
            Violation::TooManyVertices { n, max } => write!(f, "vertex cap: {n} > {max}"),
            Violation::TooManyEdges { m, max } => write!(f, "edge cap: {m} > {max}"),
            Violation::WeightRange { edge, min, max } => write!(
                f,
                "weight range: edge ({}, {}) has weight {} outside [{min}, {max}]",
                edge.u, edge.v, edge.w
            ),
            Violation::SelfLoop { edge } => write!(f, "self-loop at vertex {}", edge.u),
            Violation::Bipartite { edge } => {
                write!(f, "bipartite: edge ({}, {}) joins same-parity vertices", edge.u, edge.v)
            }
        }
    }
}

/// Lists every profile constraint `g` breaks; empty means valid.
pub fn validate(g: &Graph, p: &GraphProfile) -> Vec<Violation> {
    let mut out = Vec::new();
    if g.directed != p.directed {
        out.push(Violation::Directedness {
            graph_directed: g.directed,
        });
    }
    if g.num_vertices > p.max_vertices {
        out.push(Violation::TooManyVertices {
            n: g.num_vertices,
            max: p.max_vertices,
        });
    }
    if g.edges.len() > p.max_edges {
        out.push(Violation::TooManyEdges {
            m: g.edges.len(),
            max: p.max_edges,
        });
    }
    let (lo, hi) = p.weight_bounds();
    for &edge in &g.edges {
        if edge.w < lo || edge.w > hi {
            out.push(Violation::WeightRange { edge, min: lo, max: hi });
        }
        if edge.is_loop() {
            if !p.allow_self_loops {
                out.push(Violation::SelfLoop { edge });
            }
            if p.require_bipartite {
                out.push(Violation::Bipartite { edge });
            }
        } else if p.require_bipartite && edge.u % 2 == edge.v % 2 {
            out.push(Violation::Bipartite { edge });
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Endpoints
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EndpointPair {
    pub s: VertexId,
    pub t: VertexId,
}

/// Source = highest-degree vertex, target = highest-degree among the rest;
/// ties go to the lowest id.
pub fn derive_endpoints(g: &Graph) -> Result<EndpointPair, GraphError> {
    let n = g.num_vertices;
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    if n == 1 {
        return Ok(EndpointPair { s: 0, t: 0 });
    }
    let deg = g.degrees();
    let argmax = |skip: Option<usize>| {
        let mut best: Option<usize> = None;
        for v in 0..n {
            if Some(v) == skip {
                continue;
            }
            if best.is_none_or(|b| deg[v] > deg[b]) {
                best = Some(v);
            }
        }
        best.expect("n >= 2")
    };
    let s = argmax(None);
    let t = argmax(Some(s));
    Ok(EndpointPair {
        s: s as VertexId,
        t: t as VertexId,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serialize_examples() {
        assert_eq!(serialize(&Graph::single_vertex(false)), "U 1 0\n");
        let g = Graph::from_edges(true, 2, [Edge::new(1, 0, 4), Edge::new(0, 1, 3)]).unwrap();
        assert_eq!(serialize(&g), "D 2 2\n0 1 3\n1 0 4\n");
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse("U 1 0\n").unwrap(), Graph::single_vertex(false));
        let e = parse("U 2 1\n0 5 1\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(matches!(e.kind, ParseErrorKind::VertexOutOfRange { vertex: 5, n: 2 }));
        let e = parse("D 2 2\n0 1 3\n0 1 4\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(matches!(e.kind, ParseErrorKind::DuplicateEdge { u: 0, v: 1 }));
    }

    #[test]
    fn parse_rejects_bad_headers_and_counts() {
        assert_eq!(parse("").unwrap_err().kind, ParseErrorKind::MalformedHeader);
        assert_eq!(parse("X 1 0\n").unwrap_err().kind, ParseErrorKind::MalformedHeader);
        assert_eq!(parse("U -1 0\n").unwrap_err().kind, ParseErrorKind::MalformedHeader);
        assert!(matches!(
            parse("U 3 2\n0 1 1\n").unwrap_err().kind,
            ParseErrorKind::CountMismatch { declared: 2, found: 1 }
        ));
        assert_eq!(parse("U 3 1\n0 1\n").unwrap_err().kind, ParseErrorKind::MalformedEdge);
    }

    #[test]
    fn undirected_reverse_duplicate_is_rejected() {
        let e = parse("U 2 2\n0 1 1\n1 0 1\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::DuplicateEdge { .. }));
    }

    #[test]
    fn validate_examples() {
        let p = GraphProfile::weighted(true, 0, 10);
        assert!(validate(&Graph::single_vertex(true), &p).is_empty());

        let g = Graph::from_edges(true, 2, [Edge::new(0, 1, -3)]).unwrap();
        let v = validate(&g, &p);
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::WeightRange { .. }));

        let bp = GraphProfile::unweighted(false).bipartite();
        let g = Graph::from_edges(false, 3, [Edge::new(0, 2, 1)]).unwrap();
        let v = validate(&g, &bp);
        assert_eq!(v, vec![Violation::Bipartite { edge: Edge::new(0, 2, 1) }]);
    }

    #[test]
    fn validate_caps_and_loops() {
        let p = GraphProfile::unweighted(false).with_caps(2, 1);
        let g = Graph::from_edges(false, 3, [Edge::new(0, 0, 1), Edge::new(0, 1, 1)]).unwrap();
        let v = validate(&g, &p);
        assert!(v.contains(&Violation::TooManyVertices { n: 3, max: 2 }));
        assert!(v.contains(&Violation::TooManyEdges { m: 2, max: 1 }));
        assert!(v.contains(&Violation::SelfLoop { edge: Edge::new(0, 0, 1) }));
        assert!(validate(&g, &GraphProfile::unweighted(true))
            .contains(&Violation::Directedness { graph_directed: false }));
    }

    #[test]
    fn endpoint_examples() {
        assert_eq!(
            derive_endpoints(&Graph::single_vertex(false)).unwrap(),
            EndpointPair { s: 0, t: 0 }
        );
        let path = Graph::from_edges(false, 3, [Edge::new(0, 1, 1), Edge::new(1, 2, 1)]).unwrap();
        assert_eq!(derive_endpoints(&path).unwrap(), EndpointPair { s: 1, t: 0 });
        assert_eq!(derive_endpoints(&Graph::new(false, 0)), Err(GraphError::EmptyGraph));
    }

    #[test]
    fn self_loop_counts_twice() {
        let g = Graph::from_edges(false, 3, [Edge::new(2, 2, 1), Edge::new(0, 1, 1)]).unwrap();
        assert_eq!(g.degrees(), vec![1, 1, 2]);
        assert_eq!(derive_endpoints(&g).unwrap(), EndpointPair { s: 2, t: 0 });
    }

    #[test]
    fn directed_degree_is_in_plus_out() {
        let g = Graph::from_edges(true, 3, [Edge::new(0, 2, 1), Edge::new(1, 2, 1)]).unwrap();
        assert_eq!(g.degrees(), vec![1, 1, 2]);
    }
}

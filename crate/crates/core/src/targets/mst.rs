//! Minimum spanning forest: Prim, Kruskal, Borůvka.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::{Edge, Graph};

use super::{ExecCtx, ImplId, TargetInput, TargetOutput};

/// A spanning forest. `nodes` counts every vertex of the input, isolated
/// ones included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MstOut {
    pub edges: Vec<Edge>,
    pub total_weight: i64,
    pub nodes: usize,
}

impl MstOut {
    fn from_edges(n: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        let total_weight = edges.iter().map(|e| e.w).sum();
        Self {
            edges,
            total_weight,
            nodes: n,
        }
    }
}

/// Checks that `m` is a spanning forest of `g`: its edges exist with their
/// weights, contain no cycle, and number `N - (connected components)`.
/// Minimality is not checked.
pub fn check_forest(g: &Graph, m: &MstOut) -> Result<(), String> {
    let n = g.num_vertices();
    if m.nodes != n {
        return Err(format!("node count {} for {n} vertices", m.nodes));
    }
    let mut forest = Dsu::new(n);
    let mut total = 0;
    for e in &m.edges {
        match g.find_edge(e.u, e.v) {
            Some(i) if g.edges()[i].w == e.w => {}
            _ => return Err(format!("({}, {}, {}) is not an edge", e.u, e.v, e.w)),
        }
        if !forest.union(e.u as usize, e.v as usize) {
            return Err(format!("edge ({}, {}) closes a cycle", e.u, e.v));
        }
        total += e.w;
    }
    if total != m.total_weight {
        return Err(format!("edge weights sum to {total}, reported {}", m.total_weight));
    }
    let mut whole = Dsu::new(n);
    let components = n - g.edges().iter().filter(|e| whole.union(e.u as usize, e.v as usize)).count();
    if m.edges.len() != n - components {
        return Err(format!(
            "{} edges for {} vertices in {components} components",
            m.edges.len(),
            n
        ));
    }
    Ok(())
}

/// Plain union-find used for checking; the Kruskal target keeps its own.
struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Lazy Prim, restarted from every vertex not yet in the forest.
pub(super) fn prim(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    const P: u16 = ImplId::Prim.probe_base();
    let g = &input.graph;
    let n = g.num_vertices();
    let adj = g.adjacency();
    let mut in_tree = vec![false; n];
    let mut chosen = Vec::new();
    let mut heap = BinaryHeap::new();
    for root in 0..n {
        if in_tree[root] {
            ctx.probe(P);
            continue;
        }
        ctx.probe(P + 1);
        in_tree[root] = true;
        for &(v, w) in &adj[root] {
            heap.push(Reverse((w, root, v as usize)));
        }
        while let Some(Reverse((w, u, v))) = heap.pop() {
            ctx.tick();
            if in_tree[v] {
                ctx.probe(P + 2);
                continue;
            }
            ctx.probe(P + 3);
            in_tree[v] = true;
            chosen.push(Edge::new(u.min(v) as u32, u.max(v) as u32, w));
            for &(x, wx) in &adj[v] {
                if !in_tree[x as usize] {
                    ctx.probe(P + 4);
                    heap.push(Reverse((wx, v, x as usize)));
                }
            }
        }
    }
    TargetOutput::Mst(MstOut::from_edges(n, chosen))
}

pub(super) fn kruskal(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    kruskal_with(input, ctx, false)
}

/// Kruskal with union by rank and path halving.
///
/// `tie_links_endpoint` re-creates a rank-tie bug: when both roots have the
/// same rank (of at least [`TIE_BUG_MIN_RANK`]), the code links the edge's
/// raw endpoint instead of its root, splitting a set in two.
pub(crate) fn kruskal_with(input: &TargetInput, ctx: &mut ExecCtx<'_>, tie_links_endpoint: bool) -> TargetOutput {
    const P: u16 = ImplId::Kruskal.probe_base();
    let g = &input.graph;
    let n = g.num_vertices();
    let mut order: Vec<Edge> = g.edges().to_vec();
    order.sort_by_key(|e| (e.w, e.u, e.v));
    let mut parent: Vec<usize> = (0..n).collect();
    let mut rank = vec![0u32; n];
    let find = |parent: &mut Vec<usize>, mut x: usize| {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    };
    let mut chosen = Vec::new();
    for e in order {
        ctx.tick();
        if e.is_loop() {
            ctx.probe(P);
            continue;
        }
        let (x, y) = (e.u as usize, e.v as usize);
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx == ry {
            ctx.probe(P + 1);
            continue;
        }
        if rank[rx] < rank[ry] {
            ctx.probe(P + 2);
            parent[rx] = ry;
        } else if rank[rx] > rank[ry] {
            ctx.probe(P + 3);
            parent[ry] = rx;
        } else {
            ctx.probe(P + 4);
            if tie_links_endpoint && rank[rx] >= TIE_BUG_MIN_RANK {
                parent[y] = rx;
            } else {
                parent[ry] = rx;
            }
            rank[rx] += 1;
        }
        chosen.push(e);
        if chosen.len() + 1 == n {
            ctx.probe(P + 5);
            break;
        }
    }
    TargetOutput::Mst(MstOut::from_edges(n, chosen))
}

pub(crate) const TIE_BUG_MIN_RANK: u32 = 2;

/// Borůvka: every round, each component adds its cheapest outgoing edge
/// (ties broken by edge index, which keeps the choice acyclic).
pub(super) fn boruvka(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    const P: u16 = ImplId::Boruvka.probe_base();
    let g = &input.graph;
    let n = g.num_vertices();
    let edges = g.edges();
    let mut comp: Vec<usize> = (0..n).collect();
    let mut chosen_idx: Vec<usize> = Vec::new();
    loop {
        ctx.probe(P);
        ctx.tick();
        let mut cheapest: Vec<Option<usize>> = vec![None; n];
        for (i, e) in edges.iter().enumerate() {
            let (cu, cv) = (comp[e.u as usize], comp[e.v as usize]);
            if cu == cv {
                ctx.probe(P + 1);
                continue;
            }
            for c in [cu, cv] {
                let better = match cheapest[c] {
                    None => true,
                    Some(j) => (e.w, i) < (edges[j].w, j),
                };
                if better {
                    ctx.probe(P + 2);
                    cheapest[c] = Some(i);
                }
            }
        }
        let mut added = false;
        for i in cheapest.into_iter().flatten() {
            if !chosen_idx.contains(&i) {
                chosen_idx.push(i);
                added = true;
            }
        }
        if !added {
            ctx.probe(P + 3);
            break;
        }
        // Relabel components by flooding over the chosen edges.
        let mut adj = vec![Vec::new(); n];
        for &i in &chosen_idx {
            let e = edges[i];
            adj[e.u as usize].push(e.v as usize);
            adj[e.v as usize].push(e.u as usize);
        }
        let mut label = vec![usize::MAX; n];
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = start;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                ctx.probe(P + 4);
                for &v in &adj[u] {
                    if label[v] == usize::MAX {
                        label[v] = start;
                        stack.push(v);
                    }
                }
            }
        }
        comp = label;
    }
    let chosen = chosen_idx.into_iter().map(|i| edges[i]).collect();
    TargetOutput::Mst(MstOut::from_edges(n, chosen))
}

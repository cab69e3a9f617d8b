//! Exhaustive ground truth for small graphs, written without reference to
//! the fast implementations.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{Edge, Graph, VertexId};
use crate::targets::mst::MstOut;

use super::{all_pairs, PairScore, ProblemId, SpfOut, TargetInput, TargetOutput};

pub const ORACLE_MAX_VERTICES: usize = 8;
pub const ORACLE_MAX_EDGES: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("graph with {vertices} vertices and {edges} edges is too large for exhaustive search")]
pub struct OracleTooLarge {
    pub vertices: usize,
    pub edges: usize,
}

pub fn brute_force_oracle(problem: ProblemId, input: &TargetInput) -> Result<TargetOutput, OracleTooLarge> {
    let g = &input.graph;
    if g.num_vertices() > ORACLE_MAX_VERTICES || g.num_edges() > ORACLE_MAX_EDGES {
        return Err(OracleTooLarge {
            vertices: g.num_vertices(),
            edges: g.num_edges(),
        });
    }
    let (s, t) = (input.endpoints.s as usize, input.endpoints.t as usize);
    Ok(match problem {
        ProblemId::Spf => TargetOutput::Spf(spf(g, s, t)),
        ProblemId::Mst => TargetOutput::Mst(mst(g)),
        ProblemId::Scc => TargetOutput::Scc(scc(g)),
        ProblemId::Bcc => TargetOutput::Bcc(bcc(g)),
        ProblemId::Hc => TargetOutput::Hc(hc(g)),
        ProblemId::Js => TargetOutput::Js(jaccard(g)),
        ProblemId::Mm => TargetOutput::Mm(matching(g)),
        ProblemId::Aa => TargetOutput::Aa(adamic_adar(g)),
        ProblemId::Mfv => TargetOutput::Mfv(min_cut(g, s, t)),
    })
}

/// Every simple cycle as a vertex sequence starting at its smallest vertex.
/// Undirected cycles need at least three vertices (self-loops aside) and
/// are reported once per direction.
pub fn simple_cycles(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.num_vertices();
    let mut succ = vec![Vec::new(); n];
    for e in g.edges() {
        succ[e.u as usize].push(e.v as usize);
        if !g.directed() && !e.is_loop() {
            succ[e.v as usize].push(e.u as usize);
        }
    }
    let min_len = if g.directed() { 1 } else { 3 };
    let mut cycles = Vec::new();
    for start in 0..n {
        let mut path = vec![start];
        let mut on_path = vec![false; n];
        on_path[start] = true;
        extend_cycles(&succ, start, &mut path, &mut on_path, min_len, &mut cycles);
        // Self-loops count as length-one cycles in both directions.
        if !g.directed() && g.has_edge(start as VertexId, start as VertexId) {
            cycles.push(vec![start]);
        }
    }
    cycles
}

fn extend_cycles(
    succ: &[Vec<usize>],
    start: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    min_len: usize,
    out: &mut Vec<Vec<usize>>,
) {
    let u = *path.last().expect("path starts non-empty");
    for &v in &succ[u] {
        if v == start && path.len() >= min_len {
            out.push(path.clone());
        } else if v > start && !on_path[v] {
            on_path[v] = true;
            path.push(v);
            extend_cycles(succ, start, path, on_path, min_len, out);
            path.pop();
            on_path[v] = false;
        }
    }
}

/// Weight of the arc `u -> v` (or edge `{u, v}`).
fn weight(g: &Graph, u: usize, v: usize) -> i64 {
    let i = g.find_edge(u as VertexId, v as VertexId).expect("cycle follows edges");
    g.edges()[i].w
}

fn cycle_weight(g: &Graph, c: &[usize]) -> i64 {
    (0..c.len()).map(|i| weight(g, c[i], c[(i + 1) % c.len()])).sum()
}

fn reachable_from(g: &Graph, s: usize) -> Vec<bool> {
    let n = g.num_vertices();
    let mut seen = vec![false; n];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for e in g.edges() {
            let (a, b) = (e.u as usize, e.v as usize);
            let next = if a == u {
                Some(b)
            } else if !g.directed() && b == u {
                Some(a)
            } else {
                None
            };
            if let Some(v) = next {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    seen
}

fn spf(g: &Graph, s: usize, t: usize) -> SpfOut {
    let reach = reachable_from(g, s);
    let negative = simple_cycles(g)
        .iter()
        .any(|c| reach[c[0]] && cycle_weight(g, c) < 0);
    if negative {
        return SpfOut::NegativeCycle;
    }
    let n = g.num_vertices();
    let mut best: Option<i64> = None;
    let mut path = vec![s];
    let mut on_path = vec![false; n];
    on_path[s] = true;
    simple_paths(g, t, &mut path, &mut on_path, 0, &mut best);
    best.map_or(SpfOut::Unreachable, SpfOut::Length)
}

fn simple_paths(g: &Graph, t: usize, path: &mut Vec<usize>, on_path: &mut [bool], len: i64, best: &mut Option<i64>) {
    let u = *path.last().expect("non-empty");
    if u == t {
        *best = Some(best.map_or(len, |b| b.min(len)));
        return;
    }
    for e in g.edges().iter().filter(|e| e.u as usize == u) {
        let v = e.v as usize;
        if !on_path[v] {
            on_path[v] = true;
            path.push(v);
            simple_paths(g, t, path, on_path, len + e.w, best);
            path.pop();
            on_path[v] = false;
        }
    }
}

/// Components of the undirected view, via repeated reachability.
fn components(g: &Graph) -> usize {
    let n = g.num_vertices();
    let mut assigned = vec![false; n];
    let mut count = 0;
    for v in 0..n {
        if assigned[v] {
            continue;
        }
        count += 1;
        for (u, r) in reachable_from(g, v).into_iter().enumerate() {
            assigned[u] |= r;
        }
    }
    count
}

fn is_acyclic(n: usize, edges: &[Edge]) -> bool {
    let h = Graph::from_edges(false, n, edges.iter().copied()).expect("subset of a valid graph");
    simple_cycles(&h).is_empty() && edges.iter().all(|e| !e.is_loop())
}

fn mst(g: &Graph) -> MstOut {
    let n = g.num_vertices();
    let m = g.num_edges();
    let want = n - components(g);
    let mut best: Option<(i64, Vec<Edge>)> = None;
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != want {
            continue;
        }
        let subset: Vec<Edge> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| g.edges()[i]).collect();
        let w: i64 = subset.iter().map(|e| e.w).sum();
        if best.as_ref().is_some_and(|(bw, _)| *bw <= w) {
            continue;
        }
        if is_acyclic(n, &subset) {
            best = Some((w, subset));
        }
    }
    let (total_weight, edges) = best.expect("a spanning forest always exists");
    MstOut {
        edges,
        total_weight,
        nodes: n,
    }
}

fn scc(g: &Graph) -> Vec<Vec<VertexId>> {
    let n = g.num_vertices();
    let reach: Vec<Vec<bool>> = (0..n).map(|v| reachable_from(g, v)).collect();
    let mut placed = vec![false; n];
    let mut out = Vec::new();
    for v in 0..n {
        if placed[v] {
            continue;
        }
        let comp: Vec<VertexId> = (0..n)
            .filter(|&u| reach[v][u] && reach[u][v])
            .map(|u| u as VertexId)
            .collect();
        for &u in &comp {
            placed[u as usize] = true;
        }
        out.push(comp);
    }
    out
}

fn bcc(g: &Graph) -> Vec<Vec<VertexId>> {
    let edges: Vec<Edge> = g.edges().iter().filter(|e| !e.is_loop()).copied().collect();
    let m = edges.len();
    let index = |u: usize, v: usize| {
        edges
            .iter()
            .position(|e| (e.u as usize, e.v as usize) == (u.min(v), u.max(v)))
            .expect("cycle follows edges")
    };
    // Edge classes start as singletons; every simple cycle merges its edges.
    let mut class: Vec<usize> = (0..m).collect();
    for c in simple_cycles(g).iter().filter(|c| c.len() >= 3) {
        let ids: Vec<usize> = (0..c.len()).map(|i| index(c[i], c[(i + 1) % c.len()])).collect();
        let target = class[ids[0]];
        let merged: Vec<usize> = ids.iter().map(|&i| class[i]).collect();
        for k in class.iter_mut() {
            if merged.contains(k) {
                *k = target;
            }
        }
    }
    let labels: BTreeSet<usize> = class.iter().copied().collect();
    labels
        .into_iter()
        .map(|l| {
            let vs: BTreeSet<VertexId> = (0..m).filter(|&i| class[i] == l).flat_map(|i| [edges[i].u, edges[i].v]).collect();
            vs.into_iter().collect()
        })
        .collect()
}

fn hc(g: &Graph) -> Vec<f64> {
    let n = g.num_vertices();
    (0..n)
        .map(|v| {
            let mut dist = vec![None; n];
            dist[v] = Some(0usize);
            let mut frontier = vec![v];
            let mut d = 0;
            while !frontier.is_empty() {
                d += 1;
                let mut next = Vec::new();
                for &u in &frontier {
                    for e in g.edges() {
                        let (a, b) = (e.u as usize, e.v as usize);
                        for (x, y) in [(a, b), (b, a)] {
                            if x == u && dist[y].is_none() {
                                dist[y] = Some(d);
                                next.push(y);
                            }
                        }
                    }
                }
                frontier = next;
            }
            (0..n)
                .filter(|&u| u != v)
                .filter_map(|u| dist[u])
                .map(|d| 1.0 / d as f64)
                .sum()
        })
        .collect()
}

fn neighbourhoods(g: &Graph) -> Vec<BTreeSet<usize>> {
    let mut nb = vec![BTreeSet::new(); g.num_vertices()];
    for e in g.edges() {
        nb[e.u as usize].insert(e.v as usize);
        nb[e.v as usize].insert(e.u as usize);
    }
    nb
}

fn jaccard(g: &Graph) -> Vec<PairScore> {
    let nb = neighbourhoods(g);
    all_pairs(g.num_vertices())
        .map(|(u, v)| {
            let (a, b) = (&nb[u as usize], &nb[v as usize]);
            let inter = a.intersection(b).count();
            let union = a.union(b).count();
            let score = if union == 0 { 0.0 } else { inter as f64 / union as f64 };
            PairScore { u, v, score }
        })
        .collect()
}

fn adamic_adar(g: &Graph) -> Vec<PairScore> {
    let nb = neighbourhoods(g);
    let mut deg = vec![0usize; g.num_vertices()];
    for e in g.edges() {
        deg[e.u as usize] += 1;
        deg[e.v as usize] += 1;
    }
    all_pairs(g.num_vertices())
        .map(|(u, v)| {
            let score = nb[u as usize]
                .intersection(&nb[v as usize])
                .filter(|&&w| deg[w] > 1)
                .map(|&w| 1.0 / (deg[w] as f64).ln())
                .sum();
            PairScore { u, v, score }
        })
        .collect()
}

fn matching(g: &Graph) -> Vec<(VertexId, VertexId)> {
    let edges: Vec<Edge> = g.edges().iter().filter(|e| e.u % 2 != e.v % 2).copied().collect();
    let mut best: Vec<(VertexId, VertexId)> = Vec::new();
    for mask in 0u32..(1 << edges.len()) {
        if mask.count_ones() as usize <= best.len() {
            continue;
        }
        let chosen: Vec<&Edge> = (0..edges.len()).filter(|i| mask >> i & 1 == 1).map(|i| &edges[i]).collect();
        let mut ends: Vec<VertexId> = chosen.iter().flat_map(|e| [e.u, e.v]).collect();
        ends.sort_unstable();
        ends.dedup();
        if ends.len() == 2 * chosen.len() {
            best = chosen.iter().map(|e| (e.u, e.v)).collect();
        }
    }
    best
}

fn min_cut(g: &Graph, s: usize, t: usize) -> i64 {
    if s == t {
        return 0;
    }
    let n = g.num_vertices();
    let others: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut best = i64::MAX;
    for mask in 0u32..(1 << others.len()) {
        let mut source_side = vec![false; n];
        source_side[s] = true;
        for (i, &v) in others.iter().enumerate() {
            source_side[v] = mask >> i & 1 == 1;
        }
        let cut = g
            .edges()
            .iter()
            .filter(|e| source_side[e.u as usize] && !source_side[e.v as usize])
            .map(|e| e.w)
            .sum();
        best = best.min(cut);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(directed: bool, n: usize, edges: &[(u32, u32, i64)]) -> TargetInput {
        TargetInput::new(Graph::from_edges(directed, n, edges.iter().map(|&(u, v, w)| Edge::new(u, v, w))).unwrap()).unwrap()
    }

    #[test]
    fn spf_zero_cycle_and_negative_cycle() {
        let mut i = input(true, 2, &[(0, 1, 1), (1, 0, -1)]);
        i.endpoints = crate::graph::EndpointPair { s: 0, t: 1 };
        assert_eq!(brute_force_oracle(ProblemId::Spf, &i), Ok(TargetOutput::Spf(SpfOut::Length(1))));
        let mut i = input(true, 2, &[(0, 1, 1), (1, 0, -2)]);
        i.endpoints = crate::graph::EndpointPair { s: 0, t: 1 };
        assert_eq!(brute_force_oracle(ProblemId::Spf, &i), Ok(TargetOutput::Spf(SpfOut::NegativeCycle)));
    }

    #[test]
    fn mfv_single_edge() {
        let mut i = input(true, 2, &[(0, 1, 5)]);
        i.endpoints = crate::graph::EndpointPair { s: 0, t: 1 };
        assert_eq!(brute_force_oracle(ProblemId::Mfv, &i), Ok(TargetOutput::Mfv(5)));
    }

    #[test]
    fn bcc_triangle_with_bridge() {
        let i = input(false, 4, &[(0, 1, 1), (1, 2, 1), (0, 2, 1), (2, 3, 1)]);
        let TargetOutput::Bcc(b) = brute_force_oracle(ProblemId::Bcc, &i).unwrap() else {
            unreachable!()
        };
        assert_eq!(super::super::canonical_sets(&b), vec![vec![0, 1, 2], vec![2, 3]]);
    }

    #[test]
    fn too_large_is_rejected() {
        let i = TargetInput::new(Graph::new(false, 9)).unwrap();
        assert!(brute_force_oracle(ProblemId::Hc, &i).is_err());
    }

    #[test]
    fn undirected_cycles_need_three_vertices() {
        let g = Graph::from_edges(false, 2, [Edge::new(0, 1, 1)]).unwrap();
        assert!(simple_cycles(&g).is_empty());
    }
}

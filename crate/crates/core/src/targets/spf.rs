//! Single-pair shortest path: Bellman-Ford, Goldberg-Radzik, Dijkstra.
//!
//! All three report `NegativeCycle` iff a negative-weight cycle is reachable
//! from the source, otherwise the s→t distance or `Unreachable`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{ExecCtx, ImplId, TargetInput, TargetOutput};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpfOut {
    Length(i64),
    Unreachable,
    NegativeCycle,
}

const INF: i64 = i64::MAX;

fn finish(dist: &[i64], t: usize) -> TargetOutput {
    TargetOutput::Spf(if dist[t] == INF {
        SpfOut::Unreachable
    } else {
        SpfOut::Length(dist[t])
    })
}

pub(super) fn bellman_ford(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    const P: u16 = ImplId::BellmanFord.probe_base();
    let g = &input.graph;
    let n = g.num_vertices();
    let (s, t) = (input.endpoints.s as usize, input.endpoints.t as usize);
    let mut dist = vec![INF; n];
    dist[s] = 0;
    ctx.probe(P);

    for _round in 1..n {
        ctx.probe(P + 1);
        ctx.tick();
        let mut changed = false;
        for e in g.edges() {
            ctx.probe(P + 2);
            let (u, v) = (e.u as usize, e.v as usize);
            if dist[u] == INF {
                ctx.probe(P + 3);
                continue;
            }
            if dist[u] + e.w < dist[v] {
                ctx.probe(P + 4);
                dist[v] = dist[u] + e.w;
                changed = true;
            }
        }
        if !changed {
            ctx.probe(P + 5);
            break;
        }
    }
    for e in g.edges() {
        let (u, v) = (e.u as usize, e.v as usize);
        if dist[u] != INF && dist[u] + e.w < dist[v] {
            ctx.probe(P + 6);
            return TargetOutput::Spf(SpfOut::NegativeCycle);
        }
    }
    ctx.probe(P + 7);
    finish(&dist, t)
}

pub(super) fn goldberg_radzik(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    goldberg_radzik_with(input, ctx, false)
}

/// Goldberg-Radzik: each pass topologically orders the admissible subgraph
/// (arcs with non-positive reduced cost) reachable from the vertices whose
/// label dropped, then relaxes in that order.
///
/// A cycle closed inside the admissible subgraph is a negative cycle only if
/// its weight is strictly negative; zero-weight cycles are legal and simply
/// skipped. `zero_cycle_is_negative` flips that test to `<= 0`.
pub(crate) fn goldberg_radzik_with(
    input: &TargetInput,
    ctx: &mut ExecCtx<'_>,
    zero_cycle_is_negative: bool,
) -> TargetOutput {
    const P: u16 = ImplId::GoldbergRadzik.probe_base();
    let g = &input.graph;
    let n = g.num_vertices();
    let (s, t) = (input.endpoints.s as usize, input.endpoints.t as usize);
    let adj = g.adjacency();
    let mut dist = vec![INF; n];
    dist[s] = 0;
    ctx.probe(P);

    let mut relabeled = vec![s];
    let mut in_relabeled = vec![false; n];
    let mut passes = 0usize;
    while !relabeled.is_empty() {
        ctx.probe(P + 1);
        passes += 1;
        // Without negative cycles every pass is at least one Bellman-Ford
        // round, so more than n passes means the labels never settle.
        if passes > n {
            ctx.probe(P + 2);
            return TargetOutput::Spf(SpfOut::NegativeCycle);
        }
        let order = match admissible_order(&adj, &mut dist, &relabeled, zero_cycle_is_negative, ctx) {
            Some(order) => order,
            None => {
                ctx.probe(P + 3);
                return TargetOutput::Spf(SpfOut::NegativeCycle);
            }
        };
        relabeled.clear();
        in_relabeled.iter_mut().for_each(|f| *f = false);
        for &u in &order {
            ctx.probe(P + 4);
            ctx.tick();
            let du = dist[u];
            for &(v, w) in &adj[u] {
                let v = v as usize;
                if du + w < dist[v] {
                    ctx.probe(P + 5);
                    dist[v] = du + w;
                    if !in_relabeled[v] {
                        in_relabeled[v] = true;
                        relabeled.push(v);
                    }
                }
            }
        }
    }
    ctx.probe(P + 6);
    finish(&dist, t)
}

const UNSEEN: u8 = 0;
const ON_STACK: u8 = 1;
const DONE: u8 = 2;

/// Depth-first search over admissible arcs from every root that still has an
/// improving arc, returning vertices in topological order. Returns `None`
/// when the search closes a negative cycle.
fn admissible_order(
    adj: &[Vec<(u32, i64)>],
    dist: &mut [i64],
    roots: &[usize],
    zero_cycle_is_negative: bool,
    ctx: &mut ExecCtx<'_>,
) -> Option<Vec<usize>> {
    const P: u16 = ImplId::GoldbergRadzik.probe_base() + 16;
    let n = adj.len();
    let mut state = vec![UNSEEN; n];
    // Path weight from the current DFS root, valid while on the stack.
    let mut depth = vec![0i64; n];
    let mut post = Vec::with_capacity(n);
    let mut stack: Vec<(usize, usize)> = Vec::new();

    for &root in roots {
        if state[root] != UNSEEN {
            ctx.probe(P);
            continue;
        }
        let dr = dist[root];
        if !adj[root].iter().any(|&(v, w)| dr + w < dist[v as usize]) {
            ctx.probe(P + 1);
            continue;
        }
        ctx.probe(P + 2);
        state[root] = ON_STACK;
        depth[root] = 0;
        stack.push((root, 0));
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            ctx.tick();
            if *next == adj[u].len() {
                ctx.probe(P + 3);
                state[u] = DONE;
                post.push(u);
                stack.pop();
                continue;
            }
            let (v, w) = adj[u][*next];
            *next += 1;
            let v = v as usize;
            let cand = dist[u] + w;
            if cand > dist[v] {
                ctx.probe(P + 4);
                continue;
            }
            if cand < dist[v] {
                ctx.probe(P + 5);
                dist[v] = cand;
            }
            match state[v] {
                UNSEEN => {
                    ctx.probe(P + 6);
                    state[v] = ON_STACK;
                    depth[v] = depth[u] + w;
                    stack.push((v, 0));
                }
                ON_STACK => {
                    let cycle = depth[u] + w - depth[v];
                    let negative = if zero_cycle_is_negative { cycle <= 0 } else { cycle < 0 };
                    if negative {
                        return None;
                    }
                    ctx.probe(P + 7);
                }
                _ => ctx.probe(P + 8),
            }
        }
    }
    post.reverse();
    Some(post)
}

/// Dijkstra with a binary heap; only meaningful for non-negative weights.
pub(super) fn dijkstra(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    const P: u16 = ImplId::Dijkstra.probe_base();
    let g = &input.graph;
    let n = g.num_vertices();
    let (s, t) = (input.endpoints.s as usize, input.endpoints.t as usize);
    let adj = g.adjacency();
    let mut dist = vec![INF; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = 0;
    heap.push(Reverse((0i64, s)));
    ctx.probe(P);
    while let Some(Reverse((d, u))) = heap.pop() {
        ctx.tick();
        if done[u] {
            ctx.probe(P + 1);
            continue;
        }
        ctx.probe(P + 2);
        done[u] = true;
        for &(v, w) in &adj[u] {
            let v = v as usize;
            if d + w < dist[v] {
                ctx.probe(P + 3);
                dist[v] = d + w;
                heap.push(Reverse((dist[v], v)));
            }
        }
    }
    finish(&dist, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, Graph};

    fn run(f: fn(&TargetInput, &mut ExecCtx<'_>) -> TargetOutput, g: Graph, s: u32, t: u32) -> SpfOut {
        let input = TargetInput {
            graph: g,
            endpoints: crate::graph::EndpointPair { s, t },
        };
        match f(&input, &mut ExecCtx::unbounded()) {
            TargetOutput::Spf(o) => o,
            other => panic!("{other:?}"),
        }
    }

    fn digraph(n: usize, edges: &[(u32, u32, i64)]) -> Graph {
        Graph::from_edges(true, n, edges.iter().map(|&(u, v, w)| Edge::new(u, v, w))).unwrap()
    }

    #[test]
    fn single_vertex_is_zero() {
        for f in [bellman_ford, goldberg_radzik, dijkstra] {
            assert_eq!(run(f, Graph::single_vertex(true), 0, 0), SpfOut::Length(0));
        }
    }

    #[test]
    fn zero_cycle_is_not_negative() {
        let g = digraph(2, &[(0, 1, 1), (1, 0, -1)]);
        assert_eq!(run(bellman_ford, g.clone(), 0, 1), SpfOut::Length(1));
        assert_eq!(run(goldberg_radzik, g, 0, 1), SpfOut::Length(1));
    }

    #[test]
    fn negative_cycle_detected() {
        let g = digraph(3, &[(0, 1, 1), (1, 2, -3), (2, 1, 1)]);
        assert_eq!(run(bellman_ford, g.clone(), 0, 2), SpfOut::NegativeCycle);
        assert_eq!(run(goldberg_radzik, g, 0, 2), SpfOut::NegativeCycle);
    }

    #[test]
    fn unreachable_negative_cycle_ignored() {
        let g = digraph(4, &[(0, 1, 5), (2, 3, -3), (3, 2, 1)]);
        assert_eq!(run(bellman_ford, g.clone(), 0, 1), SpfOut::Length(5));
        assert_eq!(run(goldberg_radzik, g, 0, 1), SpfOut::Length(5));
    }

    #[test]
    fn unreachable_target() {
        let g = digraph(3, &[(1, 0, 5)]);
        for f in [bellman_ford, goldberg_radzik, dijkstra] {
            assert_eq!(run(f, g.clone(), 0, 1), SpfOut::Unreachable);
        }
    }

    #[test]
    fn agree_on_a_small_dag() {
        let g = digraph(4, &[(0, 1, 4), (0, 2, 1), (2, 1, 2), (1, 3, 1), (2, 3, 7)]);
        for f in [bellman_ford, goldberg_radzik, dijkstra] {
            assert_eq!(run(f, g.clone(), 0, 3), SpfOut::Length(4));
        }
    }
}

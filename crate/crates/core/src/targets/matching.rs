//! Maximum bipartite matching under the parity partition: even vertices on
//! the left, odd on the right. Edges joining equal parities are ignored.

use std::collections::VecDeque;

use crate::graph::VertexId;

use super::{ExecCtx, ImplId, TargetInput, TargetOutput};

const FREE: usize = usize::MAX;

/// Left-to-right adjacency, indexed by vertex id (odd rows stay empty).
fn left_adjacency(input: &TargetInput) -> Vec<Vec<usize>> {
    let n = input.graph.num_vertices();
    let mut adj = vec![Vec::new(); n];
    for e in input.graph.edges() {
        let (u, v) = (e.u as usize, e.v as usize);
        if u % 2 == v % 2 {
            continue;
        }
        let (l, r) = if u % 2 == 0 { (u, v) } else { (v, u) };
        adj[l].push(r);
    }
    adj
}

fn pairs(mate: &[usize]) -> Vec<(VertexId, VertexId)> {
    mate.iter()
        .enumerate()
        .filter(|&(l, &r)| l % 2 == 0 && r != FREE)
        .map(|(l, &r)| (l.min(r) as VertexId, l.max(r) as VertexId))
        .collect()
}

pub(super) fn hopcroft_karp(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    const P: u16 = ImplId::HopcroftKarp.probe_base();
    let adj = left_adjacency(input);
    let n = adj.len();
    let mut mate = vec![FREE; n];
    let mut layer = vec![usize::MAX; n];
    loop {
        ctx.probe(P);
        // Layer the free left vertices and everything alternating from them.
        let mut queue = VecDeque::new();
        for l in (0..n).step_by(2) {
            if mate[l] == FREE {
                layer[l] = 0;
                queue.push_back(l);
            } else {
                layer[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            ctx.tick();
            for &r in &adj[l] {
                match mate[r] {
                    FREE => {
                        ctx.probe(P + 1);
                        found = true;
                    }
                    l2 if layer[l2] == usize::MAX => {
                        ctx.probe(P + 2);
                        layer[l2] = layer[l] + 1;
                        queue.push_back(l2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        let mut grew = false;
        for l in (0..n).step_by(2) {
            if mate[l] == FREE && augment(l, &adj, &mut mate, &mut layer, ctx) {
                ctx.probe(P + 3);
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    TargetOutput::Mm(pairs(&mate))
}

/// Layered DFS for one vertex-disjoint shortest augmenting path.
fn augment(l: usize, adj: &[Vec<usize>], mate: &mut [usize], layer: &mut [usize], ctx: &mut ExecCtx<'_>) -> bool {
    ctx.tick();
    for &r in &adj[l] {
        let next = mate[r];
        let ok = next == FREE || (layer[next] == layer[l] + 1 && augment(next, adj, mate, layer, ctx));
        if ok {
            mate[l] = r;
            mate[r] = l;
            return true;
        }
    }
    layer[l] = usize::MAX;
    false
}

/// Kuhn's algorithm: one augmenting-path search per left vertex.
pub(super) fn augmenting_path(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    const P: u16 = ImplId::AugmentingPath.probe_base();
    let adj = left_adjacency(input);
    let n = adj.len();
    let mut mate = vec![FREE; n];
    let mut visited = vec![false; n];
    for l in (0..n).step_by(2) {
        ctx.probe(P);
        visited.iter_mut().for_each(|v| *v = false);
        if kuhn(l, &adj, &mut mate, &mut visited, ctx) {
            ctx.probe(P + 1);
        }
    }
    TargetOutput::Mm(pairs(&mate))
}

fn kuhn(l: usize, adj: &[Vec<usize>], mate: &mut [usize], visited: &mut [bool], ctx: &mut ExecCtx<'_>) -> bool {
    ctx.tick();
    for &r in &adj[l] {
        if visited[r] {
            continue;
        }
        visited[r] = true;
        if mate[r] == FREE || kuhn(mate[r], adj, mate, visited, ctx) {
            mate[l] = r;
            mate[r] = l;
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, Graph};
    use crate::targets::check_matching;

    fn run(f: fn(&TargetInput, &mut ExecCtx<'_>) -> TargetOutput, n: usize, edges: &[(u32, u32)]) -> usize {
        let g = Graph::from_edges(false, n, edges.iter().map(|&(u, v)| Edge::new(u, v, 1))).unwrap();
        match f(&TargetInput::new(g.clone()).unwrap(), &mut ExecCtx::unbounded()) {
            TargetOutput::Mm(m) => {
                check_matching(&g, &m).unwrap();
                m.len()
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn needs_augmentation() {
        // Greedy 0-1 blocks 2; the maximum is {0-3, 2-1}.
        let edges = [(0, 1), (0, 3), (1, 2)];
        for f in [hopcroft_karp, augmenting_path] {
            assert_eq!(run(f, 4, &edges), 2);
        }
    }

    #[test]
    fn empty_and_star() {
        for f in [hopcroft_karp, augmenting_path] {
            assert_eq!(run(f, 1, &[]), 0);
            assert_eq!(run(f, 6, &[(0, 1), (0, 3), (0, 5)]), 1);
        }
    }
}

//! Biconnected components as edge-induced vertex sets. Isolated vertices
//! belong to no block; a bridge is a two-vertex block.

use crate::graph::VertexId;

use super::{ExecCtx, ImplId, TargetInput, TargetOutput};

const UNSET: usize = usize::MAX;

/// Hopcroft-Tarjan with an explicit edge stack.
pub(super) fn hopcroft_tarjan(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    const P: u16 = ImplId::HopcroftTarjan.probe_base();
    let g = &input.graph;
    let n = g.num_vertices();
    // Adjacency carrying edge ids so the tree edge back to the parent is
    // skipped by id rather than by endpoint.
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        if e.is_loop() {
            continue;
        }
        adj[e.u as usize].push((e.v as usize, i));
        adj[e.v as usize].push((e.u as usize, i));
    }
    let mut disc = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut blocks: Vec<Vec<VertexId>> = Vec::new();

    for root in 0..n {
        if disc[root] != UNSET {
            continue;
        }
        ctx.probe(P);
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, edge id used to enter it, next adjacency position)
        let mut calls = vec![(root, UNSET, 0usize)];
        while let Some(&mut (u, via, ref mut next)) = calls.last_mut() {
            ctx.tick();
            if let Some(&(v, id)) = adj[u].get(*next) {
                *next += 1;
                if id == via {
                    ctx.probe(P + 1);
                    continue;
                }
                if disc[v] == UNSET {
                    ctx.probe(P + 2);
                    edge_stack.push((u, v));
                    disc[v] = time;
                    low[v] = time;
                    time += 1;
                    calls.push((v, id, 0));
                } else if disc[v] < disc[u] {
                    ctx.probe(P + 3);
                    edge_stack.push((u, v));
                    low[u] = low[u].min(disc[v]);
                }
                continue;
            }
            calls.pop();
            let Some(&(parent, _, _)) = calls.last() else {
                continue;
            };
            low[parent] = low[parent].min(low[u]);
            if low[u] >= disc[parent] {
                ctx.probe(P + 4);
                let mut members = Vec::new();
                while let Some((a, b)) = edge_stack.pop() {
                    members.push(a as VertexId);
                    members.push(b as VertexId);
                    if (a, b) == (parent, u) {
                        break;
                    }
                }
                members.sort_unstable();
                members.dedup();
                if members.len() > 2 {
                    ctx.probe(P + 5);
                }
                blocks.push(members);
            }
        }
    }
    TargetOutput::Bcc(blocks)
}

/// Edges `(w, a)` and `(w, b)` share a block iff `a` and `b` stay connected
/// once `w` is deleted. Blocks are the classes of the closure of that
/// relation, found by deleting each vertex in turn.
pub(super) fn brute_blocks(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    const P: u16 = ImplId::BruteBlocks.probe_base();
    let g = &input.graph;
    let n = g.num_vertices();
    let edges: Vec<_> = g.edges().iter().filter(|e| !e.is_loop()).copied().collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        incident[e.u as usize].push(i);
        incident[e.v as usize].push(i);
    }
    let mut class: Vec<usize> = (0..edges.len()).collect();
    fn find(class: &mut [usize], mut x: usize) -> usize {
        while class[x] != x {
            class[x] = class[class[x]];
            x = class[x];
        }
        x
    }

    for w in 0..n {
        ctx.tick();
        if incident[w].len() < 2 {
            ctx.probe(P);
            continue;
        }
        ctx.probe(P + 1);
        let label = components_without(&edges, n, w, ctx);
        let other = |i: usize| {
            let e = edges[i];
            if e.u as usize == w {
                e.v as usize
            } else {
                e.u as usize
            }
        };
        let mut first_in: Vec<Option<usize>> = vec![None; n];
        for &i in &incident[w] {
            let c = label[other(i)];
            match first_in[c] {
                None => first_in[c] = Some(i),
                Some(j) => {
                    ctx.probe(P + 2);
                    let (a, b) = (find(&mut class, i), find(&mut class, j));
                    class[a] = b;
                }
            }
        }
    }

    let mut by_class: Vec<Vec<VertexId>> = vec![Vec::new(); edges.len()];
    for (i, e) in edges.iter().enumerate() {
        let c = find(&mut class, i);
        by_class[c].push(e.u);
        by_class[c].push(e.v);
    }
    let blocks = by_class
        .into_iter()
        .filter(|b| !b.is_empty())
        .map(|mut b| {
            b.sort_unstable();
            b.dedup();
            b
        })
        .collect();
    TargetOutput::Bcc(blocks)
}

/// Connected-component labels of the graph with vertex `w` deleted.
fn components_without(edges: &[crate::graph::Edge], n: usize, w: usize, ctx: &mut ExecCtx<'_>) -> Vec<usize> {
    let mut label: Vec<usize> = (0..n).collect();
    fn root(label: &mut [usize], mut x: usize) -> usize {
        while label[x] != x {
            label[x] = label[label[x]];
            x = label[x];
        }
        x
    }
    for e in edges {
        ctx.tick();
        let (a, b) = (e.u as usize, e.v as usize);
        if a == w || b == w {
            continue;
        }
        let (ra, rb) = (root(&mut label, a), root(&mut label, b));
        if ra != rb {
            label[ra] = rb;
        }
    }
    (0..n).map(|v| root(&mut label, v)).collect()
}

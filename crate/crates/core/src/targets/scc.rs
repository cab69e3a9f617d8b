//! Strongly connected components: iterative Tarjan, Kosaraju.

use crate::graph::VertexId;

use super::{ExecCtx, ImplId, TargetInput, TargetOutput};

const UNSET: usize = usize::MAX;

pub(super) fn tarjan(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    tarjan_with(input, ctx, false)
}

/// Iterative Tarjan.
///
/// `skip_finished_on_stack` drops the low-link update for an edge into a
/// vertex whose DFS already returned but which is still on the component
/// stack (a cross edge inside the pending component).
pub(crate) fn tarjan_with(input: &TargetInput, ctx: &mut ExecCtx<'_>, skip_finished_on_stack: bool) -> TargetOutput {
    const P: u16 = ImplId::TarjanIterative.probe_base();
    let g = &input.graph;
    let n = g.num_vertices();
    let adj = g.adjacency();
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut finished = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut calls: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0;
    let mut comps: Vec<Vec<VertexId>> = Vec::new();

    for root in 0..n {
        if index[root] != UNSET {
            ctx.probe(P);
            continue;
        }
        ctx.probe(P + 1);
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        calls.push((root, 0));
        while let Some(&mut (u, ref mut next)) = calls.last_mut() {
            ctx.tick();
            if let Some(&(v, _)) = adj[u].get(*next) {
                *next += 1;
                let v = v as usize;
                if index[v] == UNSET {
                    ctx.probe(P + 2);
                    index[v] = counter;
                    low[v] = counter;
                    counter += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    calls.push((v, 0));
                } else if on_stack[v] {
                    if skip_finished_on_stack && finished[v] {
                        ctx.probe(P + 3);
                    } else {
                        ctx.probe(P + 4);
                        low[u] = low[u].min(index[v]);
                    }
                } else {
                    ctx.probe(P + 5);
                }
                continue;
            }
            calls.pop();
            finished[u] = true;
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[u]);
            }
            if low[u] == index[u] {
                ctx.probe(P + 6);
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("u is on the stack");
                    on_stack[w] = false;
                    comp.push(w as VertexId);
                    if w == u {
                        break;
                    }
                }
                if comp.len() > 1 {
                    ctx.probe(P + 7);
                }
                comps.push(comp);
            }
        }
    }
    TargetOutput::Scc(comps)
}

/// Kosaraju: finishing order on the graph, then sweeps over the transpose.
pub(super) fn kosaraju(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    const P: u16 = ImplId::Kosaraju.probe_base();
    let g = &input.graph;
    let n = g.num_vertices();
    let mut fwd = vec![Vec::new(); n];
    let mut rev = vec![Vec::new(); n];
    for e in g.edges() {
        fwd[e.u as usize].push(e.v as usize);
        rev[e.v as usize].push(e.u as usize);
    }
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        ctx.probe(P);
        seen[root] = true;
        let mut calls = vec![(root, 0usize)];
        while let Some(&mut (u, ref mut next)) = calls.last_mut() {
            ctx.tick();
            if let Some(&v) = fwd[u].get(*next) {
                *next += 1;
                if !seen[v] {
                    ctx.probe(P + 1);
                    seen[v] = true;
                    calls.push((v, 0));
                }
            } else {
                order.push(u);
                calls.pop();
            }
        }
    }
    let mut comp_of = vec![UNSET; n];
    let mut comps: Vec<Vec<VertexId>> = Vec::new();
    for &root in order.iter().rev() {
        if comp_of[root] != UNSET {
            continue;
        }
        ctx.probe(P + 2);
        let id = comps.len();
        let mut comp = Vec::new();
        comp_of[root] = id;
        let mut work = vec![root];
        while let Some(u) = work.pop() {
            ctx.tick();
            comp.push(u as VertexId);
            for &v in &rev[u] {
                if comp_of[v] == UNSET {
                    ctx.probe(P + 3);
                    comp_of[v] = id;
                    work.push(v);
                }
            }
        }
        comps.push(comp);
    }
    TargetOutput::Scc(comps)
}

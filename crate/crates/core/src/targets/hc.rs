//! Harmonic centrality on unweighted graphs: `HC(v) = sum over u != v of
//! 1 / d(v, u)`, with unreachable vertices contributing nothing.

use std::collections::VecDeque;

use super::{ExecCtx, ImplId, TargetInput, TargetOutput};

pub(super) fn bfs_per_source(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    const P: u16 = ImplId::BfsPerSource.probe_base();
    let g = &input.graph;
    let n = g.num_vertices();
    let adj = g.adjacency();
    let mut scores = vec![0.0; n];
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for (src, score) in scores.iter_mut().enumerate() {
        ctx.probe(P);
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            ctx.tick();
            for &(v, _) in &adj[u] {
                let v = v as usize;
                if dist[v] == usize::MAX {
                    ctx.probe(P + 1);
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for (v, &d) in dist.iter().enumerate() {
            if v != src && d != usize::MAX {
                ctx.probe(P + 2);
                *score += 1.0 / d as f64;
            }
        }
    }
    TargetOutput::Hc(scores)
}

pub(super) fn all_pairs_floyd(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    const P: u16 = ImplId::AllPairsFloyd.probe_base();
    const INF: u64 = u64::MAX / 4;
    let g = &input.graph;
    let n = g.num_vertices();
    let mut d = vec![vec![INF; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for e in g.edges() {
        let (u, v) = (e.u as usize, e.v as usize);
        if u != v {
            d[u][v] = 1;
            d[v][u] = 1;
        }
    }
    for k in 0..n {
        ctx.probe(P);
        for i in 0..n {
            ctx.tick();
            if d[i][k] == INF {
                continue;
            }
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    ctx.probe(P + 1);
                    d[i][j] = via;
                }
            }
        }
    }
    let scores = (0..n)
        .map(|v| {
            let mut s = 0.0;
            for (u, &duv) in d[v].iter().enumerate() {
                if u != v && duv != INF {
                    ctx.probe(P + 2);
                    s += 1.0 / duv as f64;
                }
            }
            s
        })
        .collect();
    TargetOutput::Hc(scores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, Graph};

    fn hc(f: fn(&TargetInput, &mut ExecCtx<'_>) -> TargetOutput, n: usize, edges: &[(u32, u32)]) -> Vec<f64> {
        let g = Graph::from_edges(false, n, edges.iter().map(|&(u, v)| Edge::new(u, v, 1))).unwrap();
        match f(&TargetInput::new(g).unwrap(), &mut ExecCtx::unbounded()) {
            TargetOutput::Hc(s) => s,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn path_of_three() {
        for f in [bfs_per_source, all_pairs_floyd] {
            assert_eq!(hc(f, 3, &[(0, 1), (1, 2)]), vec![1.5, 2.0, 1.5]);
        }
    }

    #[test]
    fn disconnected_contributes_zero() {
        for f in [bfs_per_source, all_pairs_floyd] {
            assert_eq!(hc(f, 3, &[(0, 1)]), vec![1.0, 1.0, 0.0]);
        }
    }
}

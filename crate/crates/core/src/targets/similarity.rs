//! Jaccard and Adamic-Adar scores for every unordered vertex pair `u < v`.
//!
//! `N(u)` is the adjacency set of `u`; a self-loop puts `u` in its own
//! neighbourhood. Jaccard is `|N(u) & N(v)| / |N(u) | N(v)|` with `0/0 = 0`.
//! Adamic-Adar sums `1 / ln(deg(w))` over common neighbours `w`, where a
//! self-loop adds 2 to the degree and terms with `deg(w) <= 1` are skipped.

use crate::graph::VertexId;

use super::{all_pairs, ExecCtx, ImplId, PairScore, TargetInput, TargetOutput};

fn neighbour_lists(input: &TargetInput) -> Vec<Vec<VertexId>> {
    input
        .graph
        .adjacency()
        .into_iter()
        .map(|row| row.into_iter().map(|(v, _)| v).collect())
        .collect()
}

fn ratio(inter: usize, union: usize) -> f64 {
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

pub(super) fn sorted_merge_jaccard(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    const P: u16 = ImplId::SortedMerge.probe_base();
    let nbrs = neighbour_lists(input);
    let n = nbrs.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for (u, v) in all_pairs(n) {
        ctx.tick();
        let (a, b) = (&nbrs[u as usize], &nbrs[v as usize]);
        let (mut i, mut j, mut inter) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    ctx.probe(P);
                    inter += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        let union = a.len() + b.len() - inter;
        if union == 0 {
            ctx.probe(P + 1);
        } else if inter == union {
            ctx.probe(P + 2);
        }
        out.push(PairScore {
            u,
            v,
            score: ratio(inter, union),
        });
    }
    TargetOutput::Js(out)
}

pub(super) fn bitset_jaccard(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    bitset_jaccard_with(input, ctx, false)
}

/// Jaccard over per-vertex bitsets. `ignore_self_loops` leaves `u` out of
/// its own bitset even when the loop `(u, u)` exists.
pub(crate) fn bitset_jaccard_with(input: &TargetInput, ctx: &mut ExecCtx<'_>, ignore_self_loops: bool) -> TargetOutput {
    const P: u16 = ImplId::BitsetIntersect.probe_base();
    let g = &input.graph;
    let n = g.num_vertices();
    let words = n.div_ceil(64);
    let mut bits = vec![vec![0u64; words]; n];
    let set = |bits: &mut Vec<Vec<u64>>, a: usize, b: usize| bits[a][b / 64] |= 1 << (b % 64);
    for e in g.edges() {
        let (u, v) = (e.u as usize, e.v as usize);
        if u == v {
            if ignore_self_loops {
                ctx.probe(P);
                continue;
            }
            ctx.probe(P + 1);
        }
        set(&mut bits, u, v);
        set(&mut bits, v, u);
    }
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for (u, v) in all_pairs(n) {
        ctx.tick();
        let (a, b) = (&bits[u as usize], &bits[v as usize]);
        let mut inter = 0;
        let mut union = 0;
        for (x, y) in a.iter().zip(b) {
            inter += (x & y).count_ones() as usize;
            union += (x | y).count_ones() as usize;
        }
        if inter > 0 {
            ctx.probe(P + 2);
        }
        out.push(PairScore {
            u,
            v,
            score: ratio(inter, union),
        });
    }
    TargetOutput::Js(out)
}

/// Adamic-Adar computed pair by pair from sorted neighbour lists.
pub(super) fn per_pair_adamic_adar(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    const P: u16 = ImplId::PerPairIntersect.probe_base();
    let nbrs = neighbour_lists(input);
    let deg = input.graph.degrees();
    let n = nbrs.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for (u, v) in all_pairs(n) {
        ctx.tick();
        let mut score = 0.0;
        for &w in &nbrs[u as usize] {
            if nbrs[v as usize].binary_search(&w).is_err() {
                continue;
            }
            let d = deg[w as usize];
            if d <= 1 {
                ctx.probe(P);
                continue;
            }
            ctx.probe(P + 1);
            score += 1.0 / (d as f64).ln();
        }
        out.push(PairScore { u, v, score });
    }
    TargetOutput::Aa(out)
}

pub(super) fn precomputed_adamic_adar(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    precomputed_adamic_adar_with(input, ctx, false)
}

/// Adamic-Adar accumulated from each common neighbour's side: every `w`
/// adds its weight to all pairs inside `N(w)`. `loop_counts_once` takes the
/// degree as `|N(w)|`, so a self-loop adds 1 instead of 2.
pub(crate) fn precomputed_adamic_adar_with(
    input: &TargetInput,
    ctx: &mut ExecCtx<'_>,
    loop_counts_once: bool,
) -> TargetOutput {
    const P: u16 = ImplId::PrecomputedNeighborhoods.probe_base();
    let nbrs = neighbour_lists(input);
    let n = nbrs.len();
    let mut weight = vec![0.0; n];
    for (w, list) in nbrs.iter().enumerate() {
        let has_loop = list.binary_search(&(w as VertexId)).is_ok();
        let deg = if has_loop && !loop_counts_once {
            ctx.probe(P);
            list.len() + 1
        } else {
            list.len()
        };
        if deg > 1 {
            ctx.probe(P + 1);
            weight[w] = 1.0 / (deg as f64).ln();
        }
    }
    let mut acc = vec![0.0; n * n];
    for (w, list) in nbrs.iter().enumerate() {
        if weight[w] == 0.0 {
            continue;
        }
        for (i, &a) in list.iter().enumerate() {
            ctx.tick();
            for &b in &list[i + 1..] {
                ctx.probe(P + 2);
                acc[a as usize * n + b as usize] += weight[w];
            }
        }
    }
    let out = all_pairs(n)
        .map(|(u, v)| PairScore {
            u,
            v,
            score: acc[u as usize * n + v as usize],
        })
        .collect();
    TargetOutput::Aa(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, Graph};

    fn run(f: fn(&TargetInput, &mut ExecCtx<'_>) -> TargetOutput, n: usize, edges: &[(u32, u32)]) -> Vec<f64> {
        let g = Graph::from_edges(false, n, edges.iter().map(|&(u, v)| Edge::new(u, v, 1))).unwrap();
        match f(&TargetInput::new(g).unwrap(), &mut ExecCtx::unbounded()) {
            TargetOutput::Js(s) | TargetOutput::Aa(s) => s.into_iter().map(|p| p.score).collect(),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn jaccard_with_self_loop() {
        // N(0) = {0, 1}, N(1) = {0}
        for f in [sorted_merge_jaccard, bitset_jaccard] {
            assert_eq!(run(f, 2, &[(0, 0), (0, 1)]), vec![0.5]);
        }
        let buggy = |i: &TargetInput, c: &mut ExecCtx<'_>| bitset_jaccard_with(i, c, true);
        assert_eq!(run(buggy, 2, &[(0, 0), (0, 1)]), vec![0.0]);
    }

    #[test]
    fn jaccard_empty_neighbourhoods_are_zero() {
        for f in [sorted_merge_jaccard, bitset_jaccard] {
            assert_eq!(run(f, 3, &[]), vec![0.0; 3]);
        }
    }

    #[test]
    fn adamic_adar_star() {
        // Centre 0 with degree 3 is the only common neighbour of each leaf pair.
        let expect = 1.0 / 3f64.ln();
        for f in [per_pair_adamic_adar, precomputed_adamic_adar] {
            let s = run(f, 4, &[(0, 1), (0, 2), (0, 3)]);
            assert_eq!(s[..3], [0.0; 3]);
            for x in &s[3..] {
                assert!((x - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn adamic_adar_self_loop_degree() {
        // N(1) = {0, 1}, deg(1) = 3, common neighbour of the pair (0, 1).
        let expect = 1.0 / 3f64.ln();
        for f in [per_pair_adamic_adar, precomputed_adamic_adar] {
            let s = run(f, 2, &[(0, 1), (1, 1)]);
            assert!((s[0] - expect).abs() < 1e-12, "{s:?}");
        }
        let buggy = |i: &TargetInput, c: &mut ExecCtx<'_>| precomputed_adamic_adar_with(i, c, true);
        let s = run(buggy, 2, &[(0, 1), (1, 1)]);
        assert!((s[0] - 1.0 / 2f64.ln()).abs() < 1e-12);
    }
}

//! Structure-preserving graph mutations and AFL-style stacked mutation.
//!
//! Every operator is total: on degenerate inputs it returns the graph
//! unchanged. Operators only ever make profile-valid edits, so a valid input
//! stays valid through an arbitrarily long stack.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph, GraphProfile, VertexId};
use crate::rng::FuzzRng;

/// Default cap on the number of operators in one stacked mutation.
pub const DEFAULT_MAX_STACK: usize = 128;

/// Random proposals tried by `AddEdge` before it enumerates candidates.
const ADD_EDGE_ATTEMPTS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MutationKind {
    AddVertex,
    RemoveVertex,
    AddEdge,
    RemoveEdge,
    UpdateWeight,
    Trim,
    Combine,
}

impl MutationKind {
    pub const ALL: [MutationKind; 7] = [
        MutationKind::AddVertex,
        MutationKind::RemoveVertex,
        MutationKind::AddEdge,
        MutationKind::RemoveEdge,
        MutationKind::UpdateWeight,
        MutationKind::Trim,
        MutationKind::Combine,
    ];
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MutationError {
    #[error("combine mutation needs a donor graph")]
    DonorMissing,
}

/// Applies a single operator to a copy of `g`.
pub fn apply_mutation(
    kind: MutationKind,
    g: &Graph,
    donor: Option<&Graph>,
    p: &GraphProfile,
    rng: &mut FuzzRng,
) -> Result<Graph, MutationError> {
    let mut out = g.clone();
    mutate_in_place(kind, &mut out, donor, p, rng)?;
    Ok(out)
}

/// Applies `n ∈ {2, 4, …, 128}` (clamped to `max_stack`) uniformly chosen
/// operators in sequence. `donors` supplies the second graph whenever
/// `Combine` is drawn.
pub fn stacked_mutate<'a, F>(
    g: &Graph,
    mut donors: F,
    p: &GraphProfile,
    rng: &mut FuzzRng,
    max_stack: usize,
) -> Graph
where
    F: FnMut(&mut FuzzRng) -> &'a Graph,
{
    let n = stack_size(rng, max_stack);
    let mut out = g.clone();
    for _ in 0..n {
        let kind = MutationKind::ALL[rng.below(MutationKind::ALL.len())];
        let donor = (kind == MutationKind::Combine).then(|| donors(rng));
        mutate_in_place(kind, &mut out, donor, p, rng).expect("donor supplied for combine");
    }
    out
}

pub(crate) fn stack_size(rng: &mut FuzzRng, max_stack: usize) -> usize {
    let exp = 1 + rng.below(7);
    (1usize << exp).min(max_stack.max(1))
}

fn mutate_in_place(
    kind: MutationKind,
    g: &mut Graph,
    donor: Option<&Graph>,
    p: &GraphProfile,
    rng: &mut FuzzRng,
) -> Result<(), MutationError> {
    match kind {
        MutationKind::AddVertex => {
            if g.num_vertices() < p.max_vertices {
                g.add_vertex();
            }
        }
        MutationKind::RemoveVertex => {
            let n = g.num_vertices();
            if n > 1 {
                let victim = rng.below(n);
                remove_vertices(g, &[victim], p);
            }
        }
        MutationKind::AddEdge => add_edge(g, p, rng),
        MutationKind::RemoveEdge => {
            if g.num_edges() > 0 {
                let idx = rng.below(g.num_edges());
                g.remove_edge_at(idx);
            }
        }
        MutationKind::UpdateWeight => {
            if g.num_edges() > 0 && p.weighted {
                let idx = rng.below(g.num_edges());
                let w = rng.range_i64(p.weight_min, p.weight_max);
                g.set_weight_at(idx, w);
            }
        }
        MutationKind::Trim => {
            let n = g.num_vertices();
            if n > 1 {
                let k = rng.range_usize(1, (n / 4).max(1)).min(n - 1);
                let victims = rng.sample_distinct(n, k);
                remove_vertices(g, &victims, p);
            }
        }
        MutationKind::Combine => {
            let donor = donor.ok_or(MutationError::DonorMissing)?;
            let bridges = rng.range_usize(0, 3);
            *g = combine(g, donor, p, rng, bridges);
        }
    }
    Ok(())
}

/// Deletes the given vertices and relabels the survivors densely. Under a
/// bipartite profile, relabelling can put both ends of an edge on the same
/// parity side; such edges are dropped with the vertex.
fn remove_vertices(g: &mut Graph, victims: &[usize], p: &GraphProfile) {
    let mut keep = vec![true; g.num_vertices()];
    for &v in victims {
        keep[v] = false;
    }
    g.retain_vertices(&keep, |e| p.pair_allowed(e.u, e.v));
}

fn draw_weight(p: &GraphProfile, rng: &mut FuzzRng) -> i64 {
    if p.weighted {
        rng.range_i64(p.weight_min, p.weight_max)
    } else {
        1
    }
}

fn add_edge(g: &mut Graph, p: &GraphProfile, rng: &mut FuzzRng) {
    if g.num_edges() >= p.max_edges {
        return;
    }
    let n = g.num_vertices();
    let directed = g.directed();
    let usable = |g: &Graph, u: usize, v: usize| {
        (directed || u <= v)
            && p.pair_allowed(u as VertexId, v as VertexId)
            && !g.has_edge(u as VertexId, v as VertexId)
    };
    // Rejection sampling over ordered pairs; undirected proposals with u > v
    // are rejected so that every unordered pair is equally likely.
    for _ in 0..ADD_EDGE_ATTEMPTS {
        let u = rng.below(n);
        let v = rng.below(n);
        if usable(g, u, v) {
            let w = draw_weight(p, rng);
            g.insert_edge(Edge::new(u as VertexId, v as VertexId, w));
            return;
        }
    }
    let candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| usable(g, u, v))
        .collect();
    if candidates.is_empty() {
        return;
    }
    let (u, v) = candidates[rng.below(candidates.len())];
    let w = draw_weight(p, rng);
    g.insert_edge(Edge::new(u as VertexId, v as VertexId, w));
}

/// Disjoint union of `g` and `donor` (donor ids shifted past `g`) plus up to
/// `bridges` random edges between the two halves, truncated to the caps by
/// dropping the highest ids.
pub(crate) fn combine(
    g: &Graph,
    donor: &Graph,
    p: &GraphProfile,
    rng: &mut FuzzRng,
    bridges: usize,
) -> Graph {
    let n = g.num_vertices();
    // Keep donor parities intact under a bipartite profile.
    let offset = if p.require_bipartite && n % 2 == 1 { n + 1 } else { n };
    let total = offset + donor.num_vertices();
    let shifted = donor.edges().iter().map(|e| {
        Edge::new(e.u + offset as VertexId, e.v + offset as VertexId, e.w)
    });
    let edges: Vec<Edge> = g.edges().iter().copied().chain(shifted).collect();
    let mut out = Graph::from_edges(g.directed(), total, edges)
        .expect("disjoint union of valid graphs is valid");

    if n > 0 && donor.num_vertices() > 0 {
        for _ in 0..bridges {
            let mut u = rng.below(n) as VertexId;
            let mut v = (offset + rng.below(donor.num_vertices())) as VertexId;
            if out.directed() && rng.coin() {
                std::mem::swap(&mut u, &mut v);
            }
            let w = draw_weight(p, rng);
            if p.pair_allowed(u, v) && out.num_edges() < p.max_edges {
                out.insert_edge(Edge::new(u, v, w));
            }
        }
    }
    truncate_to_caps(&mut out, p);
    out
}

fn truncate_to_caps(g: &mut Graph, p: &GraphProfile) {
    let limit = p.max_vertices.max(1);
    if g.num_vertices() > limit {
        let keep: Vec<bool> = (0..g.num_vertices()).map(|v| v < limit).collect();
        g.retain_vertices(&keep, |_| true);
    }
    while g.num_edges() > p.max_edges && g.num_vertices() > 1 {
        let n = g.num_vertices();
        let keep: Vec<bool> = (0..n).map(|v| v + 1 < n).collect();
        g.retain_vertices(&keep, |_| true);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{serialize, validate};

    fn path2(directed: bool) -> Graph {
        Graph::from_edges(directed, 2, [Edge::new(0, 1, 1)]).unwrap()
    }

    #[test]
    fn add_vertex_on_single_vertex() {
        let p = GraphProfile::unweighted(false);
        let mut rng = FuzzRng::new(1);
        let g = apply_mutation(MutationKind::AddVertex, &Graph::single_vertex(false), None, &p, &mut rng)
            .unwrap();
        assert_eq!(g.num_vertices(), 2);
        assert_eq!(g.num_edges(), 0);
    }

    #[test]
    fn remove_vertex_single_vertex_is_noop() {
        let p = GraphProfile::unweighted(false);
        let mut rng = FuzzRng::new(1);
        let g0 = Graph::single_vertex(false);
        let g = apply_mutation(MutationKind::RemoveVertex, &g0, None, &p, &mut rng).unwrap();
        assert_eq!(g, g0);
    }

    #[test]
    fn combine_without_bridges_is_disjoint_union() {
        let p = GraphProfile::unweighted(false);
        let mut rng = FuzzRng::new(3);
        let g = combine(&path2(false), &path2(false), &p, &mut rng, 0);
        assert_eq!(g.num_vertices(), 4);
        assert_eq!(g.edges(), &[Edge::new(0, 1, 1), Edge::new(2, 3, 1)]);
    }

    #[test]
    fn combine_requires_donor() {
        let p = GraphProfile::unweighted(false);
        let mut rng = FuzzRng::new(3);
        assert_eq!(
            apply_mutation(MutationKind::Combine, &path2(false), None, &p, &mut rng),
            Err(MutationError::DonorMissing)
        );
    }

    #[test]
    fn combine_keeps_bipartite_parity() {
        let p = GraphProfile::unweighted(false).bipartite();
        let g = Graph::from_edges(false, 3, [Edge::new(0, 1, 1), Edge::new(1, 2, 1)]).unwrap();
        for seed in 0..50 {
            let mut rng = FuzzRng::new(seed);
            let out = combine(&g, &path2(false), &p, &mut rng, 3);
            assert!(validate(&out, &p).is_empty(), "{}", serialize(&out));
            assert!(out.has_edge(4, 5));
        }
    }

    #[test]
    fn combine_truncates_to_caps() {
        let p = GraphProfile::unweighted(false).with_caps(5, 3);
        let g = Graph::from_edges(false, 4, [Edge::new(0, 1, 1), Edge::new(2, 3, 1)]).unwrap();
        let mut rng = FuzzRng::new(9);
        let out = combine(&g, &g, &p, &mut rng, 3);
        assert!(validate(&out, &p).is_empty());
        assert!(out.num_vertices() <= 5);
    }

    #[test]
    fn degenerate_inputs_are_noops() {
        let p = GraphProfile::weighted(true, -8, 64);
        let g0 = Graph::single_vertex(true);
        let mut rng = FuzzRng::new(5);
        for kind in [
            MutationKind::RemoveVertex,
            MutationKind::RemoveEdge,
            MutationKind::UpdateWeight,
            MutationKind::Trim,
            MutationKind::AddEdge, // no self-loops and a single vertex
        ] {
            assert_eq!(apply_mutation(kind, &g0, None, &p, &mut rng).unwrap(), g0, "{kind:?}");
        }
        let unweighted = GraphProfile::unweighted(false);
        let g = path2(false);
        assert_eq!(
            apply_mutation(MutationKind::UpdateWeight, &g, None, &unweighted, &mut rng).unwrap(),
            g
        );
    }

    #[test]
    fn add_edge_respects_edge_cap_and_completeness() {
        let p = GraphProfile::unweighted(false).with_caps(64, 1);
        let mut rng = FuzzRng::new(5);
        let g = path2(false);
        assert_eq!(apply_mutation(MutationKind::AddEdge, &g, None, &p, &mut rng).unwrap(), g);
        // K2 without loops is complete.
        let p = GraphProfile::unweighted(false);
        assert_eq!(apply_mutation(MutationKind::AddEdge, &g, None, &p, &mut rng).unwrap(), g);
        // ...but with loops allowed there is room for two more.
        let p = p.with_self_loops();
        let g2 = apply_mutation(MutationKind::AddEdge, &g, None, &p, &mut rng).unwrap();
        assert_eq!(g2.num_edges(), 2);
    }

    #[test]
    fn remove_vertex_relabels_densely() {
        let p = GraphProfile::unweighted(true);
        let g = Graph::from_edges(true, 3, [Edge::new(0, 2, 1), Edge::new(2, 1, 1)]).unwrap();
        // Try seeds until vertex 1 is the victim.
        for seed in 0..100 {
            let mut rng = FuzzRng::new(seed);
            let out = apply_mutation(MutationKind::RemoveVertex, &g, None, &p, &mut rng).unwrap();
            if out.edges() == [Edge::new(0, 1, 1)] {
                return;
            }
        }
        panic!("vertex 1 never removed");
    }

    #[test]
    fn max_stack_two_applies_two() {
        let mut rng = FuzzRng::new(11);
        for _ in 0..100 {
            assert_eq!(stack_size(&mut rng, 2), 2);
        }
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..1000 {
            seen.insert(stack_size(&mut rng, DEFAULT_MAX_STACK));
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), vec![2, 4, 8, 16, 32, 64, 128]);
    }
}

//! Reference implementations of the nine graph problems, their output
//! domains, differential comparison and brute-force ground truth.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{derive_endpoints, EndpointPair, Graph, GraphError, GraphProfile, VertexId};

mod bcc;
mod exec;
mod flow;
mod hc;
mod matching;
mod mst;
pub mod oracle;
mod scc;
mod similarity;
mod spf;

pub use exec::{execute_fn, ExecCtx, ExecOutcome, TargetFn, HANG_CHECK_INTERVAL};
pub use mst::{check_forest, MstOut};
pub use spf::SpfOut;

pub(crate) use flow::push_relabel_with;
pub(crate) use mst::kruskal_with;
pub(crate) use scc::tarjan_with;
pub(crate) use similarity::{bitset_jaccard_with, precomputed_adamic_adar_with};
pub(crate) use spf::goldberg_radzik_with;

/// Default per-execution wall-clock budget before a run is classified Hang.
pub const DEFAULT_EXEC_BUDGET: Duration = Duration::from_secs(5);

/// Absolute tolerance for real-valued score comparison.
pub const SCORE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ProblemId {
    Spf,
    Mst,
    Scc,
    Bcc,
    Hc,
    Js,
    Mm,
    Aa,
    Mfv,
}

impl ProblemId {
    pub const ALL: [ProblemId; 9] = [
        ProblemId::Spf,
        ProblemId::Mst,
        ProblemId::Scc,
        ProblemId::Bcc,
        ProblemId::Hc,
        ProblemId::Js,
        ProblemId::Mm,
        ProblemId::Aa,
        ProblemId::Mfv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemId::Spf => "SPF",
            ProblemId::Mst => "MST",
            ProblemId::Scc => "SCC",
            ProblemId::Bcc => "BCC",
            ProblemId::Hc => "HC",
            ProblemId::Js => "JS",
            ProblemId::Mm => "MM",
            ProblemId::Aa => "AA",
            ProblemId::Mfv => "MFV",
        }
    }

    /// Input constraints every implementation of the problem accepts.
    pub fn profile(self) -> GraphProfile {
        match self {
            ProblemId::Spf => GraphProfile::weighted(true, -8, 64),
            ProblemId::Mst => GraphProfile::weighted(false, 1, 64),
            ProblemId::Scc => GraphProfile::unweighted(true),
            ProblemId::Bcc | ProblemId::Hc => GraphProfile::unweighted(false),
            ProblemId::Js | ProblemId::Aa => GraphProfile::unweighted(false).with_self_loops(),
            ProblemId::Mm => GraphProfile::unweighted(false).bipartite(),
            ProblemId::Mfv => GraphProfile::weighted(true, 1, 64),
        }
    }

    /// Profile for a concrete implementation pair: Dijkstra narrows SPF to
    /// non-negative weights.
    pub fn profile_for(self, impls: &[ImplId]) -> GraphProfile {
        let mut p = self.profile();
        if impls.contains(&ImplId::Dijkstra) {
            p.weight_min = 0;
        }
        p
    }

    pub fn default_pair(self) -> (ImplId, ImplId) {
        use ImplId::*;
        match self {
            ProblemId::Spf => (BellmanFord, GoldbergRadzik),
            ProblemId::Mst => (Prim, Kruskal),
            ProblemId::Scc => (TarjanIterative, Kosaraju),
            ProblemId::Bcc => (HopcroftTarjan, BruteBlocks),
            ProblemId::Hc => (BfsPerSource, AllPairsFloyd),
            ProblemId::Js => (SortedMerge, BitsetIntersect),
            ProblemId::Mm => (HopcroftKarp, AugmentingPath),
            ProblemId::Aa => (PerPairIntersect, PrecomputedNeighborhoods),
            ProblemId::Mfv => (Dinitz, PushRelabel),
        }
    }

    pub fn impls(self) -> Vec<ImplId> {
        ImplId::ALL.iter().copied().filter(|i| i.problem() == self).collect()
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProblemId::ALL
            .iter()
            .copied()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown problem `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ImplId {
    BellmanFord,
    GoldbergRadzik,
    Dijkstra,
    Prim,
    Kruskal,
    Boruvka,
    TarjanIterative,
    Kosaraju,
    HopcroftTarjan,
    BruteBlocks,
    BfsPerSource,
    AllPairsFloyd,
    SortedMerge,
    BitsetIntersect,
    HopcroftKarp,
    AugmentingPath,
    PerPairIntersect,
    PrecomputedNeighborhoods,
    Dinitz,
    PushRelabel,
}

impl ImplId {
    pub const ALL: [ImplId; 20] = [
        ImplId::BellmanFord,
        ImplId::GoldbergRadzik,
        ImplId::Dijkstra,
        ImplId::Prim,
        ImplId::Kruskal,
        ImplId::Boruvka,
        ImplId::TarjanIterative,
        ImplId::Kosaraju,
        ImplId::HopcroftTarjan,
        ImplId::BruteBlocks,
        ImplId::BfsPerSource,
        ImplId::AllPairsFloyd,
        ImplId::SortedMerge,
        ImplId::BitsetIntersect,
        ImplId::HopcroftKarp,
        ImplId::AugmentingPath,
        ImplId::PerPairIntersect,
        ImplId::PrecomputedNeighborhoods,
        ImplId::Dinitz,
        ImplId::PushRelabel,
    ];

    pub fn problem(self) -> ProblemId {
        use ImplId::*;
        match self {
            BellmanFord | GoldbergRadzik | Dijkstra => ProblemId::Spf,
            Prim | Kruskal | Boruvka => ProblemId::Mst,
            TarjanIterative | Kosaraju => ProblemId::Scc,
            HopcroftTarjan | BruteBlocks => ProblemId::Bcc,
            BfsPerSource | AllPairsFloyd => ProblemId::Hc,
            SortedMerge | BitsetIntersect => ProblemId::Js,
            HopcroftKarp | AugmentingPath => ProblemId::Mm,
            PerPairIntersect | PrecomputedNeighborhoods => ProblemId::Aa,
            Dinitz | PushRelabel => ProblemId::Mfv,
        }
    }

    pub fn name(self) -> &'static str {
        use ImplId::*;
        match self {
            BellmanFord => "BellmanFord",
            GoldbergRadzik => "GoldbergRadzik",
            Dijkstra => "Dijkstra",
            Prim => "Prim",
            Kruskal => "Kruskal",
            Boruvka => "Boruvka",
            TarjanIterative => "TarjanIterative",
            Kosaraju => "Kosaraju",
            HopcroftTarjan => "HopcroftTarjan",
            BruteBlocks => "BruteBlocks",
            BfsPerSource => "BfsPerSource",
            AllPairsFloyd => "AllPairsFloyd",
            SortedMerge => "SortedMerge",
            BitsetIntersect => "BitsetIntersect",
            HopcroftKarp => "HopcroftKarp",
            AugmentingPath => "AugmentingPath",
            PerPairIntersect => "PerPairIntersect",
            PrecomputedNeighborhoods => "PrecomputedNeighborhoods",
            Dinitz => "Dinitz",
            PushRelabel => "PushRelabel",
        }
    }

    /// Base of this implementation's 64-slot probe id range.
    pub(crate) const fn probe_base(self) -> u16 {
        (self as u16 + 1) << 6
    }

    pub fn function(self) -> TargetFn {
        use ImplId::*;
        match self {
            BellmanFord => spf::bellman_ford,
            GoldbergRadzik => spf::goldberg_radzik,
            Dijkstra => spf::dijkstra,
            Prim => mst::prim,
            Kruskal => mst::kruskal,
            Boruvka => mst::boruvka,
            TarjanIterative => scc::tarjan,
            Kosaraju => scc::kosaraju,
            HopcroftTarjan => bcc::hopcroft_tarjan,
            BruteBlocks => bcc::brute_blocks,
            BfsPerSource => hc::bfs_per_source,
            AllPairsFloyd => hc::all_pairs_floyd,
            SortedMerge => similarity::sorted_merge_jaccard,
            BitsetIntersect => similarity::bitset_jaccard,
            HopcroftKarp => matching::hopcroft_karp,
            AugmentingPath => matching::augmenting_path,
            PerPairIntersect => similarity::per_pair_adamic_adar,
            PrecomputedNeighborhoods => similarity::precomputed_adamic_adar,
            Dinitz => flow::dinitz,
            PushRelabel => flow::push_relabel,
        }
    }
}

impl fmt::Display for ImplId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ImplId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ImplId::ALL
            .iter()
            .copied()
            .find(|i| i.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown implementation `{s}`"))
    }
}

/// A graph plus the endpoints derived from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetInput {
    pub graph: Graph,
    pub endpoints: EndpointPair,
}

impl TargetInput {
    pub fn new(graph: Graph) -> Result<Self, GraphError> {
        let endpoints = derive_endpoints(&graph)?;
        Ok(Self { graph, endpoints })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairScore {
    pub u: VertexId,
    pub v: VertexId,
    pub score: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TargetOutput {
    Spf(SpfOut),
    Mst(MstOut),
    /// Strongly connected components.
    Scc(Vec<Vec<VertexId>>),
    /// Biconnected blocks as edge-induced vertex sets.
    Bcc(Vec<Vec<VertexId>>),
    /// Harmonic centrality indexed by vertex.
    Hc(Vec<f64>),
    /// Jaccard score for every unordered pair `u < v`.
    Js(Vec<PairScore>),
    Mm(Vec<(VertexId, VertexId)>),
    /// Adamic-Adar score for every unordered pair `u < v`.
    Aa(Vec<PairScore>),
    Mfv(i64),
}

impl TargetOutput {
    pub fn problem(&self) -> ProblemId {
        match self {
            TargetOutput::Spf(_) => ProblemId::Spf,
            TargetOutput::Mst(_) => ProblemId::Mst,
            TargetOutput::Scc(_) => ProblemId::Scc,
            TargetOutput::Bcc(_) => ProblemId::Bcc,
            TargetOutput::Hc(_) => ProblemId::Hc,
            TargetOutput::Js(_) => ProblemId::Js,
            TargetOutput::Mm(_) => ProblemId::Mm,
            TargetOutput::Aa(_) => ProblemId::Aa,
            TargetOutput::Mfv(_) => ProblemId::Mfv,
        }
    }
}

/// Runs one implementation with crash capture and the wall-clock budget.
pub fn run_target(
    imp: ImplId,
    input: &TargetInput,
    probes: Option<&mut crate::feedback::ProbeMap>,
    time_budget: Duration,
) -> ExecOutcome {
    execute_fn(imp.function(), input, probes, time_budget)
}

// ---------------------------------------------------------------------------
// Differential comparison
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub enum Comparison {
    Equal,
    Different(String),
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompareError {
    #[error("outputs belong to {left} and {right}, expected {expected}")]
    ProblemMismatch {
        expected: ProblemId,
        left: ProblemId,
        right: ProblemId,
    },
}

/// Compares two outputs for the same input under the problem's equality
/// rule. MST and MM outputs are equal when their summary values agree and
/// each side is independently a valid answer for `input`.
pub fn compare_outputs(
    problem: ProblemId,
    input: &TargetInput,
    o: &TargetOutput,
    o2: &TargetOutput,
) -> Result<Comparison, CompareError> {
    if o.problem() != problem || o2.problem() != problem {
        return Err(CompareError::ProblemMismatch {
            expected: problem,
            left: o.problem(),
            right: o2.problem(),
        });
    }
    let diff = |msg: String| Ok(Comparison::Different(msg));
    match (o, o2) {
        (TargetOutput::Spf(a), TargetOutput::Spf(b)) => {
            if a == b {
                Ok(Comparison::Equal)
            } else {
                diff(format!("{a:?} vs {b:?}"))
            }
        }
        (TargetOutput::Mfv(a), TargetOutput::Mfv(b)) => {
            if a == b {
                Ok(Comparison::Equal)
            } else {
                diff(format!("flow {a} vs {b}"))
            }
        }
        (TargetOutput::Mst(a), TargetOutput::Mst(b)) => {
            if a.total_weight != b.total_weight || a.nodes != b.nodes {
                return diff(format!(
                    "(weight {}, nodes {}) vs (weight {}, nodes {})",
                    a.total_weight, a.nodes, b.total_weight, b.nodes
                ));
            }
            for (side, m) in [("left", a), ("right", b)] {
                if let Err(e) = check_forest(&input.graph, m) {
                    return diff(format!("{side} forest invalid: {e}"));
                }
            }
            Ok(Comparison::Equal)
        }
        (TargetOutput::Scc(a), TargetOutput::Scc(b)) | (TargetOutput::Bcc(a), TargetOutput::Bcc(b)) => {
            let (ca, cb) = (canonical_sets(a), canonical_sets(b));
            if ca == cb {
                Ok(Comparison::Equal)
            } else {
                diff(format!("{ca:?} vs {cb:?}"))
            }
        }
        (TargetOutput::Mm(a), TargetOutput::Mm(b)) => {
            if a.len() != b.len() {
                return diff(format!("matching size {} vs {}", a.len(), b.len()));
            }
            for (side, m) in [("left", a), ("right", b)] {
                if let Err(e) = check_matching(&input.graph, m) {
                    return diff(format!("{side} matching invalid: {e}"));
                }
            }
            Ok(Comparison::Equal)
        }
        (TargetOutput::Hc(a), TargetOutput::Hc(b)) => {
            if a.len() != b.len() {
                return diff(format!("{} vs {} vertices", a.len(), b.len()));
            }
            for (v, (x, y)) in a.iter().zip(b).enumerate() {
                if !close(*x, *y) {
                    return diff(format!("vertex {v}: {x} vs {y}"));
                }
            }
            Ok(Comparison::Equal)
        }
        (TargetOutput::Js(a), TargetOutput::Js(b)) | (TargetOutput::Aa(a), TargetOutput::Aa(b)) => {
            compare_pair_scores(a, b).map_or(Ok(Comparison::Equal), diff)
        }
        _ => unreachable!("problem tags checked above"),
    }
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= SCORE_TOLERANCE || (x.is_nan() && y.is_nan())
}

fn compare_pair_scores(a: &[PairScore], b: &[PairScore]) -> Option<String> {
    let sorted = |s: &[PairScore]| {
        let mut v = s.to_vec();
        v.sort_by_key(|p| (p.u.min(p.v), p.u.max(p.v)));
        v
    };
    let (a, b) = (sorted(a), sorted(b));
    if a.len() != b.len() {
        return Some(format!("{} vs {} scored pairs", a.len(), b.len()));
    }
    for (x, y) in a.iter().zip(&b) {
        if (x.u.min(x.v), x.u.max(x.v)) != (y.u.min(y.v), y.u.max(y.v)) {
            return Some(format!("pair ({}, {}) vs ({}, {})", x.u, x.v, y.u, y.v));
        }
        if !close(x.score, y.score) {
            return Some(format!("pair ({}, {}): {} vs {}", x.u, x.v, x.score, y.score));
        }
    }
    None
}

/// Each set sorted, then the sets sorted lexicographically.
pub fn canonical_sets(sets: &[Vec<VertexId>]) -> Vec<Vec<VertexId>> {
    let mut out: Vec<Vec<VertexId>> = sets
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s
        })
        .collect();
    out.sort();
    out
}

/// Edges exist in the graph and are pairwise vertex-disjoint.
pub fn check_matching(g: &Graph, m: &[(VertexId, VertexId)]) -> Result<(), String> {
    let mut used = vec![false; g.num_vertices()];
    for &(u, v) in m {
        if u == v || !g.has_edge(u, v) {
            return Err(format!("({u}, {v}) is not an edge"));
        }
        for x in [u, v] {
            let slot = used.get_mut(x as usize).ok_or(format!("vertex {x} out of range"))?;
            if *slot {
                return Err(format!("vertex {x} matched twice"));
            }
            *slot = true;
        }
    }
    Ok(())
}

/// Components partition the vertex set.
pub fn check_partition(n: usize, comps: &[Vec<VertexId>]) -> Result<(), String> {
    let mut seen = vec![false; n];
    for c in comps {
        for &v in c {
            let slot = seen.get_mut(v as usize).ok_or(format!("vertex {v} out of range"))?;
            if *slot {
                return Err(format!("vertex {v} in two components"));
            }
            *slot = true;
        }
    }
    match seen.iter().position(|s| !s) {
        Some(v) => Err(format!("vertex {v} missing")),
        None => Ok(()),
    }
}

/// All unordered pairs `u < v` of `0..n`, in lexicographic order.
pub(crate) fn all_pairs(n: usize) -> impl Iterator<Item = (VertexId, VertexId)> {
    (0..n as VertexId).flat_map(move |u| (u + 1..n as VertexId).map(move |v| (u, v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn input(g: Graph) -> TargetInput {
        TargetInput::new(g).unwrap()
    }

    #[test]
    fn scc_canonicalization() {
        let i = input(Graph::new(true, 3));
        let a = TargetOutput::Scc(vec![vec![0, 1], vec![2]]);
        let b = TargetOutput::Scc(vec![vec![2], vec![1, 0]]);
        assert_eq!(compare_outputs(ProblemId::Scc, &i, &a, &b), Ok(Comparison::Equal));
    }

    #[test]
    fn spf_length_vs_negative_cycle_differs() {
        let i = input(Graph::new(true, 1));
        let a = TargetOutput::Spf(SpfOut::Length(11));
        let b = TargetOutput::Spf(SpfOut::NegativeCycle);
        assert!(matches!(
            compare_outputs(ProblemId::Spf, &i, &a, &b),
            Ok(Comparison::Different(_))
        ));
    }

    #[test]
    fn distinct_valid_matchings_are_equal() {
        // Path 0-1-2-3-4-5: two perfect matchings of size 3 exist only as
        // {01,23,45}; use a 6-cycle-like bipartite graph with two.
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]
            .map(|(u, v)| Edge::new(u, v, 1));
        let i = input(Graph::from_edges(false, 6, edges).unwrap());
        let a = TargetOutput::Mm(vec![(0, 1), (2, 3), (4, 5)]);
        let b = TargetOutput::Mm(vec![(1, 2), (3, 4), (0, 5)]);
        assert_eq!(compare_outputs(ProblemId::Mm, &i, &a, &b), Ok(Comparison::Equal));
        let bad = TargetOutput::Mm(vec![(0, 1), (1, 2), (4, 5)]);
        assert!(!compare_outputs(ProblemId::Mm, &i, &a, &bad).unwrap().is_equal());
    }

    #[test]
    fn problem_mismatch_is_error() {
        let i = input(Graph::new(true, 1));
        let a = TargetOutput::Mfv(1);
        let b = TargetOutput::Spf(SpfOut::Length(1));
        assert!(compare_outputs(ProblemId::Mfv, &i, &a, &b).is_err());
    }

    #[test]
    fn scores_within_tolerance() {
        let i = input(Graph::new(false, 2));
        let a = TargetOutput::Js(vec![PairScore { u: 0, v: 1, score: 0.5 }]);
        let b = TargetOutput::Js(vec![PairScore { u: 0, v: 1, score: 0.5 + 1e-12 }]);
        let c = TargetOutput::Js(vec![PairScore { u: 0, v: 1, score: 0.5 + 1e-6 }]);
        let missing = TargetOutput::Js(vec![]);
        assert!(compare_outputs(ProblemId::Js, &i, &a, &b).unwrap().is_equal());
        assert!(!compare_outputs(ProblemId::Js, &i, &a, &c).unwrap().is_equal());
        assert!(!compare_outputs(ProblemId::Js, &i, &a, &missing).unwrap().is_equal());
    }

    #[test]
    fn names_round_trip() {
        for p in ProblemId::ALL {
            assert_eq!(p.name().to_lowercase().parse::<ProblemId>(), Ok(p));
            let (a, b) = p.default_pair();
            assert_eq!(a.problem(), p);
            assert_eq!(b.problem(), p);
            assert_ne!(a, b);
        }
        for i in ImplId::ALL {
            assert_eq!(i.name().parse::<ImplId>(), Ok(i));
        }
    }

    #[test]
    fn probe_ranges_disjoint() {
        let mut bases: Vec<u16> = ImplId::ALL.iter().map(|i| i.probe_base()).collect();
        bases.dedup();
        assert_eq!(bases.len(), ImplId::ALL.len());
    }
}

//! Random profile-valid graphs: initial seed corpora and small inputs for
//! oracle sweeps.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::graph::{serialize, Edge, Graph, GraphProfile, VertexId};
use crate::rng::FuzzRng;
use crate::targets::ProblemId;

pub const DEFAULT_SEED_COUNT: usize = 10;
pub const DEFAULT_SIZE_RANGE: (usize, usize) = (2, 8);
pub const EDGE_PROBABILITY_RANGE: (f64, f64) = (0.1, 0.5);

/// RNG seed behind [`standard_seeds`].
pub const STANDARD_RNG_SEED: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedGenSpec {
    pub problem: ProblemId,
    pub count: usize,
    pub rng_seed: u64,
    pub size_range: (usize, usize),
}

impl SeedGenSpec {
    pub fn new(problem: ProblemId) -> Self {
        Self {
            problem,
            count: DEFAULT_SEED_COUNT,
            rng_seed: STANDARD_RNG_SEED,
            size_range: DEFAULT_SIZE_RANGE,
        }
    }
}

/// Erdős–Rényi graphs: per graph, `N` uniform in the size range and an edge
/// probability uniform in [`EDGE_PROBABILITY_RANGE`]. Self-loops are never
/// generated, so seeds stay loop-free even where the profile allows loops.
pub fn generate_seeds(spec: &SeedGenSpec) -> Vec<Graph> {
    let profile = spec.problem.profile();
    let mut rng = FuzzRng::new(spec.rng_seed);
    let (lo, hi) = spec.size_range;
    let lo = lo.max(1).min(profile.max_vertices);
    let hi = hi.max(lo).min(profile.max_vertices);
    (0..spec.count)
        .map(|_| {
            let n = rng.range_usize(lo, hi);
            let (plo, phi) = EDGE_PROBABILITY_RANGE;
            let p = plo + (phi - plo) * rng.unit_f64();
            random_graph(&profile, n, p, false, &mut rng)
        })
        .collect()
}

/// The 10-graph initial corpus of a problem with default settings.
pub fn standard_seeds(problem: ProblemId) -> Vec<Graph> {
    generate_seeds(&SeedGenSpec::new(problem))
}

/// Writes `NNNNNN.graph` files, creating `dir` if needed, so that loading
/// the directory back yields the graphs in the same order.
pub fn write_seed_dir(dir: &Path, graphs: &[Graph]) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut paths = Vec::with_capacity(graphs.len());
    for (i, g) in graphs.iter().enumerate() {
        let path = dir.join(format!("{i:06}.graph"));
        fs::write(&path, serialize(g))?;
        paths.push(path);
    }
    Ok(paths)
}

/// Includes every profile-allowed pair independently with probability `p`,
/// then drops random edges until the edge cap holds.
pub fn random_graph(profile: &GraphProfile, n: usize, p: f64, self_loops: bool, rng: &mut FuzzRng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        let first = if profile.directed { 0 } else { u };
        for v in first..n {
            let (a, b) = (u as VertexId, v as VertexId);
            if (u == v && !self_loops) || !profile.pair_allowed(a, b) {
                continue;
            }
            if rng.unit_f64() < p {
                let w = if profile.weighted {
                    rng.range_i64(profile.weight_min, profile.weight_max)
                } else {
                    1
                };
                edges.push(Edge::new(a, b, w));
            }
        }
    }
    while edges.len() > profile.max_edges {
        let i = rng.below(edges.len());
        edges.swap_remove(i);
    }
    Graph::from_edges(profile.directed, n, edges).expect("generated pairs are distinct and in range")
}

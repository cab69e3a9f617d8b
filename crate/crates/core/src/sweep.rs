//! Batch drivers for independent work items: multi-trial campaigns and
//! brute-force oracle sweeps. Work is spread over a rayon pool when the
//! `parallel` feature is on; results always come back in input order, so
//! both strategies produce identical output.

use std::time::Duration;

use crate::engine::{run_campaign, CampaignConfig, CampaignReport, EngineError};
use crate::graph::{Graph, GraphProfile};
use crate::mutants::Implementation;
use crate::rng::FuzzRng;
use crate::seeds::random_graph;
use crate::targets::oracle::{brute_force_oracle, ORACLE_MAX_EDGES};
use crate::targets::{compare_outputs, execute_fn, Comparison, ExecOutcome, TargetInput};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        return Strategy::Parallel;
        #[cfg(not(feature = "parallel"))]
        Strategy::Sequential
    }
}

pub fn map<T, R, F>(strategy: Strategy, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    match strategy {
        Strategy::Sequential => items.into_iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            items.into_par_iter().map(f).collect()
        }
    }
}

pub fn run_trials(strategy: Strategy, configs: Vec<CampaignConfig>) -> Vec<Result<CampaignReport, EngineError>> {
    map(strategy, configs, run_campaign)
}

/// Largest vertex count used by [`oracle_graph`].
pub const ORACLE_SWEEP_MAX_VERTICES: usize = 7;

/// The `index`-th random graph of an oracle sweep: `1..=7` vertices, edge
/// probability uniform in `[0.1, 0.9]`, self-loops in half of the graphs
/// whose profile allows them, at most 16 edges.
pub fn oracle_graph(profile: &GraphProfile, rng_seed: u64, index: usize) -> Graph {
    let mut rng = FuzzRng::new(rng_seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index as u64));
    let profile = (*profile).with_caps(ORACLE_SWEEP_MAX_VERTICES, ORACLE_MAX_EDGES);
    let n = rng.range_usize(1, ORACLE_SWEEP_MAX_VERTICES);
    let p = 0.1 + 0.8 * rng.unit_f64();
    let loops = profile.allow_self_loops && rng.coin();
    random_graph(&profile, n, p, loops, &mut rng)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleFailure {
    pub index: usize,
    pub graph: Graph,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSweep {
    pub implementation: Implementation,
    pub checked: usize,
    pub failures: Vec<OracleFailure>,
}

/// Checks `count` sweep graphs of `imp` against the brute-force oracle,
/// drawn from the implementation's own profile.
pub fn oracle_sweep(strategy: Strategy, imp: Implementation, count: usize, rng_seed: u64) -> OracleSweep {
    let profile = imp.problem().profile_for(&[imp.base()]);
    let results = map(strategy, (0..count).collect(), |index| {
        let graph = oracle_graph(&profile, rng_seed, index);
        let detail = check_against_oracle(imp, &graph).err()?;
        Some(OracleFailure { index, graph, detail })
    });
    OracleSweep {
        implementation: imp,
        checked: count,
        failures: results.into_iter().flatten().collect(),
    }
}

pub fn check_against_oracle(imp: Implementation, graph: &Graph) -> Result<(), String> {
    let problem = imp.problem();
    let input = TargetInput::new(graph.clone()).map_err(|e| e.to_string())?;
    let expected = brute_force_oracle(problem, &input).map_err(|e| e.to_string())?;
    match execute_fn(imp.function(), &input, None, Duration::from_secs(5)) {
        ExecOutcome::Output(out) => match compare_outputs(problem, &input, &expected, &out) {
            Ok(Comparison::Equal) => Ok(()),
            Ok(Comparison::Different(d)) => Err(d),
            Err(e) => Err(e.to_string()),
        },
        ExecOutcome::Crash(m) => Err(format!("crash: {m}")),
        ExecOutcome::Hang => Err("hang".into()),
    }
}

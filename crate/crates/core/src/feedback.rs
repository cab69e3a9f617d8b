//! Feedback: algorithm-specific output signals, probe coverage, and the
//! novelty decision for each feedback mode.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, NoveltyKey, ProbeSet};
use crate::targets::{ProblemId, SpfOut, TargetOutput};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeedbackMode {
    None,
    Cov,
    Algo,
    Combo,
}

impl FeedbackMode {
    pub fn needs_signal(self) -> bool {
        matches!(self, FeedbackMode::Algo | FeedbackMode::Combo)
    }

    pub fn needs_probes(self) -> bool {
        matches!(self, FeedbackMode::Cov | FeedbackMode::Combo)
    }

    pub fn name(self) -> &'static str {
        match self {
            FeedbackMode::None => "none",
            FeedbackMode::Cov => "cov",
            FeedbackMode::Algo => "algo",
            FeedbackMode::Combo => "combo",
        }
    }
}

impl fmt::Display for FeedbackMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FeedbackMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(FeedbackMode::None),
            "cov" => Ok(FeedbackMode::Cov),
            "algo" => Ok(FeedbackMode::Algo),
            "combo" => Ok(FeedbackMode::Combo),
            other => Err(format!("unknown feedback mode `{other}`")),
        }
    }
}

// ---------------------------------------------------------------------------
// Algorithm-specific signals
// ---------------------------------------------------------------------------

/// Small integer tuple summarising one output. Unused slots are zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignalKey {
    pub problem: ProblemId,
    pub values: [i64; 2],
}

impl SignalKey {
    fn one(problem: ProblemId, a: i64) -> Self {
        Self { problem, values: [a, 0] }
    }

    fn two(problem: ProblemId, a: i64, b: i64) -> Self {
        Self { problem, values: [a, b] }
    }
}

impl fmt::Display for SignalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.problem, self.values[0], self.values[1])
    }
}

pub const SPF_UNREACHABLE: i64 = -1;
pub const SPF_NEGATIVE_CYCLE: i64 = -2;

/// Score quantisation for real-valued signals: three decimal digits.
pub fn quantize(x: f64) -> i64 {
    (x * 1000.0).floor() as i64
}

/// AFL hit-count buckets, extended to negative values by symmetry.
pub fn bucket(x: i64) -> i64 {
    if x < 0 {
        return -bucket(x.saturating_neg());
    }
    match x {
        0 => 0,
        1 => 1,
        2 => 2,
        3 => 3,
        4..=7 => 4,
        8..=15 => 5,
        16..=31 => 6,
        32..=127 => 7,
        _ => 8,
    }
}

/// Builds the per-problem signal from an output alone.
///
/// SPF is `(l, 0)` for a path length and `(-1, 1)` / `(-2, 1)` for the
/// unreachable / negative-cycle sentinels, so a genuine length of -1 or -2
/// stays distinguishable from the sentinels.
pub fn extract_signal(problem: ProblemId, out: &TargetOutput) -> SignalKey {
    match out {
        TargetOutput::Spf(SpfOut::Length(l)) => SignalKey::two(problem, *l, 0),
        TargetOutput::Spf(SpfOut::Unreachable) => SignalKey::two(problem, SPF_UNREACHABLE, 1),
        TargetOutput::Spf(SpfOut::NegativeCycle) => SignalKey::two(problem, SPF_NEGATIVE_CYCLE, 1),
        TargetOutput::Scc(comps) => {
            let largest = comps.iter().map(Vec::len).max().unwrap_or(0);
            SignalKey::two(problem, comps.len() as i64, largest as i64)
        }
        TargetOutput::Bcc(blocks) => {
            let largest = blocks.iter().map(Vec::len).max().unwrap_or(0);
            SignalKey::one(problem, largest as i64)
        }
        TargetOutput::Mfv(v) => SignalKey::one(problem, *v),
        TargetOutput::Mst(m) => SignalKey::two(problem, bucket(m.total_weight), m.nodes as i64),
        TargetOutput::Js(scores) | TargetOutput::Aa(scores) => {
            let best = scores.iter().map(|p| p.score).fold(None, |acc: Option<f64>, s| {
                Some(acc.map_or(s, |a| a.max(s)))
            });
            SignalKey::one(problem, best.map_or(0, quantize))
        }
        TargetOutput::Mm(pairs) => SignalKey::one(problem, pairs.len() as i64),
        TargetOutput::Hc(scores) => {
            let mut lo = [f64::INFINITY; 2];
            for &s in scores {
                if s < lo[0] {
                    lo = [s, lo[0]];
                } else if s < lo[1] {
                    lo[1] = s;
                }
            }
            let d = if scores.len() < 2 { 0 } else { quantize(lo[1] - lo[0]) };
            SignalKey::one(problem, d)
        }
    }
}

// ---------------------------------------------------------------------------
// Probe coverage
// ---------------------------------------------------------------------------

pub type ProbeId = u16;

/// Per-execution probe hit counts. Counters saturate at `u16::MAX`.
///
/// The counts live in a dense 64K table; the list of touched ids keeps
/// clearing and scanning proportional to the probes actually hit.
#[derive(Clone)]
pub struct ProbeMap {
    counts: Box<[u16]>,
    touched: Vec<ProbeId>,
}

pub const PROBE_SATURATION: u16 = u16::MAX;

impl Default for ProbeMap {
    fn default() -> Self {
        Self::new()
    }
}

impl ProbeMap {
    pub fn new() -> Self {
        Self {
            counts: vec![0u16; 1 << 16].into_boxed_slice(),
            touched: Vec::new(),
        }
    }

    #[inline]
    pub fn record(&mut self, id: ProbeId) {
        let c = &mut self.counts[id as usize];
        if *c == 0 {
            self.touched.push(id);
        }
        *c = c.saturating_add(1);
    }

    pub fn count(&self, id: ProbeId) -> u16 {
        self.counts[id as usize]
    }

    pub fn clear(&mut self) {
        for id in self.touched.drain(..) {
            self.counts[id as usize] = 0;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.touched.is_empty()
    }

    /// `(probe id, hit count)` for every probe hit, ascending by id.
    pub fn hits(&self) -> Vec<(ProbeId, u16)> {
        let mut ids = self.touched.clone();
        ids.sort_unstable();
        ids.into_iter().map(|id| (id, self.counts[id as usize])).collect()
    }
}

impl fmt::Debug for ProbeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.hits()).finish()
    }
}

/// Which `(probe, bucket)` pairs the campaign has already seen: one bit per
/// hit-count bucket for every probe id.
#[derive(Clone)]
pub struct CoverageMap {
    seen: Box<[u16]>,
}

impl Default for CoverageMap {
    fn default() -> Self {
        Self::new()
    }
}

impl CoverageMap {
    pub fn new() -> Self {
        Self {
            seen: vec![0u16; 1 << 16].into_boxed_slice(),
        }
    }

    /// Pairs in `probes` that have not been seen yet.
    pub fn novel_pairs(&self, probes: &ProbeMap) -> ProbeSet {
        let mut out: Vec<(ProbeId, u8)> = probes
            .touched
            .iter()
            .filter_map(|&id| {
                let b = bucket(probes.counts[id as usize] as i64) as u8;
                (self.seen[id as usize] & (1 << b) == 0).then_some((id, b))
            })
            .collect();
        out.sort_unstable();
        ProbeSet(out)
    }

    pub fn mark(&mut self, pairs: &ProbeSet) {
        for &(id, b) in &pairs.0 {
            self.seen[id as usize] |= 1 << b;
        }
    }

    pub fn distinct_pairs(&self) -> usize {
        self.seen.iter().map(|m| m.count_ones() as usize).sum()
    }
}

// ---------------------------------------------------------------------------
// Novelty
// ---------------------------------------------------------------------------

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FeedbackError {
    #[error("feedback mode {0} requires an output signal")]
    MissingSignal(FeedbackMode),
    #[error("feedback mode {0} requires a probe map")]
    MissingProbes(FeedbackMode),
}

/// Decides whether an execution of implementation A deserves a corpus slot
/// and, if so, returns the key it would be stored under.
pub fn is_interesting(
    mode: FeedbackMode,
    sig: Option<&SignalKey>,
    probes: Option<&ProbeMap>,
    corpus: &Corpus,
) -> Result<Option<NoveltyKey>, FeedbackError> {
    let need_sig = || sig.copied().ok_or(FeedbackError::MissingSignal(mode));
    let need_probes = || probes.ok_or(FeedbackError::MissingProbes(mode));
    Ok(match mode {
        FeedbackMode::None => None,
        FeedbackMode::Algo => {
            let sig = need_sig()?;
            (!corpus.has_signal(&sig)).then_some(NoveltyKey::AlgoSignal(sig))
        }
        FeedbackMode::Cov => {
            let fresh = corpus.coverage().novel_pairs(need_probes()?);
            (!fresh.is_empty()).then_some(NoveltyKey::ProbeCoverage(fresh))
        }
        FeedbackMode::Combo => {
            let sig = need_sig()?;
            let fresh = corpus.coverage().novel_pairs(need_probes()?);
            (!corpus.has_signal(&sig) || !fresh.is_empty())
                .then_some(NoveltyKey::ComboKey(sig, fresh))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::targets::MstOut;

    #[test]
    fn bucket_table() {
        assert_eq!(bucket(0), 0);
        assert_eq!(bucket(37), 7);
        assert_eq!(bucket(-9), -5);
        let table = [(1, 1), (2, 2), (3, 3), (4, 4), (7, 4), (8, 5), (15, 5), (16, 6), (31, 6), (32, 7), (127, 7), (128, 8), (i64::MAX, 8)];
        for (x, b) in table {
            assert_eq!(bucket(x), b, "{x}");
        }
        assert_eq!(bucket(i64::MIN), -8);
    }

    #[test]
    fn signal_examples() {
        let scc = TargetOutput::Scc(vec![vec![0, 1], vec![2]]);
        assert_eq!(extract_signal(ProblemId::Scc, &scc).values, [2, 2]);

        let hc = TargetOutput::Hc(vec![1.5, 2.0, 2.0]);
        assert_eq!(extract_signal(ProblemId::Hc, &hc).values, [500, 0]);

        let mst = TargetOutput::Mst(MstOut {
            edges: vec![],
            total_weight: 37,
            nodes: 5,
        });
        assert_eq!(extract_signal(ProblemId::Mst, &mst).values, [7, 5]);
    }

    #[test]
    fn signal_edge_conventions() {
        assert_eq!(extract_signal(ProblemId::Scc, &TargetOutput::Scc(vec![])).values, [0, 0]);
        assert_eq!(extract_signal(ProblemId::Bcc, &TargetOutput::Bcc(vec![])).values, [0, 0]);
        assert_eq!(extract_signal(ProblemId::Hc, &TargetOutput::Hc(vec![0.0])).values, [0, 0]);
        assert_eq!(extract_signal(ProblemId::Js, &TargetOutput::Js(vec![])).values, [0, 0]);
        assert_eq!(extract_signal(ProblemId::Mm, &TargetOutput::Mm(vec![(0, 1), (2, 3)])).values, [2, 0]);
        let un = extract_signal(ProblemId::Spf, &TargetOutput::Spf(SpfOut::Unreachable));
        let neg = extract_signal(ProblemId::Spf, &TargetOutput::Spf(SpfOut::NegativeCycle));
        let len = extract_signal(ProblemId::Spf, &TargetOutput::Spf(SpfOut::Length(-1)));
        assert_eq!(un.values[0], SPF_UNREACHABLE);
        assert_eq!(neg.values[0], SPF_NEGATIVE_CYCLE);
        assert_ne!(un, len);
    }

    #[test]
    fn probe_map_counts_and_clears() {
        let mut pm = ProbeMap::new();
        pm.record(7);
        assert_eq!(pm.hits(), vec![(7, 1)]);
        pm.record(7);
        pm.record(7);
        assert_eq!(pm.hits(), vec![(7, 3)]);
        pm.clear();
        assert!(pm.is_empty());
        assert_eq!(pm.count(7), 0);
        for _ in 0..70_000 {
            pm.record(1);
        }
        assert_eq!(pm.count(1), PROBE_SATURATION);
    }

    #[test]
    fn none_mode_never_interesting() {
        let corpus = Corpus::with_seeds(vec![Graph::single_vertex(false)]);
        assert_eq!(is_interesting(FeedbackMode::None, None, None, &corpus), Ok(None));
    }

    #[test]
    fn algo_mode_dedups() {
        let mut corpus = Corpus::with_seeds(vec![Graph::single_vertex(true)]);
        let sig = extract_signal(ProblemId::Scc, &TargetOutput::Scc(vec![vec![0, 1], vec![2]]));
        let key = is_interesting(FeedbackMode::Algo, Some(&sig), None, &corpus).unwrap().unwrap();
        assert!(corpus.add_if_novel(Graph::single_vertex(true), key, 1));
        assert_eq!(is_interesting(FeedbackMode::Algo, Some(&sig), None, &corpus), Ok(None));
    }

    #[test]
    fn combo_fires_on_new_probe_with_stale_signal() {
        let mut corpus = Corpus::with_seeds(vec![Graph::single_vertex(true)]);
        let sig = SignalKey::one(ProblemId::Mfv, 3);
        let mut pm = ProbeMap::new();
        pm.record(1);
        let key = is_interesting(FeedbackMode::Combo, Some(&sig), Some(&pm), &corpus).unwrap().unwrap();
        assert!(corpus.add_if_novel(Graph::single_vertex(true), key, 1));
        // Same signal, same probes: stale.
        assert_eq!(is_interesting(FeedbackMode::Combo, Some(&sig), Some(&pm), &corpus), Ok(None));
        // Same signal, new probe.
        pm.record(2);
        assert!(matches!(
            is_interesting(FeedbackMode::Combo, Some(&sig), Some(&pm), &corpus),
            Ok(Some(NoveltyKey::ComboKey(..)))
        ));
        // Same probe id but a higher hit-count bucket is also new coverage.
        pm.clear();
        pm.record(1);
        pm.record(1);
        let k = is_interesting(FeedbackMode::Cov, None, Some(&pm), &corpus).unwrap();
        assert_eq!(k, Some(NoveltyKey::ProbeCoverage(ProbeSet(vec![(1, 2)]))));
    }

    #[test]
    fn missing_inputs_are_errors() {
        let corpus = Corpus::with_seeds(vec![Graph::single_vertex(true)]);
        assert_eq!(
            is_interesting(FeedbackMode::Algo, None, None, &corpus),
            Err(FeedbackError::MissingSignal(FeedbackMode::Algo))
        );
        assert_eq!(
            is_interesting(FeedbackMode::Cov, None, None, &corpus),
            Err(FeedbackError::MissingProbes(FeedbackMode::Cov))
        );
    }
}

//! Corpus storage and scheduling: uniform seed choice, constant energy, and
//! append-only insertion keyed by novelty.

use std::collections::HashSet;

use thiserror::Error;

use crate::feedback::{CoverageMap, ProbeId, SignalKey};
use crate::graph::Graph;
use crate::rng::FuzzRng;

/// Default number of mutants generated per scheduled seed.
pub const DEFAULT_ENERGY: u64 = 100;

/// Sorted `(probe id, hit-count bucket)` pairs first observed by one input.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ProbeSet(pub Vec<(ProbeId, u8)>);

impl ProbeSet {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NoveltyKey {
    /// Initial seeds are keyed by load position so duplicates survive.
    SeedOrigin(usize),
    AlgoSignal(SignalKey),
    ProbeCoverage(ProbeSet),
    ComboKey(SignalKey, ProbeSet),
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub graph: Graph,
    pub key: NoveltyKey,
    pub discovered_at: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("corpus is empty")]
    EmptyCorpus,
}

#[derive(Clone, Default)]
pub struct Corpus {
    entries: Vec<CorpusEntry>,
    seen_keys: HashSet<NoveltyKey>,
    seen_signals: HashSet<SignalKey>,
    coverage: CoverageMap,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_seeds(seeds: impl IntoIterator<Item = Graph>) -> Self {
        let mut c = Self::new();
        for g in seeds {
            c.add_seed(g);
        }
        c
    }

    pub fn add_seed(&mut self, g: Graph) {
        let key = NoveltyKey::SeedOrigin(self.entries.len());
        self.add_if_novel(g, key, 0);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CorpusEntry] {
        &self.entries
    }

    pub fn has_signal(&self, sig: &SignalKey) -> bool {
        self.seen_signals.contains(sig)
    }

    pub fn coverage(&self) -> &CoverageMap {
        &self.coverage
    }

    /// Uniform draw over the entries; the corpus itself is untouched.
    pub fn choose_next(&self, rng: &mut FuzzRng) -> Result<&Graph, CorpusError> {
        if self.entries.is_empty() {
            return Err(CorpusError::EmptyCorpus);
        }
        Ok(&self.entries[rng.below(self.entries.len())].graph)
    }

    /// Appends `g` unless `key` was seen before. Signal and coverage parts of
    /// the key are folded into the corpus-wide seen sets.
    pub fn add_if_novel(&mut self, g: Graph, key: NoveltyKey, discovered_at: u64) -> bool {
        if self.seen_keys.contains(&key) {
            return false;
        }
        match &key {
            NoveltyKey::SeedOrigin(_) => {}
            NoveltyKey::AlgoSignal(sig) => {
                self.seen_signals.insert(*sig);
            }
            NoveltyKey::ProbeCoverage(pairs) => self.coverage.mark(pairs),
            NoveltyKey::ComboKey(sig, pairs) => {
                self.seen_signals.insert(*sig);
                self.coverage.mark(pairs);
            }
        }
        self.seen_keys.insert(key.clone());
        self.entries.push(CorpusEntry {
            graph: g,
            key,
            discovered_at,
        });
        true
    }
}

/// Constant, configurable energy.
pub fn assign_energy(_g: &Graph, config_energy: u64) -> u64 {
    config_energy
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use crate::targets::ProblemId;

    fn sig(v: i64) -> SignalKey {
        SignalKey {
            problem: ProblemId::Mfv,
            values: [v, 0],
        }
    }

    fn graphs(k: usize) -> Vec<Graph> {
        (1..=k).map(|n| Graph::new(false, n)).collect()
    }

    #[test]
    fn singleton_always_chosen() {
        let c = Corpus::with_seeds(graphs(1));
        let mut rng = FuzzRng::new(3);
        for _ in 0..100 {
            assert_eq!(c.choose_next(&mut rng).unwrap().num_vertices(), 1);
        }
    }

    #[test]
    fn empty_corpus_errors() {
        let c = Corpus::new();
        assert_eq!(c.choose_next(&mut FuzzRng::new(0)).unwrap_err(), CorpusError::EmptyCorpus);
    }

    #[test]
    fn choose_next_is_uniform() {
        let c = Corpus::with_seeds(graphs(4));
        let mut rng = FuzzRng::new(99);
        let mut freq = [0usize; 4];
        let draws = 100_000;
        for _ in 0..draws {
            freq[c.choose_next(&mut rng).unwrap().num_vertices() - 1] += 1;
        }
        for f in freq {
            let p = f as f64 / draws as f64;
            assert!((0.24..=0.26).contains(&p), "{p}");
        }
    }

    #[test]
    fn choose_next_replays() {
        let c = Corpus::with_seeds(graphs(5));
        let seq = |seed| {
            let mut rng = FuzzRng::new(seed);
            (0..200)
                .map(|_| c.choose_next(&mut rng).unwrap().num_vertices())
                .collect::<Vec<_>>()
        };
        assert_eq!(seq(17), seq(17));
    }

    #[test]
    fn energy_is_constant() {
        let g = Graph::from_edges(false, 3, [Edge::new(0, 1, 1)]).unwrap();
        assert_eq!(assign_energy(&g, 100), 100);
        assert_eq!(assign_energy(&Graph::single_vertex(false), 1), 1);
        assert_eq!(assign_energy(&g, 64), 64);
    }

    #[test]
    fn add_if_novel_dedups() {
        let mut c = Corpus::with_seeds(graphs(1));
        assert!(c.add_if_novel(Graph::new(false, 2), NoveltyKey::AlgoSignal(sig(1)), 1));
        assert_eq!(c.len(), 2);
        assert!(!c.add_if_novel(Graph::new(false, 3), NoveltyKey::AlgoSignal(sig(1)), 2));
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn thousand_adds_hundred_keys() {
        let mut c = Corpus::with_seeds(graphs(3));
        for i in 0..1000 {
            c.add_if_novel(Graph::single_vertex(false), NoveltyKey::AlgoSignal(sig(i % 100)), i as u64);
        }
        assert_eq!(c.len(), 3 + 100);
        assert_eq!(c.seen_keys.len(), c.entries.len());
    }

    #[test]
    fn duplicate_seeds_are_kept() {
        let c = Corpus::with_seeds(vec![Graph::single_vertex(false); 3]);
        assert_eq!(c.len(), 3);
    }
}

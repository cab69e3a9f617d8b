//! The differential fuzzing loop.
//!
//! A campaign repeatedly picks a corpus entry, derives `energy` stacked
//! mutants from it, runs both implementations on each mutant and classifies
//! the pair of outcomes. Inputs that expose something new under the active
//! feedback mode join the corpus.

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::adapter::{encode_output, AdapterError, RemoteTarget};
use crate::corpus::{assign_energy, Corpus, DEFAULT_ENERGY};
use crate::feedback::{extract_signal, is_interesting, FeedbackMode, ProbeMap, SignalKey};
use crate::graph::{parse, serialize, validate, EndpointPair, Graph, GraphProfile};
use crate::mutants::Implementation;
use crate::mutation::{stacked_mutate, DEFAULT_MAX_STACK};
use crate::rng::FuzzRng;
use crate::targets::{compare_outputs, execute_fn, Comparison, ExecOutcome, ImplId, ProblemId, TargetInput};

pub const DEFAULT_EXEC_BUDGET_MS: u64 = 5000;

/// Corpus size is sampled once per this many executions.
pub const CORPUS_SAMPLE_INTERVAL: u64 = 1000;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("cannot load seed {}: {reason}", path.display())]
    SeedLoad { path: PathBuf, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Adapter(#[from] AdapterError),
    #[error("{0}")]
    Internal(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub problem: ProblemId,
    pub impl_a: Implementation,
    pub impl_b: ImplId,
    /// Command line of an external adapter that stands in for `impl_b`.
    #[serde(default)]
    pub remote_b: Option<Vec<String>>,
    pub mode: FeedbackMode,
    pub energy: u64,
    pub max_stack: usize,
    pub time_limit_ms: Option<u64>,
    pub exec_limit: Option<u64>,
    pub rng_seed: u64,
    pub exec_budget_ms: u64,
    pub seed_corpus_path: Option<PathBuf>,
    pub out_path: Option<PathBuf>,
    #[serde(default)]
    pub stop_on_first_bug: bool,
}

impl CampaignConfig {
    /// Default pair, algo feedback, no stop condition yet.
    pub fn new(problem: ProblemId) -> Self {
        let (a, b) = problem.default_pair();
        Self {
            problem,
            impl_a: a.into(),
            impl_b: b,
            remote_b: None,
            mode: FeedbackMode::Algo,
            energy: DEFAULT_ENERGY,
            max_stack: DEFAULT_MAX_STACK,
            time_limit_ms: None,
            exec_limit: None,
            rng_seed: 0,
            exec_budget_ms: DEFAULT_EXEC_BUDGET_MS,
            seed_corpus_path: None,
            out_path: None,
            stop_on_first_bug: false,
        }
    }

    /// Mutant against the other member of its problem's default pair.
    pub fn for_mutant(m: crate::mutants::MutantId) -> Self {
        let mut cfg = Self::new(m.problem());
        cfg.impl_a = m.into();
        cfg.impl_b = m.reference();
        cfg
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let bad = |msg: String| Err(EngineError::ConfigInvalid(msg));
        if self.impl_a.problem() != self.problem {
            return bad(format!("{} does not solve {}", self.impl_a, self.problem));
        }
        if self.impl_b.problem() != self.problem {
            return bad(format!("{} does not solve {}", self.impl_b, self.problem));
        }
        if self.remote_b.is_none() && self.impl_a == Implementation::Builtin(self.impl_b) {
            return bad(format!("both sides run {}", self.impl_b));
        }
        if self.remote_b.as_ref().is_some_and(|c| c.is_empty()) {
            return bad("empty adapter command".into());
        }
        if self.energy == 0 || self.max_stack == 0 || self.exec_budget_ms == 0 {
            return bad("energy, max stack and exec budget must be positive".into());
        }
        if self.time_limit_ms.is_none() && self.exec_limit.is_none() {
            return bad("a time limit or an exec limit is required".into());
        }
        Ok(())
    }

    pub fn profile(&self) -> GraphProfile {
        self.problem.profile_for(&[self.impl_a.base(), self.impl_b])
    }
}

// ---------------------------------------------------------------------------
// Targets
// ---------------------------------------------------------------------------

/// One side of the differential comparison.
pub trait Target {
    fn label(&self) -> String;
    fn execute(&mut self, input: &TargetInput, probes: Option<&mut ProbeMap>, budget: Duration) -> ExecOutcome;
    fn restarts(&self) -> u64 {
        0
    }
}

impl Target for Implementation {
    fn label(&self) -> String {
        self.name().to_string()
    }

    fn execute(&mut self, input: &TargetInput, probes: Option<&mut ProbeMap>, budget: Duration) -> ExecOutcome {
        execute_fn(self.function(), input, probes, budget)
    }
}

/// External adapters report no probes.
impl Target for RemoteTarget {
    fn label(&self) -> String {
        "adapter".to_string()
    }

    fn execute(&mut self, input: &TargetInput, _probes: Option<&mut ProbeMap>, budget: Duration) -> ExecOutcome {
        RemoteTarget::execute(self, input, budget)
    }

    fn restarts(&self) -> u64 {
        RemoteTarget::restarts(self)
    }
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BugKind {
    Crash,
    Hang,
    Discrepancy,
}

impl BugKind {
    pub fn name(self) -> &'static str {
        match self {
            BugKind::Crash => "crash",
            BugKind::Hang => "hang",
            BugKind::Discrepancy => "discrepancy",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    NoBug,
    Bug { kind: BugKind, detail: String },
}

/// Crash beats hang beats discrepancy.
pub fn classify(problem: ProblemId, input: &TargetInput, a: &ExecOutcome, b: &ExecOutcome) -> Verdict {
    let bug = |kind, detail: String| Verdict::Bug { kind, detail };
    match (a, b) {
        (ExecOutcome::Crash(m), _) => bug(BugKind::Crash, format!("A crashed: {m}")),
        (_, ExecOutcome::Crash(m)) => bug(BugKind::Crash, format!("B crashed: {m}")),
        (ExecOutcome::Hang, _) => bug(BugKind::Hang, "A exceeded its budget".into()),
        (_, ExecOutcome::Hang) => bug(BugKind::Hang, "B exceeded its budget".into()),
        (ExecOutcome::Output(x), ExecOutcome::Output(y)) => match compare_outputs(problem, input, x, y) {
            Ok(Comparison::Equal) => Verdict::NoBug,
            Ok(Comparison::Different(d)) => bug(BugKind::Discrepancy, d),
            Err(e) => bug(BugKind::Discrepancy, e.to_string()),
        },
    }
}

pub fn describe_outcome(o: &ExecOutcome) -> String {
    match o {
        ExecOutcome::Output(out) => encode_output(out),
        ExecOutcome::Crash(m) => format!("crash: {m}"),
        ExecOutcome::Hang => "hang".to_string(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReplayResult {
    pub endpoints: EndpointPair,
    pub outcome_a: ExecOutcome,
    pub outcome_b: ExecOutcome,
    pub verdict: Verdict,
}

/// Runs both implementations once on `g` and classifies the result.
pub fn replay(
    problem: ProblemId,
    mut a: Implementation,
    mut b: Implementation,
    g: Graph,
    budget: Duration,
) -> Result<ReplayResult, EngineError> {
    for imp in [a, b] {
        if imp.problem() != problem {
            return Err(EngineError::ConfigInvalid(format!("{imp} does not solve {problem}")));
        }
    }
    let profile = problem.profile_for(&[a.base(), b.base()]);
    if let Some(v) = validate(&g, &profile).first() {
        return Err(EngineError::ConfigInvalid(format!("graph violates the {problem} profile: {v}")));
    }
    let input = TargetInput::new(g).map_err(|e| EngineError::ConfigInvalid(e.to_string()))?;
    let outcome_a = a.execute(&input, None, budget);
    let outcome_b = b.execute(&input, None, budget);
    let verdict = classify(problem, &input, &outcome_a, &outcome_b);
    Ok(ReplayResult {
        endpoints: input.endpoints,
        outcome_a,
        outcome_b,
        verdict,
    })
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndedBy {
    TimeLimit,
    ExecLimit,
    FirstBug,
    Abort,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BugRecord {
    pub kind: BugKind,
    #[serde(with = "graph_text")]
    pub graph: Graph,
    pub endpoints: EndpointPair,
    pub output_a: String,
    pub output_b: String,
    pub detail: String,
    pub exec: u64,
    pub t_ms: u64,
    pub graph_file: Option<String>,
}

mod graph_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::graph::{self, Graph};

    pub fn serialize<S: Serializer>(g: &Graph, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&graph::serialize(g))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Graph, D::Error> {
        let text = String::deserialize(d)?;
        graph::parse(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub total_execs: u64,
    pub elapsed_ms: u64,
    pub execs_per_second: f64,
    pub initial_corpus_size: usize,
    pub final_corpus_size: usize,
    /// `(t_ms, size)` samples.
    pub corpus_sizes: Vec<(u64, usize)>,
    pub bugs: Vec<BugRecord>,
    pub ended_by: EndedBy,
    /// Digest of every generated graph, in order.
    pub graph_sequence_sha256: String,
    /// Digest of the final corpus, in insertion order.
    pub corpus_sha256: String,
    pub adapter_restarts: u64,
}

impl CampaignReport {
    pub fn corpus_growth(&self) -> usize {
        self.final_corpus_size - self.initial_corpus_size
    }

    pub fn first_bug(&self, kind: Option<BugKind>) -> Option<&BugRecord> {
        self.bugs.iter().find(|b| kind.is_none_or(|k| b.kind == k))
    }

    /// Digest over everything that must not depend on wall-clock time.
    pub fn replay_digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.total_execs.to_le_bytes());
        h.update(self.graph_sequence_sha256.as_bytes());
        h.update(self.corpus_sha256.as_bytes());
        for (_, size) in &self.corpus_sizes {
            h.update((*size as u64).to_le_bytes());
        }
        for b in &self.bugs {
            h.update(b.kind.name());
            h.update(b.exec.to_le_bytes());
            h.update(serialize(&b.graph));
            h.update(&b.output_a);
            h.update(&b.output_b);
        }
        hex(&h.finalize())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn hash_graph(h: &mut Sha256, g: &Graph) {
    h.update([g.directed() as u8]);
    h.update((g.num_vertices() as u64).to_le_bytes());
    h.update((g.num_edges() as u64).to_le_bytes());
    for e in g.edges() {
        h.update(e.u.to_le_bytes());
        h.update(e.v.to_le_bytes());
        h.update(e.w.to_le_bytes());
    }
}

// ---------------------------------------------------------------------------
// Seeds and output directory
// ---------------------------------------------------------------------------

/// Every `*.graph` file of `dir` in lexicographic file-name order, each
/// checked against `profile`.
pub fn load_seed_dir(dir: &Path, profile: &GraphProfile) -> Result<Vec<Graph>, EngineError> {
    let err = |path: &Path, reason: String| EngineError::SeedLoad {
        path: path.to_path_buf(),
        reason,
    };
    let entries = fs::read_dir(dir).map_err(|e| err(dir, e.to_string()))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| err(dir, e.to_string()))?.path();
        if path.is_file() && path.extension().is_some_and(|x| x == "graph") {
            paths.push(path);
        }
    }
    paths.sort();
    let mut graphs = Vec::with_capacity(paths.len());
    for path in paths {
        let text = fs::read_to_string(&path).map_err(|e| err(&path, e.to_string()))?;
        let g = parse(&text).map_err(|e| err(&path, e.to_string()))?;
        if let Some(v) = validate(&g, profile).first() {
            return Err(err(&path, format!("profile violation: {v}")));
        }
        graphs.push(g);
    }
    Ok(graphs)
}

struct OutDir {
    root: PathBuf,
    corpus_written: usize,
    bug_counts: [usize; 3],
    log: BufWriter<File>,
}

impl OutDir {
    fn create(root: &Path) -> io::Result<Self> {
        fs::create_dir_all(root.join("bugs"))?;
        fs::create_dir_all(root.join("corpus"))?;
        Ok(Self {
            root: root.to_path_buf(),
            corpus_written: 0,
            bug_counts: [0; 3],
            log: BufWriter::new(File::create(root.join("campaign.log"))?),
        })
    }

    fn sync_corpus(&mut self, corpus: &Corpus) -> io::Result<()> {
        for (i, e) in corpus.entries().iter().enumerate().skip(self.corpus_written) {
            fs::write(self.root.join("corpus").join(format!("{i:06}.graph")), serialize(&e.graph))?;
        }
        self.corpus_written = corpus.len();
        Ok(())
    }

    fn write_bug(&mut self, kind: BugKind, g: &Graph) -> io::Result<String> {
        let n = &mut self.bug_counts[kind as usize];
        let rel = format!("bugs/{}-{:03}.graph", kind.name(), *n);
        *n += 1;
        fs::write(self.root.join(&rel), serialize(g))?;
        Ok(rel)
    }

    fn log(&mut self, line: std::fmt::Arguments<'_>) -> io::Result<()> {
        writeln!(self.log, "{line}")
    }
}

// ---------------------------------------------------------------------------
// The loop
// ---------------------------------------------------------------------------

/// Steps of the main loop, reported to an [`Observer`] in execution order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    ChooseNext,
    AssignEnergy(u64),
    Mutate,
    RunA,
    RunB,
    Bug(BugKind),
    Compare,
    IsInteresting,
    AddToCorpus,
}

pub trait Observer {
    fn step(&mut self, exec: u64, step: &Step);
}

pub struct Campaign {
    cfg: CampaignConfig,
    profile: GraphProfile,
    a: Box<dyn Target + Send>,
    b: Box<dyn Target + Send>,
    corpus: Corpus,
    abort: Arc<AtomicBool>,
    observer: Option<Box<dyn Observer + Send>>,
}

impl Campaign {
    pub fn new(cfg: CampaignConfig) -> Result<Self, EngineError> {
        cfg.validate()?;
        let b: Box<dyn Target + Send> = match &cfg.remote_b {
            Some(cmd) => Box::new(RemoteTarget::spawn(cmd.clone(), cfg.problem)?),
            None => Box::new(Implementation::Builtin(cfg.impl_b)),
        };
        let a = Box::new(cfg.impl_a);
        Self::with_targets(cfg, a, b)
    }

    /// Uses the given targets in place of the configured implementations.
    pub fn with_targets(
        cfg: CampaignConfig,
        a: Box<dyn Target + Send>,
        b: Box<dyn Target + Send>,
    ) -> Result<Self, EngineError> {
        cfg.validate()?;
        let profile = cfg.profile();
        let seeds = match &cfg.seed_corpus_path {
            Some(dir) => load_seed_dir(dir, &profile)?,
            None => Vec::new(),
        };
        let corpus = if seeds.is_empty() {
            Corpus::with_seeds([Graph::single_vertex(profile.directed)])
        } else {
            Corpus::with_seeds(seeds)
        };
        Ok(Self {
            cfg,
            profile,
            a,
            b,
            corpus,
            abort: Arc::new(AtomicBool::new(false)),
            observer: None,
        })
    }

    /// Setting the flag ends the campaign before its next execution.
    pub fn abort_handle(&self) -> Arc<AtomicBool> {
        self.abort.clone()
    }

    pub fn set_observer(&mut self, o: Box<dyn Observer + Send>) {
        self.observer = Some(o);
    }

    pub fn corpus(&self) -> &Corpus {
        &self.corpus
    }

    pub fn config(&self) -> &CampaignConfig {
        &self.cfg
    }

    pub fn run(&mut self) -> Result<CampaignReport, EngineError> {
        let cfg = self.cfg.clone();
        let start = Instant::now();
        let budget = Duration::from_millis(cfg.exec_budget_ms);
        let mut out = match &cfg.out_path {
            Some(dir) => Some(OutDir::create(dir)?),
            None => None,
        };
        if let Some(o) = out.as_mut() {
            o.sync_corpus(&self.corpus)?;
            o.log(format_args!(
                "t_ms=0 event=start problem={} a={} b={} mode={} seeds={}",
                cfg.problem,
                self.a.label(),
                self.b.label(),
                cfg.mode,
                self.corpus.len()
            ))?;
        }

        let mut rng = FuzzRng::new(cfg.rng_seed);
        let mut probes = cfg.mode.needs_probes().then(ProbeMap::new);
        let mut seq_hash = Sha256::new();
        let mut seen_pairs: HashSet<(SignalKey, SignalKey)> = HashSet::new();
        let mut bugs = Vec::new();
        let initial = self.corpus.len();
        let mut sizes = vec![(0, initial)];
        let mut execs = 0u64;
        let ms = |start: Instant| start.elapsed().as_millis() as u64;

        let ended_by = 'campaign: loop {
            self.notify(execs, Step::ChooseNext);
            let seed = self
                .corpus
                .choose_next(&mut rng)
                .map_err(|e| EngineError::Internal(e.to_string()))?
                .clone();
            let energy = assign_energy(&seed, cfg.energy);
            self.notify(execs, Step::AssignEnergy(energy));
            for _ in 0..energy {
                if let Some(reason) = self.stop_reason(execs, start) {
                    break 'campaign reason;
                }
                let corpus = &self.corpus;
                let g = stacked_mutate(
                    &seed,
                    |r| corpus.choose_next(r).expect("corpus is never empty"),
                    &self.profile,
                    &mut rng,
                    cfg.max_stack,
                );
                execs += 1;
                self.notify(execs, Step::Mutate);
                hash_graph(&mut seq_hash, &g);
                let input = TargetInput::new(g).map_err(|e| EngineError::Internal(e.to_string()))?;

                if let Some(p) = probes.as_mut() {
                    p.clear();
                }
                let out_a = self.a.execute(&input, probes.as_mut(), budget);
                self.notify(execs, Step::RunA);
                let out_b = self.b.execute(&input, None, budget);
                self.notify(execs, Step::RunB);

                match classify(cfg.problem, &input, &out_a, &out_b) {
                    Verdict::Bug { kind, detail } => {
                        self.notify(execs, Step::Bug(kind));
                        // Crashes and hangs are all kept; discrepancies once per signal pair.
                        let fresh = match (kind, &out_a, &out_b) {
                            (BugKind::Discrepancy, ExecOutcome::Output(x), ExecOutcome::Output(y)) => {
                                seen_pairs.insert((extract_signal(cfg.problem, x), extract_signal(cfg.problem, y)))
                            }
                            _ => true,
                        };
                        if !fresh {
                            continue;
                        }
                        let t_ms = ms(start);
                        let graph_file = match out.as_mut() {
                            Some(o) => {
                                let rel = o.write_bug(kind, &input.graph)?;
                                o.log(format_args!("t_ms={t_ms} exec={execs} event=bug kind={} file={rel}", kind.name()))?;
                                Some(rel)
                            }
                            None => None,
                        };
                        bugs.push(BugRecord {
                            kind,
                            endpoints: input.endpoints,
                            output_a: describe_outcome(&out_a),
                            output_b: describe_outcome(&out_b),
                            detail,
                            exec: execs,
                            t_ms,
                            graph_file,
                            graph: input.graph,
                        });
                        if cfg.stop_on_first_bug {
                            break 'campaign EndedBy::FirstBug;
                        }
                    }
                    Verdict::NoBug => {
                        self.notify(execs, Step::Compare);
                        if cfg.mode != FeedbackMode::None {
                            let ExecOutcome::Output(oa) = &out_a else {
                                unreachable!("classified as no bug")
                            };
                            self.notify(execs, Step::IsInteresting);
                            let sig = cfg.mode.needs_signal().then(|| extract_signal(cfg.problem, oa));
                            let key = is_interesting(cfg.mode, sig.as_ref(), probes.as_ref(), &self.corpus)
                                .map_err(|e| EngineError::Internal(e.to_string()))?;
                            if let Some(key) = key {
                                if self.corpus.add_if_novel(input.graph, key, execs) {
                                    self.notify(execs, Step::AddToCorpus);
                                    if let Some(o) = out.as_mut() {
                                        o.sync_corpus(&self.corpus)?;
                                    }
                                }
                            }
                        }
                    }
                }
                if execs.is_multiple_of(CORPUS_SAMPLE_INTERVAL) {
                    sizes.push((ms(start), self.corpus.len()));
                }
            }
        };

        let elapsed = start.elapsed();
        let elapsed_ms = elapsed.as_millis() as u64;
        if sizes.last().map(|&(_, s)| s) != Some(self.corpus.len()) || !execs.is_multiple_of(CORPUS_SAMPLE_INTERVAL) {
            sizes.push((elapsed_ms, self.corpus.len()));
        }
        let mut corpus_hash = Sha256::new();
        for e in self.corpus.entries() {
            hash_graph(&mut corpus_hash, &e.graph);
        }
        let report = CampaignReport {
            config: cfg.clone(),
            total_execs: execs,
            elapsed_ms,
            execs_per_second: execs as f64 / elapsed.as_secs_f64().max(1e-9),
            initial_corpus_size: initial,
            final_corpus_size: self.corpus.len(),
            corpus_sizes: sizes,
            bugs,
            ended_by,
            graph_sequence_sha256: hex(&seq_hash.finalize()),
            corpus_sha256: hex(&corpus_hash.finalize()),
            adapter_restarts: self.a.restarts() + self.b.restarts(),
        };
        if let Some(o) = out.as_mut() {
            o.log(format_args!(
                "t_ms={elapsed_ms} exec={execs} event=end ended_by={:?} corpus={} bugs={}",
                ended_by,
                report.final_corpus_size,
                report.bugs.len()
            ))?;
            o.log.flush()?;
            fs::write(o.root.join("report.json"), report.to_json())?;
        }
        Ok(report)
    }

    fn stop_reason(&self, execs: u64, start: Instant) -> Option<EndedBy> {
        if self.abort.load(Ordering::Relaxed) {
            return Some(EndedBy::Abort);
        }
        if self.cfg.exec_limit.is_some_and(|l| execs >= l) {
            return Some(EndedBy::ExecLimit);
        }
        if self.cfg.time_limit_ms.is_some_and(|l| start.elapsed() >= Duration::from_millis(l)) {
            return Some(EndedBy::TimeLimit);
        }
        None
    }

    fn notify(&mut self, exec: u64, step: Step) {
        if let Some(o) = self.observer.as_mut() {
            o.step(exec, &step);
        }
    }
}

/// Builds and runs a campaign in one call.
pub fn run_campaign(cfg: CampaignConfig) -> Result<CampaignReport, EngineError> {
    Campaign::new(cfg)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutants::MutantId;
    use crate::targets::TargetOutput;

    fn quick(problem: ProblemId, execs: u64) -> CampaignConfig {
        let mut cfg = CampaignConfig::new(problem);
        cfg.exec_limit = Some(execs);
        cfg
    }

    #[test]
    fn validation() {
        let mut cfg = CampaignConfig::new(ProblemId::Spf);
        assert!(cfg.validate().is_err(), "no stop condition");
        cfg.exec_limit = Some(1);
        cfg.validate().unwrap();
        cfg.impl_b = ImplId::Prim;
        assert!(cfg.validate().is_err());
        cfg.impl_b = ImplId::GoldbergRadzik;
        cfg.impl_a = ImplId::GoldbergRadzik.into();
        assert!(cfg.validate().is_err());
        cfg.impl_a = MutantId::GR_ZERO_CYCLE.into();
        cfg.validate().unwrap();
    }

    #[test]
    fn exec_limit_and_samples() {
        let report = run_campaign(quick(ProblemId::Scc, 2500)).unwrap();
        assert_eq!(report.total_execs, 2500);
        assert_eq!(report.ended_by, EndedBy::ExecLimit);
        assert!(report.bugs.is_empty());
        let sizes: Vec<usize> = report.corpus_sizes.iter().map(|&(_, s)| s).collect();
        assert_eq!(sizes.len(), 4);
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(report.initial_corpus_size, 1);
    }

    #[test]
    fn same_seed_same_run() {
        let a = run_campaign(quick(ProblemId::Mst, 1500)).unwrap();
        let b = run_campaign(quick(ProblemId::Mst, 1500)).unwrap();
        assert_eq!(a.replay_digest(), b.replay_digest());
        let mut cfg = quick(ProblemId::Mst, 1500);
        cfg.rng_seed = 9;
        assert_ne!(run_campaign(cfg).unwrap().graph_sequence_sha256, a.graph_sequence_sha256);
    }

    #[test]
    fn none_mode_keeps_corpus() {
        let mut cfg = quick(ProblemId::Hc, 1000);
        cfg.mode = FeedbackMode::None;
        let report = run_campaign(cfg).unwrap();
        assert_eq!(report.corpus_growth(), 0);
    }

    #[test]
    fn classify_priority() {
        let input = TargetInput::new(Graph::single_vertex(true)).unwrap();
        let ok = ExecOutcome::Output(TargetOutput::Mfv(0));
        let crash = ExecOutcome::Crash("x".into());
        let verdict = |a: &ExecOutcome, b: &ExecOutcome| match classify(ProblemId::Mfv, &input, a, b) {
            Verdict::Bug { kind, .. } => Some(kind),
            Verdict::NoBug => None,
        };
        assert_eq!(verdict(&ExecOutcome::Hang, &crash), Some(BugKind::Crash));
        assert_eq!(verdict(&ok, &ExecOutcome::Hang), Some(BugKind::Hang));
        assert_eq!(verdict(&ok, &ExecOutcome::Output(TargetOutput::Mfv(1))), Some(BugKind::Discrepancy));
        assert_eq!(verdict(&ok, &ok), None);
    }

    #[test]
    fn replay_witness() {
        let m = MutantId::JS_IGNORE_SELF_LOOP;
        let r = replay(m.problem(), m.into(), m.reference().into(), m.witness(), Duration::from_secs(1)).unwrap();
        assert!(matches!(r.verdict, Verdict::Bug { kind: BugKind::Discrepancy, .. }));
        let r = replay(m.problem(), m.parent().into(), m.reference().into(), m.witness(), Duration::from_secs(1)).unwrap();
        assert_eq!(r.verdict, Verdict::NoBug);
    }

    #[test]
    fn report_json_round_trip() {
        let m = MutantId::GR_ZERO_CYCLE;
        let mut cfg = CampaignConfig::for_mutant(m);
        cfg.exec_limit = Some(3000);
        let report = run_campaign(cfg).unwrap();
        let back = CampaignReport::from_json(&report.to_json()).unwrap();
        assert_eq!(back, report);
        let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        for key in ["config", "total_execs", "execs_per_second", "corpus_sizes", "bugs", "ended_by"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufReader};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use graphdiff_core::adapter::{serve, ServeOptions};
use graphdiff_core::engine::{
    describe_outcome, replay, BugKind, Campaign, CampaignConfig, CampaignReport, EngineError, Verdict, DEFAULT_EXEC_BUDGET_MS,
};
use graphdiff_core::feedback::FeedbackMode;
use graphdiff_core::graph::parse;
use graphdiff_core::mutants::{instantiate, Implementation, MutantId};
use graphdiff_core::seeds::{generate_seeds, write_seed_dir, SeedGenSpec, DEFAULT_SEED_COUNT, DEFAULT_SIZE_RANGE};
use graphdiff_core::targets::{ImplId, ProblemId};

const EXIT_BUGS: u8 = 10;
const EXIT_CONFIG: u8 = 2;
const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(60);

#[derive(Parser)]
#[command(name = "graphdiff", version, about = "Differential fuzzer for graph algorithm implementations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a fuzzing campaign.
    Fuzz(FuzzArgs),
    /// Run both implementations once on a saved graph.
    Replay(ReplayArgs),
    /// Write a random seed corpus.
    GenSeeds(GenSeedsArgs),
    /// Summarize a campaign report.
    Report(ReportArgs),
    /// Act as an external adapter on stdin/stdout.
    Serve(ServeArgs),
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    problem: ProblemId,
    /// Implementation A (builtin or mutant name).
    #[arg(long)]
    impl_a: Option<Implementation>,
    #[arg(long)]
    impl_b: Option<ImplId>,
    /// Use this mutant as A, compared against the other default implementation.
    #[arg(long, conflicts_with = "impl_a")]
    mutant: Option<MutantId>,
}

impl PairArgs {
    fn resolve(&self) -> Result<(Implementation, ImplId), EngineError> {
        let (da, db) = self.problem.default_pair();
        let a = match self.mutant {
            Some(m) => instantiate(self.problem, m).map_err(|e| EngineError::ConfigInvalid(e.to_string()))?,
            None => self.impl_a.unwrap_or(da.into()),
        };
        let b = self.impl_b.unwrap_or(match self.mutant {
            Some(m) => m.reference(),
            None if a == Implementation::Builtin(db) => da,
            None => db,
        });
        Ok((a, b))
    }
}

#[derive(Args)]
struct FuzzArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long, default_value = "algo")]
    mode: FeedbackMode,
    #[arg(long, default_value_t = 100)]
    energy: u64,
    #[arg(long, default_value_t = 128)]
    max_stack: usize,
    /// Wall-clock limit such as `60s`, `500ms` or `5m` (bare numbers are
    /// seconds); 60s when neither limit is given.
    #[arg(long, value_parser = parse_duration)]
    time_limit: Option<Duration>,
    #[arg(long)]
    exec_limit: Option<u64>,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Directory of `*.graph` seed files.
    #[arg(long)]
    seeds: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_EXEC_BUDGET_MS)]
    exec_budget_ms: u64,
    /// Command line of an external adapter that replaces implementation B.
    #[arg(long, num_args = 1.., allow_hyphen_values = true)]
    adapter: Option<Vec<String>>,
    #[arg(long)]
    stop_on_bug: bool,
}

#[derive(Args)]
struct ReplayArgs {
    #[command(flatten)]
    pair: PairArgs,
    graph: PathBuf,
    #[arg(long, default_value_t = DEFAULT_EXEC_BUDGET_MS)]
    exec_budget_ms: u64,
}

#[derive(Args)]
struct GenSeedsArgs {
    #[arg(long)]
    problem: ProblemId,
    #[arg(long, default_value_t = DEFAULT_SEED_COUNT)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    rng_seed: u64,
    #[arg(long, default_value_t = DEFAULT_SIZE_RANGE.0)]
    min_vertices: usize,
    #[arg(long, default_value_t = DEFAULT_SIZE_RANGE.1)]
    max_vertices: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// Campaign output directory (or a report.json file).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ServeArgs {
    /// Problems to serve; all when omitted.
    #[arg(long = "problem")]
    problems: Vec<ProblemId>,
    /// Implementation for the single served problem.
    #[arg(long = "impl")]
    imp: Option<ImplId>,
    /// Stop answering at the k-th request.
    #[arg(long)]
    stall_every: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fuzz(a) => fuzz(a),
        Command::Replay(a) => replay_cmd(a),
        Command::GenSeeds(a) => gen_seeds(a),
        Command::Report(a) => report(a),
        Command::Serve(a) => serve_cmd(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<EngineError>() {
                Some(EngineError::ConfigInvalid(_) | EngineError::SeedLoad { .. } | EngineError::Adapter(_)) => {
                    ExitCode::from(EXIT_CONFIG)
                }
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn fuzz(args: FuzzArgs) -> Result<ExitCode> {
    let (impl_a, impl_b) = args.pair.resolve()?;
    let time_limit = match (args.time_limit, args.exec_limit) {
        (None, None) => Some(DEFAULT_TIME_LIMIT),
        (t, _) => t,
    };
    let cfg = CampaignConfig {
        problem: args.pair.problem,
        impl_a,
        impl_b,
        remote_b: args.adapter,
        mode: args.mode,
        energy: args.energy,
        max_stack: args.max_stack,
        time_limit_ms: time_limit.map(|t| t.as_millis() as u64),
        exec_limit: args.exec_limit,
        rng_seed: args.rng_seed,
        exec_budget_ms: args.exec_budget_ms,
        seed_corpus_path: args.seeds,
        out_path: args.out,
        stop_on_first_bug: args.stop_on_bug,
    };
    let report = Campaign::new(cfg)?.run()?;
    print_summary(&report);
    Ok(if report.bugs.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_BUGS)
    })
}

fn replay_cmd(args: ReplayArgs) -> Result<ExitCode> {
    let (a, b) = args.pair.resolve()?;
    let text = fs::read_to_string(&args.graph).with_context(|| format!("reading {}", args.graph.display()))?;
    let g = parse(&text).map_err(|e| EngineError::ConfigInvalid(format!("{}: {e}", args.graph.display())))?;
    let r = replay(args.pair.problem, a, b.into(), g, Duration::from_millis(args.exec_budget_ms))?;
    println!("endpoints: s={} t={}", r.endpoints.s, r.endpoints.t);
    println!("A {a}: {}", describe_outcome(&r.outcome_a));
    println!("B {b}: {}", describe_outcome(&r.outcome_b));
    Ok(match r.verdict {
        Verdict::NoBug => {
            println!("verdict: no bug");
            ExitCode::SUCCESS
        }
        Verdict::Bug { kind, detail } => {
            println!("verdict: {} ({detail})", kind.name());
            ExitCode::from(EXIT_BUGS)
        }
    })
}

fn gen_seeds(args: GenSeedsArgs) -> Result<ExitCode> {
    if args.min_vertices == 0 || args.min_vertices > args.max_vertices {
        return Err(EngineError::ConfigInvalid("need 1 <= --min-vertices <= --max-vertices".into()).into());
    }
    let spec = SeedGenSpec {
        problem: args.problem,
        count: args.count,
        rng_seed: args.rng_seed,
        size_range: (args.min_vertices, args.max_vertices),
    };
    let paths = write_seed_dir(&args.out, &generate_seeds(&spec))
        .with_context(|| format!("writing {}", args.out.display()))?;
    println!("wrote {} seeds to {}", paths.len(), args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn report(args: ReportArgs) -> Result<ExitCode> {
    let path = if args.out.is_dir() {
        args.out.join("report.json")
    } else {
        args.out
    };
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let r = CampaignReport::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    print_table(&r);
    println!("summary {}", summary_json(&r));
    Ok(ExitCode::SUCCESS)
}

fn parse_duration(s: &str) -> Result<Duration, String> {
    let d = match s.parse::<f64>() {
        Ok(secs) if secs.is_finite() && secs >= 0.0 => Duration::from_secs_f64(secs),
        Ok(_) => return Err(format!("invalid duration `{s}`")),
        Err(_) => humantime::parse_duration(s).map_err(|e| e.to_string())?,
    };
    if d.is_zero() {
        return Err("duration must be positive".into());
    }
    Ok(d)
}

fn summary_json(r: &CampaignReport) -> serde_json::Value {
    let count = |k: BugKind| r.bugs.iter().filter(|b| b.kind == k).count();
    serde_json::json!({
        "problem": r.config.problem,
        "impl_a": r.config.impl_a,
        "impl_b": r.config.impl_b,
        "mode": r.config.mode,
        "total_execs": r.total_execs,
        "elapsed_ms": r.elapsed_ms,
        "execs_per_second": r.execs_per_second,
        "initial_corpus_size": r.initial_corpus_size,
        "final_corpus_size": r.final_corpus_size,
        "bugs": r.bugs.len(),
        "crashes": count(BugKind::Crash),
        "hangs": count(BugKind::Hang),
        "discrepancies": count(BugKind::Discrepancy),
        "ended_by": r.ended_by,
    })
}

fn print_table(r: &CampaignReport) {
    let c = &r.config;
    let rows = [
        ("problem", c.problem.to_string()),
        ("impl a", c.impl_a.to_string()),
        ("impl b", c.impl_b.to_string()),
        ("mode", c.mode.to_string()),
        ("rng seed", c.rng_seed.to_string()),
        ("execs", r.total_execs.to_string()),
        ("elapsed ms", r.elapsed_ms.to_string()),
        ("execs/s", format!("{:.0}", r.execs_per_second)),
        ("corpus", format!("{} -> {}", r.initial_corpus_size, r.final_corpus_size)),
        ("ended by", format!("{:?}", r.ended_by)),
        ("bugs", r.bugs.len().to_string()),
    ];
    for (k, v) in rows {
        println!("{k:<12} {v}");
    }
    if !r.bugs.is_empty() {
        println!();
        println!("kind               exec       t_ms  graph");
        for b in &r.bugs {
            println!("{:<12} {:>10} {:>10}  {}", b.kind.name(), b.exec, b.t_ms, b.graph_file.as_deref().unwrap_or("-"));
        }
    }
}

fn print_summary(r: &CampaignReport) {
    let c = &r.config;
    println!("problem {}  A {}  B {}  mode {}", c.problem, c.impl_a, c.impl_b, c.mode);
    println!(
        "execs {}  in {:.1}s  ({:.0}/s)  ended by {:?}",
        r.total_execs,
        r.elapsed_ms as f64 / 1000.0,
        r.execs_per_second,
        r.ended_by
    );
    println!("corpus {} -> {} (+{})", r.initial_corpus_size, r.final_corpus_size, r.corpus_growth());
    println!("bugs {}", r.bugs.len());
    for b in &r.bugs {
        println!(
            "  {} at exec {} ({} ms){}",
            b.kind.name(),
            b.exec,
            b.t_ms,
            b.graph_file.as_deref().map(|f| format!(" {f}")).unwrap_or_default()
        );
        println!("    A: {}", b.output_a);
        println!("    B: {}", b.output_b);
    }
}

fn serve_cmd(args: ServeArgs) -> Result<ExitCode> {
    let mut opts = ServeOptions::all_problems();
    if !args.problems.is_empty() {
        opts.impls.retain(|p, _| args.problems.contains(p));
    }
    if let Some(imp) = args.imp {
        if opts.impls.len() != 1 {
            return Err(EngineError::ConfigInvalid("--impl needs exactly one --problem".into()).into());
        }
        let problem = imp.problem();
        if !opts.impls.contains_key(&problem) {
            return Err(EngineError::ConfigInvalid(format!("{imp} does not solve the served problem")).into());
        }
        opts.impls = BTreeMap::from([(problem, imp)]);
    }
    opts.stall_every = args.stall_every;
    let stdin = io::stdin();
    serve(BufReader::new(stdin.lock()), io::stdout().lock(), &opts)?;
    Ok(ExitCode::SUCCESS)
}

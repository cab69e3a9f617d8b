use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use graphdiff_core::engine::{BugKind, CampaignReport};
use graphdiff_core::graph::{parse, validate};
use graphdiff_core::targets::ProblemId;

const BIN: &str = env!("CARGO_BIN_EXE_graphdiff");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn gen_seeds_is_valid_and_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let dirs = [tmp.path().join("a"), tmp.path().join("b")];
    for d in &dirs {
        let o = run(&["gen-seeds", "--problem", "scc", "--count", "10", "--rng-seed", "1", "--out", d.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{o:?}");
    }
    let files = read_dir_bytes(&dirs[0]);
    assert_eq!(files.len(), 10);
    assert_eq!(files, read_dir_bytes(&dirs[1]));
    for (name, bytes) in files {
        assert!(name.ends_with(".graph"));
        let g = parse(std::str::from_utf8(&bytes).unwrap()).unwrap();
        assert!(g.directed());
        assert!(validate(&g, &ProblemId::Scc.profile()).is_empty());
    }
}

#[test]
fn fuzz_finds_mutant_then_replay_and_report_agree() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let o = run(&[
        "fuzz", "--problem", "spf", "--mutant", "GR_ZERO_CYCLE", "--mode", "algo", "--time-limit", "60s", "--rng-seed",
        "1", "--stop-on-bug", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 10, "{}", String::from_utf8_lossy(&o.stderr));
    let report = CampaignReport::from_json(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let bug = report.first_bug(Some(BugKind::Discrepancy)).expect("a discrepancy");
    let graph = out.join(bug.graph_file.as_ref().unwrap());

    let o = run(&["replay", "--problem", "SPF", "--impl-a", "GR_ZERO_CYCLE", "--impl-b", "BellmanFord", graph.to_str().unwrap()]);
    assert_eq!(code(&o), 10);
    assert!(stdout(&o).contains("verdict: discrepancy"), "{}", stdout(&o));

    let o = run(&["replay", "--problem", "spf", "--impl-a", "GoldbergRadzik", "--impl-b", "BellmanFord", graph.to_str().unwrap()]);
    assert_eq!(code(&o), 0);

    let o = run(&["report", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let line = text.lines().find_map(|l| l.strip_prefix("summary ")).unwrap();
    let summary: serde_json::Value = serde_json::from_str(line).unwrap();
    assert_eq!(summary["total_execs"], report.total_execs);
    assert_eq!(summary["discrepancies"], report.bugs.len());
    assert_eq!(summary["ended_by"], "first_bug");
    assert!(text.contains("execs/s") && text.contains(bug.graph_file.as_deref().unwrap()));
}

#[test]
fn clean_pair_exits_zero() {
    let o = run(&["fuzz", "--problem", "mm", "--exec-limit", "2000", "--mode", "combo"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("bugs 0"));
}

#[test]
fn time_limits_accept_units() {
    for t in ["300ms", "0.3", "1s"] {
        let o = run(&["fuzz", "--problem", "hc", "--time-limit", t]);
        assert_eq!(code(&o), 0, "{t}");
    }
    for t in ["0s", "-1", "soon"] {
        assert_ne!(code(&run(&["fuzz", "--problem", "hc", "--time-limit", t])), 0, "{t}");
    }
}

#[test]
fn config_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["fuzz", "--problem", "mm", "--mutant", "SCC_STACK_SKIP", "--exec-limit", "10"],
        vec!["fuzz", "--problem", "mm", "--energy", "0", "--exec-limit", "10"],
        vec!["fuzz", "--problem", "mm", "--exec-limit", "10", "--seeds", "/nonexistent/seeds"],
        vec!["fuzz", "--problem", "spf", "--exec-limit", "10", "--adapter", "sh", "-c", "echo nope"],
        vec!["gen-seeds", "--problem", "mm", "--min-vertices", "5", "--max-vertices", "2", "--out"],
    ];
    for mut args in cases {
        let out = tmp.path().join("x");
        if args.last() == Some(&"--out") {
            args.push(out.to_str().unwrap());
        }
        let o = run(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    // Usage errors are nonzero too.
    assert_ne!(code(&run(&["fuzz", "--problem", "nope"])), 0);
}

#[test]
fn serve_adapter_is_transparent() {
    let tmp = tempfile::tempdir().unwrap();
    for (problem, imp) in [("spf", "GoldbergRadzik"), ("scc", "Kosaraju")] {
        let report = |name: &str, adapter: &[&str]| {
            let out = tmp.path().join(format!("{problem}-{name}"));
            let mut args = vec!["fuzz", "--problem", problem, "--exec-limit", "1000", "--rng-seed", "3", "--out"];
            args.push(out.to_str().unwrap());
            args.extend_from_slice(adapter);
            let o = run(&args);
            assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
            CampaignReport::from_json(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap()
        };
        let local = report("local", &[]);
        let remote = report("remote", &["--adapter", BIN, "serve", "--problem", problem, "--impl", imp]);
        assert_eq!(local.graph_sequence_sha256, remote.graph_sequence_sha256);
        assert_eq!(local.corpus_sha256, remote.corpus_sha256);
        assert_eq!(local.replay_digest(), remote.replay_digest());
        assert_eq!(remote.adapter_restarts, 0);
    }
}

#[test]
fn stalled_adapter_is_a_hang_and_campaign_continues() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let o = run(&[
        "fuzz", "--problem", "spf", "--exec-limit", "300", "--exec-budget-ms", "200", "--out", out.to_str().unwrap(),
        "--adapter", BIN, "serve", "--problem", "spf", "--stall-every", "100",
    ]);
    assert_eq!(code(&o), 10, "{}", String::from_utf8_lossy(&o.stderr));
    let report = CampaignReport::from_json(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report.total_execs, 300);
    assert_eq!(report.bugs.len(), 3);
    assert!(report.bugs.iter().all(|b| b.kind == BugKind::Hang));
    assert_eq!(report.adapter_restarts, 3);
}

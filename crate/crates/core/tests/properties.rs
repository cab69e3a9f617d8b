use graphdiff_core::feedback::extract_signal;
use graphdiff_core::graph::{derive_endpoints, parse, serialize, validate, Graph};
use graphdiff_core::mutation::stacked_mutate;
use graphdiff_core::rng::FuzzRng;
use graphdiff_core::seeds::random_graph;
use graphdiff_core::targets::{run_target, ExecOutcome, ProblemId, TargetInput, DEFAULT_EXEC_BUDGET};
use proptest::prelude::*;

fn problem() -> impl Strategy<Value = ProblemId> {
    prop::sample::select(ProblemId::ALL.to_vec())
}

fn integer_problem() -> impl Strategy<Value = ProblemId> {
    use ProblemId::*;
    prop::sample::select(vec![Spf, Mst, Scc, Bcc, Mm, Mfv])
}

fn graph_for(problem: ProblemId, seed: u64, n: usize, p: f64, loops: bool) -> Graph {
    let profile = problem.profile();
    let mut rng = FuzzRng::new(seed);
    random_graph(&profile, n, p, loops && profile.allow_self_loops, &mut rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_round_trip(pr in problem(), seed in any::<u64>(), n in 1usize..20, p in 0.0f64..1.0, loops in any::<bool>()) {
        let g = graph_for(pr, seed, n, p, loops);
        let text = serialize(&g);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(serialize(&back), text);
    }

    #[test]
    fn stacked_mutants_stay_in_profile(pr in problem(), seed in any::<u64>(), n in 1usize..10, stack in 1usize..128) {
        let profile = pr.profile();
        let donor = graph_for(pr, seed ^ 1, n, 0.4, true);
        let mut g = graph_for(pr, seed, n, 0.3, false);
        let mut rng = FuzzRng::new(seed);
        for _ in 0..20 {
            g = stacked_mutate(&g, |_| &donor, &profile, &mut rng, stack);
            let violations = validate(&g, &profile);
            prop_assert!(violations.is_empty(), "{:?}\n{}", violations, serialize(&g));
        }
    }

    #[test]
    fn mutation_is_reproducible(pr in problem(), seed in any::<u64>()) {
        let profile = pr.profile();
        let g = graph_for(pr, seed, 6, 0.3, false);
        let run = || {
            let mut rng = FuzzRng::new(seed);
            (0..10).map(|_| stacked_mutate(&g, |_| &g, &profile, &mut rng, 128)).collect::<Vec<_>>()
        };
        prop_assert_eq!(run(), run());
    }

    #[test]
    fn endpoints_have_top_degrees(pr in problem(), seed in any::<u64>(), n in 2usize..15, p in 0.0f64..1.0) {
        let g = graph_for(pr, seed, n, p, true);
        let ep = derive_endpoints(&g).unwrap();
        let deg = g.degrees();
        let (s, t) = (ep.s as usize, ep.t as usize);
        prop_assert_ne!(s, t);
        prop_assert!(deg.iter().all(|&d| d <= deg[s]));
        prop_assert!(deg[..s].iter().all(|&d| d < deg[s]));
        for v in (0..n).filter(|&v| v != s) {
            prop_assert!(deg[v] <= deg[t]);
            if v < t {
                prop_assert!(deg[v] < deg[t]);
            }
        }
    }

    // Real-valued signals are floored, so tolerance-equal scores can land in
    // neighbouring buckets; only integer-valued problems are checked here.
    #[test]
    fn default_pairs_agree_on_signal(pr in integer_problem(), seed in any::<u64>(), n in 1usize..12, p in 0.0f64..0.6) {
        let g = graph_for(pr, seed, n, p, true);
        let input = TargetInput::new(g).unwrap();
        let (a, b) = pr.default_pair();
        let (ExecOutcome::Output(x), ExecOutcome::Output(y)) = (
            run_target(a, &input, None, DEFAULT_EXEC_BUDGET),
            run_target(b, &input, None, DEFAULT_EXEC_BUDGET),
        ) else {
            return Err(TestCaseError::fail("reference implementation failed"));
        };
        prop_assert_eq!(extract_signal(pr, &x), extract_signal(pr, &y));
    }
}

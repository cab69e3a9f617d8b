//! Deliberately faulty variants of reference implementations, each one
//! localized defect away from its parent, used to check that campaigns find
//! real bugs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph};
use crate::targets::{
    bitset_jaccard_with, goldberg_radzik_with, kruskal_with, precomputed_adamic_adar_with, push_relabel_with,
    tarjan_with, ExecCtx, ImplId, ProblemId, TargetFn, TargetInput, TargetOutput,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum MutantId {
    GR_ZERO_CYCLE,
    SCC_STACK_SKIP,
    JS_IGNORE_SELF_LOOP,
    MFV_HANG,
    AA_SELF_LOOP_WRONG,
    MST_UF_OFF_BY_ONE,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("mutant {mutant} belongs to {expected}, not {requested}")]
pub struct MutantProblemMismatch {
    pub mutant: MutantId,
    pub expected: ProblemId,
    pub requested: ProblemId,
}

impl MutantId {
    pub const ALL: [MutantId; 6] = [
        MutantId::GR_ZERO_CYCLE,
        MutantId::SCC_STACK_SKIP,
        MutantId::JS_IGNORE_SELF_LOOP,
        MutantId::MFV_HANG,
        MutantId::AA_SELF_LOOP_WRONG,
        MutantId::MST_UF_OFF_BY_ONE,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MutantId::GR_ZERO_CYCLE => "GR_ZERO_CYCLE",
            MutantId::SCC_STACK_SKIP => "SCC_STACK_SKIP",
            MutantId::JS_IGNORE_SELF_LOOP => "JS_IGNORE_SELF_LOOP",
            MutantId::MFV_HANG => "MFV_HANG",
            MutantId::AA_SELF_LOOP_WRONG => "AA_SELF_LOOP_WRONG",
            MutantId::MST_UF_OFF_BY_ONE => "MST_UF_OFF_BY_ONE",
        }
    }

    /// The correct implementation this mutant was derived from.
    pub fn parent(self) -> ImplId {
        match self {
            MutantId::GR_ZERO_CYCLE => ImplId::GoldbergRadzik,
            MutantId::SCC_STACK_SKIP => ImplId::TarjanIterative,
            MutantId::JS_IGNORE_SELF_LOOP => ImplId::BitsetIntersect,
            MutantId::MFV_HANG => ImplId::PushRelabel,
            MutantId::AA_SELF_LOOP_WRONG => ImplId::PrecomputedNeighborhoods,
            MutantId::MST_UF_OFF_BY_ONE => ImplId::Kruskal,
        }
    }

    pub fn problem(self) -> ProblemId {
        self.parent().problem()
    }

    /// The implementation a campaign compares the mutant against: the other
    /// member of the problem's default pair.
    pub fn reference(self) -> ImplId {
        let (a, b) = self.problem().default_pair();
        if a == self.parent() {
            b
        } else {
            a
        }
    }

    pub fn function(self) -> TargetFn {
        match self {
            MutantId::GR_ZERO_CYCLE => gr_zero_cycle,
            MutantId::SCC_STACK_SKIP => scc_stack_skip,
            MutantId::JS_IGNORE_SELF_LOOP => js_ignore_self_loop,
            MutantId::MFV_HANG => mfv_hang,
            MutantId::AA_SELF_LOOP_WRONG => aa_self_loop_wrong,
            MutantId::MST_UF_OFF_BY_ONE => mst_uf_off_by_one,
        }
    }

    /// Whether the defect shows up as a hang rather than a wrong answer.
    pub fn hangs(self) -> bool {
        self == MutantId::MFV_HANG
    }

    /// A small profile-valid graph on which the mutant misbehaves.
    pub fn witness(self) -> Graph {
        let build = |directed, n, edges: &[(u32, u32, i64)]| {
            Graph::from_edges(directed, n, edges.iter().map(|&(u, v, w)| Edge::new(u, v, w)))
                .expect("witness graphs are well formed")
        };
        match self {
            // s = 0 (highest degree, lowest id), t = 1.
            MutantId::GR_ZERO_CYCLE => build(true, 2, &[(0, 1, 1), (1, 0, -1)]),
            MutantId::SCC_STACK_SKIP => build(true, 3, &[(0, 1, 1), (1, 0, 1), (0, 2, 1), (2, 1, 1)]),
            MutantId::JS_IGNORE_SELF_LOOP => build(false, 2, &[(0, 0, 1), (0, 1, 1)]),
            // s = 0, t = 1; vertex 2 can only return its excess over twin arcs.
            MutantId::MFV_HANG => build(true, 4, &[(0, 1, 1), (0, 2, 5), (0, 3, 1), (1, 3, 2), (2, 0, 5), (3, 1, 1)]),
            MutantId::AA_SELF_LOOP_WRONG => build(false, 2, &[(0, 1, 1), (1, 1, 1)]),
            // The rank-2 tie at (1, 5) moves only 5 into {0, 1, 2, 3}, so
            // (3, 7) closes a cycle and (7, 8) is never reached.
            MutantId::MST_UF_OFF_BY_ONE => build(
                false,
                9,
                &[(0, 1, 1), (2, 3, 1), (4, 5, 1), (6, 7, 1), (0, 2, 2), (4, 6, 2), (1, 5, 3), (3, 7, 4), (7, 8, 5)],
            ),
        }
    }
}

// Each wrapper turns on exactly one fault switch of its parent.

fn gr_zero_cycle(i: &TargetInput, c: &mut ExecCtx<'_>) -> TargetOutput {
    goldberg_radzik_with(i, c, true)
}

fn scc_stack_skip(i: &TargetInput, c: &mut ExecCtx<'_>) -> TargetOutput {
    tarjan_with(i, c, true)
}

fn js_ignore_self_loop(i: &TargetInput, c: &mut ExecCtx<'_>) -> TargetOutput {
    bitset_jaccard_with(i, c, true)
}

fn mfv_hang(i: &TargetInput, c: &mut ExecCtx<'_>) -> TargetOutput {
    push_relabel_with(i, c, true)
}

fn aa_self_loop_wrong(i: &TargetInput, c: &mut ExecCtx<'_>) -> TargetOutput {
    precomputed_adamic_adar_with(i, c, true)
}

fn mst_uf_off_by_one(i: &TargetInput, c: &mut ExecCtx<'_>) -> TargetOutput {
    kruskal_with(i, c, true)
}

impl fmt::Display for MutantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MutantId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MutantId::ALL
            .iter()
            .copied()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown mutant `{s}`"))
    }
}

/// Any implementation a campaign can run in-process.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Implementation {
    Builtin(ImplId),
    Mutant(MutantId),
}

impl Implementation {
    pub fn problem(self) -> ProblemId {
        match self {
            Implementation::Builtin(i) => i.problem(),
            Implementation::Mutant(m) => m.problem(),
        }
    }

    pub fn function(self) -> TargetFn {
        match self {
            Implementation::Builtin(i) => i.function(),
            Implementation::Mutant(m) => m.function(),
        }
    }

    /// The correct implementation whose input profile and probes this one
    /// shares.
    pub fn base(self) -> ImplId {
        match self {
            Implementation::Builtin(i) => i,
            Implementation::Mutant(m) => m.parent(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Implementation::Builtin(i) => i.name(),
            Implementation::Mutant(m) => m.name(),
        }
    }
}

impl fmt::Display for Implementation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Implementation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<ImplId>()
            .map(Implementation::Builtin)
            .or_else(|_| s.parse::<MutantId>().map(Implementation::Mutant))
            .map_err(|_| format!("unknown implementation or mutant `{s}`"))
    }
}

impl From<Implementation> for String {
    fn from(i: Implementation) -> String {
        i.name().to_string()
    }
}

impl TryFrom<String> for Implementation {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<ImplId> for Implementation {
    fn from(i: ImplId) -> Self {
        Implementation::Builtin(i)
    }
}

impl From<MutantId> for Implementation {
    fn from(m: MutantId) -> Self {
        Implementation::Mutant(m)
    }
}

pub fn instantiate(problem: ProblemId, m: MutantId) -> Result<Implementation, MutantProblemMismatch> {
    if m.problem() != problem {
        return Err(MutantProblemMismatch {
            mutant: m,
            expected: m.problem(),
            requested: problem,
        });
    }
    Ok(Implementation::Mutant(m))
}

#[cfg(test)]
mod tests {
    use std::time::Duration;

    use super::*;
    use crate::graph::validate;
    use crate::targets::{compare_outputs, execute_fn, ExecOutcome};

    fn run(f: TargetFn, input: &TargetInput) -> ExecOutcome {
        execute_fn(f, input, None, Duration::from_millis(200))
    }

    #[test]
    fn witnesses_kill_every_mutant() {
        for m in MutantId::ALL {
            let g = m.witness();
            assert!(validate(&g, &m.problem().profile()).is_empty(), "{m}");
            let input = TargetInput::new(g).unwrap();
            let parent = run(m.parent().function(), &input);
            let ExecOutcome::Output(expected) = &parent else {
                panic!("{m}: parent failed with {parent:?}")
            };
            match run(m.function(), &input) {
                ExecOutcome::Hang => assert!(m.hangs(), "{m}"),
                ExecOutcome::Output(o) => {
                    assert!(!m.hangs());
                    let cmp = compare_outputs(m.problem(), &input, expected, &o).unwrap();
                    assert!(!cmp.is_equal(), "{m} agrees with its parent on the witness");
                }
                ExecOutcome::Crash(msg) => panic!("{m} crashed: {msg}"),
            }
        }
    }

    #[test]
    fn instantiate_checks_problem() {
        assert_eq!(
            instantiate(ProblemId::Spf, MutantId::GR_ZERO_CYCLE),
            Ok(Implementation::Mutant(MutantId::GR_ZERO_CYCLE))
        );
        assert!(instantiate(ProblemId::Mst, MutantId::GR_ZERO_CYCLE).is_err());
    }

    #[test]
    fn reference_is_the_other_default() {
        for m in MutantId::ALL {
            assert_ne!(m.reference(), m.parent());
            assert_eq!(m.reference().problem(), m.problem());
        }
    }

    #[test]
    fn gr_zero_cycle_two_vertex_example() {
        let input = TargetInput::new(MutantId::GR_ZERO_CYCLE.witness()).unwrap();
        assert_eq!((input.endpoints.s, input.endpoints.t), (0, 1));
        assert_eq!(
            run(gr_zero_cycle, &input),
            ExecOutcome::Output(TargetOutput::Spf(crate::targets::SpfOut::NegativeCycle))
        );
    }

    #[test]
    fn names_parse() {
        for m in MutantId::ALL {
            assert_eq!(m.name().parse::<MutantId>(), Ok(m));
            assert_eq!(m.name().parse::<Implementation>(), Ok(Implementation::Mutant(m)));
        }
        for i in ImplId::ALL {
            assert_eq!(i.name().parse::<Implementation>(), Ok(Implementation::Builtin(i)));
        }
        let json = serde_json::to_string(&Implementation::Mutant(MutantId::MFV_HANG)).unwrap();
        assert_eq!(json, "\"MFV_HANG\"");
    }
}

//! In-process execution with failure capture.
//!
//! A panic inside an implementation becomes `Crash`. Long-running loops call
//! [`ExecCtx::tick`], which polls the wall clock every
//! [`HANG_CHECK_INTERVAL`] ticks and unwinds out of the run once the budget
//! is spent; that unwind becomes `Hang`. Neither ever reaches the caller as a
//! panic, so one bad execution cannot take the campaign down.

use std::cell::Cell;
use std::panic::{self, AssertUnwindSafe};
use std::sync::Once;
use std::time::{Duration, Instant};

use crate::feedback::{ProbeId, ProbeMap};

use super::{TargetInput, TargetOutput};

pub type TargetFn = fn(&TargetInput, &mut ExecCtx<'_>) -> TargetOutput;

pub const HANG_CHECK_INTERVAL: u64 = 1024;

#[derive(Clone, Debug, PartialEq)]
pub enum ExecOutcome {
    Output(TargetOutput),
    Crash(String),
    Hang,
}

impl ExecOutcome {
    pub fn output(&self) -> Option<&TargetOutput> {
        match self {
            ExecOutcome::Output(o) => Some(o),
            _ => None,
        }
    }
}

pub struct ExecCtx<'a> {
    probes: Option<&'a mut ProbeMap>,
    deadline: Option<Instant>,
    ticks: u64,
}

struct BudgetExceeded;

impl<'a> ExecCtx<'a> {
    pub fn new(probes: Option<&'a mut ProbeMap>, budget: Option<Duration>) -> Self {
        Self {
            probes,
            deadline: budget.map(|b| Instant::now() + b),
            ticks: 0,
        }
    }

    /// Context without probes or budget, for direct calls in tests.
    pub fn unbounded() -> ExecCtx<'static> {
        ExecCtx {
            probes: None,
            deadline: None,
            ticks: 0,
        }
    }

    #[inline]
    pub fn probe(&mut self, id: ProbeId) {
        if let Some(p) = self.probes.as_deref_mut() {
            p.record(id);
        }
    }

    #[inline]
    pub fn tick(&mut self) {
        self.ticks += 1;
        if self.ticks.is_multiple_of(HANG_CHECK_INTERVAL) {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    panic::resume_unwind(Box::new(BudgetExceeded));
                }
            }
        }
    }
}

thread_local! {
    static IN_TARGET: Cell<bool> = const { Cell::new(false) };
}

static QUIET_HOOK: Once = Once::new();

/// Panics raised inside a target are reported through `ExecOutcome::Crash`,
/// so the default hook's stderr message is suppressed for them only.
fn install_quiet_hook() {
    QUIET_HOOK.call_once(|| {
        let previous = panic::take_hook();
        panic::set_hook(Box::new(move |info| {
            if !IN_TARGET.with(Cell::get) {
                previous(info);
            }
        }));
    });
}

pub fn execute_fn(
    f: TargetFn,
    input: &TargetInput,
    probes: Option<&mut ProbeMap>,
    budget: Duration,
) -> ExecOutcome {
    install_quiet_hook();
    let mut ctx = ExecCtx::new(probes, Some(budget));
    IN_TARGET.with(|c| c.set(true));
    let result = panic::catch_unwind(AssertUnwindSafe(|| f(input, &mut ctx)));
    IN_TARGET.with(|c| c.set(false));
    match result {
        Ok(out) => ExecOutcome::Output(out),
        Err(payload) if payload.is::<BudgetExceeded>() => ExecOutcome::Hang,
        Err(payload) => ExecOutcome::Crash(panic_message(payload.as_ref())),
    }
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "panic with non-string payload".to_string()
    }
}

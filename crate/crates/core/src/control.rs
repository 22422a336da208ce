//! Step budgets and cooperative cancellation for semi-decision procedures.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

/// Cooperative cancellation: an optional shared flag plus an optional
/// wall-clock deadline. Algorithms poll it between steps.
#[derive(Clone, Debug, Default)]
pub struct CancelToken {
    flag: Option<Arc<AtomicBool>>,
    deadline: Option<Instant>,
}

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_flag(mut self, flag: Arc<AtomicBool>) -> Self {
        self.flag = Some(flag);
        self
    }

    pub fn with_deadline(mut self, deadline: Instant) -> Self {
        self.deadline = Some(deadline);
        self
    }

    pub fn is_cancelled(&self) -> bool {
        self.flag.as_ref().is_some_and(|f| f.load(Ordering::Relaxed))
            || self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// Limits for one analysis run. One step is one dequeue-and-process of a
/// worklist entry.
#[derive(Clone, Debug)]
pub struct Budget {
    pub max_steps: u64,
    /// Cap on free-variable assignments enumerated by a single modular solve.
    pub max_assignments: u64,
    pub cancel: CancelToken,
}

impl Budget {
    pub const DEFAULT_STEPS: u64 = 100_000;
    pub const DEFAULT_ASSIGNMENTS: u64 = 1_000_000;

    pub fn new(max_steps: u64) -> Self {
        Budget { max_steps, ..Budget::default() }
    }

    pub fn with_cancel(mut self, cancel: CancelToken) -> Self {
        self.cancel = cancel;
        self
    }

    /// Whether another step may start after `used` steps.
    pub fn allows(&self, used: u64) -> bool {
        used < self.max_steps && !self.cancel.is_cancelled()
    }

    pub fn solve_limits(&self) -> crate::solve::SolveLimits {
        crate::solve::SolveLimits { max_assignments: self.max_assignments, cancel: self.cancel.clone() }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_steps: Self::DEFAULT_STEPS,
            max_assignments: Self::DEFAULT_ASSIGNMENTS,
            cancel: CancelToken::default(),
        }
    }
}

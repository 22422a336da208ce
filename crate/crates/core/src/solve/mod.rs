//! One-sided linear systems over semirings.
//!
//! Unknowns form a row vector multiplied on the left of the coefficient
//! matrix: find `x` with `x·A = b`, i.e. `b[j] = Σ_i x[i]·A[i][j]`. Rows of
//! `A` are indexed by unknowns and columns by constraints, so span
//! membership of a target among vectors `v_i` is the system whose rows are
//! the `v_i`.
//!
//! Three solver families are provided: Gaussian elimination for fields,
//! Hensel lifting plus CRT for `ℤ_q`, and the residuation candidate for
//! l-monoids. [`solve_by_capability`] picks one from the instance flags.

mod field;
mod residuation;
mod zq;

use thiserror::Error;

use crate::control::CancelToken;
use crate::semiring::{is_zero, vectors_eq, Element, Semiring};

pub use field::solve_field;
pub use residuation::solve_residuation;
pub use zq::{factorize, solve_zq};
pub(crate) use zq::inv_mod as zq_inverse;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    /// `coefficients[i][j]`: coefficient of unknown `i` in constraint `j`.
    pub coefficients: Vec<Vec<Element>>,
    pub target: Vec<Element>,
}

impl LinearSystem {
    pub fn new(coefficients: Vec<Vec<Element>>, target: Vec<Element>) -> Result<Self, SolveError> {
        if let Some(row) = coefficients.iter().find(|r| r.len() != target.len()) {
            return Err(SolveError::DimensionMismatch { expected: target.len(), found: row.len() });
        }
        Ok(LinearSystem { coefficients, target })
    }

    pub fn unknowns(&self) -> usize {
        self.coefficients.len()
    }

    pub fn constraints(&self) -> usize {
        self.target.len()
    }

    /// Computes `x·A`.
    pub fn apply<S: Semiring + ?Sized>(&self, sr: &S, x: &[Element]) -> Vec<Element> {
        (0..self.constraints())
            .map(|j| {
                x.iter()
                    .zip(&self.coefficients)
                    .fold(sr.zero(), |acc, (xi, row)| sr.add(&acc, &sr.mul(xi, &row[j])))
            })
            .collect()
    }

    pub fn is_satisfied_by<S: Semiring + ?Sized>(&self, sr: &S, x: &[Element]) -> bool {
        x.len() == self.unknowns() && vectors_eq(sr, &self.apply(sr, x), &self.target)
    }
}

/// Work counters reported by every solver.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub eliminations: u64,
    pub lift_steps: u64,
    pub enumerated: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    /// `None` means the system has no solution.
    pub solution: Option<Vec<Element>>,
    pub stats: SolveStats,
}

impl SolveOutcome {
    pub fn is_solvable(&self) -> bool {
        self.solution.is_some()
    }
}

#[derive(Clone, Debug)]
pub struct SolveLimits {
    pub max_assignments: u64,
    pub cancel: CancelToken,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits { max_assignments: crate::control::Budget::DEFAULT_ASSIGNMENTS, cancel: CancelToken::default() }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("semiring `{semiring}` has no solver for this system: needs {needed}")]
    CapabilityMismatch { semiring: String, needed: &'static str },
    /// Distinct from "no solution": the search was cut off before deciding.
    #[error("solver budget exhausted after {} enumerated assignments", .stats.enumerated)]
    BudgetExhausted { stats: SolveStats },
    #[error("coefficient row has {found} columns, target has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

pub(crate) fn mismatch<S: Semiring + ?Sized>(sr: &S, needed: &'static str) -> SolveError {
    SolveError::CapabilityMismatch { semiring: sr.name().to_string(), needed }
}

/// Default solver dispatch: fields use Gaussian elimination, residuated
/// instances use the residuation candidate.
pub fn solve_by_capability<S: Semiring + ?Sized>(
    sr: &S,
    sys: &LinearSystem,
    limits: &SolveLimits,
) -> Result<SolveOutcome, SolveError> {
    let caps = sr.capabilities();
    if caps.is_field {
        solve_field(sr, sys, limits)
    } else if caps.has_residuation {
        solve_residuation(sr, sys, limits)
    } else {
        Err(mismatch(sr, "a field, a modulo ring or residuation"))
    }
}

/// Runs the instance's solver; in debug builds every returned solution is
/// re-checked by substitution.
pub fn solve<S: Semiring + ?Sized>(
    sr: &S,
    sys: &LinearSystem,
    limits: &SolveLimits,
) -> Result<SolveOutcome, SolveError> {
    let outcome = sr.solve(sys, limits)?;
    if let Some(x) = &outcome.solution {
        debug_assert!(sys.is_satisfied_by(sr, x), "{} solver returned a non-solution", sr.name());
    }
    Ok(outcome)
}

/// Decides whether `target` is a left-linear combination `Σ c_i·v_i` of
/// `vectors`, returning the coefficients when it is. The span of no
/// vectors contains exactly the zero vector.
pub fn in_span<S, V>(sr: &S, vectors: &[V], target: &[Element], limits: &SolveLimits) -> Result<SolveOutcome, SolveError>
where
    S: Semiring + ?Sized,
    V: AsRef<[Element]>,
{
    if vectors.is_empty() {
        let solution = target.iter().all(|e| is_zero(sr, e)).then(Vec::new);
        return Ok(SolveOutcome { solution, stats: SolveStats::default() });
    }
    let coefficients = vectors.iter().map(|v| v.as_ref().to_vec()).collect();
    let sys = LinearSystem::new(coefficients, target.to_vec())?;
    solve(sr, &sys, limits)
}

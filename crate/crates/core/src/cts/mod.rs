//! Conditional transition systems and conditional bisimilarity.
//!
//! Guards are downsets of a finite poset of conditions. Moving down the
//! order is an upgrade, and upgrades only ever enable transitions. The
//! bisimilarity matrix assigns every pair of states the set of conditions
//! under which they are bisimilar; it is computed for all conditions at
//! once by a fixpoint iteration in the lattice of downsets.

mod bisim;
mod explicit;

use std::fmt;

use thiserror::Error;

use crate::semiring::SemiringError;

pub use bisim::{
    condition_bisimulations, cts_bisimilarity, cut_bisimulation, per_condition_bisim, BisimilarityMatrix, Relation,
};
pub use explicit::ExplicitLattice;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CtsError {
    #[error("unknown condition `{0}`")]
    UnknownCondition(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("guard {guard} is not downward closed (its closure is {closure})")]
    GuardNotDownclosed { guard: String, closure: String },
    #[error("malformed condition set `{0}`")]
    MalformedGuard(String),
    #[error("lattice elements come from different backends or managers")]
    BackendMismatch,
    #[error("BDDs belong to different managers")]
    ManagerMismatch,
    #[error("operand is not monotone in the upgrade features")]
    NonMonotoneOperand,
    #[error("downset has {found} conditions, the feature model has {expected}")]
    PosetShapeMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Semiring(#[from] SemiringError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    ExplicitDownset,
    BddMonotone,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::ExplicitDownset => "downset",
            Backend::BddMonotone => "bdd",
        })
    }
}

/// A finite distributive lattice of downward-closed condition sets.
///
/// Conditions are numbered `0..condition_count()`. Operations that build
/// elements take `&mut self` because a backend may intern them.
pub trait ConditionLattice {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn backend(&self) -> Backend;
    fn bot(&self) -> Self::Elem;
    fn top(&self) -> Self::Elem;
    fn meet(&mut self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, CtsError>;
    fn join(&mut self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, CtsError>;
    /// Heyting implication: the greatest `c` with `c ⊓ a ⊑ b`.
    fn implication(&mut self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, CtsError>;

    fn condition_count(&self) -> usize;
    fn condition_name(&self, c: usize) -> String;
    /// `c ≤ d` in the condition order.
    fn condition_leq(&self, c: usize, d: usize) -> bool;
    fn contains(&self, e: &Self::Elem, c: usize) -> bool;

    /// Parses `{c1,c2,...}`, rejecting sets that are not downward closed.
    fn parse_guard(&mut self, token: &str) -> Result<Self::Elem, CtsError>;

    fn leq(&mut self, a: &Self::Elem, b: &Self::Elem) -> Result<bool, CtsError> {
        Ok(self.meet(a, b)? == *a)
    }

    /// The conditions in `e`, as `{c1,c2}` in condition order.
    fn format(&self, e: &Self::Elem) -> String {
        let names: Vec<String> =
            (0..self.condition_count()).filter(|&c| self.contains(e, c)).map(|c| self.condition_name(c)).collect();
        format!("{{{}}}", names.join(","))
    }

    fn members(&self, e: &Self::Elem) -> Vec<usize> {
        (0..self.condition_count()).filter(|&c| self.contains(e, c)).collect()
    }
}

/// States, alphabet and a guard for every `(x, a, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cts<E> {
    states: Vec<String>,
    alphabet: Vec<String>,
    /// `guards[a][x][y]`
    guards: Vec<Vec<Vec<E>>>,
}

fn check_unique(names: &[String]) -> Result<(), CtsError> {
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(CtsError::DuplicateName(n.clone()));
        }
    }
    Ok(())
}

impl<E: Clone + PartialEq> Cts<E> {
    /// A system where every guard is `bot`.
    pub fn new(bot: E, states: Vec<String>, alphabet: Vec<String>) -> Result<Self, CtsError> {
        check_unique(&states)?;
        check_unique(&alphabet)?;
        let n = states.len();
        let guards = vec![vec![vec![bot; n]; n]; alphabet.len()];
        Ok(Cts { states, alphabet, guards })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_index(&self, name: &str) -> Result<usize, CtsError> {
        self.states.iter().position(|s| s == name).ok_or_else(|| CtsError::UnknownState(name.to_string()))
    }

    pub fn symbol_index(&self, name: &str) -> Result<usize, CtsError> {
        self.alphabet.iter().position(|s| s == name).ok_or_else(|| CtsError::UnknownSymbol(name.to_string()))
    }

    pub fn guard(&self, x: usize, a: usize, y: usize) -> &E {
        &self.guards[a][x][y]
    }

    pub fn set_guard(&mut self, x: usize, a: usize, y: usize, g: E) {
        self.guards[a][x][y] = g;
    }

    /// The same system with every guard translated, e.g. to another backend.
    pub fn map<F, T>(&self, mut f: F) -> Result<Cts<T>, CtsError>
    where
        F: FnMut(&E) -> Result<T, CtsError>,
    {
        let guards = self
            .guards
            .iter()
            .map(|m| m.iter().map(|row| row.iter().map(&mut f).collect()).collect())
            .collect::<Result<Vec<Vec<Vec<T>>>, CtsError>>()?;
        Ok(Cts { states: self.states.clone(), alphabet: self.alphabet.clone(), guards })
    }
}

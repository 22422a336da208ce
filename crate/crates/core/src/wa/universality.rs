use std::collections::VecDeque;

use super::{WaError, WeightedAutomaton, Word};
use crate::control::Budget;
use crate::semiring::{Element, Tropical};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UniversalityVerdict {
    /// Every word weighs at most the threshold.
    Universal,
    /// `weight` is capped at `threshold + 1`.
    NotUniversal { witness: Word, weight: u64 },
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalityReport {
    pub verdict: UniversalityVerdict,
    /// Vectors admitted to the antichain over the whole run.
    pub vectors_explored: u64,
}

fn capped(e: &Element, cap: u64) -> u64 {
    match e {
        Element::Tropical(Tropical::Finite(n)) => (*n).min(cap),
        Element::Tropical(Tropical::Infinity) => cap,
        other => panic!("universality given a {} element", other.variant_name()),
    }
}

/// Capped tropical data of an automaton: values above `T` all become `T+1`.
pub(crate) struct Capped {
    pub cap: u64,
    /// `matrices[a][x][y]`
    pub matrices: Vec<Vec<Vec<u64>>>,
    pub termination: Vec<u64>,
}

impl Capped {
    pub fn new(aut: &WeightedAutomaton, threshold: u64) -> Self {
        let cap = threshold.saturating_add(1);
        let matrices = (0..aut.alphabet().len())
            .map(|a| aut.matrix(a).iter().map(|row| row.iter().map(|e| capped(e, cap)).collect()).collect())
            .collect();
        let termination = aut.termination().iter().map(|e| capped(e, cap)).collect();
        Capped { cap, matrices, termination }
    }

    pub fn vector(&self, v: &[Element]) -> Vec<u64> {
        v.iter().map(|e| capped(e, self.cap)).collect()
    }

    /// `u ⊗ M_a` in min-plus arithmetic.
    pub fn step(&self, u: &[u64], a: usize) -> Vec<u64> {
        let m = &self.matrices[a];
        (0..u.len())
            .map(|y| u.iter().zip(m).map(|(&ux, row)| (ux + row[y]).min(self.cap)).min().unwrap_or(self.cap))
            .collect()
    }

    /// `min_x u(x) + t(x)`; an empty minimum is infinite.
    pub fn weight(&self, u: &[u64]) -> u64 {
        u.iter().zip(&self.termination).map(|(&ux, &t)| (ux + t).min(self.cap)).min().unwrap_or(self.cap)
    }
}

fn dominated(u: &[u64], by: &[u64]) -> bool {
    u.iter().zip(by).all(|(a, b)| a <= b)
}

/// Decides whether every word weighs at most `threshold` from the initial
/// row vector `v0` over the tropical naturals.
///
/// Vectors are explored breadth-first with entries capped at `T+1`. A new
/// vector below some stored vector (pointwise) is discarded: all its
/// extensions weigh no more than the stored vector's. Stored vectors
/// therefore form an antichain of maximal vectors, and the finite number of
/// capped vectors guarantees termination. Violations are checked as soon as
/// a vector is generated, so the empty word can itself be the witness.
pub fn universality(
    aut: &WeightedAutomaton,
    v0: &[Element],
    threshold: u64,
    budget: &Budget,
) -> Result<UniversalityReport, WaError> {
    let sr = aut.semiring();
    if !sr.capabilities().is_tropical_nat {
        return Err(WaError::CapabilityMismatch { semiring: sr.name().to_string(), needed: "the tropical naturals" });
    }
    aut.check_vector(v0)?;
    let capped = Capped::new(aut, threshold);

    // stored[i] is None once a larger vector superseded it; origin[i] is
    // the parent entry and symbol that produced it
    let mut stored: Vec<Option<Vec<u64>>> = Vec::new();
    let mut origin: Vec<Option<(usize, usize)>> = Vec::new();
    let word_of = |origin: &[Option<(usize, usize)>], mut id: usize| {
        let mut w = Vec::new();
        while let Some((parent, a)) = origin[id] {
            w.push(a);
            id = parent;
        }
        w.reverse();
        w
    };

    let start = capped.vector(v0);
    let weight = capped.weight(&start);
    if weight > threshold {
        let verdict = UniversalityVerdict::NotUniversal { witness: Vec::new(), weight };
        return Ok(UniversalityReport { verdict, vectors_explored: 1 });
    }
    stored.push(Some(start));
    origin.push(None);
    let mut queue = VecDeque::from([0usize]);
    let mut steps = 0u64;

    while let Some(id) = queue.pop_front() {
        let Some(u) = stored[id].clone() else { continue };
        if !budget.allows(steps) {
            let verdict = UniversalityVerdict::BudgetExhausted;
            return Ok(UniversalityReport { verdict, vectors_explored: stored.len() as u64 });
        }
        steps += 1;
        for a in 0..aut.alphabet().len() {
            let next = capped.step(&u, a);
            let weight = capped.weight(&next);
            if weight > threshold {
                let mut witness = word_of(&origin, id);
                witness.push(a);
                let verdict = UniversalityVerdict::NotUniversal { witness, weight };
                return Ok(UniversalityReport { verdict, vectors_explored: stored.len() as u64 });
            }
            if stored.iter().flatten().any(|s| dominated(&next, s)) {
                continue;
            }
            for s in stored.iter_mut() {
                if s.as_ref().is_some_and(|s| dominated(s, &next)) {
                    *s = None;
                }
            }
            stored.push(Some(next));
            origin.push(Some((id, a)));
            queue.push_back(stored.len() - 1);
        }
    }
    Ok(UniversalityReport { verdict: UniversalityVerdict::Universal, vectors_explored: stored.len() as u64 })
}

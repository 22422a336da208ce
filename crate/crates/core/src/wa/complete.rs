use std::collections::VecDeque;

use super::{WaError, WeightedAutomaton, Word};
use crate::control::Budget;
use crate::semiring::{is_zero, Element, Semiring};
use crate::solve::{self, in_span, LinearSystem, SolveError, SolveStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Completed,
    /// The step budget ran out or the run was cancelled.
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisVector {
    pub word: Word,
    /// `(L(word)(x))_x`.
    pub vector: Vec<Element>,
}

#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub status: Status,
    pub basis: Vec<BasisVector>,
    /// Blocks of state indices, ordered by their least state.
    pub partition: Vec<Vec<usize>>,
    pub words_explored: u64,
    pub solve_stats: SolveStats,
}

impl EquivalenceReport {
    pub fn equivalent(&self, x: usize, y: usize) -> bool {
        self.partition.iter().any(|b| b.contains(&x) && b.contains(&y))
    }

    /// A basis word on which `x` and `y` have different weights.
    pub fn separating_word<S: Semiring + ?Sized>(&self, sr: &S, x: usize, y: usize) -> Option<&Word> {
        self.basis.iter().find(|b| !sr.eq(&b.vector[x], &b.vector[y])).map(|b| &b.word)
    }
}

/// Row-echelon basis over a field: each row has a leading one at its pivot
/// and zeros at the pivots of earlier rows.
struct FieldBasis {
    rows: Vec<(usize, Vec<Element>)>,
}

impl FieldBasis {
    fn reduce<S: Semiring + ?Sized>(&self, sr: &S, v: &[Element], stats: &mut SolveStats) -> Vec<Element> {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if is_zero(sr, &v[*pivot]) {
                continue;
            }
            let factor = sr.neg(&v[*pivot]).expect("field");
            for (e, r) in v.iter_mut().zip(row) {
                *e = sr.add(e, &sr.mul(&factor, r));
            }
            stats.eliminations += 1;
        }
        v
    }

    /// Adds `v` unless it lies in the span; returns whether it was added.
    fn insert<S: Semiring + ?Sized>(&mut self, sr: &S, v: &[Element], stats: &mut SolveStats) -> bool {
        let r = self.reduce(sr, v, stats);
        let Some(pivot) = r.iter().position(|e| !is_zero(sr, e)) else {
            return false;
        };
        let inv = sr.inv(&r[pivot]).expect("field");
        self.rows.push((pivot, r.iter().map(|e| sr.mul(&inv, e)).collect()));
        true
    }
}

/// Breadth-first exploration of word vectors `v_ε = t`, `v_{aw} = M_a·v_w`.
///
/// A vector that is a linear combination of the basis found so far is
/// dropped together with all its extensions; otherwise it joins the basis
/// and its extensions `a·w` are queued in alphabet order. States are
/// equivalent iff every basis vector has equal entries at them. If the
/// budget runs out the partition only over-approximates equivalence.
pub fn equiv_complete(aut: &WeightedAutomaton, budget: &Budget) -> Result<EquivalenceReport, WaError> {
    let sr = aut.semiring().as_ref();
    let limits = budget.solve_limits();
    // surface a missing solver before any work
    let probe = LinearSystem::new(vec![vec![sr.zero()]], vec![sr.zero()])?;
    solve::solve(sr, &probe, &limits)?;

    let use_echelon = sr.capabilities().is_field;
    let mut echelon = FieldBasis { rows: Vec::new() };
    let mut basis: Vec<BasisVector> = Vec::new();
    let mut stats = SolveStats::default();
    let mut queue: VecDeque<(Word, Vec<Element>)> = VecDeque::new();
    queue.push_back((Vec::new(), aut.termination().to_vec()));
    let mut steps = 0u64;
    let mut status = Status::Completed;

    while let Some((word, vector)) = queue.pop_front() {
        if !budget.allows(steps) {
            status = Status::BudgetExhausted;
            break;
        }
        steps += 1;
        let independent = if use_echelon {
            echelon.insert(sr, &vector, &mut stats)
        } else {
            let vectors: Vec<&[Element]> = basis.iter().map(|b| b.vector.as_slice()).collect();
            match in_span(sr, &vectors, &vector, &limits) {
                Ok(out) => {
                    add_stats(&mut stats, &out.stats);
                    !out.is_solvable()
                }
                Err(SolveError::BudgetExhausted { stats: s }) => {
                    add_stats(&mut stats, &s);
                    status = Status::BudgetExhausted;
                    break;
                }
                Err(e) => return Err(e.into()),
            }
        };
        if !independent {
            // cross-check against the generic solver, small cases only
            if cfg!(debug_assertions) && use_echelon && aut.len() <= 8 {
                let vectors: Vec<&[Element]> = basis.iter().map(|b| b.vector.as_slice()).collect();
                let check = in_span(sr, &vectors, &vector, &limits)?;
                debug_assert!(check.is_solvable(), "dropped vector is not in the span");
            }
            continue;
        }
        for a in 0..aut.alphabet().len() {
            let mut extended = Vec::with_capacity(word.len() + 1);
            extended.push(a);
            extended.extend_from_slice(&word);
            queue.push_back((extended, aut.mat_vec(a, &vector)));
        }
        basis.push(BasisVector { word, vector });
    }

    let partition = partition_by(sr, aut.len(), &basis);
    Ok(EquivalenceReport { status, basis, partition, words_explored: steps, solve_stats: stats })
}

fn add_stats(total: &mut SolveStats, s: &SolveStats) {
    total.eliminations += s.eliminations;
    total.lift_steps += s.lift_steps;
    total.enumerated += s.enumerated;
}

fn partition_by<S: Semiring + ?Sized>(sr: &S, n: usize, basis: &[BasisVector]) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        let agrees = |y: usize| basis.iter().all(|b| sr.eq(&b.vector[x], &b.vector[y]));
        match blocks.iter_mut().find(|block| agrees(block[0])) {
            Some(block) => block.push(x),
            None => blocks.push(vec![x]),
        }
    }
    blocks
}

use std::collections::VecDeque;

use super::{WaError, WeightedAutomaton, Word};
use crate::control::Budget;
use crate::semiring::{vectors_eq, Element, Semiring};
use crate::solve::{in_span, SolveError, SolveLimits};

/// Rounds of rule application before a normal-form computation gives up.
pub const NORMAL_FORM_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CongruenceMode {
    /// Differences of related vectors span the closure.
    Ring,
    /// Joint normal forms by residuum-driven rewriting.
    LMonoid,
}

impl CongruenceMode {
    pub fn for_semiring<S: Semiring + ?Sized>(sr: &S) -> Result<Self, WaError> {
        let caps = sr.capabilities();
        if caps.is_ring {
            Ok(CongruenceMode::Ring)
        } else if caps.is_l_monoid {
            Ok(CongruenceMode::LMonoid)
        } else {
            Err(WaError::CapabilityMismatch { semiring: sr.name().to_string(), needed: "a ring or an l-monoid" })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivVerdict {
    /// The pairs of row vectors the search had to keep.
    Equivalent { relation: Vec<(Vec<Element>, Vec<Element>)> },
    NotEquivalent { witness: Word, left: Element, right: Element },
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UptoReport {
    pub verdict: EquivVerdict,
    pub steps: u64,
}

type Pair<'a> = (&'a [Element], &'a [Element]);

/// Whether `pair` lies in the congruence closure of `relation`.
///
/// Over rings this is span membership of `u1 − u2` among the differences
/// of related pairs. Over l-monoids both vectors are rewritten to normal
/// form with the rules `u ↦ u ⊔ c·q` for `(p,q)` in the relation or its
/// converse, `c` being the greatest coefficient with `c·p ⊑ u`; if the
/// rewriting does not settle within [`NORMAL_FORM_CAP`] rounds the answer
/// is `false`, which is safe for pruning.
pub fn congruence_check<S: Semiring + ?Sized>(
    sr: &S,
    relation: &[Pair<'_>],
    pair: Pair<'_>,
    limits: &SolveLimits,
) -> Result<bool, WaError> {
    let (u1, u2) = pair;
    if vectors_eq(sr, u1, u2) {
        return Ok(true);
    }
    match CongruenceMode::for_semiring(sr)? {
        CongruenceMode::Ring => {
            let diff = |a: &[Element], b: &[Element]| -> Result<Vec<Element>, WaError> {
                a.iter()
                    .zip(b)
                    .map(|(x, y)| {
                        let ny = sr.neg(y).ok_or(WaError::CapabilityMismatch {
                            semiring: sr.name().to_string(),
                            needed: "additive inverses",
                        })?;
                        Ok(sr.add(x, &ny))
                    })
                    .collect()
            };
            let generators = relation.iter().map(|(a, b)| diff(a, b)).collect::<Result<Vec<_>, _>>()?;
            Ok(in_span(sr, &generators, &diff(u1, u2)?, limits)?.is_solvable())
        }
        CongruenceMode::LMonoid => {
            let nf1 = normal_form(sr, relation, u1)?;
            let nf2 = normal_form(sr, relation, u2)?;
            Ok(matches!((nf1, nf2), (Some(a), Some(b)) if vectors_eq(sr, &a, &b)))
        }
    }
}

fn normal_form<S: Semiring + ?Sized>(sr: &S, relation: &[Pair<'_>], u: &[Element]) -> Result<Option<Vec<Element>>, WaError> {
    let mismatch = |needed| WaError::CapabilityMismatch { semiring: sr.name().to_string(), needed };
    let top = sr.top().ok_or(mismatch("a greatest element"))?;
    let mut u = u.to_vec();
    for _ in 0..NORMAL_FORM_CAP {
        let mut changed = false;
        for &(a, b) in relation {
            for (p, q) in [(a, b), (b, a)] {
                let mut c = top.clone();
                for (px, ux) in p.iter().zip(&u) {
                    let r = sr.residuum(px, ux).ok_or(mismatch("residuation"))?;
                    c = sr.meet(&c, &r).ok_or(mismatch("a lattice meet"))?;
                }
                let next: Vec<Element> = u.iter().zip(q).map(|(ux, qx)| sr.add(ux, &sr.mul(&c, qx))).collect();
                if !vectors_eq(sr, &next, &u) {
                    u = next;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

struct Node {
    left: Vec<Element>,
    right: Vec<Element>,
    parent: Option<(usize, usize)>,
}

fn word_of(nodes: &[Node], mut id: usize) -> Word {
    let mut word = Vec::new();
    while let Some((parent, symbol)) = nodes[id].parent {
        word.push(symbol);
        id = parent;
    }
    word.reverse();
    word
}

/// Decides whether row vectors `v1` and `v2` assign every word the same
/// weight, pruning pairs already in the congruence closure of the pairs
/// kept or still queued. Successors are `(u1·M_a, u2·M_a)`, so witness
/// words grow on the right and are found shortest first.
pub fn equiv_upto(aut: &WeightedAutomaton, v1: &[Element], v2: &[Element], budget: &Budget) -> Result<UptoReport, WaError> {
    let sr = aut.semiring().as_ref();
    CongruenceMode::for_semiring(sr)?;
    aut.check_vector(v1)?;
    aut.check_vector(v2)?;
    let limits = budget.solve_limits();

    let mut nodes = vec![Node { left: v1.to_vec(), right: v2.to_vec(), parent: None }];
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    let mut relation: Vec<usize> = Vec::new();
    let mut steps = 0u64;
    while let Some(id) = queue.pop_front() {
        if !budget.allows(steps) {
            return Ok(UptoReport { verdict: EquivVerdict::BudgetExhausted, steps });
        }
        steps += 1;
        let (l, r) = (&nodes[id].left, &nodes[id].right);
        let (wl, wr) = (aut.output(l), aut.output(r));
        if !sr.eq(&wl, &wr) {
            let witness = word_of(&nodes, id);
            return Ok(UptoReport { verdict: EquivVerdict::NotEquivalent { witness, left: wl, right: wr }, steps });
        }
        let known: Vec<Pair<'_>> = relation
            .iter()
            .chain(queue.iter())
            .map(|&k| (nodes[k].left.as_slice(), nodes[k].right.as_slice()))
            .collect();
        match congruence_check(sr, &known, (l, r), &limits) {
            Ok(true) => continue,
            Ok(false) => {}
            Err(WaError::Solve(SolveError::BudgetExhausted { .. })) => {
                return Ok(UptoReport { verdict: EquivVerdict::BudgetExhausted, steps })
            }
            Err(e) => return Err(e),
        }
        relation.push(id);
        for a in 0..aut.alphabet().len() {
            let left = aut.vec_mat(&nodes[id].left, a);
            let right = aut.vec_mat(&nodes[id].right, a);
            nodes.push(Node { left, right, parent: Some((id, a)) });
            queue.push_back(nodes.len() - 1);
        }
    }
    let relation = relation.into_iter().map(|k| (nodes[k].left.clone(), nodes[k].right.clone())).collect();
    Ok(UptoReport { verdict: EquivVerdict::Equivalent { relation }, steps })
}

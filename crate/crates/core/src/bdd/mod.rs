//! Reduced ordered BDDs over feature variables, used as a symbolic backend
//! for the condition lattice of a feature model.
//!
//! A condition assigns every feature present or absent. Base features are
//! fixed; upgrade features can only be switched on, and switching one on
//! moves a condition down the order. Lattice elements are BDDs whose set of
//! satisfying assignments is downward closed, i.e. monotone in every
//! upgrade variable.

mod manager;

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::construct::{Poset, PosetDescription};
use crate::cts::{Backend, ConditionLattice, CtsError};

pub use manager::{bdd_apply, BddManager, BoolOp, MonotoneBdd, NodeId};

/// Base and upgrade features. Variable `i < base.len()` is base feature `i`,
/// the rest are upgrades; this is also the BDD variable order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureModel {
    base: Vec<String>,
    upgrades: Vec<String>,
}

/// Above this many variables the explicit condition poset is refused.
pub const MAX_EXPLICIT_FEATURES: usize = 16;

impl FeatureModel {
    pub fn new(base: Vec<String>, upgrades: Vec<String>) -> Result<Self, CtsError> {
        let all: Vec<&String> = base.iter().chain(&upgrades).collect();
        for (i, n) in all.iter().enumerate() {
            if all[..i].contains(n) {
                return Err(CtsError::DuplicateName((*n).clone()));
            }
            if n.is_empty() || n.as_str() == "0" || n.contains(['&', ',', '{', '}']) || n.contains(char::is_whitespace) {
                return Err(CtsError::UnknownCondition((*n).clone()));
            }
        }
        Ok(FeatureModel { base, upgrades })
    }

    pub fn base(&self) -> &[String] {
        &self.base
    }

    pub fn upgrades(&self) -> &[String] {
        &self.upgrades
    }

    pub fn num_vars(&self) -> usize {
        self.base.len() + self.upgrades.len()
    }

    pub fn condition_count(&self) -> usize {
        1usize << self.num_vars()
    }

    fn upgrade_mask(&self) -> usize {
        ((1usize << self.upgrades.len()) - 1) << self.base.len()
    }

    fn names(&self) -> impl Iterator<Item = &String> {
        self.base.iter().chain(&self.upgrades)
    }

    /// `p ≤ q`: same base features, and `p` has every upgrade of `q`.
    pub fn leq(&self, p: usize, q: usize) -> bool {
        let up = self.upgrade_mask();
        (p & !up) == (q & !up) && (p & q & up) == (q & up)
    }

    /// Present features joined by `&`; the empty assignment is `0`.
    pub fn condition_name(&self, mask: usize) -> String {
        let present: Vec<&str> =
            self.names().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, n)| n.as_str()).collect();
        if present.is_empty() {
            "0".to_string()
        } else {
            present.join("&")
        }
    }

    pub fn parse_condition(&self, token: &str) -> Result<usize, CtsError> {
        let token = token.trim();
        if token == "0" {
            return Ok(0);
        }
        let mut mask = 0;
        for part in token.split('&') {
            let part = part.trim();
            let i = self.names().position(|n| n == part).ok_or_else(|| CtsError::UnknownCondition(part.to_string()))?;
            mask |= 1 << i;
        }
        Ok(mask)
    }

    /// The condition poset with element `i` the assignment with bitmask `i`.
    pub fn poset(&self) -> Result<Poset, CtsError> {
        if self.num_vars() > MAX_EXPLICIT_FEATURES {
            return Err(CtsError::PosetShapeMismatch {
                expected: MAX_EXPLICIT_FEATURES,
                found: self.num_vars(),
            });
        }
        let n = self.condition_count();
        let elements: Vec<String> = (0..n).map(|m| self.condition_name(m)).collect();
        let mut order_pairs = Vec::new();
        for q in 0..n {
            for u in 0..self.upgrades.len() {
                let bit = 1 << (self.base.len() + u);
                if q & bit == 0 {
                    order_pairs.push((elements[q | bit].clone(), elements[q].clone()));
                }
            }
        }
        Ok(Poset::new(&PosetDescription { elements, order_pairs })?)
    }
}

/// Parses `{c1,c2}` into condition masks.
fn parse_mask_set(model: &FeatureModel, token: &str) -> Result<Vec<usize>, CtsError> {
    let t = token.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| CtsError::MalformedGuard(token.to_string()))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|c| model.parse_condition(c)).collect()
}

/// Condition lattice of a feature model backed by one BDD manager.
#[derive(Debug)]
pub struct BddLattice {
    model: FeatureModel,
    manager: BddManager,
}

impl BddLattice {
    pub fn new(model: FeatureModel) -> Self {
        let manager = BddManager::new(model.num_vars());
        BddLattice { model, manager }
    }

    pub fn model(&self) -> &FeatureModel {
        &self.model
    }

    pub fn manager(&self) -> &BddManager {
        &self.manager
    }

    pub fn manager_mut(&mut self) -> &mut BddManager {
        &mut self.manager
    }

    /// Whether the satisfying set is downward closed.
    pub fn is_monotone(&mut self, f: &MonotoneBdd) -> Result<bool, CtsError> {
        for u in 0..self.model.upgrades.len() {
            let v = self.model.base.len() + u;
            let lo = self.manager.restrict(f, v, false)?;
            let hi = self.manager.restrict(f, v, true)?;
            // f(u=0) must imply f(u=1)
            let nhi = self.manager.not(&hi)?;
            if !self.manager.apply(BoolOp::And, &lo, &nhi)?.is_false() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Disjunction of the given full assignments.
    pub fn from_masks(&mut self, masks: &[usize]) -> Result<MonotoneBdd, CtsError> {
        let mut acc = self.manager.constant(false);
        for &m in masks {
            let cube = self.manager.minterm(m)?;
            acc = self.manager.apply(BoolOp::Or, &acc, &cube)?;
        }
        Ok(acc)
    }

    /// Greatest monotone `r` with `r ∧ f ⊨ g`.
    pub fn monotone_implication(&mut self, f: &MonotoneBdd, g: &MonotoneBdd) -> Result<MonotoneBdd, CtsError> {
        if !self.is_monotone(f)? || !self.is_monotone(g)? {
            return Err(CtsError::NonMonotoneOperand);
        }
        let nf = self.manager.not(f)?;
        let mut r = self.manager.apply(BoolOp::Or, &nf, g)?;
        for u in 0..self.model.upgrades.len() {
            let v = self.model.base.len() + u;
            let r0 = self.manager.restrict(&r, v, false)?;
            let r1 = self.manager.restrict(&r, v, true)?;
            let both = self.manager.apply(BoolOp::And, &r0, &r1)?;
            let var = self.manager.var(v)?;
            let nvar = self.manager.not(&var)?;
            let a = self.manager.apply(BoolOp::And, &var, &r)?;
            let b = self.manager.apply(BoolOp::And, &nvar, &both)?;
            r = self.manager.apply(BoolOp::Or, &a, &b)?;
        }
        Ok(r)
    }
}

/// Greatest monotone `r` with `r ∧ f ⊨ g`.
pub fn monotone_implication(lat: &mut BddLattice, f: &MonotoneBdd, g: &MonotoneBdd) -> Result<MonotoneBdd, CtsError> {
    lat.monotone_implication(f, g)
}

/// Converts a downset of the feature model's condition poset (index = mask).
pub fn downset_to_bdd(lat: &mut BddLattice, set: &FixedBitSet) -> Result<MonotoneBdd, CtsError> {
    let expected = lat.model.condition_count();
    if set.len() != expected {
        return Err(CtsError::PosetShapeMismatch { expected, found: set.len() });
    }
    let f = lat.manager.from_truth_table(|m| set.contains(m))?;
    if !lat.is_monotone(&f)? {
        return Err(CtsError::NonMonotoneOperand);
    }
    Ok(f)
}

pub fn bdd_to_downset(lat: &BddLattice, f: &MonotoneBdd) -> Result<FixedBitSet, CtsError> {
    lat.manager.check(f)?;
    let n = lat.model.condition_count();
    let mut s = FixedBitSet::with_capacity(n);
    for m in 0..n {
        s.set(m, lat.manager.eval(f, m));
    }
    Ok(s)
}

/// The explicit lattice for the same feature model, conditions numbered
/// by mask as in the BDD backend.
pub fn explicit_lattice(model: &FeatureModel) -> Result<crate::cts::ExplicitLattice, CtsError> {
    Ok(crate::cts::ExplicitLattice::new(Arc::new(model.poset()?)))
}

impl ConditionLattice for BddLattice {
    type Elem = MonotoneBdd;

    fn backend(&self) -> Backend {
        Backend::BddMonotone
    }

    fn bot(&self) -> MonotoneBdd {
        self.manager.constant(false)
    }

    fn top(&self) -> MonotoneBdd {
        self.manager.constant(true)
    }

    fn meet(&mut self, a: &MonotoneBdd, b: &MonotoneBdd) -> Result<MonotoneBdd, CtsError> {
        self.manager.apply(BoolOp::And, a, b)
    }

    fn join(&mut self, a: &MonotoneBdd, b: &MonotoneBdd) -> Result<MonotoneBdd, CtsError> {
        self.manager.apply(BoolOp::Or, a, b)
    }

    fn implication(&mut self, a: &MonotoneBdd, b: &MonotoneBdd) -> Result<MonotoneBdd, CtsError> {
        self.monotone_implication(a, b)
    }

    fn condition_count(&self) -> usize {
        self.model.condition_count()
    }

    fn condition_name(&self, c: usize) -> String {
        self.model.condition_name(c)
    }

    fn condition_leq(&self, c: usize, d: usize) -> bool {
        self.model.leq(c, d)
    }

    fn contains(&self, e: &MonotoneBdd, c: usize) -> bool {
        self.manager.eval(e, c)
    }

    fn parse_guard(&mut self, token: &str) -> Result<MonotoneBdd, CtsError> {
        let masks = parse_mask_set(&self.model, token)?;
        let f = self.from_masks(&masks)?;
        if !self.is_monotone(&f)? {
            let names: Vec<String> = masks.iter().map(|&m| self.model.condition_name(m)).collect();
            let closure_masks: Vec<usize> = (0..self.model.condition_count())
                .filter(|&p| masks.iter().any(|&q| self.model.leq(p, q)))
                .collect();
            let closure: Vec<String> = closure_masks.iter().map(|&m| self.model.condition_name(m)).collect();
            return Err(CtsError::GuardNotDownclosed {
                guard: format!("{{{}}}", names.join(",")),
                closure: format!("{{{}}}", closure.join(",")),
            });
        }
        Ok(f)
    }
}

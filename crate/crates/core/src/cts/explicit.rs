use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::{Backend, ConditionLattice, CtsError};
use crate::construct::Poset;

/// Downsets of a poset as index bitsets.
#[derive(Clone, Debug)]
pub struct ExplicitLattice {
    poset: Arc<Poset>,
}

impl ExplicitLattice {
    pub fn new(poset: Arc<Poset>) -> Self {
        ExplicitLattice { poset }
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    /// Least downset containing the named conditions.
    pub fn downward_close(&self, set: &FixedBitSet) -> FixedBitSet {
        self.poset.downward_close(set)
    }

    fn check(&self, a: &FixedBitSet) -> Result<(), CtsError> {
        if a.len() != self.poset.len() {
            return Err(CtsError::BackendMismatch);
        }
        Ok(())
    }
}

impl ConditionLattice for ExplicitLattice {
    type Elem = FixedBitSet;

    fn backend(&self) -> Backend {
        Backend::ExplicitDownset
    }

    fn bot(&self) -> FixedBitSet {
        self.poset.empty_set()
    }

    fn top(&self) -> FixedBitSet {
        self.poset.full_set()
    }

    fn meet(&mut self, a: &FixedBitSet, b: &FixedBitSet) -> Result<FixedBitSet, CtsError> {
        self.check(a)?;
        self.check(b)?;
        let mut s = a.clone();
        s.intersect_with(b);
        Ok(s)
    }

    fn join(&mut self, a: &FixedBitSet, b: &FixedBitSet) -> Result<FixedBitSet, CtsError> {
        self.check(a)?;
        self.check(b)?;
        let mut s = a.clone();
        s.union_with(b);
        Ok(s)
    }

    fn implication(&mut self, a: &FixedBitSet, b: &FixedBitSet) -> Result<FixedBitSet, CtsError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.poset.implication(a, b))
    }

    fn condition_count(&self) -> usize {
        self.poset.len()
    }

    fn condition_name(&self, c: usize) -> String {
        self.poset.names()[c].clone()
    }

    fn condition_leq(&self, c: usize, d: usize) -> bool {
        self.poset.leq(c, d)
    }

    fn contains(&self, e: &FixedBitSet, c: usize) -> bool {
        e.contains(c)
    }

    fn parse_guard(&mut self, token: &str) -> Result<FixedBitSet, CtsError> {
        let set = self.poset.parse_set(token).map_err(|e| match e {
            crate::semiring::SemiringError::UnknownCondition(c) => CtsError::UnknownCondition(c),
            _ => CtsError::MalformedGuard(token.to_string()),
        })?;
        let closure = self.poset.downward_close(&set);
        if closure != set {
            return Err(CtsError::GuardNotDownclosed {
                guard: self.poset.format_set(&set),
                closure: self.poset.format_set(&closure),
            });
        }
        Ok(set)
    }

    fn format(&self, e: &FixedBitSet) -> String {
        self.poset.format_set(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::PosetDescription;

    fn chain() -> ExplicitLattice {
        let desc = PosetDescription::parse("@conditions phi,phi'\n@le phi' phi").unwrap();
        ExplicitLattice::new(Arc::new(Poset::new(&desc).unwrap()))
    }

    #[test]
    fn closing_sets() {
        let lat = chain();
        let p = lat.poset().clone();
        assert_eq!(p.format_set(&lat.downward_close(&p.parse_set("{phi}").unwrap())), "{phi,phi'}");
        assert_eq!(lat.downward_close(&lat.bot()), lat.bot());
        let closed = p.parse_set("{phi'}").unwrap();
        assert_eq!(lat.downward_close(&closed), closed);
    }

    #[test]
    fn implication_examples() {
        let mut lat = chain();
        let both = lat.parse_guard("{phi,phi'}").unwrap();
        let low = lat.parse_guard("{phi'}").unwrap();
        assert_eq!(lat.implication(&low, &both).unwrap(), lat.top());
        assert_eq!(lat.implication(&both, &low).unwrap(), low);
        let bot = lat.bot();
        assert_eq!(lat.implication(&bot, &low).unwrap(), lat.top());
    }

    #[test]
    fn guards_must_be_closed() {
        let mut lat = chain();
        assert!(matches!(lat.parse_guard("{phi}"), Err(CtsError::GuardNotDownclosed { .. })));
        assert_eq!(lat.parse_guard("{psi}").unwrap_err(), CtsError::UnknownCondition("psi".into()));
        assert!(matches!(lat.parse_guard("phi"), Err(CtsError::MalformedGuard(_))));
    }
}

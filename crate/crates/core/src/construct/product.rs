use std::sync::Arc;

use rand::RngCore;

use crate::semiring::{split_top_level, Capabilities, Element, Semiring, SemiringError, SemiringRef};
use crate::solve::{self, LinearSystem, SolveError, SolveLimits, SolveOutcome, SolveStats};

/// Componentwise product of two semirings.
#[derive(Debug, Clone)]
pub struct DirectProduct {
    left: SemiringRef,
    right: SemiringRef,
    name: String,
}

/// Builds `s1 × s2`, named `product(<s1>,<s2>)`.
pub fn direct_product(s1: SemiringRef, s2: SemiringRef) -> SemiringRef {
    Arc::new(DirectProduct::new(s1, s2))
}

fn split(e: &Element) -> (&Element, &Element) {
    match e {
        Element::Pair(pair) => (&pair.0, &pair.1),
        other => panic!("product semiring given a {} element", other.variant_name()),
    }
}

impl DirectProduct {
    pub fn new(left: SemiringRef, right: SemiringRef) -> Self {
        let name = format!("product({},{})", left.name(), right.name());
        DirectProduct { left, right, name }
    }

    pub fn components(&self) -> (&SemiringRef, &SemiringRef) {
        (&self.left, &self.right)
    }

    fn both(
        &self,
        a: &Element,
        b: &Element,
        op: impl Fn(&dyn Semiring, &Element, &Element) -> Option<Element>,
    ) -> Option<Element> {
        let (a1, a2) = split(a);
        let (b1, b2) = split(b);
        Some(Element::pair(op(self.left.as_ref(), a1, b1)?, op(self.right.as_ref(), a2, b2)?))
    }

    fn project(sys: &LinearSystem, pick: fn(&Element) -> &Element) -> LinearSystem {
        LinearSystem {
            coefficients: sys.coefficients.iter().map(|row| row.iter().map(|e| pick(e).clone()).collect()).collect(),
            target: sys.target.iter().map(|e| pick(e).clone()).collect(),
        }
    }
}

impl Semiring for DirectProduct {
    fn name(&self) -> &str {
        &self.name
    }

    /// Flag-wise conjunction, except that a product is never a field
    /// (`(1,0)` has no inverse) nor the tropical naturals themselves.
    fn capabilities(&self) -> Capabilities {
        Capabilities {
            is_field: false,
            is_tropical_nat: false,
            ..self.left.capabilities().meet(self.right.capabilities())
        }
    }

    fn zero(&self) -> Element {
        Element::pair(self.left.zero(), self.right.zero())
    }

    fn one(&self) -> Element {
        Element::pair(self.left.one(), self.right.one())
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        self.both(a, b, |s, x, y| Some(s.add(x, y))).expect("total")
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        self.both(a, b, |s, x, y| Some(s.mul(x, y))).expect("total")
    }

    fn eq(&self, a: &Element, b: &Element) -> bool {
        let (a1, a2) = split(a);
        let (b1, b2) = split(b);
        self.left.eq(a1, b1) && self.right.eq(a2, b2)
    }

    fn parse(&self, token: &str) -> Result<Element, SemiringError> {
        let malformed = || SemiringError::malformed(&self.name, token);
        let inner = token.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(malformed)?;
        match split_top_level(inner).as_deref() {
            Some([l, r]) => Ok(Element::pair(self.left.parse(l.trim())?, self.right.parse(r.trim())?)),
            _ => Err(malformed()),
        }
    }

    fn format(&self, e: &Element) -> String {
        let (l, r) = split(e);
        format!("({},{})", self.left.format(l), self.right.format(r))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Element {
        let l = self.left.sample(rng);
        Element::pair(l, self.right.sample(rng))
    }

    fn contains(&self, e: &Element) -> bool {
        match e {
            Element::Pair(pair) => self.left.contains(&pair.0) && self.right.contains(&pair.1),
            _ => false,
        }
    }

    fn neg(&self, a: &Element) -> Option<Element> {
        let (l, r) = split(a);
        Some(Element::pair(self.left.neg(l)?, self.right.neg(r)?))
    }

    fn inv(&self, a: &Element) -> Option<Element> {
        let (l, r) = split(a);
        Some(Element::pair(self.left.inv(l)?, self.right.inv(r)?))
    }

    fn residuum(&self, a: &Element, b: &Element) -> Option<Element> {
        self.both(a, b, |s, x, y| s.residuum(x, y))
    }

    fn meet(&self, a: &Element, b: &Element) -> Option<Element> {
        self.both(a, b, |s, x, y| s.meet(x, y))
    }

    fn top(&self) -> Option<Element> {
        Some(Element::pair(self.left.top()?, self.right.top()?))
    }

    /// Solves both projections; a solution exists iff both components have one.
    fn solve(&self, sys: &LinearSystem, limits: &SolveLimits) -> Result<SolveOutcome, SolveError> {
        let left = solve::solve(self.left.as_ref(), &Self::project(sys, |e| split(e).0), limits)?;
        let right = solve::solve(self.right.as_ref(), &Self::project(sys, |e| split(e).1), limits)?;
        let stats = SolveStats {
            eliminations: left.stats.eliminations + right.stats.eliminations,
            lift_steps: left.stats.lift_steps + right.stats.lift_steps,
            enumerated: left.stats.enumerated + right.stats.enumerated,
        };
        let solution = match (left.solution, right.solution) {
            (Some(l), Some(r)) => Some(l.into_iter().zip(r).map(|(a, b)| Element::pair(a, b)).collect()),
            _ => None,
        };
        Ok(SolveOutcome { solution, stats })
    }
}

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::RngCore;

use super::{direct_product, fraction_field, modulo_ring, IntegralDomain};
use crate::semiring::{
    split_top_level, Boolean, Capabilities, Element, Integers, LatticeZ, Rational, Semiring, SemiringError, SemiringRef,
    TropicalNat,
};
use crate::solve::{LinearSystem, SolveError, SolveLimits, SolveOutcome};

/// An existing instance under another name.
pub struct Named {
    name: String,
    inner: SemiringRef,
}

impl Named {
    pub fn new(name: impl Into<String>, inner: SemiringRef) -> SemiringRef {
        Arc::new(Named { name: name.into(), inner })
    }
}

impl fmt::Debug for Named {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {:?}", self.name, self.inner)
    }
}

impl Semiring for Named {
    fn name(&self) -> &str {
        &self.name
    }
    fn capabilities(&self) -> Capabilities {
        self.inner.capabilities()
    }
    fn zero(&self) -> Element {
        self.inner.zero()
    }
    fn one(&self) -> Element {
        self.inner.one()
    }
    fn add(&self, a: &Element, b: &Element) -> Element {
        self.inner.add(a, b)
    }
    fn mul(&self, a: &Element, b: &Element) -> Element {
        self.inner.mul(a, b)
    }
    fn eq(&self, a: &Element, b: &Element) -> bool {
        self.inner.eq(a, b)
    }
    fn parse(&self, token: &str) -> Result<Element, SemiringError> {
        self.inner.parse(token)
    }
    fn format(&self, e: &Element) -> String {
        self.inner.format(e)
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Element {
        self.inner.sample(rng)
    }
    fn contains(&self, e: &Element) -> bool {
        self.inner.contains(e)
    }
    fn neg(&self, a: &Element) -> Option<Element> {
        self.inner.neg(a)
    }
    fn inv(&self, a: &Element) -> Option<Element> {
        self.inner.inv(a)
    }
    fn residuum(&self, a: &Element, b: &Element) -> Option<Element> {
        self.inner.residuum(a, b)
    }
    fn meet(&self, a: &Element, b: &Element) -> Option<Element> {
        self.inner.meet(a, b)
    }
    fn top(&self) -> Option<Element> {
        self.inner.top()
    }
    fn normalize_fraction(&self, num: &Element, den: &Element) -> Option<(Element, Element)> {
        self.inner.normalize_fraction(num, den)
    }
    fn modulus(&self) -> Option<u64> {
        self.inner.modulus()
    }
    fn solve(&self, sys: &LinearSystem, limits: &SolveLimits) -> Result<SolveOutcome, SolveError> {
        self.inner.solve(sys, limits)
    }
}

/// Semiring instances by name.
///
/// Besides registered names, the parametric forms `latticez(lo,hi)`,
/// `zmod(q)`, `product(s1,s2)` and `fractions(d)` are resolved on demand.
#[derive(Clone, Debug)]
pub struct Registry {
    entries: BTreeMap<String, SemiringRef>,
}

pub const BUILTIN_NAMES: [&str; 4] = ["boolean", "rational", "tropical-nat", "integers"];

impl Default for Registry {
    fn default() -> Self {
        Registry::with_builtins()
    }
}

fn call<'a>(text: &'a str, head: &str) -> Option<&'a str> {
    text.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

impl Registry {
    pub fn with_builtins() -> Self {
        let builtins: [SemiringRef; 4] = [Arc::new(Boolean), Arc::new(Rational), Arc::new(TropicalNat), Arc::new(Integers)];
        let entries = builtins.into_iter().map(|s| (s.name().to_string(), s)).collect();
        Registry { entries }
    }

    pub fn is_builtin(name: &str) -> bool {
        BUILTIN_NAMES.contains(&name)
    }

    /// Registered names in sorted order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    /// Registers `sr` under `name`, which must be an identifier that is
    /// not yet taken.
    pub fn register(&mut self, name: &str, sr: SemiringRef) -> Result<SemiringRef, SemiringError> {
        if self.entries.contains_key(name) {
            return Err(SemiringError::DuplicateName(name.to_string()));
        }
        if !valid_name(name) {
            return Err(SemiringError::malformed("semiring name", name));
        }
        let named = if sr.name() == name { sr } else { Named::new(name, sr) };
        self.entries.insert(name.to_string(), named.clone());
        Ok(named)
    }

    pub fn remove(&mut self, name: &str) -> Result<SemiringRef, SemiringError> {
        if Self::is_builtin(name) {
            return Err(SemiringError::Builtin(name.to_string()));
        }
        self.entries.remove(name).ok_or_else(|| SemiringError::UnknownSemiring(name.to_string()))
    }

    pub fn resolve(&self, name: &str) -> Result<SemiringRef, SemiringError> {
        let name = name.trim();
        if let Some(sr) = self.entries.get(name) {
            return Ok(sr.clone());
        }
        let unknown = || SemiringError::UnknownSemiring(name.to_string());
        if let Some(args) = call(name, "latticez") {
            let bounds = split_top_level(args).ok_or_else(unknown)?;
            let [lo, hi] = bounds[..] else { return Err(unknown()) };
            let lo = lo.trim().parse().map_err(|_| unknown())?;
            let hi = hi.trim().parse().map_err(|_| unknown())?;
            return Ok(Arc::new(LatticeZ::new(lo, hi)?));
        }
        if let Some(arg) = call(name, "zmod") {
            let q = arg.trim().parse().map_err(|_| unknown())?;
            return modulo_ring(q);
        }
        if let Some(args) = call(name, "product") {
            let parts = split_top_level(args).ok_or_else(unknown)?;
            let [l, r] = parts[..] else { return Err(unknown()) };
            return Ok(direct_product(self.resolve(l)?, self.resolve(r)?));
        }
        if let Some(arg) = call(name, "fractions") {
            return Ok(fraction_field(IntegralDomain::new(self.resolve(arg)?)?));
        }
        Err(unknown())
    }
}

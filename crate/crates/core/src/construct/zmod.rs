use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, RngCore};

use crate::semiring::{Capabilities, Element, Semiring, SemiringError, SemiringRef};
use crate::solve::{self, LinearSystem, SolveError, SolveLimits, SolveOutcome};

/// `ℤ_q` with canonical representatives in `[0, q)`.
#[derive(Debug, Clone)]
pub struct ZMod {
    q: u64,
    prime: bool,
    name: String,
}

/// The largest supported modulus; products of residues must fit in `u128`.
pub const MAX_MODULUS: u64 = 1 << 63;

/// Builds `ℤ_q`. It is a field exactly when `q` is prime.
pub fn modulo_ring(q: u64) -> Result<SemiringRef, SemiringError> {
    Ok(Arc::new(ZMod::new(q)?))
}

impl ZMod {
    pub fn new(q: u64) -> Result<Self, SemiringError> {
        if !(2..=MAX_MODULUS).contains(&q) {
            return Err(SemiringError::InvalidModulus(q));
        }
        let prime = solve::factorize(q) == [(q, 1)];
        Ok(ZMod { q, prime, name: format!("zmod({q})") })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    fn value(&self, e: &Element) -> u64 {
        match e {
            Element::Residue(r) => *r,
            other => panic!("{} given a {} element", self.name, other.variant_name()),
        }
    }
}

impl Semiring for ZMod {
    fn name(&self) -> &str {
        &self.name
    }

    fn capabilities(&self) -> Capabilities {
        let caps = if self.prime { Capabilities::field() } else { Capabilities::ring() };
        caps.finite()
    }

    fn zero(&self) -> Element {
        Element::Residue(0)
    }

    fn one(&self) -> Element {
        Element::Residue(1)
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        let sum = self.value(a) as u128 + self.value(b) as u128;
        Element::Residue((sum % self.q as u128) as u64)
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        let product = self.value(a) as u128 * self.value(b) as u128;
        Element::Residue((product % self.q as u128) as u64)
    }

    fn parse(&self, token: &str) -> Result<Element, SemiringError> {
        if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
            return Err(SemiringError::malformed(&self.name, token));
        }
        let big = BigUint::parse_bytes(token.as_bytes(), 10).ok_or_else(|| SemiringError::malformed(&self.name, token))?;
        let reduced = (big % self.q).to_u64().expect("residue below modulus");
        Ok(Element::Residue(reduced))
    }

    fn format(&self, e: &Element) -> String {
        self.value(e).to_string()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Element {
        Element::Residue(rng.gen_range(0..self.q))
    }

    fn contains(&self, e: &Element) -> bool {
        matches!(e, Element::Residue(r) if *r < self.q)
    }

    fn neg(&self, a: &Element) -> Option<Element> {
        let v = self.value(a);
        Some(Element::Residue(if v == 0 { 0 } else { self.q - v }))
    }

    fn inv(&self, a: &Element) -> Option<Element> {
        solve::zq_inverse(self.value(a), self.q).map(Element::Residue)
    }

    fn modulus(&self) -> Option<u64> {
        Some(self.q)
    }

    fn solve(&self, sys: &LinearSystem, limits: &SolveLimits) -> Result<SolveOutcome, SolveError> {
        if self.prime {
            solve::solve_field(self, sys, limits)
        } else {
            solve::solve_zq(self, sys, limits)
        }
    }
}

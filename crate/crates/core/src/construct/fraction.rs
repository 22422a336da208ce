use std::sync::Arc;

use rand::RngCore;

use crate::semiring::{check_domain_laws, is_zero, Capabilities, Element, Semiring, SemiringError, SemiringRef};

/// A commutative ring without zero divisors, vetted on samples.
#[derive(Debug, Clone)]
pub struct IntegralDomain {
    ring: SemiringRef,
}

impl IntegralDomain {
    /// Accepts `ring` if it declares additive inverses and passes the sampled
    /// commutativity and zero-divisor checks.
    pub fn new(ring: SemiringRef) -> Result<Self, SemiringError> {
        if !ring.capabilities().is_ring {
            return Err(SemiringError::CapabilityMismatch {
                semiring: ring.name().to_string(),
                needed: "additive inverses",
            });
        }
        check_domain_laws(ring.as_ref(), 1000, 0x1d)?;
        Ok(IntegralDomain { ring })
    }

    pub fn ring(&self) -> &SemiringRef {
        &self.ring
    }
}

/// Quotients `n/d` over an integral domain.
#[derive(Debug, Clone)]
pub struct FractionField {
    d: SemiringRef,
    name: String,
}

pub fn fraction_field(domain: IntegralDomain) -> SemiringRef {
    Arc::new(FractionField::new(domain))
}

fn parts(e: &Element) -> (&Element, &Element) {
    match e {
        Element::Fraction(f) => (&f.0, &f.1),
        other => panic!("fraction field given a {} element", other.variant_name()),
    }
}

/// Byte offset of the first `/` outside brackets.
fn slash_position(token: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in token.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            '/' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

impl FractionField {
    pub fn new(domain: IntegralDomain) -> Self {
        let name = format!("fractions({})", domain.ring.name());
        FractionField { d: domain.ring, name }
    }

    /// Builds `num/den`, normalized when the domain supports it.
    pub fn element(&self, num: Element, den: Element) -> Result<Element, SemiringError> {
        if is_zero(self.d.as_ref(), &den) {
            return Err(SemiringError::ZeroDenominator(format!("{}/{}", self.d.format(&num), self.d.format(&den))));
        }
        Ok(self.make(num, den))
    }

    fn make(&self, num: Element, den: Element) -> Element {
        match self.d.normalize_fraction(&num, &den) {
            Some((n, d)) => Element::fraction(n, d),
            None => Element::fraction(num, den),
        }
    }
}

impl Semiring for FractionField {
    fn name(&self) -> &str {
        &self.name
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::field()
    }

    fn zero(&self) -> Element {
        Element::fraction(self.d.zero(), self.d.one())
    }

    fn one(&self) -> Element {
        Element::fraction(self.d.one(), self.d.one())
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        let ((an, ad), (bn, bd)) = (parts(a), parts(b));
        let d = &self.d;
        self.make(d.add(&d.mul(an, bd), &d.mul(bn, ad)), d.mul(ad, bd))
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        let ((an, ad), (bn, bd)) = (parts(a), parts(b));
        self.make(self.d.mul(an, bn), self.d.mul(ad, bd))
    }

    /// Cross-multiplication, so unnormalized representatives compare correctly.
    fn eq(&self, a: &Element, b: &Element) -> bool {
        let ((an, ad), (bn, bd)) = (parts(a), parts(b));
        self.d.eq(&self.d.mul(an, bd), &self.d.mul(bn, ad))
    }

    fn parse(&self, token: &str) -> Result<Element, SemiringError> {
        let (num, den) = match slash_position(token) {
            Some(i) => (self.d.parse(&token[..i])?, self.d.parse(&token[i + 1..])?),
            None => (self.d.parse(token)?, self.d.one()),
        };
        self.element(num, den)
    }

    fn format(&self, e: &Element) -> String {
        let (n, d) = parts(e);
        if self.d.eq(d, &self.d.one()) {
            self.d.format(n)
        } else {
            format!("{}/{}", self.d.format(n), self.d.format(d))
        }
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Element {
        let num = self.d.sample(rng);
        let den = (0..16).map(|_| self.d.sample(rng)).find(|x| !is_zero(self.d.as_ref(), x)).unwrap_or_else(|| self.d.one());
        self.make(num, den)
    }

    fn contains(&self, e: &Element) -> bool {
        match e {
            Element::Fraction(f) => self.d.contains(&f.0) && self.d.contains(&f.1) && !is_zero(self.d.as_ref(), &f.1),
            _ => false,
        }
    }

    fn neg(&self, a: &Element) -> Option<Element> {
        let (n, d) = parts(a);
        Some(self.make(self.d.neg(n)?, d.clone()))
    }

    fn inv(&self, a: &Element) -> Option<Element> {
        let (n, d) = parts(a);
        if is_zero(self.d.as_ref(), n) {
            return None;
        }
        Some(self.make(d.clone(), n.clone()))
    }
}

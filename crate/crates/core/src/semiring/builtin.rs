use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore};

use super::{Capabilities, Element, Semiring, SemiringError, Tropical};

/// Splits an optional leading minus from a run of ASCII digits.
pub(crate) fn signed_digits(token: &str) -> Option<(bool, &str)> {
    let (negative, digits) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some((negative, digits))
}

pub(crate) fn parse_bigint(token: &str) -> Option<BigInt> {
    let (negative, digits) = signed_digits(token)?;
    let magnitude = BigInt::parse_bytes(digits.as_bytes(), 10)?;
    Some(if negative { -magnitude } else { magnitude })
}

/// The two-element Boolean algebra `({0,1}, ∨, ∧, 0, 1)`.
#[derive(Debug, Default, Clone, Copy)]
pub struct Boolean;

fn as_bool(e: &Element) -> bool {
    match e {
        Element::Bool(b) => *b,
        other => panic!("boolean semiring given a {} element", other.variant_name()),
    }
}

impl Semiring for Boolean {
    fn name(&self) -> &str {
        "boolean"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::lattice().finite()
    }

    fn zero(&self) -> Element {
        Element::Bool(false)
    }

    fn one(&self) -> Element {
        Element::Bool(true)
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        Element::Bool(as_bool(a) || as_bool(b))
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        Element::Bool(as_bool(a) && as_bool(b))
    }

    fn parse(&self, token: &str) -> Result<Element, SemiringError> {
        match token {
            "0" => Ok(Element::Bool(false)),
            "1" => Ok(Element::Bool(true)),
            _ => Err(SemiringError::malformed(self.name(), token)),
        }
    }

    fn format(&self, e: &Element) -> String {
        if as_bool(e) { "1" } else { "0" }.to_string()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Element {
        Element::Bool(rng.gen_bool(0.5))
    }

    fn contains(&self, e: &Element) -> bool {
        matches!(e, Element::Bool(_))
    }

    fn residuum(&self, a: &Element, b: &Element) -> Option<Element> {
        Some(Element::Bool(!as_bool(a) || as_bool(b)))
    }

    fn meet(&self, a: &Element, b: &Element) -> Option<Element> {
        Some(self.mul(a, b))
    }

    fn top(&self) -> Option<Element> {
        Some(Element::Bool(true))
    }
}

/// Exact rationals over arbitrary-precision integers.
#[derive(Debug, Default, Clone, Copy)]
pub struct Rational;

fn as_rational(e: &Element) -> &BigRational {
    match e {
        Element::Rational(r) => r,
        other => panic!("rational semiring given a {} element", other.variant_name()),
    }
}

impl Rational {
    pub fn element(num: i64, den: i64) -> Element {
        Element::Rational(BigRational::new(num.into(), den.into()))
    }
}

impl Semiring for Rational {
    fn name(&self) -> &str {
        "rational"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::field()
    }

    fn zero(&self) -> Element {
        Element::Rational(BigRational::zero())
    }

    fn one(&self) -> Element {
        Element::Rational(BigRational::one())
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        Element::Rational(as_rational(a) + as_rational(b))
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        Element::Rational(as_rational(a) * as_rational(b))
    }

    fn parse(&self, token: &str) -> Result<Element, SemiringError> {
        let malformed = || SemiringError::malformed(self.name(), token);
        let (num, den) = match token.split_once('/') {
            Some((n, d)) => {
                // only the numerator may carry a sign
                if d.starts_with('-') {
                    return Err(malformed());
                }
                (parse_bigint(n).ok_or_else(malformed)?, parse_bigint(d).ok_or_else(malformed)?)
            }
            None => (parse_bigint(token).ok_or_else(malformed)?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(SemiringError::ZeroDenominator(token.to_string()));
        }
        Ok(Element::Rational(BigRational::new(num, den)))
    }

    fn format(&self, e: &Element) -> String {
        let r = as_rational(e);
        if r.denom().is_one() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Element {
        let num: i64 = rng.gen_range(-9..=9);
        let den: i64 = if rng.gen_bool(0.75) { 1 } else { rng.gen_range(2..=3) };
        Rational::element(num, den)
    }

    fn contains(&self, e: &Element) -> bool {
        matches!(e, Element::Rational(r) if r.denom().is_positive())
    }

    fn neg(&self, a: &Element) -> Option<Element> {
        Some(Element::Rational(-as_rational(a)))
    }

    fn inv(&self, a: &Element) -> Option<Element> {
        let r = as_rational(a);
        (!r.is_zero()).then(|| Element::Rational(r.recip()))
    }
}

/// The tropical naturals `(ℕ ∪ {∞}, min, +, ∞, 0)`.
///
/// Ordered by `a ⊑ b` iff `b ≤ a` numerically, this is a residuated
/// l-monoid whose meet is the numeric maximum.
#[derive(Debug, Default, Clone, Copy)]
pub struct TropicalNat;

fn as_tropical(e: &Element) -> Tropical {
    match e {
        Element::Tropical(t) => *t,
        other => panic!("tropical semiring given a {} element", other.variant_name()),
    }
}

impl Semiring for TropicalNat {
    fn name(&self) -> &str {
        "tropical-nat"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities { is_tropical_nat: true, ..Capabilities::l_monoid() }
    }

    fn zero(&self) -> Element {
        Element::Tropical(Tropical::Infinity)
    }

    fn one(&self) -> Element {
        Element::Tropical(Tropical::Finite(0))
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        Element::Tropical(as_tropical(a).min(as_tropical(b)))
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        Element::Tropical(as_tropical(a).plus(as_tropical(b)))
    }

    fn parse(&self, token: &str) -> Result<Element, SemiringError> {
        if token == "inf" {
            return Ok(Element::Tropical(Tropical::Infinity));
        }
        if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
            return Err(SemiringError::malformed(self.name(), token));
        }
        token
            .parse::<u64>()
            .map(|n| Element::Tropical(Tropical::Finite(n)))
            .map_err(|_| SemiringError::malformed(self.name(), token))
    }

    fn format(&self, e: &Element) -> String {
        as_tropical(e).to_string()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Element {
        if rng.gen_ratio(1, 8) {
            Element::Tropical(Tropical::Infinity)
        } else {
            Element::Tropical(Tropical::Finite(rng.gen_range(0..=9)))
        }
    }

    fn contains(&self, e: &Element) -> bool {
        matches!(e, Element::Tropical(_))
    }

    fn residuum(&self, a: &Element, b: &Element) -> Option<Element> {
        // numerically least c with a + c ≥ b
        let c = match (as_tropical(a), as_tropical(b)) {
            (Tropical::Infinity, _) => Tropical::Finite(0),
            (Tropical::Finite(_), Tropical::Infinity) => Tropical::Infinity,
            (Tropical::Finite(a), Tropical::Finite(b)) => Tropical::Finite(b.saturating_sub(a)),
        };
        Some(Element::Tropical(c))
    }

    fn meet(&self, a: &Element, b: &Element) -> Option<Element> {
        Some(Element::Tropical(as_tropical(a).max(as_tropical(b))))
    }

    fn top(&self) -> Option<Element> {
        Some(self.one())
    }
}

/// Integers in `[lo, hi]` with `add = min`, `mul = max`, `zero = hi` and
/// `one = lo`. The lattice order is reversed numeric order.
#[derive(Debug, Clone)]
pub struct LatticeZ {
    lo: i64,
    hi: i64,
    name: String,
}

impl LatticeZ {
    pub fn new(lo: i64, hi: i64) -> Result<Self, SemiringError> {
        if lo > hi {
            return Err(SemiringError::InvalidInterval { lo, hi });
        }
        Ok(LatticeZ { lo, hi, name: format!("latticez({lo},{hi})") })
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    fn value(&self, e: &Element) -> i64 {
        match e {
            Element::Int(v) => *v,
            other => panic!("{} given a {} element", self.name, other.variant_name()),
        }
    }
}

impl Semiring for LatticeZ {
    fn name(&self) -> &str {
        &self.name
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::lattice().finite()
    }

    fn zero(&self) -> Element {
        Element::Int(self.hi)
    }

    fn one(&self) -> Element {
        Element::Int(self.lo)
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        Element::Int(self.value(a).min(self.value(b)))
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        Element::Int(self.value(a).max(self.value(b)))
    }

    fn parse(&self, token: &str) -> Result<Element, SemiringError> {
        let value = signed_digits(token)
            .and_then(|_| token.parse::<i64>().ok())
            .filter(|v| (self.lo..=self.hi).contains(v))
            .ok_or_else(|| SemiringError::malformed(&self.name, token))?;
        Ok(Element::Int(value))
    }

    fn format(&self, e: &Element) -> String {
        self.value(e).to_string()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Element {
        match rng.gen_range(0..10) {
            0 => Element::Int(self.lo),
            1 => Element::Int(self.hi),
            _ => Element::Int(rng.gen_range(self.lo..=self.hi)),
        }
    }

    fn contains(&self, e: &Element) -> bool {
        matches!(e, Element::Int(v) if (self.lo..=self.hi).contains(v))
    }

    fn residuum(&self, a: &Element, b: &Element) -> Option<Element> {
        // ⊑-greatest (numerically least) c with max(a, c) ≥ b
        let (a, b) = (self.value(a), self.value(b));
        Some(Element::Int(if b <= a { self.lo } else { b }))
    }

    fn meet(&self, a: &Element, b: &Element) -> Option<Element> {
        Some(self.mul(a, b))
    }

    fn top(&self) -> Option<Element> {
        Some(Element::Int(self.lo))
    }
}

/// The ring of integers; the integral domain fraction fields are built from.
#[derive(Debug, Default, Clone, Copy)]
pub struct Integers;

fn as_integer(e: &Element) -> &BigInt {
    match e {
        Element::Integer(n) => n,
        other => panic!("integer ring given a {} element", other.variant_name()),
    }
}

impl Semiring for Integers {
    fn name(&self) -> &str {
        "integers"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::ring()
    }

    fn zero(&self) -> Element {
        Element::Integer(BigInt::zero())
    }

    fn one(&self) -> Element {
        Element::Integer(BigInt::one())
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        Element::Integer(as_integer(a) + as_integer(b))
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        Element::Integer(as_integer(a) * as_integer(b))
    }

    fn parse(&self, token: &str) -> Result<Element, SemiringError> {
        parse_bigint(token)
            .map(Element::Integer)
            .ok_or_else(|| SemiringError::malformed(self.name(), token))
    }

    fn format(&self, e: &Element) -> String {
        as_integer(e).to_string()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Element {
        Element::Integer(rng.gen_range(-20i64..=20).into())
    }

    fn contains(&self, e: &Element) -> bool {
        matches!(e, Element::Integer(_))
    }

    fn neg(&self, a: &Element) -> Option<Element> {
        Some(Element::Integer(-as_integer(a)))
    }

    fn inv(&self, a: &Element) -> Option<Element> {
        let n = as_integer(a);
        (n.abs().is_one()).then(|| Element::Integer(n.clone()))
    }

    fn normalize_fraction(&self, num: &Element, den: &Element) -> Option<(Element, Element)> {
        let (num, den) = (as_integer(num), as_integer(den));
        if den.is_zero() {
            return None;
        }
        let g = num.gcd(den);
        let (mut n, mut d) = (num / &g, den / &g);
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        Some((Element::Integer(n), Element::Integer(d)))
    }
}

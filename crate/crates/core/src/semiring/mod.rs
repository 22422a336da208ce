//! The semiring abstraction every analysis is parametric over.
//!
//! A semiring is a runtime value ([`SemiringRef`]) rather than a type
//! parameter: products, moduli and poset lattices are assembled while the
//! program runs, so elements share one dynamically tagged representation
//! ([`Element`]) and each instance interprets the variants it owns.

mod builtin;
mod laws;

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::RngCore;
use thiserror::Error;

use crate::solve::{LinearSystem, SolveError, SolveLimits, SolveOutcome};

pub use builtin::{Boolean, Integers, LatticeZ, Rational, TropicalNat};
pub use laws::{check_domain_laws, check_l_monoid_laws, check_laws, Law, LawReport, LawViolation};

/// Shared handle to a semiring instance.
pub type SemiringRef = Arc<dyn Semiring>;

/// A natural number or infinity, the carrier of the tropical semiring.
///
/// The derived order puts every finite value below [`Tropical::Infinity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tropical {
    Finite(u64),
    Infinity,
}

impl Tropical {
    /// Sum in `ℕ ∪ {∞}`; overflow saturates to infinity.
    pub fn plus(self, other: Tropical) -> Tropical {
        match (self, other) {
            (Tropical::Finite(a), Tropical::Finite(b)) => {
                a.checked_add(b).map_or(Tropical::Infinity, Tropical::Finite)
            }
            _ => Tropical::Infinity,
        }
    }
}

impl fmt::Display for Tropical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tropical::Finite(n) => write!(f, "{n}"),
            Tropical::Infinity => f.write_str("inf"),
        }
    }
}

/// A semiring element.
///
/// Each instance only ever produces and accepts the variants it owns.
/// Values are normalized at construction (reduced fractions, canonical
/// residues), so derived equality is structural for every shipped instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Bool(bool),
    /// Bounded integer of a `latticez` instance.
    Int(i64),
    Integer(BigInt),
    Rational(BigRational),
    Tropical(Tropical),
    /// Canonical residue in `[0, q)`.
    Residue(u64),
    Pair(Box<(Element, Element)>),
    /// Numerator and denominator over some integral domain.
    Fraction(Box<(Element, Element)>),
    /// Downward-closed set of poset elements, as an index bitset.
    Downset(FixedBitSet),
}

impl Element {
    pub fn pair(left: Element, right: Element) -> Element {
        Element::Pair(Box::new((left, right)))
    }

    pub fn fraction(num: Element, den: Element) -> Element {
        Element::Fraction(Box::new((num, den)))
    }

    pub(crate) fn variant_name(&self) -> &'static str {
        match self {
            Element::Bool(_) => "boolean",
            Element::Int(_) => "bounded integer",
            Element::Integer(_) => "integer",
            Element::Rational(_) => "rational",
            Element::Tropical(_) => "tropical",
            Element::Residue(_) => "residue",
            Element::Pair(_) => "pair",
            Element::Fraction(_) => "fraction",
            Element::Downset(_) => "downset",
        }
    }
}

/// Structural properties an instance declares about itself.
///
/// Algorithm eligibility is decided from these flags alone.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Capabilities {
    /// Additive inverses exist.
    pub is_ring: bool,
    pub is_field: bool,
    /// `add` is join, `mul` is meet, both idempotent.
    pub is_lattice: bool,
    /// Join-semilattice with a monoid distributing over joins.
    pub is_l_monoid: bool,
    pub has_residuation: bool,
    /// Exactly the tropical naturals `(ℕ ∪ {∞}, min, +, ∞, 0)`.
    pub is_tropical_nat: bool,
    pub is_finite: bool,
}

impl Capabilities {
    pub const NONE: Capabilities = Capabilities {
        is_ring: false,
        is_field: false,
        is_lattice: false,
        is_l_monoid: false,
        has_residuation: false,
        is_tropical_nat: false,
        is_finite: false,
    };

    pub fn ring() -> Self {
        Capabilities { is_ring: true, ..Self::NONE }
    }

    pub fn field() -> Self {
        Capabilities { is_ring: true, is_field: true, ..Self::NONE }
    }

    pub fn lattice() -> Self {
        Capabilities {
            is_lattice: true,
            is_l_monoid: true,
            has_residuation: true,
            ..Self::NONE
        }
    }

    pub fn l_monoid() -> Self {
        Capabilities { is_l_monoid: true, has_residuation: true, ..Self::NONE }
    }

    pub fn finite(self) -> Self {
        Capabilities { is_finite: true, ..self }
    }

    /// Checks the implications `field ⇒ ring`, `lattice ⇒ l-monoid` and
    /// `l-monoid ⇒ residuation`.
    pub fn is_consistent(&self) -> bool {
        (!self.is_field || self.is_ring)
            && (!self.is_lattice || self.is_l_monoid)
            && (!self.is_l_monoid || self.has_residuation)
    }

    /// Flag-wise conjunction.
    pub fn meet(self, other: Capabilities) -> Capabilities {
        Capabilities {
            is_ring: self.is_ring && other.is_ring,
            is_field: self.is_field && other.is_field,
            is_lattice: self.is_lattice && other.is_lattice,
            is_l_monoid: self.is_l_monoid && other.is_l_monoid,
            has_residuation: self.has_residuation && other.has_residuation,
            is_tropical_nat: self.is_tropical_nat && other.is_tropical_nat,
            is_finite: self.is_finite && other.is_finite,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemiringError {
    #[error("malformed {semiring} element `{token}`")]
    MalformedElement { semiring: String, token: String },
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("invalid modulus {0}: must be at least 2")]
    InvalidModulus(u64),
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: i64, hi: i64 },
    #[error("not a partial order: {0}")]
    NotAPoset(String),
    #[error("unknown condition `{0}`")]
    UnknownCondition(String),
    #[error("a semiring named `{0}` is already registered")]
    DuplicateName(String),
    #[error("unknown semiring `{0}`")]
    UnknownSemiring(String),
    #[error("semiring `{name}` is referenced by {references} stored model(s)")]
    InUse { name: String, references: usize },
    #[error("built-in semiring `{0}` cannot be removed")]
    Builtin(String),
    #[error("{0}")]
    LawViolation(#[from] LawViolation),
    #[error("semiring `{semiring}` lacks capability: {needed}")]
    CapabilityMismatch { semiring: String, needed: &'static str },
}

impl SemiringError {
    pub(crate) fn malformed(semiring: &str, token: &str) -> Self {
        SemiringError::MalformedElement { semiring: semiring.to_string(), token: token.to_string() }
    }
}

/// A semiring instance: carrier operations, constants, element I/O,
/// capability flags and a linear-system solver.
///
/// The optional operations return `None` when the instance does not provide
/// them (or, for [`Semiring::inv`], when the argument is not a unit).
pub trait Semiring: fmt::Debug + Send + Sync {
    fn name(&self) -> &str;
    fn capabilities(&self) -> Capabilities;

    fn zero(&self) -> Element;
    fn one(&self) -> Element;
    fn add(&self, a: &Element, b: &Element) -> Element;
    fn mul(&self, a: &Element, b: &Element) -> Element;

    /// Element equality; structural unless the instance keeps
    /// unnormalized representatives.
    fn eq(&self, a: &Element, b: &Element) -> bool {
        a == b
    }

    fn parse(&self, token: &str) -> Result<Element, SemiringError>;
    fn format(&self, e: &Element) -> String;

    /// Draws a pseudo-random element for law checks and random models.
    fn sample(&self, rng: &mut dyn RngCore) -> Element;

    /// Whether `e` is a well-formed element of this instance.
    fn contains(&self, e: &Element) -> bool;

    fn neg(&self, _a: &Element) -> Option<Element> {
        None
    }

    fn inv(&self, _a: &Element) -> Option<Element> {
        None
    }

    /// `a \ b`: the ⊑-greatest `c` with `a·c ⊑ b`.
    fn residuum(&self, _a: &Element, _b: &Element) -> Option<Element> {
        None
    }

    /// Lattice meet with respect to the order induced by `add`.
    fn meet(&self, _a: &Element, _b: &Element) -> Option<Element> {
        None
    }

    /// Greatest element of the order induced by `add`.
    fn top(&self) -> Option<Element> {
        let zero = self.zero();
        self.residuum(&zero, &zero)
    }

    /// Reduces `num/den` to a canonical representative, for integral
    /// domains that support it.
    fn normalize_fraction(&self, _num: &Element, _den: &Element) -> Option<(Element, Element)> {
        None
    }

    /// The modulus `q` of a `ℤ_q` instance.
    fn modulus(&self) -> Option<u64> {
        None
    }

    /// Solves `x·A = b`; see [`crate::solve`].
    fn solve(&self, sys: &LinearSystem, limits: &SolveLimits) -> Result<SolveOutcome, SolveError> {
        crate::solve::solve_by_capability(self, sys, limits)
    }
}

pub fn is_zero<S: Semiring + ?Sized>(sr: &S, a: &Element) -> bool {
    sr.eq(a, &sr.zero())
}

/// The order induced by addition: `a ⊑ b` iff `a + b = b`.
pub fn leq<S: Semiring + ?Sized>(sr: &S, a: &Element, b: &Element) -> bool {
    sr.eq(&sr.add(a, b), b)
}

pub fn sum<S, I>(sr: &S, items: I) -> Element
where
    S: Semiring + ?Sized,
    I: IntoIterator<Item = Element>,
{
    items.into_iter().fold(sr.zero(), |acc, x| sr.add(&acc, &x))
}

pub fn vectors_eq<S: Semiring + ?Sized>(sr: &S, a: &[Element], b: &[Element]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| sr.eq(x, y))
}

pub fn format_vector<S: Semiring + ?Sized>(sr: &S, v: &[Element]) -> String {
    let parts: Vec<String> = v.iter().map(|e| sr.format(e)).collect();
    format!("({})", parts.join(", "))
}

/// Parses a comma-separated list of element tokens. Commas nested inside
/// `(..)` or `{..}` do not split.
pub fn parse_vector<S: Semiring + ?Sized>(sr: &S, text: &str) -> Result<Vec<Element>, SemiringError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    split_top_level(text)
        .ok_or_else(|| SemiringError::malformed(sr.name(), text))?
        .into_iter()
        .map(|tok| sr.parse(tok.trim()))
        .collect()
}

/// Splits at commas that are not nested in brackets. Returns `None` on
/// unbalanced brackets.
pub fn split_top_level(text: &str) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return None;
    }
    parts.push(&text[start..]);
    Some(parts)
}

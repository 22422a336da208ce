use std::fmt;

use rand::rngs::StdRng;
use rand::SeedableRng;
use thiserror::Error;

use super::{is_zero, leq, Element, Semiring};

/// A semiring axiom checked by [`check_laws`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Law {
    AddAssociative,
    AddCommutative,
    AddIdentity,
    MulAssociative,
    MulIdentity,
    Annihilation,
    LeftDistributive,
    RightDistributive,
    MulCommutative,
    NoZeroDivisors,
    AddIdempotent,
    Residuation,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Law::AddAssociative => "associativity of +",
            Law::AddCommutative => "commutativity of +",
            Law::AddIdentity => "0 is the unit of +",
            Law::MulAssociative => "associativity of ·",
            Law::MulIdentity => "1 is the unit of ·",
            Law::Annihilation => "0 annihilates ·",
            Law::LeftDistributive => "left distributivity",
            Law::RightDistributive => "right distributivity",
            Law::MulCommutative => "commutativity of ·",
            Law::NoZeroDivisors => "absence of zero divisors",
            Law::AddIdempotent => "idempotence of +",
            Law::Residuation => "the residuation adjunction",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{semiring} violates {law} on ({}, {}, {})", triple[0], triple[1], triple[2])]
pub struct LawViolation {
    pub semiring: String,
    pub law: Law,
    pub triple: [String; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub semiring: String,
    pub samples: usize,
}

/// Evaluates the semiring axioms on `samples` pseudo-random triples and
/// reports the first violation.
pub fn check_laws<S: Semiring + ?Sized>(sr: &S, samples: usize, seed: u64) -> Result<LawReport, LawViolation> {
    let mut rng = StdRng::seed_from_u64(seed);
    let zero = sr.zero();
    let one = sr.one();
    for _ in 0..samples {
        let a = sr.sample(&mut rng);
        let b = sr.sample(&mut rng);
        let c = sr.sample(&mut rng);
        let fail = |law| LawViolation {
            semiring: sr.name().to_string(),
            law,
            triple: [sr.format(&a), sr.format(&b), sr.format(&c)],
        };
        let add = |x: &Element, y: &Element| sr.add(x, y);
        let mul = |x: &Element, y: &Element| sr.mul(x, y);

        if !sr.eq(&add(&add(&a, &b), &c), &add(&a, &add(&b, &c))) {
            return Err(fail(Law::AddAssociative));
        }
        if !sr.eq(&add(&a, &b), &add(&b, &a)) {
            return Err(fail(Law::AddCommutative));
        }
        if !sr.eq(&add(&a, &zero), &a) || !sr.eq(&add(&zero, &a), &a) {
            return Err(fail(Law::AddIdentity));
        }
        if !sr.eq(&mul(&mul(&a, &b), &c), &mul(&a, &mul(&b, &c))) {
            return Err(fail(Law::MulAssociative));
        }
        if !sr.eq(&mul(&a, &one), &a) || !sr.eq(&mul(&one, &a), &a) {
            return Err(fail(Law::MulIdentity));
        }
        if !sr.eq(&mul(&a, &zero), &zero) || !sr.eq(&mul(&zero, &a), &zero) {
            return Err(fail(Law::Annihilation));
        }
        if !sr.eq(&mul(&a, &add(&b, &c)), &add(&mul(&a, &b), &mul(&a, &c))) {
            return Err(fail(Law::LeftDistributive));
        }
        if !sr.eq(&mul(&add(&a, &b), &c), &add(&mul(&a, &c), &mul(&b, &c))) {
            return Err(fail(Law::RightDistributive));
        }
    }
    Ok(LawReport { semiring: sr.name().to_string(), samples })
}

/// Runs [`check_laws`] and additionally checks, on the same number of
/// samples, that `+` is idempotent and that `a·c ⊑ b ⟺ c ⊑ a\b`.
pub fn check_l_monoid_laws<S: Semiring + ?Sized>(sr: &S, samples: usize, seed: u64) -> Result<LawReport, LawViolation> {
    let report = check_laws(sr, samples, seed)?;
    let mut rng = StdRng::seed_from_u64(seed ^ 0x5eed);
    for _ in 0..samples {
        let a = sr.sample(&mut rng);
        let b = sr.sample(&mut rng);
        let c = sr.sample(&mut rng);
        let fail = |law| LawViolation {
            semiring: sr.name().to_string(),
            law,
            triple: [sr.format(&a), sr.format(&b), sr.format(&c)],
        };
        if !sr.eq(&sr.add(&a, &a), &a) {
            return Err(fail(Law::AddIdempotent));
        }
        let Some(r) = sr.residuum(&a, &b) else {
            return Err(fail(Law::Residuation));
        };
        if leq(sr, &sr.mul(&a, &c), &b) != leq(sr, &c, &r) {
            return Err(fail(Law::Residuation));
        }
    }
    Ok(report)
}

/// Sampled checks that multiplication commutes and has no zero divisors.
pub fn check_domain_laws<S: Semiring + ?Sized>(sr: &S, samples: usize, seed: u64) -> Result<LawReport, LawViolation> {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..samples {
        let a = sr.sample(&mut rng);
        let b = sr.sample(&mut rng);
        let fail = |law| LawViolation {
            semiring: sr.name().to_string(),
            law,
            triple: [sr.format(&a), sr.format(&b), String::new()],
        };
        let ab = sr.mul(&a, &b);
        if !sr.eq(&ab, &sr.mul(&b, &a)) {
            return Err(fail(Law::MulCommutative));
        }
        if is_zero(sr, &ab) && !is_zero(sr, &a) && !is_zero(sr, &b) {
            return Err(fail(Law::NoZeroDivisors));
        }
    }
    Ok(LawReport { semiring: sr.name().to_string(), samples })
}

//! Linear systems over `ℤ_q` for composite `q`.
//!
//! `q` is split into prime powers. Modulo each `p^e` the system is
//! row-reduced once over the field `ℤ_p`; a solution is then built one base-`p`
//! digit at a time (Hensel lifting). Which digit choices extend to a full
//! solution is not known in advance, so the free unknowns of every level are
//! enumerated depth-first in ascending order. The per-prime-power solutions
//! are recombined with the Chinese remainder theorem.

use super::{mismatch, LinearSystem, SolveError, SolveLimits, SolveOutcome, SolveStats};
use crate::semiring::{Element, Semiring};

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push((n, 1));
    }
    factors
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quotient = old_r / r;
        (old_r, r) = (r, old_r - quotient * r);
        (old_s, s) = (s, old_s - quotient * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// Row-reduced form of the constraint matrix modulo a prime, with the
/// row transformation kept so right-hand sides can be reduced later.
struct Echelon {
    p: u64,
    /// `reduced[r][i]` for constraint row `r` and unknown `i`.
    reduced: Vec<Vec<u64>>,
    /// `transform · original = reduced`.
    transform: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    free: Vec<usize>,
    unknowns: usize,
}

impl Echelon {
    fn new(coefficients: &[Vec<u64>], constraints: usize, p: u64, stats: &mut SolveStats) -> Self {
        let n = coefficients.len();
        let m = constraints;
        let mut reduced: Vec<Vec<u64>> = (0..m).map(|j| (0..n).map(|i| coefficients[i][j] % p).collect()).collect();
        let mut transform: Vec<Vec<u64>> = (0..m).map(|j| (0..m).map(|k| u64::from(j == k)).collect()).collect();
        let mut pivots = Vec::new();
        let mut free = Vec::new();
        for col in 0..n {
            let rank = pivots.len();
            let Some(r) = (rank..m).find(|&r| reduced[r][col] != 0) else {
                free.push(col);
                continue;
            };
            reduced.swap(rank, r);
            transform.swap(rank, r);
            let inv = inv_mod(reduced[rank][col], p).expect("nonzero residue modulo a prime");
            for e in reduced[rank].iter_mut().chain(transform[rank].iter_mut()) {
                *e = mul_mod(*e, inv, p);
            }
            for k in 0..m {
                let factor = reduced[k][col];
                if k == rank || factor == 0 {
                    continue;
                }
                let neg = p - factor;
                for i in 0..n {
                    reduced[k][i] = (reduced[k][i] + mul_mod(neg, reduced[rank][i], p)) % p;
                }
                for i in 0..m {
                    transform[k][i] = (transform[k][i] + mul_mod(neg, transform[rank][i], p)) % p;
                }
                stats.eliminations += 1;
            }
            pivots.push(col);
        }
        Echelon { p, reduced, transform, pivots, free, unknowns: n }
    }

    /// Reduces a right-hand side; `None` if the system is inconsistent.
    fn reduce_rhs(&self, rhs: &[u64]) -> Option<Vec<u64>> {
        let p = self.p;
        let reduced: Vec<u64> = self
            .transform
            .iter()
            .map(|row| row.iter().zip(rhs).fold(0, |acc, (&t, &c)| (acc + mul_mod(t, c, p)) % p))
            .collect();
        reduced[self.pivots.len()..].iter().all(|&c| c == 0).then_some(reduced)
    }

    /// The solution digit for one assignment of the free unknowns.
    fn digit(&self, rhs: &[u64], assignment: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut y = vec![0u64; self.unknowns];
        for (&col, &value) in self.free.iter().zip(assignment) {
            y[col] = value;
        }
        for (row, &col) in self.pivots.iter().enumerate() {
            let mut v = rhs[row];
            for (&f, &t) in self.free.iter().zip(assignment) {
                v = (v + mul_mod(p - self.reduced[row][f], t, p)) % p;
            }
            y[col] = v;
        }
        y
    }
}

struct Lifter<'a> {
    coefficients: &'a [Vec<u64>],
    target: &'a [u64],
    modulus: u64,
    exponent: u32,
    echelon: Echelon,
    limits: &'a SolveLimits,
    stats: SolveStats,
}

impl Lifter<'_> {
    /// Extends `x`, a solution modulo `p^level`, to one modulo `p^exponent`.
    fn lift(&mut self, x: Vec<u64>, level: u32, scale: u64) -> Result<Option<Vec<u64>>, SolveError> {
        if level == self.exponent {
            return Ok(Some(x));
        }
        let p = self.echelon.p;
        let q = self.modulus;
        // residual b - A·x is divisible by p^level
        let rhs: Vec<u64> = (0..self.target.len())
            .map(|j| {
                let ax = x
                    .iter()
                    .zip(self.coefficients)
                    .fold(0, |acc, (&xi, row)| (acc + mul_mod(xi, row[j], q)) % q);
                let residual = (self.target[j] + q - ax) % q;
                debug_assert_eq!(residual % scale, 0);
                (residual / scale) % p
            })
            .collect();
        let Some(rhs) = self.echelon.reduce_rhs(&rhs) else {
            return Ok(None);
        };
        let free = self.echelon.free.len();
        let mut assignment = vec![0u64; free];
        loop {
            if self.stats.enumerated >= self.limits.max_assignments || self.limits.cancel.is_cancelled() {
                return Err(SolveError::BudgetExhausted { stats: self.stats });
            }
            self.stats.enumerated += 1;
            if level > 0 {
                self.stats.lift_steps += 1;
            }
            let digit = self.echelon.digit(&rhs, &assignment);
            let next: Vec<u64> = x.iter().zip(&digit).map(|(&xi, &d)| xi + scale * d).collect();
            if let Some(solution) = self.lift(next, level + 1, scale * p)? {
                return Ok(Some(solution));
            }
            // odometer over ℤ_p^free, last free unknown fastest
            let mut k = free;
            loop {
                if k == 0 {
                    return Ok(None);
                }
                k -= 1;
                assignment[k] += 1;
                if assignment[k] < p {
                    break;
                }
                assignment[k] = 0;
            }
        }
    }
}

fn residues<S: Semiring + ?Sized>(sr: &S, row: &[Element], q: u64) -> Vec<u64> {
    row.iter()
        .map(|e| match e {
            Element::Residue(r) => r % q,
            other => panic!("{} given a {} element", sr.name(), other.variant_name()),
        })
        .collect()
}

/// Solves `x·A = b` over `ℤ_q`, where `q` is the instance's modulus.
pub fn solve_zq<S: Semiring + ?Sized>(
    sr: &S,
    sys: &LinearSystem,
    limits: &SolveLimits,
) -> Result<SolveOutcome, SolveError> {
    let q = sr.modulus().ok_or_else(|| mismatch(sr, "a modulus"))?;
    let coefficients: Vec<Vec<u64>> = sys.coefficients.iter().map(|row| residues(sr, row, q)).collect();
    let target = residues(sr, &sys.target, q);
    let n = sys.unknowns();

    let mut stats = SolveStats::default();
    let mut combined = vec![0u64; n];
    let mut combined_modulus = 1u64;
    for (p, e) in factorize(q) {
        let pe = p.pow(e);
        let local_coeffs: Vec<Vec<u64>> = coefficients.iter().map(|r| r.iter().map(|c| c % pe).collect()).collect();
        let local_target: Vec<u64> = target.iter().map(|c| c % pe).collect();
        let echelon = Echelon::new(&local_coeffs, sys.constraints(), p, &mut stats);
        let mut lifter = Lifter {
            coefficients: &local_coeffs,
            target: &local_target,
            modulus: pe,
            exponent: e,
            echelon,
            limits,
            stats,
        };
        let found = lifter.lift(vec![0; n], 0, 1);
        stats = lifter.stats;
        let local = match found {
            Ok(Some(x)) => x,
            Ok(None) => return Ok(SolveOutcome { solution: None, stats }),
            Err(SolveError::BudgetExhausted { .. }) => return Err(SolveError::BudgetExhausted { stats }),
            Err(other) => return Err(other),
        };
        // CRT: x ≡ combined (mod M), x ≡ local (mod pe)
        let m_inv = inv_mod(combined_modulus % pe, pe).expect("coprime moduli");
        for (c, l) in combined.iter_mut().zip(&local) {
            let diff = (l + pe - *c % pe) % pe;
            let k = mul_mod(diff, m_inv, pe);
            *c += combined_modulus * k;
        }
        combined_modulus *= pe;
    }
    let solution = combined.into_iter().map(Element::Residue).collect();
    Ok(SolveOutcome { solution: Some(solution), stats })
}

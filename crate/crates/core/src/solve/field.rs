use super::{mismatch, LinearSystem, SolveError, SolveLimits, SolveOutcome, SolveStats};
use crate::semiring::{is_zero, Element, Semiring};

/// Gauss-Jordan elimination over a field.
///
/// Pivots are the first nonzero entry of each unknown's column, taken in
/// unknown order; free unknowns are set to zero.
pub fn solve_field<S: Semiring + ?Sized>(
    sr: &S,
    sys: &LinearSystem,
    limits: &SolveLimits,
) -> Result<SolveOutcome, SolveError> {
    if !sr.capabilities().is_field {
        return Err(mismatch(sr, "a field"));
    }
    let n = sys.unknowns();
    let m = sys.constraints();
    let mut stats = SolveStats::default();

    // One row per constraint: coefficients of every unknown, then the target.
    let mut rows: Vec<Vec<Element>> = (0..m)
        .map(|j| {
            let mut row: Vec<Element> = sys.coefficients.iter().map(|c| c[j].clone()).collect();
            row.push(sys.target[j].clone());
            row
        })
        .collect();

    let mut pivot_cols = Vec::new();
    for col in 0..n {
        let rank = pivot_cols.len();
        if rank == m {
            break;
        }
        if limits.cancel.is_cancelled() {
            return Err(SolveError::BudgetExhausted { stats });
        }
        let Some(p) = (rank..m).find(|&r| !is_zero(sr, &rows[r][col])) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = sr.inv(&rows[rank][col]).ok_or_else(|| mismatch(sr, "inverses of nonzero elements"))?;
        for e in rows[rank][col..].iter_mut() {
            *e = sr.mul(&inv, e);
        }
        let pivot_row = rows[rank].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == rank || is_zero(sr, &row[col]) {
                continue;
            }
            let factor = sr.neg(&row[col]).ok_or_else(|| mismatch(sr, "additive inverses"))?;
            for (e, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *e = sr.add(e, &sr.mul(&factor, p));
            }
            stats.eliminations += 1;
        }
        pivot_cols.push(col);
    }

    let rank = pivot_cols.len();
    if rows[rank..].iter().any(|row| !is_zero(sr, &row[n])) {
        return Ok(SolveOutcome { solution: None, stats });
    }
    let mut x = vec![sr.zero(); n];
    for (row, &col) in pivot_cols.iter().enumerate() {
        x[col] = rows[row][n].clone();
    }
    Ok(SolveOutcome { solution: Some(x), stats })
}

use super::{mismatch, LinearSystem, SolveError, SolveLimits, SolveOutcome, SolveStats};
use crate::semiring::Semiring;

/// Residuation solver for l-monoids.
///
/// Each unknown gets the ⊑-greatest value compatible with every constraint,
/// `x[i] = ⊓_j A[i][j] \ b[j]`; the candidate is then substituted back.
/// Whenever the system is solvable this candidate is its greatest solution,
/// so a failed substitution proves unsolvability. Linear in the size of `A`.
pub fn solve_residuation<S: Semiring + ?Sized>(
    sr: &S,
    sys: &LinearSystem,
    _limits: &SolveLimits,
) -> Result<SolveOutcome, SolveError> {
    if !sr.capabilities().has_residuation {
        return Err(mismatch(sr, "residuation"));
    }
    let top = sr.top().ok_or_else(|| mismatch(sr, "a greatest element"))?;
    let mut candidate = Vec::with_capacity(sys.unknowns());
    for row in &sys.coefficients {
        let mut xi = top.clone();
        for (a, b) in row.iter().zip(&sys.target) {
            let r = sr.residuum(a, b).ok_or_else(|| mismatch(sr, "a residuum"))?;
            xi = sr.meet(&xi, &r).ok_or_else(|| mismatch(sr, "a lattice meet"))?;
        }
        candidate.push(xi);
    }
    let stats = SolveStats::default();
    let solution = sys.is_satisfied_by(sr, &candidate).then_some(candidate);
    Ok(SolveOutcome { solution, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{leq, Boolean, Element, LatticeZ};

    fn b(v: u8) -> Element {
        Element::Bool(v == 1)
    }

    #[test]
    fn boolean_solvable() {
        // x·[[1,1],[0,1]] = [1,1]
        let sys = LinearSystem::new(vec![vec![b(1), b(1)], vec![b(0), b(1)]], vec![b(1), b(1)]).unwrap();
        let out = solve_residuation(&Boolean, &sys, &SolveLimits::default()).unwrap();
        assert_eq!(out.solution, Some(vec![b(1), b(1)]));
    }

    #[test]
    fn boolean_bottom_row_cannot_reach_one() {
        let sys = LinearSystem::new(vec![vec![b(0)]], vec![b(1)]).unwrap();
        assert_eq!(solve_residuation(&Boolean, &sys, &SolveLimits::default()).unwrap().solution, None);
    }

    #[test]
    fn latticez_candidate() {
        let l = LatticeZ::new(-2, 2).unwrap();
        let sys = LinearSystem::new(vec![vec![Element::Int(0)]], vec![Element::Int(1)]).unwrap();
        let out = solve_residuation(&l, &sys, &SolveLimits::default()).unwrap();
        assert_eq!(out.solution, Some(vec![Element::Int(1)]));
    }

    #[test]
    fn candidate_is_greatest_solution_exhaustively() {
        // every 1×2 and 2×1 system over latticez(-2,2)
        let l = LatticeZ::new(-2, 2).unwrap();
        let vals: Vec<Element> = (-2..=2).map(Element::Int).collect();
        for a0 in &vals {
            for a1 in &vals {
                for t in &vals {
                    let sys = LinearSystem::new(vec![vec![a0.clone()], vec![a1.clone()]], vec![t.clone()]).unwrap();
                    let out = solve_residuation(&l, &sys, &SolveLimits::default()).unwrap();
                    let solutions: Vec<Vec<Element>> = vals
                        .iter()
                        .flat_map(|x| vals.iter().map(move |y| vec![x.clone(), y.clone()]))
                        .filter(|x| sys.is_satisfied_by(&l, x))
                        .collect();
                    match out.solution {
                        None => assert!(solutions.is_empty()),
                        Some(best) => {
                            for s in &solutions {
                                assert!(s.iter().zip(&best).all(|(si, bi)| leq(&l, si, bi)));
                            }
                        }
                    }
                }
            }
        }
    }
}

use proptest::prelude::*;
use wautom_core::construct::Registry;
use wautom_core::semiring::{leq, Element, SemiringRef};
use wautom_core::solve::{solve, solve_zq, LinearSystem, SolveLimits};

fn resolve(name: &str) -> SemiringRef {
    Registry::with_builtins().resolve(name).unwrap()
}

fn parse_all(sr: &SemiringRef, rows: &[Vec<i64>]) -> Vec<Vec<Element>> {
    rows.iter().map(|r| r.iter().map(|v| sr.parse(&v.to_string()).unwrap()).collect()).collect()
}

/// Every vector in `carrier^n`.
fn assignments(carrier: &[Element], n: usize) -> Vec<Vec<Element>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                carrier.iter().map(move |e| {
                    let mut w = v.clone();
                    w.push(e.clone());
                    w
                })
            })
            .collect();
    }
    out
}

fn system(
    q: u64,
    n: usize,
    m: usize,
) -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<i64>)> {
    let q = q as i64;
    (
        prop::collection::vec(prop::collection::vec(0..q, m), n),
        prop::collection::vec(0..q, m),
    )
}

fn modular_case() -> impl Strategy<Value = (u64, Vec<Vec<i64>>, Vec<i64>)> {
    (2u64..=12, 1usize..=3, 1usize..=3).prop_flat_map(|(q, n, m)| system(q, n, m).prop_map(move |(a, b)| (q, a, b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn zq_agrees_with_brute_force((q, a, b) in modular_case()) {
        let sr = resolve(&format!("zmod({q})"));
        let sys = LinearSystem::new(parse_all(&sr, &a), parse_all(&sr, &[b])[0].clone()).unwrap();
        let out = solve_zq(sr.as_ref(), &sys, &SolveLimits::default()).unwrap();
        let carrier: Vec<Element> = (0..q).map(|v| sr.parse(&v.to_string()).unwrap()).collect();
        let brute = assignments(&carrier, sys.unknowns()).iter().any(|x| sys.is_satisfied_by(sr.as_ref(), x));
        prop_assert_eq!(out.is_solvable(), brute);
        if let Some(x) = out.solution {
            prop_assert!(sys.is_satisfied_by(sr.as_ref(), &x));
        }
    }

    #[test]
    fn prime_field_agrees_with_brute_force((a, b) in system(5, 3, 3)) {
        let sr = resolve("zmod(5)");
        let sys = LinearSystem::new(parse_all(&sr, &a), parse_all(&sr, &[b])[0].clone()).unwrap();
        let out = solve(sr.as_ref(), &sys, &SolveLimits::default()).unwrap();
        let carrier: Vec<Element> = (0..5).map(|v| sr.parse(&v.to_string()).unwrap()).collect();
        let brute = assignments(&carrier, 3).iter().any(|x| sys.is_satisfied_by(sr.as_ref(), x));
        prop_assert_eq!(out.is_solvable(), brute);
    }

    #[test]
    fn rational_solutions_are_exact(a in prop::collection::vec(prop::collection::vec(-4i64..5, 3), 3), x in prop::collection::vec(-3i64..4, 3)) {
        // b = x·A is solvable by construction
        let sr = resolve("rational");
        let coeffs = parse_all(&sr, &a);
        let xs = parse_all(&sr, &[x])[0].clone();
        let probe = LinearSystem::new(coeffs.clone(), vec![sr.zero(); 3]).unwrap();
        let b = probe.apply(sr.as_ref(), &xs);
        let sys = LinearSystem::new(coeffs, b).unwrap();
        let out = solve(sr.as_ref(), &sys, &SolveLimits::default()).unwrap();
        let sol = out.solution.expect("constructed solvable");
        prop_assert!(sys.is_satisfied_by(sr.as_ref(), &sol));
    }

    #[test]
    fn residuation_gives_the_greatest_solution(
        a in prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 1..=3),
        b in prop::collection::vec(-2i64..=2, 2),
    ) {
        let sr = resolve("latticez(-2,2)");
        let sys = LinearSystem::new(parse_all(&sr, &a), parse_all(&sr, &[b])[0].clone()).unwrap();
        let out = solve(sr.as_ref(), &sys, &SolveLimits::default()).unwrap();
        let carrier: Vec<Element> = (-2..=2).map(|v| sr.parse(&v.to_string()).unwrap()).collect();
        let solutions: Vec<Vec<Element>> = assignments(&carrier, sys.unknowns())
            .into_iter()
            .filter(|x| sys.is_satisfied_by(sr.as_ref(), x))
            .collect();
        prop_assert_eq!(out.is_solvable(), !solutions.is_empty());
        if let Some(x) = out.solution {
            for s in &solutions {
                prop_assert!(s.iter().zip(&x).all(|(si, xi)| leq(sr.as_ref(), si, xi)));
            }
        }
    }

    #[test]
    fn product_solves_iff_both_sides_do(
        a in prop::collection::vec(prop::collection::vec((0i64..3, -2i64..3), 2), 2),
        b in prop::collection::vec((0i64..3, -2i64..3), 2),
    ) {
        let sr = resolve("product(zmod(3),rational)");
        let left = resolve("zmod(3)");
        let right = resolve("rational");
        let pair = |(l, r): &(i64, i64)| sr.parse(&format!("({l},{r})")).unwrap();
        let coeffs: Vec<Vec<Element>> = a.iter().map(|row| row.iter().map(pair).collect()).collect();
        let target: Vec<Element> = b.iter().map(pair).collect();
        let sys = LinearSystem::new(coeffs, target).unwrap();
        let project = |side: &SemiringRef, pick: fn(&(i64, i64)) -> i64| {
            let coeffs = a.iter().map(|row| row.iter().map(|p| side.parse(&pick(p).to_string()).unwrap()).collect()).collect();
            let target = b.iter().map(|p| side.parse(&pick(p).to_string()).unwrap()).collect();
            let s = LinearSystem::new(coeffs, target).unwrap();
            solve(side.as_ref(), &s, &SolveLimits::default()).unwrap().is_solvable()
        };
        let both = project(&left, |p| p.0) && project(&right, |p| p.1);
        let out = solve(sr.as_ref(), &sys, &SolveLimits::default()).unwrap();
        prop_assert_eq!(out.is_solvable(), both);
    }
}

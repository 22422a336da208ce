//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the
//! process exits non-zero if any fails.

use std::collections::{HashSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wautom_cli::bench::{bench, BenchConfig};
use wautom_cli::model::{load_model, Model};
use wautom_core::bdd::{bdd_to_downset, downset_to_bdd, explicit_lattice, monotone_implication, BddLattice, FeatureModel};
use wautom_core::construct::{lattice_from_poset, Poset, PosetDescription, Registry};
use wautom_core::control::{Budget, CancelToken};
use wautom_core::cts::{cts_bisimilarity, per_condition_bisim, ConditionLattice, Cts, ExplicitLattice};
use wautom_core::semiring::{check_laws, Element, SemiringRef, Tropical};
use wautom_core::solve::{solve_zq, LinearSystem, SolveLimits};
use wautom_core::wa::{
    congruence_check, equiv_complete, equiv_upto, language_weight, language_weight_at, universality, EquivVerdict,
    Status, UniversalityVerdict, WeightedAutomaton,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn resolve(name: &str) -> SemiringRef {
    Registry::with_builtins().resolve(name).unwrap()
}

fn models() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models")
}

// ---------------------------------------------------------------- automata

fn random_value(sr: &SemiringRef, rng: &mut ChaCha8Rng) -> Element {
    if rng.gen_bool(0.5) {
        return sr.zero();
    }
    let token = match sr.name() {
        "boolean" => "1".to_string(),
        "rational" => {
            let n = rng.gen_range(1..=4) * if rng.gen_bool(0.25) { -1 } else { 1 };
            if rng.gen_bool(0.2) {
                format!("{n}/{}", rng.gen_range(2..=3))
            } else {
                n.to_string()
            }
        }
        _ => match sr.modulus() {
            Some(q) => rng.gen_range(1..q).to_string(),
            None => rng.gen_range(1..=4).to_string(),
        },
    };
    sr.parse(&token).unwrap()
}

fn random_automaton(sr: &SemiringRef, rng: &mut ChaCha8Rng, max_states: usize) -> WeightedAutomaton {
    let n = rng.gen_range(1..=max_states);
    let states = (0..n).map(|i| format!("s{i}")).collect();
    let mut aut = WeightedAutomaton::new(sr.clone(), states, vec!["a".into(), "b".into()]).unwrap();
    for a in 0..2 {
        for x in 0..n {
            for y in 0..n {
                let w = random_value(sr, rng);
                aut.set_transition(x, a, y, w);
            }
        }
    }
    for x in 0..n {
        let w = random_value(sr, rng);
        aut.set_termination(x, w);
    }
    aut
}

fn words_up_to(len: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..len {
        frontier = frontier
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..k).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

/// Seeded corpus shared by the partition and up-to criteria.
fn corpus() -> Vec<WeightedAutomaton> {
    let mut out = Vec::new();
    for (i, name) in ["rational", "zmod(4)", "zmod(6)", "zmod(9)", "boolean"].iter().enumerate() {
        let sr = resolve(name);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed + i as u64);
        for _ in 0..200 {
            out.push(random_automaton(&sr, &mut rng, 5));
        }
    }
    out
}

// ---------------------------------------------------------------- criteria

fn c1_worked_example() -> Outcome {
    let Model::Wa(aut) = load_model(&models().join("example.wa"), &Registry::with_builtins()).unwrap() else {
        return Err("example model is not an automaton".into());
    };
    let start = Instant::now();
    let w = language_weight(&aut, "A", "ab").unwrap();
    let elapsed = start.elapsed();
    let text = aut.semiring().format(&w);
    ensure(text == "14", || format!("weight {text}, expected 14"))?;
    ensure(elapsed < Duration::from_millis(1), || format!("took {elapsed:?}"))?;
    Ok(format!("L(A)(ab) = {text} in {elapsed:?}"))
}

fn c2_partition_vs_oracle(corpus: &[WeightedAutomaton]) -> Outcome {
    let start = Instant::now();
    let words = words_up_to(8, 2);
    let (mut pairs, mut separated, mut incomplete) = (0usize, 0usize, 0usize);
    for (i, aut) in corpus.iter().enumerate() {
        let sr = aut.semiring().clone();
        let report = equiv_complete(aut, &Budget::default()).unwrap();
        if report.status != Status::Completed {
            incomplete += 1;
            continue;
        }
        let vectors: Vec<Vec<Element>> = words.iter().map(|w| aut.word_vector(w)).collect();
        for x in 0..aut.len() {
            for y in x + 1..aut.len() {
                pairs += 1;
                if report.equivalent(x, y) {
                    for (w, v) in words.iter().zip(&vectors) {
                        ensure(sr.eq(&v[x], &v[y]), || format!("automaton {i} ({}): {x}~{y} but {w:?} differs", sr.name()))?;
                    }
                } else {
                    separated += 1;
                    let w = report
                        .separating_word(sr.as_ref(), x, y)
                        .ok_or_else(|| format!("automaton {i}: no separating word for {x},{y}"))?;
                    ensure(!sr.eq(&language_weight_at(aut, x, w), &language_weight_at(aut, y, w)), || {
                        format!("automaton {i}: separating word {w:?} does not separate {x},{y}")
                    })?;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(incomplete == 0, || format!("{incomplete} runs did not complete"))?;
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!("{} automata, {pairs} pairs, {separated} separated, 0 disagreements, {elapsed:.1?}", corpus.len()))
}

fn c3_field_basis_bound() -> Outcome {
    let fields = ["rational", "zmod(2)", "zmod(3)", "zmod(5)", "zmod(7)"];
    let mut rng = ChaCha8Rng::seed_from_u64(0xf1e1d);
    let mut worst = 0usize;
    for i in 0..500 {
        let sr = resolve(fields[i % fields.len()]);
        let aut = random_automaton(&sr, &mut rng, 8);
        let report = equiv_complete(&aut, &Budget::default()).unwrap();
        ensure(report.status == Status::Completed, || format!("run {i} did not complete"))?;
        ensure(report.basis.len() <= aut.len(), || {
            format!("run {i} ({}): basis {} > |X| = {}", sr.name(), report.basis.len(), aut.len())
        })?;
        worst = worst.max(report.basis.len());
    }
    Ok(format!("500 automata, largest basis {worst}, 0 violations"))
}

fn c4_upto_agreement(corpus: &[WeightedAutomaton]) -> Outcome {
    let (mut checked, mut witnesses) = (0usize, 0usize);
    for (i, aut) in corpus.iter().enumerate() {
        let sr = aut.semiring().clone();
        let complete = equiv_complete(aut, &Budget::default()).unwrap();
        if complete.status != Status::Completed {
            continue;
        }
        for x in 0..aut.len() {
            for y in x + 1..aut.len() {
                let (ux, uy) = (aut.unit(x), aut.unit(y));
                let report = equiv_upto(aut, &ux, &uy, &Budget::default()).unwrap();
                match report.verdict {
                    EquivVerdict::BudgetExhausted => continue,
                    EquivVerdict::Equivalent { .. } => {
                        ensure(complete.equivalent(x, y), || format!("automaton {i}: up-to says {x}~{y}"))?;
                    }
                    EquivVerdict::NotEquivalent { witness, left, right } => {
                        witnesses += 1;
                        ensure(!complete.equivalent(x, y), || format!("automaton {i}: up-to separates {x},{y}"))?;
                        let (lx, ly) = (language_weight_at(aut, x, &witness), language_weight_at(aut, y, &witness));
                        ensure(sr.eq(&lx, &left) && sr.eq(&ly, &right) && !sr.eq(&lx, &ly), || {
                            format!("automaton {i}: witness {witness:?} for {x},{y} is wrong")
                        })?;
                    }
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} unit pairs agree, {witnesses} witnesses verified"))
}

/// Congruence closure of `rel` over all boolean vectors of length `n`,
/// as a table indexed by bitmask pairs.
fn boolean_closure(n: usize, rel: &[(u8, u8)]) -> Vec<Vec<bool>> {
    let size = 1usize << n;
    let mut r = vec![vec![false; size]; size];
    for u in 0..size {
        r[u][u] = true;
    }
    for &(u, v) in rel {
        r[u as usize][v as usize] = true;
    }
    loop {
        let mut changed = false;
        for u in 0..size {
            for v in 0..size {
                if !r[u][v] {
                    continue;
                }
                let mut add = |a: usize, b: usize, r: &mut Vec<Vec<bool>>| {
                    if !r[a][b] {
                        r[a][b] = true;
                        changed = true;
                    }
                };
                add(v, u, &mut r);
                for w in 0..size {
                    add(u | w, v | w, &mut r);
                    if r[v][w] {
                        add(u, w, &mut r);
                    }
                }
            }
        }
        if !changed {
            return r;
        }
    }
}

fn bool_vector(n: usize, mask: u8) -> Vec<Element> {
    (0..n).map(|i| Element::Bool(mask >> i & 1 == 1)).collect()
}

fn to_big(sr: &SemiringRef, e: &Element) -> BigRational {
    BigRational::from_str(&sr.format(e)).unwrap()
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != BigRational::from_integer(BigInt::from(0))) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && rows[i][c] != BigRational::from_integer(BigInt::from(0)) {
                let f = rows[i][c].clone() / pivot.clone();
                for j in 0..cols {
                    let d = f.clone() * rows[r][j].clone();
                    rows[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

fn c5_congruence_oracles() -> Outcome {
    let boolean = resolve("boolean");
    let limits = SolveLimits::default();
    let mut cases = 0usize;
    for n in 1..=3usize {
        let size = 1u8 << n;
        let all_pairs: Vec<(u8, u8)> = (0..size).flat_map(|u| (0..size).map(move |v| (u, v))).collect();
        let mut relations: Vec<Vec<(u8, u8)>> = vec![Vec::new()];
        for i in 0..all_pairs.len() {
            relations.push(vec![all_pairs[i]]);
            for j in i + 1..all_pairs.len() {
                relations.push(vec![all_pairs[i], all_pairs[j]]);
            }
        }
        for rel in &relations {
            let closure = boolean_closure(n, rel);
            let vecs: Vec<(Vec<Element>, Vec<Element>)> =
                rel.iter().map(|&(u, v)| (bool_vector(n, u), bool_vector(n, v))).collect();
            let refs: Vec<(&[Element], &[Element])> = vecs.iter().map(|(u, v)| (u.as_slice(), v.as_slice())).collect();
            for &(u, v) in &all_pairs {
                let (bu, bv) = (bool_vector(n, u), bool_vector(n, v));
                let got = congruence_check(boolean.as_ref(), &refs, (&bu, &bv), &limits).unwrap();
                ensure(got == closure[u as usize][v as usize], || {
                    format!("boolean n={n} relation {rel:?} pair ({u:#b},{v:#b}): got {got}")
                })?;
                cases += 1;
            }
        }
    }

    let rational = resolve("rational");
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0c0);
    let mut positives = 0;
    for i in 0..200 {
        let n = rng.gen_range(1..=4);
        let pairs = rng.gen_range(0..=3);
        let rv = |rng: &mut ChaCha8Rng| -> Vec<Element> {
            (0..n).map(|_| rational.parse(&rng.gen_range(-3..=3).to_string()).unwrap()).collect()
        };
        let rel: Vec<(Vec<Element>, Vec<Element>)> = (0..pairs).map(|_| (rv(&mut rng), rv(&mut rng))).collect();
        let (u1, u2) = if rng.gen_bool(0.5) || rel.is_empty() {
            (rv(&mut rng), rv(&mut rng))
        } else {
            // w + Σ c·p  against  w + Σ c·q
            let w = rv(&mut rng);
            let (mut a, mut b) = (w.clone(), w);
            for (p, q) in &rel {
                let c = rational.parse(&rng.gen_range(-2..=2).to_string()).unwrap();
                for k in 0..n {
                    a[k] = rational.add(&a[k], &rational.mul(&c, &p[k]));
                    b[k] = rational.add(&b[k], &rational.mul(&c, &q[k]));
                }
            }
            (a, b)
        };
        let diff = |a: &[Element], b: &[Element]| -> Vec<BigRational> {
            a.iter().zip(b).map(|(x, y)| to_big(&rational, x) - to_big(&rational, y)).collect()
        };
        let span: Vec<Vec<BigRational>> = rel.iter().map(|(p, q)| diff(p, q)).collect();
        let mut with_target = span.clone();
        with_target.push(diff(&u1, &u2));
        let expected = rank(with_target) == rank(span);
        positives += expected as usize;
        let refs: Vec<(&[Element], &[Element])> = rel.iter().map(|(u, v)| (u.as_slice(), v.as_slice())).collect();
        let got = congruence_check(rational.as_ref(), &refs, (&u1, &u2), &limits).unwrap();
        ensure(got == expected, || format!("rational case {i}: got {got}, span oracle {expected}"))?;
    }
    Ok(format!("{cases} boolean closure checks, 200 rational span checks ({positives} members), 0 disagreements"))
}

fn residue(e: &Element, q: u64) -> u64 {
    match e {
        Element::Residue(r) => r % q,
        other => panic!("not a residue: {other:?}"),
    }
}

fn c6_zq_solver() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x2e9);
    let limits = SolveLimits::default();
    let (mut solvable, mut total) = (0usize, 0usize);
    for &q in &[4u64, 6, 8, 9, 12] {
        let sr = resolve(&format!("zmod({q})"));
        for i in 0..200 {
            let n = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=3);
            let a: Vec<Vec<u64>> = (0..n).map(|_| (0..m).map(|_| rng.gen_range(0..q)).collect()).collect();
            let apply = |x: &[u64]| -> Vec<u64> { (0..m).map(|j| (0..n).map(|k| x[k] * a[k][j]).sum::<u64>() % q).collect() };
            let b: Vec<u64> = if rng.gen_bool(0.5) {
                let x: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
                apply(&x)
            } else {
                (0..m).map(|_| rng.gen_range(0..q)).collect()
            };
            let el = |v: u64| sr.parse(&v.to_string()).unwrap();
            let sys = LinearSystem::new(
                a.iter().map(|row| row.iter().map(|&v| el(v)).collect()).collect(),
                b.iter().map(|&v| el(v)).collect(),
            )
            .unwrap();
            let mut exists = false;
            let mut x = vec![0u64; n];
            'search: loop {
                if apply(&x) == b {
                    exists = true;
                    break;
                }
                for k in 0..n {
                    x[k] += 1;
                    if x[k] < q {
                        continue 'search;
                    }
                    x[k] = 0;
                }
                break;
            }
            let out = solve_zq(sr.as_ref(), &sys, &limits).unwrap();
            ensure(out.solution.is_some() == exists, || {
                format!("q={q} system {i}: solver {} vs enumeration {exists}", out.solution.is_some())
            })?;
            if let Some(sol) = &out.solution {
                let xs: Vec<u64> = sol.iter().map(|e| residue(e, q)).collect();
                ensure(apply(&xs) == b, || format!("q={q} system {i}: witness {xs:?} fails substitution"))?;
            }
            solvable += exists as usize;
            total += 1;
        }
    }
    Ok(format!("{total} systems ({solvable} solvable), witnesses verified, 0 disagreements"))
}

// zero-cost edges are common enough that universal instances occur
fn tropical(rng: &mut ChaCha8Rng) -> Element {
    match rng.gen_range(0..10) {
        0..=2 => Element::Tropical(Tropical::Infinity),
        3..=6 => Element::Tropical(Tropical::Finite(0)),
        _ => Element::Tropical(Tropical::Finite(rng.gen_range(1..=3))),
    }
}

fn cap(e: &Element, c: u64) -> u64 {
    match e {
        Element::Tropical(Tropical::Finite(n)) => (*n).min(c),
        _ => c,
    }
}

/// All capped vectors reachable from `v0`, and whether any violates.
fn unpruned(aut: &WeightedAutomaton, v0: &[Element], t: u64) -> (bool, usize) {
    let c = t + 1;
    let n = aut.len();
    let m: Vec<Vec<Vec<u64>>> =
        (0..2).map(|a| aut.matrix(a).iter().map(|r| r.iter().map(|e| cap(e, c)).collect()).collect()).collect();
    let term: Vec<u64> = aut.termination().iter().map(|e| cap(e, c)).collect();
    let weight = |u: &[u64]| (0..n).map(|x| (u[x] + term[x]).min(c)).min().unwrap_or(c);
    let start: Vec<u64> = v0.iter().map(|e| cap(e, c)).collect();
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut violates = false;
    while let Some(u) = queue.pop_front() {
        violates |= weight(&u) > t;
        for mat in &m {
            let next: Vec<u64> = (0..n).map(|y| (0..n).map(|x| (u[x] + mat[x][y]).min(c)).min().unwrap_or(c)).collect();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    (violates, seen.len())
}

fn c7_universality() -> Outcome {
    let sr = resolve("tropical-nat");
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a0);
    let (mut violations, mut pruned_total, mut unpruned_total) = (0usize, 0u64, 0usize);
    for i in 0..300 {
        let n = rng.gen_range(1..=4);
        let t = rng.gen_range(0..=5);
        let states = (0..n).map(|k| format!("s{k}")).collect();
        let mut aut = WeightedAutomaton::new(sr.clone(), states, vec!["a".into(), "b".into()]).unwrap();
        for a in 0..2 {
            for x in 0..n {
                for y in 0..n {
                    let w = tropical(&mut rng);
                    aut.set_transition(x, a, y, w);
                }
            }
        }
        for x in 0..n {
            let w = tropical(&mut rng);
            aut.set_termination(x, w);
        }
        let v0: Vec<Element> = (0..n).map(|_| tropical(&mut rng)).collect();
        let report = universality(&aut, &v0, t, &Budget::default()).unwrap();
        let (violates, count) = unpruned(&aut, &v0, t);
        match &report.verdict {
            UniversalityVerdict::Universal => ensure(!violates, || format!("case {i}: pruned says universal"))?,
            UniversalityVerdict::NotUniversal { witness, .. } => {
                ensure(violates, || format!("case {i}: pruned found a violation the full search did not"))?;
                let w = aut.row_weight(&v0, witness);
                ensure(cap(&w, t + 1) > t, || format!("case {i}: witness {witness:?} weighs {w:?} <= {t}"))?;
                violations += 1;
            }
            UniversalityVerdict::BudgetExhausted => return Err(format!("case {i}: budget exhausted")),
        }
        ensure(report.vectors_explored as usize <= count, || {
            format!("case {i}: pruned explored {} > unpruned {count}", report.vectors_explored)
        })?;
        pruned_total += report.vectors_explored;
        unpruned_total += count;
    }
    Ok(format!(
        "300 cases, {violations} violations with verified witnesses, vectors explored {pruned_total} pruned vs {unpruned_total} unpruned"
    ))
}

fn random_poset(rng: &mut ChaCha8Rng) -> Poset {
    let n = rng.gen_range(1..=8);
    let elements: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let mut order_pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.3) {
                order_pairs.push((elements[i].clone(), elements[j].clone()));
            }
        }
    }
    Poset::new(&PosetDescription { elements, order_pairs }).unwrap()
}

fn random_downset(rng: &mut ChaCha8Rng, poset: &Poset) -> FixedBitSet {
    let mut s = poset.empty_set();
    if rng.gen_bool(0.3) {
        return s;
    }
    for _ in 0..rng.gen_range(1..=2) {
        s.insert(rng.gen_range(0..poset.len()));
    }
    poset.downward_close(&s)
}

fn random_cts(rng: &mut ChaCha8Rng, poset: &Poset, max_states: usize) -> Cts<FixedBitSet> {
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=2);
    let mut cts = Cts::new(
        poset.empty_set(),
        (0..n).map(|i| format!("x{i}")).collect(),
        (0..k).map(|a| format!("a{a}")).collect(),
    )
    .unwrap();
    for a in 0..k {
        for x in 0..n {
            for y in 0..n {
                if rng.gen_bool(0.35) {
                    let g = random_downset(rng, poset);
                    cts.set_guard(x, a, y, g);
                }
            }
        }
    }
    cts
}

fn c8_cts_bisimilarity() -> Outcome {
    let reg = Registry::with_builtins();
    let Model::Cts(m) = load_model(&models().join("upgrade.cts"), &reg).unwrap() else {
        return Err("upgrade model is not a CTS".into());
    };
    let mut lat = m.explicit_lattice().unwrap();
    let cts = m.build(&mut lat).unwrap();
    let mx = cts_bisimilarity(&cts, &mut lat).unwrap();
    let (b, c) = (cts.state_index("B").unwrap(), cts.state_index("C").unwrap());
    let entry = lat.format(&mx.entries[b][c]);
    ensure(entry == "{phi2}", || format!("(B,C) = {entry}, expected {{phi2}}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(0xc75);
    for i in 0..200 {
        let poset = Arc::new(random_poset(&mut rng));
        let cts = random_cts(&mut rng, &poset, 6);
        let mut lat = ExplicitLattice::new(poset.clone());
        let mx = cts_bisimilarity(&cts, &mut lat).unwrap();
        let n = cts.len();
        for phi in 0..poset.len() {
            let rel = per_condition_bisim(&cts, &lat, phi);
            for x in 0..n {
                for y in 0..n {
                    ensure(rel[x][y] == mx.entries[x][y].contains(phi), || format!("cts {i}: cut {phi} at ({x},{y})"))?;
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                ensure(poset.is_downset(&mx.entries[x][y]), || format!("cts {i}: ({x},{y}) is not antitone"))?;
            }
        }
    }
    Ok(format!("(B,C) = {entry}; 200 random CTS: cuts match per-condition bisimulations, all entries antitone"))
}

fn c9_backend_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbdd);
    let random_model = |rng: &mut ChaCha8Rng| {
        let base = rng.gen_range(0..=3);
        let ups = rng.gen_range(0..=4);
        FeatureModel::new((0..base).map(|i| format!("b{i}")).collect(), (0..ups).map(|i| format!("u{i}")).collect())
            .unwrap()
    };
    for i in 0..100 {
        let model = random_model(&mut rng);
        let mut ex = explicit_lattice(&model).unwrap();
        let poset = ex.poset().clone();
        let cts = random_cts(&mut rng, &poset, 5);
        let mut bdd = BddLattice::new(model);
        let sym = cts.map(|g| downset_to_bdd(&mut bdd, g)).unwrap();
        let m1 = cts_bisimilarity(&cts, &mut ex).unwrap();
        let m2 = cts_bisimilarity(&sym, &mut bdd).unwrap();
        for x in 0..cts.len() {
            for y in 0..cts.len() {
                let back = bdd_to_downset(&bdd, &m2.entries[x][y]).unwrap();
                ensure(back == m1.entries[x][y], || format!("cts {i}: backends differ at ({x},{y})"))?;
            }
        }
    }
    for i in 0..200 {
        let model = random_model(&mut rng);
        let poset = model.poset().unwrap();
        let mut lat = BddLattice::new(model);
        let (a, b) = (random_downset(&mut rng, &poset), random_downset(&mut rng, &poset));
        let (fa, fb) = (downset_to_bdd(&mut lat, &a).unwrap(), downset_to_bdd(&mut lat, &b).unwrap());
        let h = monotone_implication(&mut lat, &fa, &fb).unwrap();
        ensure(bdd_to_downset(&lat, &h).unwrap() == poset.implication(&a, &b), || format!("pair {i}: implication differs"))?;
    }
    Ok("100 feature-model CTS give identical matrices; 200 implication pairs agree".into())
}

fn c10_bench_trend() -> Outcome {
    let config = BenchConfig {
        states: vec![10, 15, 20],
        transition_probability: 0.5,
        alphabet_size: 2,
        runs: 100,
        percentiles: vec![50.0, 95.0],
        timeout: Duration::from_secs(60),
        seed: 2024,
    };
    let report = bench(resolve("rational"), &config, &CancelToken::new()).unwrap();
    let mut medians = Vec::new();
    let mut summary = Vec::new();
    for row in &report.rows {
        let median = row.percentiles[0].millis.ok_or("median timed out")?;
        let p95 = row.percentiles[1].millis.ok_or("95th percentile timed out")?;
        summary.push(format!("|X|={} median {median:.3} ms p95 {p95:.3} ms ({:.2}x)", row.states, p95 / median));
        medians.push((median, p95));
    }
    let line = summary.join("; ");
    ensure(medians.windows(2).all(|w| w[0].0 < w[1].0), || format!("medians not increasing: {line}"))?;
    ensure(medians.iter().all(|&(m, p)| p <= 2.0 * m), || format!("95th percentile above 2x median: {line}"))?;
    Ok(line)
}

fn c11_law_suites() -> Outcome {
    let reg = Registry::with_builtins();
    let mut instances: Vec<SemiringRef> = [
        "boolean",
        "rational",
        "tropical-nat",
        "integers",
        "latticez(-3,4)",
        "latticez(-2,2)",
        "zmod(2)",
        "zmod(3)",
        "zmod(4)",
        "zmod(5)",
        "zmod(6)",
        "zmod(7)",
        "zmod(8)",
        "zmod(9)",
        "zmod(12)",
        "product(boolean,zmod(6))",
        "fractions(integers)",
    ]
    .iter()
    .map(|n| reg.resolve(n).unwrap())
    .collect();
    for text in ["@conditions a,b,c,d\n@le a b\n@le a c\n@le b d\n@le c d", "@conditions phi,phi2\n@le phi2 phi"] {
        instances.push(lattice_from_poset(&PosetDescription::parse(text).unwrap()).unwrap());
    }
    let model = FeatureModel::new(vec!["b0".into()], vec!["u0".into(), "u1".into()]).unwrap();
    instances.push(lattice_from_poset(&model.poset().unwrap().description()).unwrap());
    for sr in &instances {
        if let Err(v) = check_laws(sr.as_ref(), 1000, 0x1a45) {
            return Err(format!("{}: {v:?}", sr.name()));
        }
    }
    Ok(format!("{} instances pass with 1000 samples", instances.len()))
}

fn c12_budget_exit() -> Outcome {
    let path = models().join("looping.wa");
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_wautom"))
        .args(["--budget", "500", "equiv-complete"])
        .arg(&path)
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.code() == Some(3), || format!("exit code {:?}", out.status.code()))?;
    Ok(format!("equiv-complete on looping.wa exits 3 after {elapsed:.1?}"))
}

fn main() {
    let corpus = corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 worked example", Box::new(c1_worked_example)),
        ("2 partition vs oracle", Box::new(|| c2_partition_vs_oracle(&corpus))),
        ("3 field basis bound", Box::new(c3_field_basis_bound)),
        ("4 up-to agreement", Box::new(|| c4_upto_agreement(&corpus))),
        ("5 congruence oracles", Box::new(c5_congruence_oracles)),
        ("6 modular solver", Box::new(c6_zq_solver)),
        ("7 universality", Box::new(c7_universality)),
        ("8 CTS bisimilarity", Box::new(c8_cts_bisimilarity)),
        ("9 backend equivalence", Box::new(c9_backend_equivalence)),
        ("10 benchmark trend", Box::new(c10_bench_trend)),
        ("11 semiring laws", Box::new(c11_law_suites)),
        ("12 budget exit code", Box::new(c12_budget_exit)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

use super::{ConditionLattice, Cts, CtsError};

/// `entries[x][y]`: the conditions under which `x` and `y` are bisimilar.
#[derive(Clone, Debug, PartialEq)]
pub struct BisimilarityMatrix<E> {
    pub entries: Vec<Vec<E>>,
    pub iterations: usize,
}

/// A relation on states, `pairs[x][y]`.
pub type Relation = Vec<Vec<bool>>;

/// Greatest fixpoint of
/// `R(x,y) = ⨅_{a,x'} (g(x,a,x') → ⨆_{y'} g(y,a,y') ⊓ R(x',y')) ⊓ (symmetric)`,
/// iterated Jacobi-style from `R = ⊤` everywhere.
pub fn cts_bisimilarity<L: ConditionLattice>(
    cts: &Cts<L::Elem>,
    lat: &mut L,
) -> Result<BisimilarityMatrix<L::Elem>, CtsError> {
    let n = cts.len();
    let bot = lat.bot();
    let mut r = vec![vec![lat.top(); n]; n];
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut next = r.clone();
        for x in 0..n {
            for y in 0..n {
                let mut acc = r[x][y].clone();
                for a in 0..cts.alphabet().len() {
                    // x moves, y answers; then y moves, x answers
                    for (p, q, swap) in [(x, y, false), (y, x, true)] {
                        for p2 in 0..n {
                            let g = cts.guard(p, a, p2);
                            if *g == bot {
                                continue;
                            }
                            let mut answer = bot.clone();
                            for q2 in 0..n {
                                let h = cts.guard(q, a, q2);
                                if *h == bot {
                                    continue;
                                }
                                let rel = if swap { &r[q2][p2] } else { &r[p2][q2] };
                                let m = lat.meet(h, rel)?;
                                answer = lat.join(&answer, &m)?;
                            }
                            let imp = lat.implication(g, &answer)?;
                            acc = lat.meet(&acc, &imp)?;
                        }
                    }
                }
                next[x][y] = acc;
            }
        }
        if next == r {
            return Ok(BisimilarityMatrix { entries: r, iterations });
        }
        r = next;
    }
}

/// Greatest bisimulation of the LTS enabled at condition `c` that lies
/// inside `start`.
fn refine<L: ConditionLattice>(cts: &Cts<L::Elem>, lat: &L, c: usize, mut rel: Relation) -> Relation {
    let n = cts.len();
    let k = cts.alphabet().len();
    let moves: Vec<Vec<Vec<usize>>> = (0..k)
        .map(|a| (0..n).map(|x| (0..n).filter(|&y| lat.contains(cts.guard(x, a, y), c)).collect()).collect())
        .collect();
    let answered = |rel: &Relation, x: usize, y: usize| {
        (0..k).all(|a| moves[a][x].iter().all(|&x2| moves[a][y].iter().any(|&y2| rel[x2][y2])))
    };
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in 0..n {
                if rel[x][y] && !(answered(&rel, x, y) && answered(&transpose(&rel), y, x)) {
                    rel[x][y] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return rel;
        }
    }
}

fn transpose(r: &Relation) -> Relation {
    let n = r.len();
    (0..n).map(|x| (0..n).map(|y| r[y][x]).collect()).collect()
}

/// Plain greatest bisimulation of the LTS enabled at condition `c`.
///
/// Not antitone in `c` in general: a transition enabled only below `c` can
/// separate two states that look alike at `c`.
pub fn cut_bisimulation<L: ConditionLattice>(cts: &Cts<L::Elem>, lat: &L, c: usize) -> Relation {
    let n = cts.len();
    refine(cts, lat, c, vec![vec![true; n]; n])
}

/// The greatest conditional bisimulation, one relation per condition.
///
/// Conditions are handled bottom-up: the relation at `c` is the greatest
/// bisimulation at `c` contained in the relations of every condition
/// strictly below `c`.
pub fn condition_bisimulations<L: ConditionLattice>(cts: &Cts<L::Elem>, lat: &L) -> Vec<Relation> {
    let n = cts.len();
    let m = lat.condition_count();
    let mut order: Vec<usize> = (0..m).collect();
    let depth = |c: usize| (0..m).filter(|&d| d != c && lat.condition_leq(d, c)).count();
    order.sort_by_key(|&c| depth(c));
    let mut out: Vec<Option<Relation>> = vec![None; m];
    for c in order {
        let mut start = vec![vec![true; n]; n];
        for d in (0..m).filter(|&d| d != c && lat.condition_leq(d, c)) {
            let below = out[d].as_ref().expect("lower conditions come first");
            for x in 0..n {
                for y in 0..n {
                    start[x][y] &= below[x][y];
                }
            }
        }
        out[c] = Some(refine(cts, lat, c, start));
    }
    out.into_iter().map(|r| r.expect("every condition visited")).collect()
}

/// The relation at condition `c` of [`condition_bisimulations`].
pub fn per_condition_bisim<L: ConditionLattice>(cts: &Cts<L::Elem>, lat: &L, c: usize) -> Relation {
    condition_bisimulations(cts, lat).swap_remove(c)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::construct::{Poset, PosetDescription};
    use crate::cts::fixtures::upgrade_example;
    use crate::cts::ExplicitLattice;

    #[test]
    fn upgrade_example_matrix() {
        let (mut lat, cts) = upgrade_example();
        let m = cts_bisimilarity(&cts, &mut lat).unwrap();
        let e = &m.entries;
        assert_eq!(lat.format(&e[1][2]), "{phi'}");
        assert_eq!(lat.format(&e[2][1]), "{phi'}");
        assert_eq!(e[0][1], lat.bot());
        assert_eq!(e[0][2], lat.bot());
        for (x, row) in e.iter().enumerate() {
            assert_eq!(row[x], lat.top());
        }
    }

    #[test]
    fn cuts_agree_with_matrix() {
        let (mut lat, cts) = upgrade_example();
        let m = cts_bisimilarity(&cts, &mut lat).unwrap();
        let rels = condition_bisimulations(&cts, &lat);
        for (c, rel) in rels.iter().enumerate() {
            for x in 0..3 {
                for y in 0..3 {
                    assert_eq!(rel[x][y], lat.contains(&m.entries[x][y], c));
                }
            }
        }
    }

    #[test]
    fn plain_cut_can_break_antitonicity() {
        // B --a,{lo}--> D; C has no moves; lo ≤ hi
        let desc = PosetDescription::parse("@conditions hi,lo\n@le lo hi").unwrap();
        let mut lat = ExplicitLattice::new(Arc::new(Poset::new(&desc).unwrap()));
        let mut cts = Cts::new(lat.bot(), vec!["B".into(), "C".into(), "D".into()], vec!["a".into()]).unwrap();
        cts.set_guard(0, 0, 2, lat.parse_guard("{lo}").unwrap());
        let hi = lat.poset().index_of("hi").unwrap();
        let lo = lat.poset().index_of("lo").unwrap();
        assert!(cut_bisimulation(&cts, &lat, hi)[0][1]);
        assert!(!cut_bisimulation(&cts, &lat, lo)[0][1]);
        assert!(!per_condition_bisim(&cts, &lat, hi)[0][1]);
        let m = cts_bisimilarity(&cts, &mut lat).unwrap();
        assert_eq!(m.entries[0][1], lat.bot());
    }

    #[test]
    fn single_condition_is_ordinary_bisimilarity() {
        let desc = PosetDescription::parse("@conditions c").unwrap();
        let mut lat = ExplicitLattice::new(Arc::new(Poset::new(&desc).unwrap()));
        // x -a-> x and y -a-> z -a-> y are bisimilar; w is stuck
        let names = ["x", "y", "z", "w"].map(String::from).to_vec();
        let mut cts = Cts::new(lat.bot(), names, vec!["a".into()]).unwrap();
        let top = lat.top();
        cts.set_guard(0, 0, 0, top.clone());
        cts.set_guard(1, 0, 2, top.clone());
        cts.set_guard(2, 0, 1, top.clone());
        let m = cts_bisimilarity(&cts, &mut lat).unwrap();
        assert_eq!(m.entries[0][1], top);
        assert_eq!(m.entries[1][2], top);
        assert_eq!(m.entries[0][3], lat.bot());
    }
}

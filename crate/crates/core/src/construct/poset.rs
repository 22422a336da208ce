//! Finite distributive lattices as downsets of a finite poset.

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::{Rng, RngCore};

use crate::semiring::{split_top_level, Capabilities, Element, Semiring, SemiringError, SemiringRef};

/// Named conditions and `(lesser, greater)` pairs, not yet validated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PosetDescription {
    pub elements: Vec<String>,
    pub order_pairs: Vec<(String, String)>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || matches!(c, ',' | '{' | '}' | '(' | ')' | '#' | '@'))
}

impl PosetDescription {
    /// Reads the line format `@conditions a,b,c` followed by `@le lesser greater`
    /// lines. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, SemiringError> {
        let mut desc = PosetDescription::default();
        let mut seen_conditions = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| SemiringError::NotAPoset(format!("line {}: {msg}", lineno + 1));
            if let Some(rest) = line.strip_prefix("@conditions") {
                if seen_conditions {
                    return Err(bad("repeated @conditions"));
                }
                seen_conditions = true;
                desc.elements = rest.split(',').map(|n| n.trim().to_string()).collect();
                if desc.elements.iter().any(|n| !valid_name(n)) {
                    return Err(bad("invalid condition name"));
                }
            } else if let Some(rest) = line.strip_prefix("@le") {
                let names: Vec<&str> = rest.split_whitespace().collect();
                let [lesser, greater] = names[..] else {
                    return Err(bad("@le takes two condition names"));
                };
                desc.order_pairs.push((lesser.to_string(), greater.to_string()));
            } else {
                return Err(bad("expected @conditions or @le"));
            }
        }
        if !seen_conditions {
            return Err(SemiringError::NotAPoset("missing @conditions line".into()));
        }
        Ok(desc)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("@conditions {}\n", self.elements.join(","));
        for (l, g) in &self.order_pairs {
            out.push_str(&format!("@le {l} {g}\n"));
        }
        out
    }
}

/// A validated finite poset. `below[i]` holds every `j ≤ i`, including `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    below: Vec<FixedBitSet>,
}

impl Poset {
    pub fn new(desc: &PosetDescription) -> Result<Self, SemiringError> {
        let n = desc.elements.len();
        let mut index = HashMap::new();
        for (i, name) in desc.elements.iter().enumerate() {
            if !valid_name(name) {
                return Err(SemiringError::NotAPoset(format!("invalid condition name `{name}`")));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(SemiringError::NotAPoset(format!("condition `{name}` listed twice")));
            }
        }
        let mut below: Vec<FixedBitSet> = (0..n)
            .map(|i| {
                let mut s = FixedBitSet::with_capacity(n);
                s.insert(i);
                s
            })
            .collect();
        for (lesser, greater) in &desc.order_pairs {
            let l = *index.get(lesser).ok_or_else(|| SemiringError::UnknownCondition(lesser.clone()))?;
            let g = *index.get(greater).ok_or_else(|| SemiringError::UnknownCondition(greater.clone()))?;
            below[g].insert(l);
        }
        // transitive closure
        for k in 0..n {
            let via = below[k].clone();
            for set in below.iter_mut() {
                if set.contains(k) {
                    set.union_with(&via);
                }
            }
        }
        for i in 0..n {
            if let Some(j) = below[i].ones().find(|&j| j != i && below[j].contains(i)) {
                return Err(SemiringError::NotAPoset(format!(
                    "cycle through `{}` and `{}`",
                    desc.elements[j], desc.elements[i]
                )));
            }
        }
        Ok(Poset { names: desc.elements.clone(), index, below })
    }

    /// The discrete order on `names`.
    pub fn antichain<I: IntoIterator<Item = S>, S: Into<String>>(names: I) -> Result<Self, SemiringError> {
        Poset::new(&PosetDescription { elements: names.into_iter().map(Into::into).collect(), order_pairs: vec![] })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.below[j].contains(i)
    }

    pub fn below(&self, i: usize) -> &FixedBitSet {
        &self.below[i]
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> FixedBitSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn downward_close(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = self.empty_set();
        for i in set.ones() {
            out.union_with(&self.below[i]);
        }
        out
    }

    /// The largest downset contained in `set`.
    pub fn interior(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = self.empty_set();
        for i in 0..self.len() {
            if self.below[i].is_subset(set) {
                out.insert(i);
            }
        }
        out
    }

    pub fn is_downset(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|i| self.below[i].is_subset(set))
    }

    /// Heyting implication `a → b = {φ : ↓φ ∩ a ⊆ b}`.
    pub fn implication(&self, a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
        let mut out = self.empty_set();
        for i in 0..self.len() {
            if self.below[i].intersection(a).all(|j| b.contains(j)) {
                out.insert(i);
            }
        }
        out
    }

    /// Every downset, in a fixed order starting with the empty set.
    pub fn downsets(&self) -> Vec<FixedBitSet> {
        // a topological order: fewer elements below come first
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.below[i].count_ones(..));
        let mut out = Vec::new();
        self.enumerate(&order, 0, &mut self.empty_set(), &mut out);
        out
    }

    fn enumerate(&self, order: &[usize], k: usize, current: &mut FixedBitSet, out: &mut Vec<FixedBitSet>) {
        let Some(&i) = order.get(k) else {
            out.push(current.clone());
            return;
        };
        self.enumerate(order, k + 1, current, out);
        let mut strictly_below = self.below[i].clone();
        strictly_below.set(i, false);
        if strictly_below.is_subset(current) {
            current.insert(i);
            self.enumerate(order, k + 1, current, out);
            current.set(i, false);
        }
    }

    /// Parses `{a,b}` or `{}`. Every name must be known.
    pub fn parse_set(&self, token: &str) -> Result<FixedBitSet, SemiringError> {
        let inner = token
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| SemiringError::malformed("downset", token))?;
        let mut set = self.empty_set();
        if inner.trim().is_empty() {
            return Ok(set);
        }
        for name in split_top_level(inner).ok_or_else(|| SemiringError::malformed("downset", token))? {
            let name = name.trim();
            let i = self.index_of(name).ok_or_else(|| SemiringError::UnknownCondition(name.to_string()))?;
            set.insert(i);
        }
        Ok(set)
    }

    pub fn format_set(&self, set: &FixedBitSet) -> String {
        let names: Vec<&str> = set.ones().map(|i| self.names[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn description(&self) -> PosetDescription {
        // covering pairs suffice to regenerate the order
        let mut order_pairs = Vec::new();
        for g in 0..self.len() {
            for l in self.below[g].ones().filter(|&l| l != g) {
                let covered = self.below[g].ones().any(|m| m != g && m != l && self.leq(l, m));
                if !covered {
                    order_pairs.push((self.names[l].clone(), self.names[g].clone()));
                }
            }
        }
        PosetDescription { elements: self.names.clone(), order_pairs }
    }
}

/// The lattice of downsets of a poset: `+` is union, `·` is intersection.
#[derive(Debug, Clone)]
pub struct DownsetLattice {
    poset: Arc<Poset>,
    name: String,
}

pub fn lattice_from_poset(desc: &PosetDescription) -> Result<SemiringRef, SemiringError> {
    Ok(Arc::new(DownsetLattice::new(Arc::new(Poset::new(desc)?))))
}

impl DownsetLattice {
    pub fn new(poset: Arc<Poset>) -> Self {
        let name = format!("downsets({})", poset.names().join(","));
        DownsetLattice { poset, name }
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn element(&self, set: FixedBitSet) -> Element {
        debug_assert!(self.poset.is_downset(&set));
        Element::Downset(set)
    }

    fn set<'a>(&self, e: &'a Element) -> &'a FixedBitSet {
        match e {
            Element::Downset(s) => s,
            other => panic!("{} given a {} element", self.name, other.variant_name()),
        }
    }
}

impl Semiring for DownsetLattice {
    fn name(&self) -> &str {
        &self.name
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::lattice().finite()
    }

    fn zero(&self) -> Element {
        Element::Downset(self.poset.empty_set())
    }

    fn one(&self) -> Element {
        Element::Downset(self.poset.full_set())
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        let mut s = self.set(a).clone();
        s.union_with(self.set(b));
        Element::Downset(s)
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut s = self.set(a).clone();
        s.intersect_with(self.set(b));
        Element::Downset(s)
    }

    /// Rejects sets that are not downward closed.
    fn parse(&self, token: &str) -> Result<Element, SemiringError> {
        let set = self.poset.parse_set(token)?;
        if !self.poset.is_downset(&set) {
            return Err(SemiringError::malformed(&self.name, token));
        }
        Ok(Element::Downset(set))
    }

    fn format(&self, e: &Element) -> String {
        self.poset.format_set(self.set(e))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Element {
        let mut s = self.poset.empty_set();
        for i in 0..self.poset.len() {
            s.set(i, rng.gen_bool(0.5));
        }
        Element::Downset(if rng.gen_bool(0.5) { self.poset.downward_close(&s) } else { self.poset.interior(&s) })
    }

    fn contains(&self, e: &Element) -> bool {
        matches!(e, Element::Downset(s) if s.len() == self.poset.len() && self.poset.is_downset(s))
    }

    fn residuum(&self, a: &Element, b: &Element) -> Option<Element> {
        Some(Element::Downset(self.poset.implication(self.set(a), self.set(b))))
    }

    fn meet(&self, a: &Element, b: &Element) -> Option<Element> {
        Some(self.mul(a, b))
    }

    fn top(&self) -> Option<Element> {
        Some(self.one())
    }
}

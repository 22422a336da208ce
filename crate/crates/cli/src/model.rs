//! Line-oriented model files for weighted automata and conditional
//! transition systems.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;
use wautom_core::bdd::{BddLattice, FeatureModel};
use wautom_core::construct::{Poset, PosetDescription, Registry};
use wautom_core::cts::{ConditionLattice, Cts, CtsError, ExplicitLattice};
use wautom_core::semiring::{is_zero, SemiringError};
use wautom_core::wa::WeightedAutomaton;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: {source}")]
    Guard { line: usize, source: CtsError },
    #[error("unknown semiring `{0}`")]
    UnknownSemiring(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn perr(line: usize, reason: impl Into<String>) -> ModelError {
    ModelError::Parse { line, reason: reason.into() }
}

/// Condition structure of a CTS file.
#[derive(Clone, Debug)]
pub enum ConditionSpace {
    Poset(Arc<Poset>),
    Features(FeatureModel),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CtsEdge {
    pub from: usize,
    pub symbol: usize,
    pub to: usize,
    /// Canonical guard text.
    pub guard: String,
}

#[derive(Clone, Debug)]
pub struct CtsModel {
    pub space: ConditionSpace,
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    /// Nonempty guards in (from, symbol, to) order.
    pub edges: Vec<CtsEdge>,
}

impl PartialEq for CtsModel {
    fn eq(&self, other: &Self) -> bool {
        let space = match (&self.space, &other.space) {
            (ConditionSpace::Poset(a), ConditionSpace::Poset(b)) => a.description() == b.description(),
            (ConditionSpace::Features(a), ConditionSpace::Features(b)) => a == b,
            _ => false,
        };
        space && self.states == other.states && self.alphabet == other.alphabet && self.edges == other.edges
    }
}

impl CtsModel {
    pub fn explicit_lattice(&self) -> Result<ExplicitLattice, CtsError> {
        match &self.space {
            ConditionSpace::Poset(p) => Ok(ExplicitLattice::new(p.clone())),
            ConditionSpace::Features(m) => wautom_core::bdd::explicit_lattice(m),
        }
    }

    /// `None` for a plain condition poset, which has no feature encoding.
    pub fn bdd_lattice(&self) -> Option<BddLattice> {
        match &self.space {
            ConditionSpace::Poset(_) => None,
            ConditionSpace::Features(m) => Some(BddLattice::new(m.clone())),
        }
    }

    pub fn build<L: ConditionLattice>(&self, lat: &mut L) -> Result<Cts<L::Elem>, CtsError> {
        let mut cts = Cts::new(lat.bot(), self.states.clone(), self.alphabet.clone())?;
        for e in &self.edges {
            let g = lat.parse_guard(&e.guard)?;
            cts.set_guard(e.from, e.symbol, e.to, g);
        }
        Ok(cts)
    }
}

#[derive(Clone, Debug)]
pub enum Model {
    Wa(WeightedAutomaton),
    Cts(CtsModel),
}

impl Model {
    pub fn same_as(&self, other: &Model) -> bool {
        match (self, other) {
            (Model::Wa(a), Model::Wa(b)) => a.same_as(b),
            (Model::Cts(a), Model::Cts(b)) => a == b,
            _ => false,
        }
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.contains(|c: char| c.is_whitespace() || ",{}#()&".contains(c))
}

fn name_list(line: usize, text: &str) -> Result<Vec<String>, ModelError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let names: Vec<String> = text.split(',').map(|s| s.trim().to_string()).collect();
    let mut seen = BTreeSet::new();
    for n in &names {
        if !valid_name(n) {
            return Err(perr(line, format!("invalid name `{n}`")));
        }
        if !seen.insert(n) {
            return Err(perr(line, format!("duplicate name `{n}`")));
        }
    }
    Ok(names)
}

/// Splits off the first `n` whitespace-separated tokens; the rest of the
/// line is returned trimmed.
fn take_tokens(text: &str, n: usize) -> Option<(Vec<&str>, &str)> {
    let mut rest = text.trim_start();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        if end == 0 {
            return None;
        }
        out.push(&rest[..end]);
        rest = rest[end..].trim_start();
    }
    Some((out, rest.trim_end()))
}

#[derive(Default)]
struct Header {
    semiring: Option<(usize, String)>,
    alphabet: Option<(usize, Vec<String>)>,
    states: Option<(usize, Vec<String>)>,
    conditions: Option<(usize, Vec<String>)>,
    le: Vec<(usize, String, String)>,
    features: Option<(usize, Vec<String>)>,
    upgrades: Option<(usize, Vec<String>)>,
}

fn set_once<T>(slot: &mut Option<(usize, T)>, line: usize, value: T, name: &str) -> Result<(), ModelError> {
    if let Some((first, _)) = slot {
        return Err(perr(line, format!("{name} already given on line {first}")));
    }
    *slot = Some((line, value));
    Ok(())
}

pub fn parse_model(text: &str, registry: &Registry) -> Result<Model, ModelError> {
    let mut header = Header::default();
    let mut body: Vec<(usize, &str, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (directive, rest) = match content.find(char::is_whitespace) {
            Some(k) => (&content[..k], content[k..].trim()),
            None => (content, ""),
        };
        match directive {
            "@semiring" => set_once(&mut header.semiring, line, rest.to_string(), "@semiring")?,
            "@alphabet" => set_once(&mut header.alphabet, line, name_list(line, rest)?, "@alphabet")?,
            "@states" => set_once(&mut header.states, line, name_list(line, rest)?, "@states")?,
            "@conditions" => set_once(&mut header.conditions, line, name_list(line, rest)?, "@conditions")?,
            "@features" => set_once(&mut header.features, line, name_list(line, rest)?, "@features")?,
            "@upgrades" => set_once(&mut header.upgrades, line, name_list(line, rest)?, "@upgrades")?,
            "@le" => {
                let Some((t, tail)) = take_tokens(rest, 2) else {
                    return Err(perr(line, "@le needs two conditions"));
                };
                if !tail.is_empty() {
                    return Err(perr(line, "@le takes exactly two conditions"));
                }
                header.le.push((line, t[0].to_string(), t[1].to_string()));
            }
            "@edge" | "@final" => body.push((line, directive, rest)),
            other => return Err(perr(line, format!("unknown directive `{other}`"))),
        }
    }
    let is_cts = header.conditions.is_some() || header.features.is_some() || header.upgrades.is_some();
    if is_cts {
        parse_cts(header, &body).map(Model::Cts)
    } else {
        parse_wa(header, &body, registry).map(Model::Wa)
    }
}

fn require<T>(slot: Option<(usize, T)>, what: &str) -> Result<T, ModelError> {
    slot.map(|(_, v)| v).ok_or_else(|| perr(0, format!("missing {what}")))
}

fn parse_wa(header: Header, body: &[(usize, &str, &str)], registry: &Registry) -> Result<WeightedAutomaton, ModelError> {
    if let Some((line, _, _)) = header.le.first() {
        return Err(perr(*line, "@le needs @conditions"));
    }
    let (sr_line, sr_name) = header.semiring.ok_or_else(|| perr(0, "missing @semiring"))?;
    let sr = registry.resolve(&sr_name).map_err(|e| match e {
        SemiringError::UnknownSemiring(n) => ModelError::UnknownSemiring(n),
        other => perr(sr_line, other.to_string()),
    })?;
    let alphabet = require(header.alphabet, "@alphabet")?;
    let states = require(header.states, "@states")?;
    let mut aut = WeightedAutomaton::new(sr.clone(), states, alphabet).map_err(|e| perr(0, e.to_string()))?;
    let mut seen_edges = BTreeSet::new();
    let mut seen_final = BTreeSet::new();
    for &(line, directive, rest) in body {
        let state = |name: &str| aut.state_index(name).map_err(|_| perr(line, format!("undeclared state `{name}`")));
        if directive == "@edge" {
            let (t, weight) = take_tokens(rest, 3).ok_or_else(|| perr(line, "@edge needs source, symbol, target and weight"))?;
            let x = state(t[0])?;
            let a = aut.symbol_index(t[1]).map_err(|_| perr(line, format!("undeclared symbol `{}`", t[1])))?;
            let y = state(t[2])?;
            if weight.is_empty() {
                return Err(perr(line, "@edge needs a weight"));
            }
            let w = sr.parse(weight).map_err(|e| perr(line, e.to_string()))?;
            if !seen_edges.insert((x, a, y)) {
                return Err(perr(line, "duplicate @edge"));
            }
            aut.set_transition(x, a, y, w);
        } else {
            let (t, weight) = take_tokens(rest, 1).ok_or_else(|| perr(line, "@final needs a state and a weight"))?;
            let x = state(t[0])?;
            if weight.is_empty() {
                return Err(perr(line, "@final needs a weight"));
            }
            let w = sr.parse(weight).map_err(|e| perr(line, e.to_string()))?;
            if !seen_final.insert(x) {
                return Err(perr(line, "duplicate @final"));
            }
            aut.set_termination(x, w);
        }
    }
    Ok(aut)
}

fn parse_cts(header: Header, body: &[(usize, &str, &str)]) -> Result<CtsModel, ModelError> {
    if let Some((line, _)) = header.semiring {
        return Err(perr(line, "a CTS file takes no @semiring"));
    }
    let space = match (header.conditions, header.features.is_some() || header.upgrades.is_some()) {
        (Some((line, _)), true) => return Err(perr(line, "@conditions cannot be combined with @features/@upgrades")),
        (Some((_, elements)), false) => {
            let order_pairs = header.le.iter().map(|(_, a, b)| (a.clone(), b.clone())).collect();
            let desc = PosetDescription { elements, order_pairs };
            let line = header.le.first().map(|l| l.0).unwrap_or(0);
            ConditionSpace::Poset(Arc::new(Poset::new(&desc).map_err(|e| perr(line, e.to_string()))?))
        }
        (None, _) => {
            if let Some((line, _, _)) = header.le.first() {
                return Err(perr(*line, "@le needs @conditions"));
            }
            let base = header.features.map(|f| f.1).unwrap_or_default();
            let upgrades = header.upgrades.map(|f| f.1).unwrap_or_default();
            ConditionSpace::Features(FeatureModel::new(base, upgrades).map_err(|e| perr(0, e.to_string()))?)
        }
    };
    let states = require(header.states, "@states")?;
    let alphabet = require(header.alphabet, "@alphabet")?;

    // guards are validated and put in canonical form by the backend native
    // to the condition space
    enum Lat {
        Explicit(ExplicitLattice),
        Bdd(BddLattice),
    }
    let mut lat = match &space {
        ConditionSpace::Poset(p) => Lat::Explicit(ExplicitLattice::new(p.clone())),
        ConditionSpace::Features(m) => Lat::Bdd(BddLattice::new(m.clone())),
    };
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    for &(line, directive, rest) in body {
        if directive == "@final" {
            return Err(perr(line, "a CTS file takes no @final"));
        }
        let (t, guard) = take_tokens(rest, 3).ok_or_else(|| perr(line, "@edge needs source, symbol, target and guard"))?;
        let index = |names: &[String], n: &str, what: &str| {
            names.iter().position(|s| s == n).ok_or_else(|| perr(line, format!("undeclared {what} `{n}`")))
        };
        let from = index(&states, t[0], "state")?;
        let symbol = index(&alphabet, t[1], "symbol")?;
        let to = index(&states, t[2], "state")?;
        let canonical = match &mut lat {
            Lat::Explicit(l) => l.parse_guard(guard).map(|g| l.format(&g)),
            Lat::Bdd(l) => l.parse_guard(guard).map(|g| l.format(&g)),
        }
        .map_err(|source| ModelError::Guard { line, source })?;
        if !seen.insert((from, symbol, to)) {
            return Err(perr(line, "duplicate @edge"));
        }
        if canonical != "{}" {
            edges.push(CtsEdge { from, symbol, to, guard: canonical });
        }
    }
    edges.sort_by_key(|e| (e.from, e.symbol, e.to));
    Ok(CtsModel { space, states, alphabet, edges })
}

pub fn load_model(path: &Path, registry: &Registry) -> Result<Model, ModelError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ModelError::Io { path: path.display().to_string(), source })?;
    parse_model(&text, registry)
}

/// Canonical text of a model; parsing it gives back the same model.
pub fn print_model(model: &Model) -> String {
    let mut out = String::new();
    match model {
        Model::Wa(aut) => {
            let sr = aut.semiring();
            let _ = writeln!(out, "@semiring {}", sr.name());
            let _ = writeln!(out, "@alphabet {}", aut.alphabet().join(","));
            let _ = writeln!(out, "@states {}", aut.states().join(","));
            for x in 0..aut.len() {
                for a in 0..aut.alphabet().len() {
                    for y in 0..aut.len() {
                        let w = aut.transition(x, a, y);
                        if !is_zero(sr.as_ref(), w) {
                            let (xs, ys) = (&aut.states()[x], &aut.states()[y]);
                            let _ = writeln!(out, "@edge {xs} {} {ys} {}", aut.alphabet()[a], sr.format(w));
                        }
                    }
                }
            }
            for (x, w) in aut.termination().iter().enumerate() {
                if !is_zero(sr.as_ref(), w) {
                    let _ = writeln!(out, "@final {} {}", aut.states()[x], sr.format(w));
                }
            }
        }
        Model::Cts(m) => {
            match &m.space {
                ConditionSpace::Poset(p) => {
                    let desc = p.description();
                    let _ = writeln!(out, "@conditions {}", desc.elements.join(","));
                    for (a, b) in &desc.order_pairs {
                        let _ = writeln!(out, "@le {a} {b}");
                    }
                }
                ConditionSpace::Features(f) => {
                    if !f.base().is_empty() {
                        let _ = writeln!(out, "@features {}", f.base().join(","));
                    }
                    if !f.upgrades().is_empty() {
                        let _ = writeln!(out, "@upgrades {}", f.upgrades().join(","));
                    }
                    if f.num_vars() == 0 {
                        let _ = writeln!(out, "@features");
                    }
                }
            }
            let _ = writeln!(out, "@states {}", m.states.join(","));
            let _ = writeln!(out, "@alphabet {}", m.alphabet.join(","));
            for e in &m.edges {
                let _ = writeln!(out, "@edge {} {} {} {}", m.states[e.from], m.alphabet[e.symbol], m.states[e.to], e.guard);
            }
        }
    }
    out
}

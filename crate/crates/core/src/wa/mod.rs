//! Weighted automata and their analyses.
//!
//! A state assigns every word a weight: `L(ε)(x) = t(x)` and
//! `L(aw)(x) = Σ_y M_a(x,y)·L(w)(y)`. Collected over all states this is the
//! column vector `M_{a1}···M_{ak}·t`. Dually, a row vector `u` assigns `w` the
//! weight `u·M_{a1}···M_{ak}·t`.

mod complete;
mod universality;
mod upto;

use thiserror::Error;

use crate::semiring::{format_vector, parse_vector, vectors_eq, Element, SemiringError, SemiringRef};
use crate::solve::SolveError;

pub use complete::{equiv_complete, BasisVector, EquivalenceReport, Status};
pub use universality::{universality, UniversalityReport, UniversalityVerdict};
pub use upto::{congruence_check, equiv_upto, CongruenceMode, EquivVerdict, UptoReport};

/// A word as symbol indices into the automaton's alphabet.
pub type Word = Vec<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WaError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("vector has {found} entries, automaton has {expected} states")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("semiring `{semiring}` lacks capability: {needed}")]
    CapabilityMismatch { semiring: String, needed: &'static str },
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error(transparent)]
    Solve(SolveError),
}

impl From<SolveError> for WaError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::CapabilityMismatch { semiring, needed } => WaError::CapabilityMismatch { semiring, needed },
            other => WaError::Solve(other),
        }
    }
}

/// States, alphabet, one transition matrix per symbol and a termination vector.
#[derive(Clone, Debug)]
pub struct WeightedAutomaton {
    semiring: SemiringRef,
    states: Vec<String>,
    alphabet: Vec<String>,
    /// `transitions[a][x][y]` is the weight of `x --a--> y`.
    transitions: Vec<Vec<Vec<Element>>>,
    termination: Vec<Element>,
}

fn check_unique(names: &[String]) -> Result<(), WaError> {
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(WaError::DuplicateName(n.clone()));
        }
    }
    Ok(())
}

impl WeightedAutomaton {
    /// An automaton with all weights zero.
    pub fn new(semiring: SemiringRef, states: Vec<String>, alphabet: Vec<String>) -> Result<Self, WaError> {
        check_unique(&states)?;
        check_unique(&alphabet)?;
        let n = states.len();
        let zero = semiring.zero();
        let transitions = vec![vec![vec![zero.clone(); n]; n]; alphabet.len()];
        let termination = vec![zero; n];
        Ok(WeightedAutomaton { semiring, states, alphabet, transitions, termination })
    }

    pub fn semiring(&self) -> &SemiringRef {
        &self.semiring
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_index(&self, name: &str) -> Result<usize, WaError> {
        self.states.iter().position(|s| s == name).ok_or_else(|| WaError::UnknownState(name.to_string()))
    }

    pub fn symbol_index(&self, name: &str) -> Result<usize, WaError> {
        self.alphabet.iter().position(|s| s == name).ok_or_else(|| WaError::UnknownSymbol(name.to_string()))
    }

    pub fn matrix(&self, a: usize) -> &[Vec<Element>] {
        &self.transitions[a]
    }

    pub fn transition(&self, x: usize, a: usize, y: usize) -> &Element {
        &self.transitions[a][x][y]
    }

    pub fn set_transition(&mut self, x: usize, a: usize, y: usize, w: Element) {
        self.transitions[a][x][y] = w;
    }

    pub fn termination(&self) -> &[Element] {
        &self.termination
    }

    pub fn set_termination(&mut self, x: usize, w: Element) {
        self.termination[x] = w;
    }

    /// `M_a·v`.
    pub fn mat_vec(&self, a: usize, v: &[Element]) -> Vec<Element> {
        let sr = &self.semiring;
        self.transitions[a]
            .iter()
            .map(|row| row.iter().zip(v).fold(sr.zero(), |acc, (m, x)| sr.add(&acc, &sr.mul(m, x))))
            .collect()
    }

    /// `u·M_a`.
    pub fn vec_mat(&self, u: &[Element], a: usize) -> Vec<Element> {
        let sr = &self.semiring;
        let m = &self.transitions[a];
        (0..self.len())
            .map(|y| u.iter().zip(m).fold(sr.zero(), |acc, (x, row)| sr.add(&acc, &sr.mul(x, &row[y]))))
            .collect()
    }

    /// `u·t`, the weight a row vector assigns to the empty word.
    pub fn output(&self, u: &[Element]) -> Element {
        let sr = &self.semiring;
        u.iter().zip(&self.termination).fold(sr.zero(), |acc, (x, t)| sr.add(&acc, &sr.mul(x, t)))
    }

    /// The column vector `(L(w)(x))_x`.
    pub fn word_vector(&self, w: &[usize]) -> Vec<Element> {
        w.iter().rev().fold(self.termination.clone(), |v, &a| self.mat_vec(a, &v))
    }

    /// The weight of `w` from the row vector `u`.
    pub fn row_weight(&self, u: &[Element], w: &[usize]) -> Element {
        let end = w.iter().fold(u.to_vec(), |v, &a| self.vec_mat(&v, a));
        self.output(&end)
    }

    /// Unit row vector at state `x`.
    pub fn unit(&self, x: usize) -> Vec<Element> {
        let mut u = vec![self.semiring.zero(); self.len()];
        u[x] = self.semiring.one();
        u
    }

    /// Parses symbols written back to back (`ab`) when every symbol is a single
    /// character, otherwise separated by `.`; `ε` and the empty string
    /// denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, WaError> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Vec::new());
        }
        if self.single_char_symbols() && !text.contains('.') {
            text.chars().map(|c| self.symbol_index(&c.to_string())).collect()
        } else {
            text.split('.').map(|s| self.symbol_index(s.trim())).collect()
        }
    }

    pub fn format_word(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        let parts: Vec<&str> = w.iter().map(|&a| self.alphabet[a].as_str()).collect();
        parts.join(if self.single_char_symbols() { "" } else { "." })
    }

    fn single_char_symbols(&self) -> bool {
        self.alphabet.iter().all(|s| s.chars().count() == 1)
    }

    /// Parses a comma-separated row vector over the states.
    pub fn parse_state_vector(&self, text: &str) -> Result<Vec<Element>, WaError> {
        let v = parse_vector(self.semiring.as_ref(), text)?;
        self.check_vector(&v)?;
        Ok(v)
    }

    pub fn format_vector(&self, v: &[Element]) -> String {
        format_vector(self.semiring.as_ref(), v)
    }

    pub(crate) fn check_vector(&self, v: &[Element]) -> Result<(), WaError> {
        if v.len() != self.len() {
            return Err(WaError::DimensionMismatch { expected: self.len(), found: v.len() });
        }
        Ok(())
    }

    /// Structural equality up to the semiring's element equality.
    pub fn same_as(&self, other: &WeightedAutomaton) -> bool {
        let sr = self.semiring.as_ref();
        self.semiring.name() == other.semiring.name()
            && self.states == other.states
            && self.alphabet == other.alphabet
            && vectors_eq(sr, &self.termination, &other.termination)
            && self
                .transitions
                .iter()
                .zip(&other.transitions)
                .all(|(m, n)| m.iter().zip(n).all(|(r, s)| vectors_eq(sr, r, s)))
    }
}

/// `L(w)(x)`.
pub fn language_weight(aut: &WeightedAutomaton, x: &str, w: &str) -> Result<Element, WaError> {
    let x = aut.state_index(x)?;
    let w = aut.parse_word(w)?;
    Ok(language_weight_at(aut, x, &w))
}

/// `L(w)(x)` by the defining recursion `L(aw)(x) = Σ_y M_a(x,y)·L(w)(y)`.
pub fn language_weight_at(aut: &WeightedAutomaton, x: usize, w: &[usize]) -> Element {
    let sr = aut.semiring();
    match w.split_first() {
        None => aut.termination()[x].clone(),
        Some((&a, rest)) => (0..aut.len()).fold(sr.zero(), |acc, y| {
            let m = aut.transition(x, a, y);
            if crate::semiring::is_zero(sr.as_ref(), m) {
                acc
            } else {
                sr.add(&acc, &sr.mul(m, &language_weight_at(aut, y, rest)))
            }
        }),
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use std::sync::Arc;

    use super::*;
    use crate::semiring::Rational;

    /// A --a,2--> B, A --a,3--> C, B --b,2--> B, C --b,2--> C, t = (1,2,1).
    pub fn three_state(sr: SemiringRef) -> WeightedAutomaton {
        let mut aut = WeightedAutomaton::new(
            sr.clone(),
            vec!["A".into(), "B".into(), "C".into()],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        let p = |s: &str| sr.parse(s).unwrap();
        aut.set_transition(0, 0, 1, p("2"));
        aut.set_transition(0, 0, 2, p("3"));
        aut.set_transition(1, 1, 1, p("2"));
        aut.set_transition(2, 1, 2, p("2"));
        aut.set_termination(0, p("1"));
        aut.set_termination(1, p("2"));
        aut.set_termination(2, p("1"));
        aut
    }

    pub fn rational_three_state() -> WeightedAutomaton {
        three_state(Arc::new(Rational))
    }

    pub fn q(n: i64) -> Element {
        Rational::element(n, 1)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn worked_example_weights() {
        let aut = rational_three_state();
        assert_eq!(language_weight(&aut, "A", "ab").unwrap(), q(14));
        assert_eq!(language_weight(&aut, "A", "").unwrap(), q(1));
        assert_eq!(language_weight(&aut, "A", "a").unwrap(), q(7));
        assert!(matches!(language_weight(&aut, "D", "a"), Err(WaError::UnknownState(_))));
        assert!(matches!(language_weight(&aut, "A", "c"), Err(WaError::UnknownSymbol(_))));
    }

    #[test]
    fn column_and_row_forms_agree() {
        let aut = rational_three_state();
        let words: Vec<Word> = vec![vec![], vec![0], vec![0, 1], vec![1, 1, 0], vec![0, 1, 1]];
        for w in &words {
            let col = aut.word_vector(w);
            for x in 0..3 {
                assert_eq!(col[x], language_weight_at(&aut, x, w));
                assert_eq!(aut.row_weight(&aut.unit(x), w), col[x]);
            }
        }
    }

    #[test]
    fn words_round_trip() {
        let aut = rational_three_state();
        let w = aut.parse_word("abba").unwrap();
        assert_eq!(w, vec![0, 1, 1, 0]);
        assert_eq!(aut.format_word(&w), "abba");
        assert_eq!(aut.format_word(&[]), "ε");
        assert_eq!(aut.parse_word("ε").unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn duplicate_states_rejected() {
        let err = WeightedAutomaton::new(
            std::sync::Arc::new(crate::semiring::Boolean),
            vec!["A".into(), "A".into()],
            vec!["a".into()],
        )
        .unwrap_err();
        assert_eq!(err, WaError::DuplicateName("A".into()));
    }
}

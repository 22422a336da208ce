//! Seeded random weighted automata.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wautom_core::semiring::{is_zero, SemiringRef};
use wautom_core::wa::WeightedAutomaton;

#[derive(Clone, Debug, PartialEq)]
pub struct RandomSpec {
    pub states: usize,
    /// Probability that a given `(x, a, y)` transition exists.
    pub transition_probability: f64,
    pub alphabet_size: usize,
    pub seed: u64,
}

/// `a, b, ..., z`, then `a26, a27, ...`.
pub fn symbol_names(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| if i < 26 { char::from(b'a' + i as u8).to_string() } else { format!("a{i}") })
        .collect()
}

pub fn state_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

/// Each transition exists independently with the given probability and
/// then gets a nonzero sampled weight; termination weights are sampled
/// as they come.
pub fn gen_random(spec: &RandomSpec, sr: SemiringRef) -> WeightedAutomaton {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut aut = WeightedAutomaton::new(sr.clone(), state_names(spec.states), symbol_names(spec.alphabet_size))
        .expect("generated names are distinct");
    let p = spec.transition_probability.clamp(0.0, 1.0);
    for a in 0..spec.alphabet_size {
        for x in 0..spec.states {
            for y in 0..spec.states {
                if rng.gen_bool(p) {
                    let mut w = sr.sample(&mut rng);
                    for _ in 0..64 {
                        if !is_zero(sr.as_ref(), &w) {
                            break;
                        }
                        w = sr.sample(&mut rng);
                    }
                    if is_zero(sr.as_ref(), &w) {
                        w = sr.one();
                    }
                    aut.set_transition(x, a, y, w);
                }
            }
        }
    }
    for x in 0..spec.states {
        let w = sr.sample(&mut rng);
        aut.set_termination(x, w);
    }
    aut
}

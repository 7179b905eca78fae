//! Greedy construction of a basic word under letter weights.

use crate::alphabet::{Alphabet, Subset, Word};
use crate::analysis::continuations;
use crate::polymatroid::Rat;
use crate::system::Greedoid;

/// Total assignment of a rational weight to every letter of an alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction {
    alphabet: Alphabet,
    weights: Vec<Rat>,
}

impl WeightFunction {
    pub fn new(alphabet: Alphabet, weights: Vec<Rat>) -> WeightFunction {
        assert_eq!(
            weights.len(),
            alphabet.len(),
            "one weight per letter, in letter order"
        );
        WeightFunction { alphabet, weights }
    }

    /// The same weight for every letter; greedy then degenerates to
    /// least-letter-first.
    pub fn constant(alphabet: Alphabet, value: Rat) -> WeightFunction {
        let weights = vec![value; alphabet.len()];
        WeightFunction { alphabet, weights }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn weight(&self, x: u8) -> Rat {
        self.weights[x as usize]
    }
}

/// Repeatedly append the heaviest feasible continuation (least letter id on
/// ties) until the word is maximal. The result is always a basic word; the
/// weight sequence along it need not be monotone.
pub fn greedy_basis(g: &Greedoid, w: &WeightFunction) -> Word {
    assert_eq!(g.alphabet(), w.alphabet(), "weights must cover the alphabet");
    assert!(g.is_normal(), "greedy selection expects a loop-free greedoid");
    let mut word = Word::empty();
    let mut support = Subset::EMPTY;
    loop {
        let gamma = continuations(g, support);
        let mut best: Option<u8> = None;
        for x in gamma.iter() {
            if best.is_none_or(|b| w.weight(x) > w.weight(b)) {
                best = Some(x);
            }
        }
        match best {
            None => return word,
            Some(x) => {
                word.push(x);
                support = support.with(x);
            }
        }
    }
}

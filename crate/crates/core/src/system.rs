//! Feasible-set systems and validated greedoids.
//!
//! The canonical store is the set system; the simple language is derived on
//! demand (a word is feasible iff every prefix support is feasible). A
//! `Greedoid` is a set system that passed validation: the empty set is
//! feasible, every nonempty feasible set loses some element and stays
//! feasible (accessibility), and any smaller feasible set can be augmented
//! from any larger one (exchange).

use std::fmt;

use thiserror::Error;

use crate::alphabet::{sort_lex, Alphabet, Subset, Word};

/// Default cap for word enumeration; the language of a greedoid can be
/// factorially larger than its set system.
pub const DEFAULT_WORD_BUDGET: usize = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LanguageError {
    #[error("word enumeration exceeded the budget of {0} words")]
    SizeLimit(usize),
}

/// Plain family of subsets over an alphabet, stored deduplicated in the
/// canonical dictionary order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    alphabet: Alphabet,
    sets: Vec<Subset>,
    masks: Vec<u32>,
}

impl SetSystem {
    pub fn new(alphabet: Alphabet, mut sets: Vec<Subset>) -> SetSystem {
        let full = alphabet.full();
        for s in &sets {
            assert!(
                s.is_subset_of(full),
                "set {:032b} uses letters outside the alphabet",
                s.mask()
            );
        }
        sets.sort_by_key(|s| s.mask());
        sets.dedup();
        let masks: Vec<u32> = sets.iter().map(|s| s.mask()).collect();
        sort_lex(&mut sets);
        SetSystem { alphabet, sets, masks }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Member sets in canonical dictionary order.
    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.masks.binary_search(&s.mask()).is_ok()
    }

    pub fn union_of_all(&self) -> Subset {
        self.sets
            .iter()
            .fold(Subset::EMPTY, |acc, s| acc.union(*s))
    }
}

/// Which greedoid axiom failed, with the least witness in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GreedoidViolation {
    /// The family has no sets at all.
    EmptyFamily,
    /// The empty set is not feasible.
    EmptySetAxiom,
    /// A nonempty feasible set none of whose one-element deletions is feasible.
    Accessibility { set: Subset },
    /// A feasible pair |smaller| < |larger| with no augmenting letter.
    Exchange { smaller: Subset, larger: Subset },
}

impl GreedoidViolation {
    pub fn describe(&self, alphabet: &Alphabet) -> String {
        match self {
            GreedoidViolation::EmptyFamily => "the family has no sets at all".to_string(),
            GreedoidViolation::EmptySetAxiom => {
                "empty-set axiom: {} is not feasible".to_string()
            }
            GreedoidViolation::Accessibility { set } => format!(
                "accessibility: no one-element deletion of {} is feasible",
                alphabet.set_string(*set)
            ),
            GreedoidViolation::Exchange { smaller, larger } => format!(
                "exchange: no letter of {} extends {} feasibly",
                alphabet.set_string(*larger),
                alphabet.set_string(*smaller)
            ),
        }
    }
}

impl fmt::Display for GreedoidViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GreedoidViolation::EmptyFamily => write!(f, "empty family"),
            GreedoidViolation::EmptySetAxiom => write!(f, "empty-set axiom violated"),
            GreedoidViolation::Accessibility { .. } => write!(f, "accessibility violated"),
            GreedoidViolation::Exchange { .. } => write!(f, "exchange violated"),
        }
    }
}

impl std::error::Error for GreedoidViolation {}

/// Validated greedoid. Rank queries are table-backed for alphabets of at
/// most 16 letters and fall back to a family scan above that.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Greedoid {
    system: SetSystem,
    rank_table: Option<Vec<u8>>,
    loops: Subset,
    rank: u8,
}

impl Greedoid {
    /// Validate a set system against the greedoid axioms.
    pub fn from_system(system: SetSystem) -> Result<Greedoid, GreedoidViolation> {
        if system.is_empty() {
            return Err(GreedoidViolation::EmptyFamily);
        }
        if !system.contains(Subset::EMPTY) {
            return Err(GreedoidViolation::EmptySetAxiom);
        }
        // Accessibility, least witness first: sets() is already canonical.
        for &a in system.sets() {
            if a.is_empty() {
                continue;
            }
            if !a.iter().any(|x| system.contains(a.without(x))) {
                return Err(GreedoidViolation::Accessibility { set: a });
            }
        }
        // Exchange over all ordered pairs, in canonical (smaller, larger) order.
        for &x in system.sets() {
            for &y in system.sets() {
                if x.len() >= y.len() {
                    continue;
                }
                if !y.diff(x).iter().any(|e| system.contains(x.with(e))) {
                    return Err(GreedoidViolation::Exchange { smaller: x, larger: y });
                }
            }
        }

        let loops = system.union_of_all().complement(system.alphabet().len());
        let rank = system.sets().iter().map(|s| s.len()).max().unwrap_or(0) as u8;
        let rank_table = if system.alphabet().len() <= 16 {
            Some(build_rank_table(&system))
        } else {
            None
        };
        Ok(Greedoid { system, rank_table, loops, rank })
    }

    /// Convenience constructor from explicit sets.
    pub fn from_sets(
        alphabet: Alphabet,
        sets: Vec<Subset>,
    ) -> Result<Greedoid, GreedoidViolation> {
        Greedoid::from_system(SetSystem::new(alphabet, sets))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.system.alphabet
    }

    pub fn system(&self) -> &SetSystem {
        &self.system
    }

    /// Feasible sets in canonical dictionary order.
    pub fn feasible(&self) -> &[Subset] {
        self.system.sets()
    }

    pub fn is_feasible(&self, s: Subset) -> bool {
        self.system.contains(s)
    }

    /// Letters that occur in no feasible set.
    pub fn loops(&self) -> Subset {
        self.loops
    }

    pub fn is_normal(&self) -> bool {
        self.loops.is_empty()
    }

    /// Rank of the full ground set, i.e. the common length of basic words.
    pub fn ground_rank(&self) -> u32 {
        self.rank as u32
    }

    /// Greedoid rank: size of the largest feasible subset of `x`.
    pub fn rank(&self, x: Subset) -> u32 {
        match &self.rank_table {
            Some(table) => table[x.mask() as usize] as u32,
            None => self
                .feasible()
                .iter()
                .filter(|a| a.is_subset_of(x))
                .map(|a| a.len())
                .max()
                .unwrap_or(0),
        }
    }

    /// Whether every prefix support of `w` is feasible (and `w` is simple).
    pub fn is_word_feasible(&self, w: &Word) -> bool {
        if !w.is_simple() {
            return false;
        }
        let mut support = Subset::EMPTY;
        for &x in w.letters() {
            support = support.with(x);
            if !self.is_feasible(support) {
                return false;
            }
        }
        true
    }

    /// The derived simple language, in dictionary order.
    pub fn language(&self, budget: usize) -> Result<Vec<Word>, LanguageError> {
        let mut words = Vec::new();
        let mut current = Word::empty();
        self.walk_words(&mut current, Subset::EMPTY, budget, &mut |w, _, out: &mut Vec<Word>| {
            out.push(w.clone());
        }, &mut words)?;
        Ok(words)
    }

    /// Feasible words of maximum length, in dictionary order. Every feasible
    /// word extends to a basic one (exchange against any basic set), so the
    /// walk has no dead ends.
    pub fn basic_words(&self, budget: usize) -> Result<Vec<Word>, LanguageError> {
        let full_len = self.rank as usize;
        let mut words = Vec::new();
        self.walk_words(
            &mut Word::empty(),
            Subset::EMPTY,
            budget,
            &mut |w, _, out: &mut Vec<Word>| {
                if w.len() == full_len {
                    out.push(w.clone());
                }
            },
            &mut words,
        )?;
        Ok(words)
    }

    fn walk_words<T>(
        &self,
        current: &mut Word,
        support: Subset,
        budget: usize,
        visit: &mut impl FnMut(&Word, Subset, &mut T),
        acc: &mut T,
    ) -> Result<usize, LanguageError> {
        self.walk_words_inner(current, support, budget, 0, visit, acc)
    }

    fn walk_words_inner<T>(
        &self,
        current: &mut Word,
        support: Subset,
        budget: usize,
        mut visited: usize,
        visit: &mut impl FnMut(&Word, Subset, &mut T),
        acc: &mut T,
    ) -> Result<usize, LanguageError> {
        visited += 1;
        if visited > budget {
            return Err(LanguageError::SizeLimit(budget));
        }
        visit(current, support, acc);
        for x in self.alphabet().letters() {
            if support.contains(x) {
                continue;
            }
            let next = support.with(x);
            if !self.is_feasible(next) {
                continue;
            }
            current.push(x);
            visited = self.walk_words_inner(current, next, budget, visited, visit, acc)?;
            current.pop();
        }
        Ok(visited)
    }
}

fn build_rank_table(system: &SetSystem) -> Vec<u8> {
    let n = system.alphabet().len();
    let mut table = vec![0u8; 1 << n];
    for mask in 1u32..(1u32 << n) {
        let s = Subset::from_mask(mask);
        let mut best = if system.contains(s) { s.len() as u8 } else { 0 };
        for x in s.iter() {
            best = best.max(table[s.without(x).mask() as usize]);
        }
        table[mask as usize] = best;
    }
    table
}

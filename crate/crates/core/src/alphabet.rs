//! Ground types: named alphabets, bit-mask subsets, and words.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Hard cap on alphabet size. Subsets are `u32` bit masks and most checks are
/// exponential in the alphabet, so larger ground sets are out of scope.
pub const MAX_LETTERS: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("alphabet has {0} letters, the maximum is {MAX_LETTERS}")]
    TooManyLetters(usize),
    #[error("duplicate letter name `{0}`")]
    DuplicateLetter(String),
    #[error("invalid letter name `{0}` (expected [A-Za-z0-9_]+)")]
    InvalidName(String),
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Ground set of named letters. A letter id is its index in the name list;
/// ids order the canonical "dictionary" comparisons used for witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_LETTERS {
            return Err(AlphabetError::TooManyLetters(names.len()));
        }
        for (i, name) in names.iter().enumerate() {
            if !valid_name(name) {
                return Err(AlphabetError::InvalidName(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(AlphabetError::DuplicateLetter(name.clone()));
            }
        }
        Ok(Alphabet { names })
    }

    /// Alphabet `a, b, c, ...` of the given size.
    pub fn of_size(n: usize) -> Self {
        assert!(n <= MAX_LETTERS, "alphabet size {n} exceeds {MAX_LETTERS}");
        let names = (0..n)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect();
        Alphabet { names }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: u8) -> &str {
        &self.names[id as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<u8> {
        self.names.iter().position(|n| n == name).map(|i| i as u8)
    }

    pub fn letters(&self) -> impl Iterator<Item = u8> {
        0..self.len() as u8
    }

    /// Full ground set as a subset.
    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn subset_count(&self) -> usize {
        1usize << self.len()
    }

    /// All subsets in raw mask order (useful for table indexing).
    pub fn masks(&self) -> impl Iterator<Item = Subset> {
        (0..1u32 << self.len()).map(Subset::from_mask)
    }

    /// All subsets in the canonical dictionary order on element lists.
    pub fn subsets_lex(&self) -> Vec<Subset> {
        let mut all: Vec<Subset> = self.masks().collect();
        all.sort_by(|a, b| a.lex_cmp(*b));
        all
    }

    /// Render a subset as `{a,b}`.
    pub fn set_string(&self, s: Subset) -> String {
        let parts: Vec<&str> = s.iter().map(|i| self.name(i)).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Render a word; single-character names concatenate (`acb`), otherwise
    /// letters are dot-separated.
    pub fn word_string(&self, w: &Word) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        let parts: Vec<&str> = w.letters().iter().map(|&i| self.name(i)).collect();
        if parts.iter().all(|p| p.len() == 1) {
            parts.concat()
        } else {
            parts.join("·")
        }
    }
}

/// Subset of an alphabet, stored as a bit mask over letter ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_mask(mask: u32) -> Self {
        Subset(mask)
    }

    pub fn singleton(id: u8) -> Self {
        Subset(1 << id)
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_LETTERS);
        Subset(((1u64 << n) - 1) as u32)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, id: u8) -> bool {
        self.0 & (1 << id) != 0
    }

    pub fn with(self, id: u8) -> Self {
        Subset(self.0 | (1 << id))
    }

    pub fn without(self, id: u8) -> Self {
        Subset(self.0 & !(1 << id))
    }

    pub fn union(self, other: Self) -> Self {
        Subset(self.0 | other.0)
    }

    pub fn inter(self, other: Self) -> Self {
        Subset(self.0 & other.0)
    }

    pub fn diff(self, other: Self) -> Self {
        Subset(self.0 & !other.0)
    }

    pub fn complement(self, n: usize) -> Self {
        Subset(Subset::full(n).0 & !self.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Letter ids in ascending order.
    pub fn iter(self) -> SubsetIter {
        SubsetIter(self.0)
    }

    /// Canonical witness order: compare element lists as dictionaries, so
    /// `{a,d}` precedes `{b,c}` and any set precedes its proper extensions.
    pub fn lex_cmp(self, other: Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl FromIterator<u8> for Subset {
    fn from_iter<T: IntoIterator<Item = u8>>(iter: T) -> Self {
        let mut s = Subset::EMPTY;
        for id in iter {
            s = s.with(id);
        }
        s
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SubsetIter(u32);

impl Iterator for SubsetIter {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        if self.0 == 0 {
            return None;
        }
        let id = self.0.trailing_zeros() as u8;
        self.0 &= self.0 - 1;
        Some(id)
    }
}

/// Sort a family of subsets into the canonical dictionary order.
pub fn sort_lex(sets: &mut [Subset]) {
    sets.sort_by(|a, b| a.lex_cmp(*b));
}

/// Word over an alphabet, as a sequence of letter ids. The derived `Ord` is
/// the dictionary order on id sequences, which is the canonical word order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<u8>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<u8>) -> Self {
        Word { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn push(&mut self, id: u8) {
        self.letters.push(id);
    }

    pub fn pop(&mut self) -> Option<u8> {
        self.letters.pop()
    }

    pub fn extended(&self, id: u8) -> Word {
        let mut w = self.clone();
        w.push(id);
        w
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word { letters: self.letters[..k].to_vec() }
    }

    pub fn support(&self) -> Subset {
        self.letters.iter().copied().collect()
    }

    /// No letter repeats.
    pub fn is_simple(&self) -> bool {
        self.support().len() as usize == self.letters.len()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "ε");
        }
        for &id in &self.letters {
            write!(f, "{}", (b'a' + id) as char)?;
        }
        Ok(())
    }
}

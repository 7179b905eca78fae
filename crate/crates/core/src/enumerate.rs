//! Exhaustive enumeration of every greedoid over a small alphabet.
//!
//! Families are grown bottom-up by cardinality layer: a layer of k+1-sets is
//! admissible only when accessibility (every new set has a parent in the
//! previous layer) and the exchange axiom against all smaller layers hold.
//! Adding a later layer can never repair a pair of existing sets, so partial
//! states are greedoids themselves and pruning is sound. This visits each
//! family exactly once and never touches the doubly-exponential space of raw
//! set families.

use std::cmp::Ordering;

use thiserror::Error;

use crate::alphabet::{sort_lex, Alphabet, Subset};
use crate::system::Greedoid;

/// Hard cap: the corpus and its audits are meant for desk-scale alphabets.
pub const ENUMERATION_LETTER_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("enumeration exceeded the budget of {budget} families")]
pub struct BudgetExceeded {
    pub budget: usize,
}

#[derive(Debug, Clone)]
pub struct EnumerateOptions {
    /// Drop greedoids with loops (letters in no feasible set).
    pub normal_only: bool,
    /// Keep one representative per letter-permutation class: the family that
    /// is lexicographically least among its relabelings.
    pub dedup: bool,
    /// Cap on the number of families generated (pre-filter), if any.
    pub budget: Option<usize>,
}

impl Default for EnumerateOptions {
    fn default() -> EnumerateOptions {
        EnumerateOptions { normal_only: false, dedup: false, budget: None }
    }
}

/// Dictionary order on sorted set lists: compare sets pairwise in the
/// canonical subset order, shorter families first on a tie.
pub(crate) fn family_cmp(a: &[Subset], b: &[Subset]) -> Ordering {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| x.lex_cmp(*y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

/// All permutations of 0..n in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut current: Vec<u8> = Vec::new();
    let mut used = vec![false; n];
    fn extend(n: usize, current: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                current.push(i as u8);
                extend(n, current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    extend(n, &mut current, &mut used, &mut out);
    out
}

fn relabel(sets: &[Subset], perm: &[u8]) -> Vec<Subset> {
    let mut out: Vec<Subset> = sets
        .iter()
        .map(|s| s.iter().map(|x| perm[x as usize]).collect())
        .collect();
    sort_lex(&mut out);
    out
}

/// Least relabeling of the family under the dictionary order on sorted
/// set lists.
fn canonical_form(sets: &[Subset], perms: &[Vec<u8>]) -> Vec<Subset> {
    let mut best: Option<Vec<Subset>> = None;
    for perm in perms {
        let candidate = relabel(sets, perm);
        if best.as_deref().is_none_or(|b| family_cmp(&candidate, b) == Ordering::Less) {
            best = Some(candidate);
        }
    }
    best.expect("the identity permutation always exists")
}

struct Generator {
    n: usize,
    layers: Vec<Vec<Subset>>,
    families: Vec<Vec<Subset>>,
    budget: Option<usize>,
}

impl Generator {
    fn record(&mut self) -> Result<(), BudgetExceeded> {
        if let Some(budget) = self.budget {
            if self.families.len() >= budget {
                return Err(BudgetExceeded { budget });
            }
        }
        let mut family: Vec<Subset> = self.layers.iter().flatten().copied().collect();
        sort_lex(&mut family);
        self.families.push(family);
        Ok(())
    }

    /// Sets of size one larger with a parent in the current top layer.
    fn candidates(&self) -> Vec<Subset> {
        let top = self.layers.last().expect("the empty-set layer always exists");
        let size = self.layers.len() as u32;
        let mut out: Vec<Subset> = (0..1u32 << self.n)
            .map(Subset::from_mask)
            .filter(|a| {
                a.len() == size && a.iter().any(|x| top.contains(&a.without(x)))
            })
            .collect();
        sort_lex(&mut out);
        out
    }

    /// Exchange for every (new set, smaller set) pair: some letter of the new
    /// set must extend the smaller set inside the family. Pairs among
    /// existing layers were verified when those layers were added.
    fn layer_admissible(&self, layer: &[Subset]) -> bool {
        let k = self.layers.len() - 1;
        for &a in layer {
            for (j, smaller_layer) in self.layers.iter().enumerate() {
                let next: &[Subset] = if j < k { &self.layers[j + 1] } else { layer };
                for &b in smaller_layer {
                    let ok = a
                        .diff(b)
                        .iter()
                        .any(|x| next.contains(&b.with(x)));
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn descend(&mut self) -> Result<(), BudgetExceeded> {
        self.record()?;
        let candidates = self.candidates();
        for choice in 1u32..1 << candidates.len() {
            let layer: Vec<Subset> = candidates
                .iter()
                .enumerate()
                .filter(|(i, _)| choice & (1 << i) != 0)
                .map(|(_, &s)| s)
                .collect();
            if self.layer_admissible(&layer) {
                self.layers.push(layer);
                self.descend()?;
                self.layers.pop();
            }
        }
        Ok(())
    }
}

/// Every accessible, exchange-satisfying set family over n letters, in the
/// dictionary order of their sorted set lists.
pub fn enumerate_greedoids(
    n: usize,
    options: &EnumerateOptions,
) -> Result<Vec<Greedoid>, BudgetExceeded> {
    assert!(
        n <= ENUMERATION_LETTER_CAP,
        "enumeration over {n} letters exceeds the cap of {ENUMERATION_LETTER_CAP}"
    );
    let mut generator = Generator {
        n,
        layers: vec![vec![Subset::EMPTY]],
        families: Vec::new(),
        budget: options.budget,
    };
    generator.descend()?;
    let mut families = generator.families;
    if options.normal_only {
        let full = Subset::full(n);
        families.retain(|sets| {
            sets.iter().fold(Subset::EMPTY, |acc, &s| acc.union(s)) == full
        });
    }
    if options.dedup {
        let perms = permutations(n);
        families.retain(|sets| *sets == canonical_form(sets, &perms));
    }
    families.sort_by(|a, b| family_cmp(a, b));
    let alphabet = Alphabet::of_size(n);
    Ok(families
        .into_iter()
        .map(|sets| {
            Greedoid::from_sets(alphabet.clone(), sets)
                .expect("the layered generator only emits valid families")
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Ground-truth enumerator: filter every set family containing the empty
    /// set through the validator.
    fn brute_force(n: usize) -> Vec<Vec<Subset>> {
        let alphabet = Alphabet::of_size(n);
        let nonempty: Vec<Subset> = (1..1u32 << n).map(Subset::from_mask).collect();
        let mut out = Vec::new();
        for choice in 0u64..1 << nonempty.len() {
            let mut sets = vec![Subset::EMPTY];
            for (i, &s) in nonempty.iter().enumerate() {
                if choice & (1 << i) != 0 {
                    sets.push(s);
                }
            }
            sort_lex(&mut sets);
            if Greedoid::from_sets(alphabet.clone(), sets.clone()).is_ok() {
                out.push(sets);
            }
        }
        out.sort_by(|a, b| family_cmp(a, b));
        out
    }

    fn families(greedoids: &[Greedoid]) -> Vec<Vec<Subset>> {
        greedoids.iter().map(|g| g.feasible().to_vec()).collect()
    }

    #[test]
    fn tiny_alphabets() {
        let all = enumerate_greedoids(0, &EnumerateOptions::default()).unwrap();
        assert_eq!(families(&all), vec![vec![Subset::EMPTY]]);

        let all = enumerate_greedoids(1, &EnumerateOptions::default()).unwrap();
        assert_eq!(all.len(), 2);

        let all = enumerate_greedoids(2, &EnumerateOptions::default()).unwrap();
        assert_eq!(all.len(), 7);
    }

    #[test]
    fn matches_brute_force_up_to_three_letters() {
        for n in 0..=3 {
            let layered = enumerate_greedoids(n, &EnumerateOptions::default()).unwrap();
            assert_eq!(families(&layered), brute_force(n), "n = {n}");
        }
    }

    #[test]
    fn matches_brute_force_at_four_letters() {
        let layered = enumerate_greedoids(4, &EnumerateOptions::default()).unwrap();
        assert_eq!(families(&layered), brute_force(4));
    }

    #[test]
    fn normal_only_keeps_loop_free_families() {
        let options = EnumerateOptions { normal_only: true, ..Default::default() };
        let normal = enumerate_greedoids(2, &options).unwrap();
        assert_eq!(normal.len(), 4);
        assert!(normal.iter().all(|g| g.is_normal()));
        // The three families named in the count-by-hand check all arrive.
        let path: Vec<Subset> = [0b00, 0b01, 0b11].map(Subset::from_mask).to_vec();
        let free: Vec<Subset> = [0b00, 0b01, 0b11, 0b10].map(Subset::from_mask).to_vec();
        let rank_one: Vec<Subset> = [0b00, 0b01, 0b10].map(Subset::from_mask).to_vec();
        for expected in [path, free, rank_one] {
            assert!(families(&normal).contains(&expected));
        }
    }

    #[test]
    fn dedup_keeps_one_family_per_relabeling_class() {
        let options = EnumerateOptions { dedup: true, ..Default::default() };
        let deduped = enumerate_greedoids(2, &options).unwrap();
        // {∅,{a},{a,b}} ≅ {∅,{b},{a,b}} and {∅,{a}} ≅ {∅,{b}}; 7 drop to 5.
        assert_eq!(deduped.len(), 5);
        let all = enumerate_greedoids(2, &EnumerateOptions::default()).unwrap();
        let perms = permutations(2);
        let mut canon: Vec<Vec<Subset>> = families(&all)
            .iter()
            .map(|sets| canonical_form(sets, &perms))
            .collect();
        canon.sort_by(|a, b| family_cmp(a, b));
        canon.dedup();
        assert_eq!(families(&deduped), canon);
    }

    #[test]
    fn budget_is_enforced() {
        let options = EnumerateOptions { budget: Some(3), ..Default::default() };
        assert_eq!(
            enumerate_greedoids(2, &options).unwrap_err(),
            BudgetExceeded { budget: 3 }
        );
        let options = EnumerateOptions { budget: Some(1000), ..Default::default() };
        assert!(enumerate_greedoids(2, &options).is_ok());
    }

    #[test]
    fn every_output_revalidates() {
        let all = enumerate_greedoids(3, &EnumerateOptions::default()).unwrap();
        for g in &all {
            assert!(Greedoid::from_sets(g.alphabet().clone(), g.feasible().to_vec()).is_ok());
        }
    }
}

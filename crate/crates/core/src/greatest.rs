//! The greatest candidate rank table (pointwise upper bound for aligned
//! representations), a bounded exhaustive search for integral
//! representations, and the audit of the five-way equivalence that is the
//! headline claim under test. The audit never assumes the equivalence: it
//! reports each item independently and flags every implication the data
//! violates, with unknowns kept explicit.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::alphabet::Subset;
use crate::analysis::{interval_violation, optimism_violation};
use crate::flats::{compute_flats, kernels_intersection_violation, FlatError};
use crate::polymatroid::{
    check_galois, is_aligned, representation_violation, Polymatroid, Rat, RankTable,
};
use crate::report::PropertyReport;
use crate::system::Greedoid;

/// Budgets for the audit's enumerative parts.
#[derive(Debug, Clone)]
pub struct AuditOptions {
    /// Cap on words visited when enumerating basic words.
    pub word_budget: usize,
    /// Cap on nodes visited by the integral-representation search.
    pub search_budget: u64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions { word_budget: crate::system::DEFAULT_WORD_BUDGET, search_budget: 1_000_000 }
    }
}

/// Candidate rank table sending X to the least flat rank among flats whose
/// kernel contains X. Total for a normal interval greedoid because the top
/// kernel contains every letter. The result is only a candidate: the
/// polymatroid axioms are checked downstream, not assumed.
pub fn greatest_representation(g: &Greedoid) -> Result<RankTable, FlatError> {
    let lattice = compute_flats(g)?;
    let pairs: Vec<(Subset, i64)> = lattice
        .flats()
        .iter()
        .map(|f| (f.kernel(), i64::from(f.rank())))
        .collect();
    Ok(RankTable::from_fn(g.alphabet().clone(), |x| {
        let best = pairs
            .iter()
            .filter(|(k, _)| x.is_subset_of(*k))
            .map(|&(_, r)| r)
            .min()
            .expect("the top kernel contains every letter of a normal greedoid");
        Rat::from_integer(best)
    }))
}

/// First set (dictionary order) where `poly` exceeds the greatest candidate
/// table; aligned representations never do.
pub fn dominance_violation(poly: &Polymatroid, g: &Greedoid) -> Result<Option<Subset>, FlatError> {
    let table = greatest_representation(g)?;
    Ok(g.alphabet()
        .subsets_lex()
        .into_iter()
        .find(|&x| poly.rank(x) > table.value(x)))
}

/// Result of the bounded exhaustive search over integral rank tables with
/// values capped by the ground rank.
#[derive(Debug, Clone)]
pub struct IntegralSearch {
    /// First representation found, in ascending table order.
    pub first: Option<RankTable>,
    /// First representation that is also aligned.
    pub first_aligned: Option<RankTable>,
    /// Whether the whole space was explored.
    pub exhausted: bool,
    /// Nodes visited.
    pub explored: u64,
    /// True when the alphabet exceeds the search cap and nothing ran.
    pub capped: bool,
}

/// Alphabet cap for the integral search; the space is exponential in 2^n.
pub const SEARCH_LETTER_CAP: usize = 4;

/// Depth-first enumeration of all integral polymatroid tables whose
/// unit-increment language equals the feasible family. Values are assigned
/// in mask order (submasks first), so monotonicity lower bounds, local
/// diminishing returns, and the reachability constraint prune eagerly.
/// Feasible sets have forced value |A|; infeasible sets must not complete a
/// unit-increment chain. When `stop_at_first` is false the search keeps
/// going after a find, hunting for an aligned one.
pub fn search_integral_representations(
    g: &Greedoid,
    budget: u64,
    stop_at_first: bool,
) -> IntegralSearch {
    let n = g.alphabet().len();
    if n > SEARCH_LETTER_CAP {
        return IntegralSearch {
            first: None,
            first_aligned: None,
            exhausted: false,
            explored: 0,
            capped: true,
        };
    }
    let size = 1usize << n;
    let rmax = i64::from(g.ground_rank());
    let mut values = vec![0i64; size];
    let mut reach = vec![false; size];
    reach[0] = true;

    struct State<'a> {
        g: &'a Greedoid,
        rmax: i64,
        budget: u64,
        stop_at_first: bool,
        explored: u64,
        out_of_budget: bool,
        first: Option<Vec<i64>>,
        first_aligned: Option<Vec<i64>>,
    }

    fn admissible(values: &[i64], mask: u32, v: i64) -> bool {
        let s = Subset::from_mask(mask);
        // Monotone: at least every submask obtained by dropping a letter.
        for x in s.iter() {
            if v < values[s.without(x).mask() as usize] {
                return false;
            }
        }
        // Local diminishing returns across every pair of letters in the set;
        // chaining single steps extends this to all nested pairs.
        let letters: Vec<u8> = s.iter().collect();
        for (i, &x) in letters.iter().enumerate() {
            for &y in &letters[i + 1..] {
                let without_x = s.without(x).mask() as usize;
                let without_y = s.without(y).mask() as usize;
                let without_both = s.without(x).without(y).mask() as usize;
                if v + values[without_both] > values[without_x] + values[without_y] {
                    return false;
                }
            }
        }
        true
    }

    fn descend(
        state: &mut State,
        values: &mut Vec<i64>,
        reach: &mut Vec<bool>,
        mask: u32,
    ) -> bool {
        // Returns true when the search should stop entirely.
        if state.explored >= state.budget {
            state.out_of_budget = true;
            return true;
        }
        state.explored += 1;
        let size = values.len() as u32;
        if mask == size {
            let table = values.clone();
            if state.first.is_none() {
                state.first = Some(table.clone());
            }
            let ranks = RankTable::new(
                state.g.alphabet().clone(),
                table.iter().map(|&v| Rat::from_integer(v)).collect(),
            );
            let poly = ranks
                .validate()
                .expect("incremental pruning enforces the rank axioms");
            debug_assert!(representation_violation(&poly, state.g).is_none());
            if state.first_aligned.is_none() && is_aligned(&poly, state.g) {
                state.first_aligned = Some(table);
                return true;
            }
            return state.stop_at_first;
        }
        let s = Subset::from_mask(mask);
        let cardinality = i64::from(s.len());
        let feasible = state.g.is_feasible(s);
        let lower = s
            .iter()
            .map(|x| values[s.without(x).mask() as usize])
            .max()
            .unwrap_or(0);
        let grown_from_reachable = s.iter().any(|a| reach[s.without(a).mask() as usize]);
        for v in lower..=state.rmax {
            if feasible && v != cardinality {
                continue;
            }
            // A set completes a unit-increment chain exactly when its value
            // is its size and some one-smaller set already completed one;
            // that must coincide with feasibility.
            let reachable = v == cardinality && grown_from_reachable;
            if reachable != feasible {
                continue;
            }
            if !admissible(values, mask, v) {
                continue;
            }
            values[mask as usize] = v;
            reach[mask as usize] = reachable;
            if descend(state, values, reach, mask + 1) {
                return true;
            }
        }
        false
    }

    let mut state = State {
        g,
        rmax,
        budget,
        stop_at_first,
        explored: 0,
        out_of_budget: false,
        first: None,
        first_aligned: None,
    };
    let stopped = descend(&mut state, &mut values, &mut reach, 1);

    let as_table = |vals: Vec<i64>| {
        RankTable::new(
            g.alphabet().clone(),
            vals.into_iter().map(Rat::from_integer).collect(),
        )
    };
    IntegralSearch {
        first: state.first.map(as_table),
        first_aligned: state.first_aligned.map(as_table),
        exhausted: !stopped,
        explored: state.explored,
        capped: false,
    }
}

/// Outcome of one audited item: decided true/false or unknown, with a
/// human-readable witness or search summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemOutcome {
    pub status: Option<bool>,
    pub detail: String,
}

impl ItemOutcome {
    fn decided(status: bool, detail: impl Into<String>) -> ItemOutcome {
        ItemOutcome { status: Some(status), detail: detail.into() }
    }

    fn unknown(detail: impl Into<String>) -> ItemOutcome {
        ItemOutcome { status: None, detail: detail.into() }
    }
}

/// Status of one directed implication between two audited items.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImplicationStatus {
    Holds,
    Unknown,
    Violated,
}

/// The five audited conditions with every pairwise implication. The
/// equivalence itself is a hypothesis under audit, never asserted.
#[derive(Debug, Clone)]
pub struct EquivalenceMatrix {
    pub items: [ItemOutcome; 5],
    pub implications: [[ImplicationStatus; 5]; 5],
}

/// Short names for the five audited conditions, in order.
pub const ITEM_LABELS: [&str; 5] = [
    "aligned representation exists",
    "interval, optimistic, kernels intersection-closed",
    "greatest candidate is a representation",
    "flat lattice matches a representation's closed sets",
    "integral representation exists",
];

impl EquivalenceMatrix {
    fn from_items(items: [ItemOutcome; 5]) -> EquivalenceMatrix {
        let mut implications = [[ImplicationStatus::Holds; 5]; 5];
        for (i, from) in items.iter().enumerate() {
            for (j, to) in items.iter().enumerate() {
                if i == j {
                    continue;
                }
                implications[i][j] = match (from.status, to.status) {
                    (Some(false), _) | (_, Some(true)) => ImplicationStatus::Holds,
                    (Some(true), Some(false)) => ImplicationStatus::Violated,
                    _ => ImplicationStatus::Unknown,
                };
            }
        }
        EquivalenceMatrix { items, implications }
    }

    /// Pairs (i, j), zero-based, where item i holds but item j fails.
    pub fn violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..5 {
            for j in 0..5 {
                if self.implications[i][j] == ImplicationStatus::Violated {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn undecided(&self) -> usize {
        self.items.iter().filter(|i| i.status.is_none()).count()
    }
}

impl fmt::Display for EquivalenceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "equivalence audit")?;
        for (i, item) in self.items.iter().enumerate() {
            let status = match item.status {
                Some(true) => "true   ",
                Some(false) => "false  ",
                None => "unknown",
            };
            writeln!(f, "  [{}] {status} {} — {}", i + 1, ITEM_LABELS[i], item.detail)?;
        }
        let violations = self.violations();
        if violations.is_empty() {
            let unknown = self
                .implications
                .iter()
                .flatten()
                .filter(|s| **s == ImplicationStatus::Unknown)
                .count();
            if unknown == 0 {
                writeln!(f, "  implications: all 20 hold")?;
            } else {
                writeln!(f, "  implications: none violated, {unknown} undecided")?;
            }
        } else {
            for (i, j) in violations {
                writeln!(f, "  implication VIOLATED: [{}] holds but [{}] fails", i + 1, j + 1)?;
            }
        }
        Ok(())
    }
}

/// Audit the five conditions on a normal greedoid. Item 2 is computed
/// directly; item 3 promotes the greatest candidate and tests it; item 5
/// runs the bounded integral search; item 4 compares the flat lattice with
/// the closed sets of every representation at hand; item 1 checks alignment
/// on the same pool. Unknowns stay unknown — a bounded search that finds
/// nothing only decides the integral item, never the fractional ones.
pub fn audit_corollary(g: &Greedoid, options: &AuditOptions) -> EquivalenceMatrix {
    assert!(
        g.is_normal(),
        "the audit is defined for normal greedoids; remove loops first"
    );
    let alphabet = g.alphabet();
    let interval = interval_violation(g);
    let is_interval = interval.is_none();

    // Item 2: interval ∧ optimistic ∧ kernels intersection-closed.
    let item2 = if let Some(v) = &interval {
        ItemOutcome::decided(
            false,
            format!(
                "interval property fails at ({}, {}, {}, {})",
                alphabet.set_string(v.lower),
                alphabet.set_string(v.middle),
                alphabet.set_string(v.upper),
                alphabet.name(v.letter)
            ),
        )
    } else {
        match optimism_violation(g, options.word_budget) {
            Err(_) => ItemOutcome::unknown(format!(
                "word enumeration exceeded the budget of {}",
                options.word_budget
            )),
            Ok(Some(v)) => ItemOutcome::decided(
                false,
                format!(
                    "optimism fails for letter {} on word {}",
                    alphabet.name(v.letter),
                    alphabet.word_string(&v.word)
                ),
            ),
            Ok(None) => {
                let lattice =
                    compute_flats(g).expect("normal interval greedoids have flat lattices");
                match kernels_intersection_violation(&lattice) {
                    Some((first, second)) => ItemOutcome::decided(
                        false,
                        format!(
                            "kernels {} and {} intersect outside the kernel family",
                            alphabet.set_string(first),
                            alphabet.set_string(second)
                        ),
                    ),
                    None => ItemOutcome::decided(
                        true,
                        "interval, optimistic, and kernels closed under intersection",
                    ),
                }
            }
        }
    };

    // Item 3: the greatest candidate validates and represents.
    let mut greatest: Option<Polymatroid> = None;
    let item3 = match greatest_representation(g) {
        Err(e) => ItemOutcome::decided(false, format!("no greatest candidate: {e}")),
        Ok(table) => match table.validate() {
            Err(v) => ItemOutcome::decided(
                false,
                format!("greatest candidate is not a polymatroid: {}", v.describe(alphabet)),
            ),
            Ok(poly) => {
                let outcome = match representation_violation(&poly, g) {
                    Some(w) => ItemOutcome::decided(
                        false,
                        format!(
                            "greatest candidate misrepresents {}",
                            alphabet.set_string(w)
                        ),
                    ),
                    None => {
                        ItemOutcome::decided(true, "greatest candidate validates and represents")
                    }
                };
                greatest = Some(poly);
                outcome
            }
        },
    };
    let greatest_represents = item3.status == Some(true);

    // Item 1 seed: is the greatest candidate aligned?
    let greatest_aligned = greatest
        .as_ref()
        .filter(|_| greatest_represents)
        .is_some_and(|p| is_aligned(p, g));

    // Item 5: bounded integral search (also feeds items 1 and 4).
    let search = search_integral_representations(g, options.search_budget, greatest_aligned);
    let item5 = if search.capped {
        ItemOutcome::unknown(format!(
            "alphabet exceeds the {SEARCH_LETTER_CAP}-letter search cap"
        ))
    } else if search.first.is_some() {
        ItemOutcome::decided(
            true,
            format!("found after {} nodes", search.explored),
        )
    } else if search.exhausted {
        ItemOutcome::decided(
            false,
            format!("search exhausted after {} nodes", search.explored),
        )
    } else {
        ItemOutcome::unknown(format!(
            "search budget of {} nodes exceeded",
            options.search_budget
        ))
    };

    // Pool of representations in hand.
    let mut pool: Vec<Polymatroid> = Vec::new();
    if greatest_represents {
        pool.extend(greatest.clone());
    }
    for table in [&search.first_aligned, &search.first] {
        if let Some(t) = table {
            let poly = t
                .clone()
                .validate()
                .expect("search results satisfy the rank axioms");
            if !pool.contains(&poly) {
                pool.push(poly);
            }
        }
    }

    // Item 1: an aligned representation exists.
    let item1 = if greatest_aligned {
        ItemOutcome::decided(true, "greatest candidate is aligned")
    } else if pool.iter().any(|p| is_aligned(p, g)) {
        ItemOutcome::decided(true, "integral search found an aligned representation")
    } else if !is_interval {
        ItemOutcome::decided(false, "no representation exists without the interval property")
    } else {
        ItemOutcome::unknown(format!(
            "no aligned representation among {} candidate(s); fractional space unexplored",
            pool.len()
        ))
    };

    // Item 4: the flat lattice is order-isomorphic to the closed sets of
    // some representation.
    let item4 = if !is_interval {
        ItemOutcome::decided(false, "no flat lattice without the interval property")
    } else {
        let mut witnessed = false;
        for poly in &pool {
            let pair = check_galois(poly, g).expect("flats exist for interval normal greedoids");
            if pair.isomorphism.passed == Some(true) {
                witnessed = true;
                break;
            }
        }
        if witnessed {
            ItemOutcome::decided(true, "a representation's closed sets match the flat lattice")
        } else if pool.is_empty() {
            ItemOutcome::unknown("no representation in hand to compare against")
        } else {
            ItemOutcome::unknown(format!(
                "none of {} candidate(s) is isomorphic; other representations unexplored",
                pool.len()
            ))
        }
    };

    EquivalenceMatrix::from_items([item1, item2, item3, item4, item5])
}

/// A hypothesis of the kernel-to-alignment lemma that does not hold, making
/// its conclusions inapplicable.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("hypothesis not met: {hypothesis} — {detail}")]
pub struct HypothesesUnmet {
    pub hypothesis: &'static str,
    pub detail: String,
}

/// Check the lemma that intersection-closed kernels on a normal, interval,
/// optimistic greedoid make the greatest candidate an aligned representation
/// whose closed sets mirror the flats. Hypotheses are verified first; the
/// conclusions are then checked one by one, and any failure is a first-class
/// finding about the claim itself.
pub fn check_lemma6(g: &Greedoid) -> Result<PropertyReport, HypothesesUnmet> {
    let alphabet = g.alphabet();
    if !g.is_normal() {
        return Err(HypothesesUnmet {
            hypothesis: "normal",
            detail: format!("loops {}", alphabet.set_string(g.loops())),
        });
    }
    if let Some(v) = interval_violation(g) {
        return Err(HypothesesUnmet {
            hypothesis: "interval",
            detail: format!(
                "fails at ({}, {}, {}, {})",
                alphabet.set_string(v.lower),
                alphabet.set_string(v.middle),
                alphabet.set_string(v.upper),
                alphabet.name(v.letter)
            ),
        });
    }
    match optimism_violation(g, crate::system::DEFAULT_WORD_BUDGET) {
        Err(_) => {
            return Err(HypothesesUnmet {
                hypothesis: "optimistic",
                detail: "word enumeration exceeded the budget; hypothesis undecided".to_string(),
            });
        }
        Ok(Some(v)) => {
            return Err(HypothesesUnmet {
                hypothesis: "optimistic",
                detail: format!(
                    "letter {} on word {}",
                    alphabet.name(v.letter),
                    alphabet.word_string(&v.word)
                ),
            });
        }
        Ok(None) => {}
    }
    let lattice = compute_flats(g).expect("normal interval greedoids have flat lattices");
    if let Some((first, second)) = kernels_intersection_violation(&lattice) {
        return Err(HypothesesUnmet {
            hypothesis: "kernels intersection-closed",
            detail: format!(
                "kernels {} and {}",
                alphabet.set_string(first),
                alphabet.set_string(second)
            ),
        });
    }

    let mut report = PropertyReport::new();
    let table = greatest_representation(g).expect("hypotheses grant a flat lattice");
    let poly = match table.validate() {
        Err(v) => {
            report.fail("rank-table-valid", v.describe(alphabet));
            return Ok(report);
        }
        Ok(poly) => {
            report.pass("rank-table-valid");
            poly
        }
    };
    match representation_violation(&poly, g) {
        Some(w) => report.fail(
            "representation",
            format!("families differ at {}", alphabet.set_string(w)),
        ),
        None => report.pass("representation"),
    }
    let pair = check_galois(&poly, g).expect("flats exist under the hypotheses");
    for check in [&pair.adjunction, &pair.insertion, &pair.cover_preserving] {
        report.checks.push(check.clone());
    }

    // The kernels must be exactly the closed sets of the candidate.
    let kernels = lattice.kernels();
    let mut sorted_kernels = kernels.clone();
    crate::alphabet::sort_lex(&mut sorted_kernels);
    if sorted_kernels == pair.closed_sets {
        report.pass("kernels-are-the-closed-sets");
    } else {
        let mut all = sorted_kernels.clone();
        all.extend_from_slice(&pair.closed_sets);
        crate::alphabet::sort_lex(&mut all);
        all.dedup();
        let witness = all
            .into_iter()
            .find(|s| sorted_kernels.contains(s) != pair.closed_sets.contains(s))
            .unwrap_or(Subset::EMPTY);
        report.fail(
            "kernels-are-the-closed-sets",
            format!("families differ at {}", alphabet.set_string(witness)),
        );
    }
    Ok(report)
}

/// First feasible set whose greatest-candidate value differs from its size;
/// `None` on every normal interval greedoid encountered so far.
pub fn feasible_value_violation(g: &Greedoid) -> Result<Option<Subset>, FlatError> {
    let table = greatest_representation(g)?;
    Ok(g.feasible()
        .iter()
        .copied()
        .find(|&a| table.value(a) != Rat::from_integer(i64::from(a.len()))))
}

/// First letter set witnessing that the kernels and the closed sets of the
/// greatest candidate differ, when the candidate validates.
pub fn kernel_closure_violation(g: &Greedoid) -> Result<Option<Subset>, FlatError> {
    let lattice = compute_flats(g)?;
    let table = greatest_representation(g)?;
    let Ok(poly) = table.validate() else {
        return Ok(None);
    };
    let mut kernels = lattice.kernels();
    crate::alphabet::sort_lex(&mut kernels);
    let closed = poly.closed_sets();
    let mut all: Vec<Subset> = kernels.clone();
    all.extend_from_slice(closed.sets());
    crate::alphabet::sort_lex(&mut all);
    all.dedup();
    Ok(all
        .into_iter()
        .find(|s| kernels.contains(s) != closed.sets().contains(s)))
}

/// Zero polymatroid on the greedoid's alphabet; aligned representation of
/// the one-word greedoid and the base case of several audits.
pub fn zero_table(g: &Greedoid) -> RankTable {
    RankTable::from_fn(g.alphabet().clone(), |_| Rat::zero())
}

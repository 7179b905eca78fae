//! Constructors for the greedoid families the analysis targets: rooted-graph
//! branchings with their vertex-cover rank, poset antimatroids with the
//! lower-set rank, ordered-geometry checks with the lower rank, matroids from
//! subcardinal rank tables, antimatroid recognition, and the trimming of an
//! antimatroid by a matroid.

use thiserror::Error;

use crate::alphabet::{sort_lex, Alphabet, Subset, Word};
use crate::polymatroid::{is_representation, Polymatroid, Rat, RankTable};
use crate::report::PropertyReport;
use crate::system::{Greedoid, GreedoidViolation, LanguageError};

/// Why a construction input was rejected.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid graph: {detail}")]
    GraphInvalid { detail: String },
    #[error("invalid poset: {detail}")]
    PosetInvalid { detail: String },
    #[error("a singleton has rank above one")]
    NotSubcardinal { letter: u8 },
    #[error("first input is not a matroid: a feasible set has an infeasible subset")]
    NotAMatroid { member: Subset, letter: u8 },
    #[error("second input is not an antimatroid: {detail}")]
    NotAnAntimatroid { detail: String },
    #[error("the constructed family is not a greedoid: {0}")]
    ValidationFailed(GreedoidViolation),
}

/// Undirected multigraph with a distinguished root; every edge is a letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedGraph {
    alphabet: Alphabet,
    vertices: Vec<String>,
    root: usize,
    /// Per letter, the indices of the two endpoints (equal for a self-loop).
    endpoints: Vec<(usize, usize)>,
}

impl RootedGraph {
    /// Edges are (letter, endpoint, endpoint) triples; vertices are collected
    /// from the root and the endpoints in order of first appearance.
    pub fn new(root: &str, edges: &[(&str, &str, &str)]) -> Result<RootedGraph, ConstructionError> {
        if root.is_empty() || root.contains(|c: char| c.is_whitespace() || c == '-') {
            return Err(ConstructionError::GraphInvalid {
                detail: format!("bad root name {root:?}"),
            });
        }
        let mut vertices: Vec<String> = vec![root.to_string()];
        let intern = |name: &str, vertices: &mut Vec<String>| -> Result<usize, ConstructionError> {
            if name.is_empty() || name.contains(|c: char| c.is_whitespace() || c == '-') {
                return Err(ConstructionError::GraphInvalid {
                    detail: format!("bad vertex name {name:?}"),
                });
            }
            Ok(match vertices.iter().position(|v| v == name) {
                Some(i) => i,
                None => {
                    vertices.push(name.to_string());
                    vertices.len() - 1
                }
            })
        };
        let mut names = Vec::new();
        let mut endpoints = Vec::new();
        for (letter, u, v) in edges {
            names.push(letter.to_string());
            let ui = intern(u, &mut vertices)?;
            let vi = intern(v, &mut vertices)?;
            endpoints.push((ui, vi));
        }
        let alphabet = Alphabet::new(names).map_err(|e| ConstructionError::GraphInvalid {
            detail: e.to_string(),
        })?;
        if vertices.len() > 64 {
            return Err(ConstructionError::GraphInvalid {
                detail: format!("{} vertices exceed the cap of 64", vertices.len()),
            });
        }
        Ok(RootedGraph { alphabet, vertices, root: 0, endpoints })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn root(&self) -> &str {
        &self.vertices[self.root]
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn endpoints(&self, letter: u8) -> (&str, &str) {
        let (u, v) = self.endpoints[letter as usize];
        (&self.vertices[u], &self.vertices[v])
    }

    /// Bit mask of vertices touched by the edge set.
    fn covered(&self, x: Subset) -> u64 {
        let mut mask = 0u64;
        for e in x.iter() {
            let (u, v) = self.endpoints[e as usize];
            mask |= 1 << u;
            mask |= 1 << v;
        }
        mask
    }

    /// Whether the edge set forms a tree through the root (the empty set
    /// counts). Connectivity is a walk from the root along the chosen edges;
    /// acyclicity is the vertex count exceeding the edge count by one.
    pub fn is_root_tree(&self, x: Subset) -> bool {
        if x.is_empty() {
            return true;
        }
        let covered = self.covered(x);
        if covered & (1 << self.root) == 0 {
            return false;
        }
        let mut reached = 1u64 << self.root;
        loop {
            let mut grew = false;
            for e in x.iter() {
                let (u, v) = self.endpoints[e as usize];
                let hit = reached & ((1 << u) | (1 << v)) != 0;
                let all = (1u64 << u) | (1u64 << v);
                if hit && reached & all != all {
                    reached |= all;
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        reached & covered == covered && covered.count_ones() == x.len() + 1
    }
}

/// Feasible sets are the edge sets forming a tree through the root.
pub fn ubg(graph: &RootedGraph) -> Greedoid {
    let sets: Vec<Subset> = graph
        .alphabet()
        .masks()
        .filter(|&x| graph.is_root_tree(x))
        .collect();
    Greedoid::from_sets(graph.alphabet().clone(), sets)
        .expect("root trees always satisfy the greedoid axioms")
}

/// Rank of an edge set = number of non-root vertices it touches. Always a
/// polymatroid (coverage functions are monotone and submodular) and a
/// representation of the branching greedoid.
pub fn cover_rank(graph: &RootedGraph) -> Polymatroid {
    let root_bit = 1u64 << graph.root;
    RankTable::from_fn(graph.alphabet().clone(), |x| {
        Rat::from_integer(i64::from((graph.covered(x) & !root_bit).count_ones()))
    })
    .validate()
    .expect("coverage counts satisfy the rank axioms")
}

/// Strict partial order on the letters of an alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    alphabet: Alphabet,
    below: Vec<Subset>,
    above: Vec<Subset>,
}

impl Poset {
    /// Relations are (x, y) pairs meaning x comes strictly before y; the
    /// transitive closure is taken, and any cycle is rejected.
    pub fn new(alphabet: Alphabet, relations: &[(u8, u8)]) -> Result<Poset, ConstructionError> {
        let n = alphabet.len();
        let mut below = vec![Subset::EMPTY; n];
        for &(x, y) in relations {
            assert!((x as usize) < n && (y as usize) < n, "relation letter out of range");
            below[y as usize] = below[y as usize].with(x);
        }
        for k in alphabet.letters() {
            for x in 0..n {
                if below[x].contains(k) {
                    below[x] = below[x].union(below[k as usize]);
                }
            }
        }
        for x in alphabet.letters() {
            if below[x as usize].contains(x) {
                return Err(ConstructionError::PosetInvalid {
                    detail: format!("cycle through {}", alphabet.name(x)),
                });
            }
        }
        let mut above = vec![Subset::EMPTY; n];
        for y in alphabet.letters() {
            for x in below[y as usize].iter() {
                above[x as usize] = above[x as usize].with(y);
            }
        }
        Ok(Poset { alphabet, below, above })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Whether x comes strictly before y.
    pub fn less(&self, x: u8, y: u8) -> bool {
        self.below[y as usize].contains(x)
    }

    pub fn below(&self, x: u8) -> Subset {
        self.below[x as usize]
    }

    pub fn above(&self, x: u8) -> Subset {
        self.above[x as usize]
    }

    /// All strict relation pairs (x, y) with x before y, in letter order.
    pub fn relation_pairs(&self) -> Vec<(u8, u8)> {
        let mut out = Vec::new();
        for x in self.alphabet.letters() {
            for y in self.above[x as usize].iter() {
                out.push((x, y));
            }
        }
        out
    }

    /// Elements of x together with everything before them.
    pub fn lower_closure(&self, x: Subset) -> Subset {
        let mut out = x;
        for e in x.iter() {
            out = out.union(self.below[e as usize]);
        }
        out
    }

    pub fn is_lower_set(&self, x: Subset) -> bool {
        self.lower_closure(x) == x
    }

    /// Elements of x with nothing of x before them.
    pub fn minimal_of(&self, x: Subset) -> Subset {
        x.iter()
            .filter(|&e| self.below[e as usize].inter(x).is_empty())
            .collect()
    }

    /// Elements of x with nothing of x after them.
    pub fn maximal_of(&self, x: Subset) -> Subset {
        x.iter()
            .filter(|&e| self.above[e as usize].inter(x).is_empty())
            .collect()
    }
}

/// Feasible sets are the lower sets of the order; the words are exactly the
/// prefixes of its linear extensions.
pub fn poset_antimatroid(p: &Poset) -> Greedoid {
    let sets: Vec<Subset> = p
        .alphabet()
        .masks()
        .filter(|&x| p.is_lower_set(x))
        .collect();
    Greedoid::from_sets(p.alphabet().clone(), sets)
        .expect("lower sets always satisfy the greedoid axioms")
}

/// Rank = size of the generated lower set; grades the lower-set lattice, so
/// always a polymatroid, and a representation of the poset antimatroid.
pub fn lower_set_rank(p: &Poset) -> Polymatroid {
    RankTable::from_fn(p.alphabet().clone(), |x| {
        Rat::from_integer(i64::from(p.lower_closure(x).len()))
    })
    .validate()
    .expect("lower-set sizes satisfy the rank axioms")
}

/// Candidate rank table sending X to the greedoid rank of its generated
/// lower set. Not always a polymatroid; promoted downstream.
pub fn lower_rank(g: &Greedoid, p: &Poset) -> RankTable {
    assert_eq!(g.alphabet(), p.alphabet(), "lower rank needs a shared alphabet");
    RankTable::from_fn(g.alphabet().clone(), |x| {
        Rat::from_integer(i64::from(g.rank(p.lower_closure(x))))
    })
}

/// Check the two ordered-geometry conditions of a greedoid against a poset
/// and test whether the induced lower rank represents it:
/// 1. order-compatible — within every feasible word, letters appear
///    consistently with the order;
/// 2. basis-feasible — on every lower set X, the greedoid rank reaches the
///    best overlap of X with a feasible set;
/// then `lower-rank-valid` promotes the lower rank and `maximal` tests
/// representation.
pub fn ordered_geometry_check(
    g: &Greedoid,
    p: &Poset,
    budget: usize,
) -> Result<PropertyReport, LanguageError> {
    assert_eq!(g.alphabet(), p.alphabet(), "the check needs a shared alphabet");
    let alphabet = g.alphabet();
    let mut report = PropertyReport::new();

    let words = g.language(budget)?;
    let mut order_witness: Option<&Word> = None;
    'words: for w in &words {
        let letters = w.letters();
        for (i, &later) in letters.iter().enumerate() {
            for &earlier in &letters[i + 1..] {
                if p.less(earlier, later) {
                    order_witness = Some(w);
                    break 'words;
                }
            }
        }
    }
    match order_witness {
        None => report.pass("order-compatible"),
        Some(w) => report.fail(
            "order-compatible",
            format!("word {} lists letters against the order", alphabet.word_string(w)),
        ),
    }

    let mut basis_witness = None;
    'sets: for x in alphabet.subsets_lex() {
        if !p.is_lower_set(x) {
            continue;
        }
        let best_overlap = g
            .feasible()
            .iter()
            .map(|&a| a.inter(x).len())
            .max()
            .unwrap_or(0);
        if g.rank(x) != best_overlap {
            basis_witness = Some((x, best_overlap));
            break 'sets;
        }
    }
    match basis_witness {
        None => report.pass("basis-feasible"),
        Some((x, overlap)) => report.fail(
            "basis-feasible",
            format!(
                "lower set {} has rank {} but overlap {} with a feasible set",
                alphabet.set_string(x),
                g.rank(x),
                overlap
            ),
        ),
    }

    match lower_rank(g, p).validate() {
        Err(v) => {
            report.fail("lower-rank-valid", v.describe(alphabet));
            report.fail("maximal", "no valid lower rank to test".to_string());
        }
        Ok(poly) => {
            report.pass("lower-rank-valid");
            if is_representation(&poly, g) {
                report.pass("maximal");
            } else {
                report.fail("maximal", "lower rank does not represent the greedoid".to_string());
            }
        }
    }
    Ok(report)
}

/// Independent sets (rank equals size) of a subcardinal rank function. The
/// family can fail the exchange axiom for fractional tables, so validation
/// errors are surfaced.
pub fn matroid_from_rank(poly: &Polymatroid) -> Result<Greedoid, ConstructionError> {
    if let Some(x) = poly
        .alphabet()
        .letters()
        .find(|&x| poly.rank(Subset::singleton(x)) > Rat::from_integer(1))
    {
        return Err(ConstructionError::NotSubcardinal { letter: x });
    }
    let sets: Vec<Subset> = poly
        .alphabet()
        .masks()
        .filter(|&a| poly.rank(a) == Rat::from_integer(i64::from(a.len())))
        .collect();
    Greedoid::from_sets(poly.alphabet().clone(), sets).map_err(ConstructionError::ValidationFailed)
}

/// Rank min(|X|, k) over an n-letter alphabet.
pub fn uniform_matroid(n: usize, k: u32) -> Polymatroid {
    RankTable::from_fn(Alphabet::of_size(n), |x| {
        Rat::from_integer(i64::from(x.len().min(k)))
    })
    .validate()
    .expect("truncated counting satisfies the rank axioms")
}

/// Why a greedoid is not an antimatroid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AntimatroidViolation {
    NotNormal { loops: Subset },
    /// Two feasible sets whose union is infeasible.
    UnionEscapes { first: Subset, second: Subset },
}

impl AntimatroidViolation {
    pub fn describe(&self, alphabet: &Alphabet) -> String {
        match self {
            AntimatroidViolation::NotNormal { loops } => {
                format!("loops {}", alphabet.set_string(*loops))
            }
            AntimatroidViolation::UnionEscapes { first, second } => format!(
                "union of {} and {} is infeasible",
                alphabet.set_string(*first),
                alphabet.set_string(*second)
            ),
        }
    }
}

/// Antimatroid test in set form: normal and union-closed. Returns the least
/// witness in (first, second) dictionary order.
pub fn antimatroid_violation(g: &Greedoid) -> Option<AntimatroidViolation> {
    if !g.is_normal() {
        return Some(AntimatroidViolation::NotNormal { loops: g.loops() });
    }
    for &a in g.feasible() {
        for &b in g.feasible() {
            if !g.is_feasible(a.union(b)) {
                return Some(AntimatroidViolation::UnionEscapes { first: a, second: b });
            }
        }
    }
    None
}

pub fn is_antimatroid(g: &Greedoid) -> bool {
    antimatroid_violation(g).is_none()
}

/// Independent word-form oracle: for all feasible supports A, B with
/// A ⊄ B, some letter of A must extend B feasibly. Returns the least
/// violating pair; equivalent to union-closure for normal greedoids.
pub fn antimatroid_violation_by_words(g: &Greedoid) -> Option<(Subset, Subset)> {
    for &a in g.feasible() {
        for &b in g.feasible() {
            if a.is_subset_of(b) {
                continue;
            }
            let extends = a
                .iter()
                .any(|x| !b.contains(x) && g.is_feasible(b.with(x)));
            if !extends {
                return Some((a, b));
            }
        }
    }
    None
}

/// Greedoid generated by a list of simple words: the feasible sets are the
/// supports of all their prefixes.
pub fn greedoid_from_words(
    alphabet: Alphabet,
    words: &[Word],
) -> Result<Greedoid, GreedoidViolation> {
    let mut sets = vec![Subset::EMPTY];
    for w in words {
        assert!(w.is_simple(), "generator words must not repeat letters");
        for k in 1..=w.len() {
            sets.push(w.prefix(k).support());
        }
    }
    sort_lex(&mut sets);
    sets.dedup();
    Greedoid::from_sets(alphabet, sets)
}

/// Words built by repeatedly deleting a minimal or a maximal element of the
/// remaining order; always an antimatroid.
pub fn double_shelling(p: &Poset) -> Greedoid {
    let n = p.alphabet().len();
    let full = Subset::full(n);
    let mut supports: Vec<Subset> = Vec::new();
    let mut stack = vec![full];
    let mut seen = vec![false; 1 << n];
    seen[full.mask() as usize] = true;
    while let Some(remaining) = stack.pop() {
        supports.push(full.diff(remaining));
        for x in p.minimal_of(remaining).union(p.maximal_of(remaining)).iter() {
            let next = remaining.without(x);
            if !seen[next.mask() as usize] {
                seen[next.mask() as usize] = true;
                stack.push(next);
            }
        }
    }
    sort_lex(&mut supports);
    Greedoid::from_sets(p.alphabet().clone(), supports)
        .expect("two-ended deletion orders always satisfy the greedoid axioms")
}

/// First feasible set that loses feasibility by dropping one letter; a
/// greedoid is a matroid exactly when there is none.
pub fn hereditary_violation(g: &Greedoid) -> Option<(Subset, u8)> {
    for &a in g.feasible() {
        for x in a.iter() {
            if !g.is_feasible(a.without(x)) {
                return Some((a, x));
            }
        }
    }
    None
}

/// Keep the letters of a word that raise the matroid rank of the running
/// prefix support, dropping the rest.
pub fn project_word(matroid: &Greedoid, word: &Word) -> Word {
    let mut out = Word::empty();
    let mut support = Subset::EMPTY;
    let mut rank = 0;
    for &x in word.letters() {
        support = support.with(x);
        let r = matroid.rank(support);
        if r > rank {
            out.push(x);
            rank = r;
        }
    }
    out
}

/// Cap on alphabet size for trimming, which walks the whole word set of the
/// antimatroid.
pub const TRIM_LETTER_CAP: usize = 6;

/// Project every word of the antimatroid through the matroid and collect the
/// supports of the results. The cited construction promises a greedoid (even
/// an interval one); since that promise is itself under audit, validation
/// failures are surfaced instead of assumed away.
pub fn trim(matroid: &Greedoid, anti: &Greedoid) -> Result<Greedoid, ConstructionError> {
    assert_eq!(matroid.alphabet(), anti.alphabet(), "trimming needs a shared alphabet");
    assert!(
        matroid.alphabet().len() <= TRIM_LETTER_CAP,
        "trimming walks every word; {} letters exceed the cap of {TRIM_LETTER_CAP}",
        matroid.alphabet().len()
    );
    if let Some((member, letter)) = hereditary_violation(matroid) {
        return Err(ConstructionError::NotAMatroid { member, letter });
    }
    if let Some(v) = antimatroid_violation(anti) {
        return Err(ConstructionError::NotAnAntimatroid {
            detail: v.describe(anti.alphabet()),
        });
    }
    let words = anti
        .language(crate::system::DEFAULT_WORD_BUDGET)
        .expect("the letter cap keeps word enumeration within budget");
    let mut sets: Vec<Subset> = words
        .iter()
        .map(|w| project_word(matroid, w).support())
        .collect();
    sort_lex(&mut sets);
    sets.dedup();
    Greedoid::from_sets(matroid.alphabet().clone(), sets)
        .map_err(ConstructionError::ValidationFailed)
}

//! Exact-rational polymatroid rank functions and everything layered on them:
//! the closed-set lattice, representation and alignment checks against a
//! greedoid, the adjoint-pair verifier between the two lattices, and the
//! downstream consequence checks for aligned representations.
//!
//! All comparisons are exact: the alignment criterion tests whether a
//! marginal value falls strictly between 0 and 1, which floating point
//! cannot decide reliably.

use std::collections::HashSet;

use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::alphabet::{sort_lex, Alphabet, Subset, Word};
use crate::analysis::{continuations, kernel};
use crate::flats::{compute_flats, FlatError};
use crate::report::{PropertyCheck, PropertyReport};
use crate::system::{Greedoid, LanguageError, SetSystem};

/// Exact rational scalar used for every rank value.
pub type Rat = Ratio<i64>;

/// Convenience constructor for rational constants.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Ratio::new(numer, denom)
}

/// Dense, unvalidated rank table over all subsets of an alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    alphabet: Alphabet,
    values: Vec<Rat>,
}

/// Hard cap on the alphabet size for dense tables (2^n entries).
pub const MAX_TABLE_LETTERS: usize = 16;

impl RankTable {
    /// `values` are indexed by subset bit mask.
    pub fn new(alphabet: Alphabet, values: Vec<Rat>) -> RankTable {
        assert!(
            alphabet.len() <= MAX_TABLE_LETTERS,
            "rank tables are dense; {} letters exceed the cap of {MAX_TABLE_LETTERS}",
            alphabet.len()
        );
        assert_eq!(
            values.len(),
            alphabet.subset_count(),
            "rank table must be total over all subsets"
        );
        RankTable { alphabet, values }
    }

    pub fn from_fn(alphabet: Alphabet, f: impl Fn(Subset) -> Rat) -> RankTable {
        let values = alphabet.masks().map(f).collect();
        RankTable::new(alphabet, values)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn value(&self, x: Subset) -> Rat {
        self.values[x.mask() as usize]
    }

    /// Check the three axioms and promote the table. The monotonicity scan
    /// is single-step (adding one letter); the diminishing-returns scan is
    /// exhaustive over pairs X ⊂ Y up to 10 letters and falls back to the
    /// equivalent single-step form (Y = X + one letter) above that, where
    /// the pair scan becomes prohibitive. Witnesses are the least in
    /// (lower, upper, letter) dictionary order for the scan performed.
    pub fn validate(self) -> Result<Polymatroid, PolyViolation> {
        let n = self.alphabet.len();
        if !self.value(Subset::EMPTY).is_zero() {
            return Err(PolyViolation::NotNormalized { value: self.value(Subset::EMPTY) });
        }
        for x in self.alphabet.subsets_lex() {
            for y in self.alphabet.letters() {
                if !x.contains(y) && self.value(x.with(y)) < self.value(x) {
                    return Err(PolyViolation::NotMonotone { set: x, letter: y });
                }
            }
        }
        if n <= 10 {
            for x in self.alphabet.subsets_lex() {
                let complement = x.complement(n);
                let mut supersets: Vec<Subset> = Vec::new();
                // Proper supersets of x, via submasks of the complement.
                let comp = complement.mask();
                let mut d = comp;
                while d != 0 {
                    supersets.push(Subset::from_mask(x.mask() | d));
                    d = (d - 1) & comp;
                }
                sort_lex(&mut supersets);
                for y in supersets {
                    for z in self.alphabet.letters() {
                        if y.contains(z) {
                            continue;
                        }
                        let at_x = self.value(x.with(z)) - self.value(x);
                        let at_y = self.value(y.with(z)) - self.value(y);
                        if at_x < at_y {
                            return Err(PolyViolation::NotSubmodular {
                                lower: x,
                                upper: y,
                                letter: z,
                            });
                        }
                    }
                }
            }
        } else {
            for x in self.alphabet.subsets_lex() {
                for step in self.alphabet.letters() {
                    if x.contains(step) {
                        continue;
                    }
                    let y = x.with(step);
                    for z in self.alphabet.letters() {
                        if y.contains(z) {
                            continue;
                        }
                        let at_x = self.value(x.with(z)) - self.value(x);
                        let at_y = self.value(y.with(z)) - self.value(y);
                        if at_x < at_y {
                            return Err(PolyViolation::NotSubmodular {
                                lower: x,
                                upper: y,
                                letter: z,
                            });
                        }
                    }
                }
            }
        }
        let integral = self.values.iter().all(|v| v.is_integer());
        Ok(Polymatroid { table: self, integral })
    }
}

/// Which polymatroid axiom failed, with the least witness.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolyViolation {
    #[error("the empty set has nonzero rank {value}")]
    NotNormalized { value: Rat },
    #[error("rank drops when a letter is added")]
    NotMonotone { set: Subset, letter: u8 },
    #[error("diminishing returns fail between two nested sets")]
    NotSubmodular { lower: Subset, upper: Subset, letter: u8 },
}

impl PolyViolation {
    pub fn describe(&self, alphabet: &Alphabet) -> String {
        match self {
            PolyViolation::NotNormalized { value } => {
                format!("rank of {{}} is {value}, expected 0")
            }
            PolyViolation::NotMonotone { set, letter } => format!(
                "rank drops when adding {} to {}",
                alphabet.name(*letter),
                alphabet.set_string(*set)
            ),
            PolyViolation::NotSubmodular { lower, upper, letter } => format!(
                "marginal of {} grows from {} to {}",
                alphabet.name(*letter),
                alphabet.set_string(*lower),
                alphabet.set_string(*upper)
            ),
        }
    }
}

/// Validated polymatroid rank function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polymatroid {
    table: RankTable,
    integral: bool,
}

impl Polymatroid {
    pub fn alphabet(&self) -> &Alphabet {
        &self.table.alphabet
    }

    pub fn table(&self) -> &RankTable {
        &self.table
    }

    pub fn rank(&self, x: Subset) -> Rat {
        self.table.value(x)
    }

    pub fn ground_rank(&self) -> Rat {
        self.rank(self.alphabet().full())
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    /// Every singleton has rank at most one (matroid rank test).
    pub fn is_subcardinal(&self) -> bool {
        self.alphabet()
            .letters()
            .all(|x| self.rank(Subset::singleton(x)) <= Rat::one())
    }

    /// Marginal return of `y` over `x`; zero when `y` already lies in `x`.
    pub fn marginal(&self, x: Subset, y: u8) -> Rat {
        if x.contains(y) {
            return Rat::zero();
        }
        self.rank(x.with(y)) - self.rank(x)
    }

    /// Letters whose addition leaves the rank unchanged; contains `x`.
    pub fn span(&self, x: Subset) -> Subset {
        let mut out = x;
        for y in self.alphabet().letters() {
            if self.marginal(x, y).is_zero() {
                out = out.with(y);
            }
        }
        out
    }

    /// Enumerate the closed sets (fixed points of the span) and build their
    /// lattice. Re-checks that the span is a closure operator and that the
    /// meet of two closed sets is their intersection; both are theorems for
    /// a validated table, so failures abort loudly.
    pub fn closed_sets(&self) -> ClosedSetLattice {
        let n = self.alphabet().len();
        for x in self.alphabet().masks() {
            let s = self.span(x);
            assert!(x.is_subset_of(s), "span must be extensive");
            assert_eq!(self.span(s), s, "span must be idempotent");
            assert_eq!(self.rank(s), self.rank(x), "span must preserve rank");
            for y in self.alphabet().letters() {
                assert!(
                    s.is_subset_of(self.span(x.with(y))),
                    "span must be monotone"
                );
            }
        }

        let mut sets: Vec<Subset> = self
            .alphabet()
            .masks()
            .filter(|&x| self.span(x) == x)
            .collect();
        sort_lex(&mut sets);

        let len = sets.len();
        let mut meets = vec![vec![0usize; len]; len];
        let mut joins = vec![vec![0usize; len]; len];
        for i in 0..len {
            for j in 0..len {
                let inter = sets[i].inter(sets[j]);
                let meet_idx = sets
                    .iter()
                    .position(|&s| s == inter)
                    .expect("intersection of closed sets must be closed");
                meets[i][j] = meet_idx;
                let join = self.span(sets[i].union(sets[j]));
                let join_idx = sets
                    .iter()
                    .position(|&s| s == join)
                    .expect("span of a union must be closed");
                // Least closed superset: every closed superset contains it.
                for &s in &sets {
                    if sets[i].is_subset_of(s) && sets[j].is_subset_of(s) {
                        assert!(
                            join.is_subset_of(s),
                            "join must be the least closed upper bound"
                        );
                    }
                }
                joins[i][j] = join_idx;
            }
        }

        let bottom = sets
            .iter()
            .position(|&s| s == self.span(Subset::EMPTY))
            .expect("span of the empty set is closed");
        let top = sets
            .iter()
            .position(|&s| s == Subset::full(n))
            .expect("the full set is closed");
        ClosedSetLattice { alphabet: self.alphabet().clone(), sets, meets, joins, bottom, top }
    }

    /// The family of supports of words whose every prefix raises the rank by
    /// exactly one, computed by a reachability scan: a set is reachable iff
    /// its rank equals its size and deleting some element leaves a reachable
    /// set. The empty set is always included.
    pub fn language_of_rank(&self) -> SetSystem {
        let n = self.alphabet().len();
        let mut reach = vec![false; 1 << n];
        reach[0] = true;
        for mask in 1u32..(1u32 << n) {
            let s = Subset::from_mask(mask);
            if self.rank(s) != Rat::from_integer(s.len() as i64) {
                continue;
            }
            reach[mask as usize] = s.iter().any(|a| reach[s.without(a).mask() as usize]);
        }
        let sets: Vec<Subset> = (0..1u32 << n)
            .filter(|&m| reach[m as usize])
            .map(Subset::from_mask)
            .collect();
        SetSystem::new(self.alphabet().clone(), sets)
    }

    /// Independent oracle for `language_of_rank`: filter every permutation
    /// of every subset by the unit-increment prefix condition. Exponential;
    /// intended for cross-checks on small alphabets.
    pub fn language_of_rank_by_words(&self) -> SetSystem {
        let n = self.alphabet().len();
        assert!(n <= 8, "permutation filter is factorial; use the scan above 8 letters");
        let mut found: HashSet<u32> = HashSet::new();
        found.insert(0);
        for mask in 1u32..(1u32 << n) {
            let s = Subset::from_mask(mask);
            let letters: Vec<u8> = s.iter().collect();
            let mut perm = letters.clone();
            if permutation_witnesses_unit_chain(self, &mut perm, 0) {
                found.insert(mask);
            }
        }
        let sets: Vec<Subset> = found.into_iter().map(Subset::from_mask).collect();
        SetSystem::new(self.alphabet().clone(), sets)
    }
}

fn permutation_witnesses_unit_chain(poly: &Polymatroid, perm: &mut [u8], fixed: usize) -> bool {
    if fixed == perm.len() {
        let mut support = Subset::EMPTY;
        for (i, &x) in perm.iter().enumerate() {
            support = support.with(x);
            if poly.rank(support) != Rat::from_integer((i + 1) as i64) {
                return false;
            }
        }
        return true;
    }
    for i in fixed..perm.len() {
        perm.swap(fixed, i);
        if permutation_witnesses_unit_chain(poly, perm, fixed + 1) {
            perm.swap(fixed, i);
            return true;
        }
        perm.swap(fixed, i);
    }
    false
}

/// Closed sets of a polymatroid span, ordered by containment. Meets are
/// intersections; joins are spans of unions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedSetLattice {
    alphabet: Alphabet,
    sets: Vec<Subset>,
    meets: Vec<Vec<usize>>,
    joins: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

impl ClosedSetLattice {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Closed sets in canonical dictionary order.
    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> Subset {
        self.sets[i]
    }

    pub fn index_of(&self, s: Subset) -> Option<usize> {
        self.sets.iter().position(|&t| t == s)
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.sets[i].is_subset_of(self.sets[j])
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meets[i][j]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.joins[i][j]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Whether `j` covers `i` (strictly above with nothing between).
    pub fn is_cover(&self, i: usize, j: usize) -> bool {
        i != j
            && self.le(i, j)
            && !(0..self.len()).any(|k| {
                k != i && k != j && self.le(i, k) && self.le(k, j)
            })
    }

    /// Indices of the closed sets covering `i`, ascending.
    pub fn upper_covers(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.is_cover(i, j)).collect()
    }
}

/// First set (dictionary order) on which the rank-derived family and the
/// greedoid's feasible family disagree.
pub fn representation_violation(poly: &Polymatroid, g: &Greedoid) -> Option<Subset> {
    assert_eq!(
        poly.alphabet(),
        g.alphabet(),
        "representation checks need a shared alphabet"
    );
    let derived = poly.language_of_rank();
    let mut all: Vec<Subset> = Vec::new();
    all.extend_from_slice(derived.sets());
    all.extend_from_slice(g.feasible());
    sort_lex(&mut all);
    all.into_iter()
        .find(|&s| derived.contains(s) != g.is_feasible(s))
}

pub fn is_representation(poly: &Polymatroid, g: &Greedoid) -> bool {
    representation_violation(poly, g).is_none()
}

/// Why a representation fails the alignment criterion, least witness first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlignmentViolation {
    /// The rank function does not even represent the greedoid.
    NotARepresentation { witness: Subset },
    /// A feasible set whose rank differs from its kernel's rank.
    RankMismatch { member: Subset, kernel: Subset, member_rank: Rat, kernel_rank: Rat },
    /// A letter outside a kernel with marginal strictly between 0 and 1.
    FractionalMarginal { member: Subset, letter: u8, marginal: Rat },
}

impl AlignmentViolation {
    pub fn describe(&self, alphabet: &Alphabet) -> String {
        match self {
            AlignmentViolation::NotARepresentation { witness } => format!(
                "not a representation; families differ at {}",
                alphabet.set_string(*witness)
            ),
            AlignmentViolation::RankMismatch { member, kernel, member_rank, kernel_rank } => {
                format!(
                    "rank {} of {} differs from rank {} of its kernel {}",
                    member_rank,
                    alphabet.set_string(*member),
                    kernel_rank,
                    alphabet.set_string(*kernel)
                )
            }
            AlignmentViolation::FractionalMarginal { member, letter, marginal } => format!(
                "letter {} outside the kernel of {} has marginal {} strictly between 0 and 1",
                alphabet.name(*letter),
                alphabet.set_string(*member),
                marginal
            ),
        }
    }
}

/// Marginal-gap alignment criterion: for every feasible set, the rank equals
/// the kernel's rank, and no letter outside the kernel has a marginal
/// strictly between 0 and 1. Checked per feasible set in dictionary order
/// (rank condition before the letter scan).
pub fn alignment_violation(poly: &Polymatroid, g: &Greedoid) -> Option<AlignmentViolation> {
    if let Some(witness) = representation_violation(poly, g) {
        return Some(AlignmentViolation::NotARepresentation { witness });
    }
    for &a in g.feasible() {
        let k = kernel(g, a);
        let member_rank = poly.rank(a);
        let kernel_rank = poly.rank(k);
        if member_rank != kernel_rank {
            return Some(AlignmentViolation::RankMismatch {
                member: a,
                kernel: k,
                member_rank,
                kernel_rank,
            });
        }
        for y in poly.alphabet().letters() {
            if k.contains(y) {
                continue;
            }
            let m = poly.marginal(a, y);
            if m > Rat::zero() && m < Rat::one() {
                return Some(AlignmentViolation::FractionalMarginal {
                    member: a,
                    letter: y,
                    marginal: m,
                });
            }
        }
    }
    None
}

pub fn is_aligned(poly: &Polymatroid, g: &Greedoid) -> bool {
    alignment_violation(poly, g).is_none()
}

/// Independent route to alignment through its original definition, using
/// the canonical candidate map F ↦ σ_ρ(kernel(F)) from flats to closed
/// sets: the map must be order preserving, agree in rank with every member,
/// contain every member, and preserve covers. Needs the flat lattice, hence
/// a normal interval greedoid.
pub fn alignment_by_definition(
    poly: &Polymatroid,
    g: &Greedoid,
) -> Result<PropertyReport, FlatError> {
    let lattice = compute_flats(g)?;
    let closed = poly.closed_sets();
    let mut report = PropertyReport::new();

    match representation_violation(poly, g) {
        None => report.pass("representation"),
        Some(w) => report.fail(
            "representation",
            format!("families differ at {}", poly.alphabet().set_string(w)),
        ),
    }

    let phi: Vec<Subset> = lattice
        .flats()
        .iter()
        .map(|f| poly.span(f.kernel()))
        .collect();

    let mut ok = true;
    'order: for i in 0..lattice.len() {
        for j in 0..lattice.len() {
            if lattice.le(i, j) && !phi[i].is_subset_of(phi[j]) {
                report.fail(
                    "order-preserving",
                    format!(
                        "flats with kernels {} ⊑ {} map to incomparable closed sets",
                        poly.alphabet().set_string(lattice.flat(i).kernel()),
                        poly.alphabet().set_string(lattice.flat(j).kernel())
                    ),
                );
                ok = false;
                break 'order;
            }
        }
    }
    if ok {
        report.pass("order-preserving");
    }

    let mut agreement = None;
    let mut inclusion = None;
    for &a in g.feasible() {
        let idx = lattice.flat_of(a).expect("feasible sets belong to flats");
        if agreement.is_none() && poly.rank(a) != poly.rank(phi[idx]) {
            agreement = Some(a);
        }
        if inclusion.is_none() && !a.is_subset_of(phi[idx]) {
            inclusion = Some(a);
        }
    }
    match agreement {
        None => report.pass("agreement"),
        Some(a) => report.fail(
            "agreement",
            format!(
                "rank of {} differs from its mapped closed set",
                poly.alphabet().set_string(a)
            ),
        ),
    }
    match inclusion {
        None => report.pass("inclusion"),
        Some(a) => report.fail(
            "inclusion",
            format!(
                "{} is not contained in its mapped closed set",
                poly.alphabet().set_string(a)
            ),
        ),
    }

    let mut cover_witness = None;
    'covers: for i in 0..lattice.len() {
        for &j in lattice.upper_covers(i) {
            let pi = closed.index_of(phi[i]).expect("mapped sets are closed");
            let pj = closed.index_of(phi[j]).expect("mapped sets are closed");
            if !closed.is_cover(pi, pj) {
                cover_witness = Some((i, j));
                break 'covers;
            }
        }
    }
    match cover_witness {
        None => report.pass("cover-preserving"),
        Some((i, j)) => report.fail(
            "cover-preserving",
            format!(
                "flat cover {} ⋖ {} does not map to a closed-set cover",
                poly.alphabet().set_string(lattice.flat(i).kernel()),
                poly.alphabet().set_string(lattice.flat(j).kernel())
            ),
        ),
    }

    Ok(report)
}

/// The adjoint pair between a greedoid's flat lattice and the closed sets of
/// a rank function, with its four certificates checked exhaustively.
#[derive(Debug, Clone)]
pub struct GaloisPair {
    /// Flat kernels, in flat-index order (the names of the flats).
    pub flat_kernels: Vec<Subset>,
    /// Closed sets in canonical dictionary order.
    pub closed_sets: Vec<Subset>,
    /// Flat index → closed-set index of the span of its kernel.
    pub phi_star: Vec<usize>,
    /// Closed-set index → flat index whose kernel equals the closed set's
    /// kernel; `None` when no flat has that kernel.
    pub phi_lower: Vec<Option<usize>>,
    pub adjunction: PropertyCheck,
    pub cover_preserving: PropertyCheck,
    pub insertion: PropertyCheck,
    pub isomorphism: PropertyCheck,
}

impl GaloisPair {
    /// Closed sets on which the lower map is undefined.
    pub fn kappa_undefined(&self) -> Vec<Subset> {
        self.phi_lower
            .iter()
            .zip(&self.closed_sets)
            .filter(|(f, _)| f.is_none())
            .map(|(_, &s)| s)
            .collect()
    }

    /// Whether the pair is an adjoint pair whose lower map preserves covers
    /// (the two certificates tied to alignment).
    pub fn connection_with_covers(&self) -> bool {
        self.adjunction.passed == Some(true) && self.cover_preserving.passed == Some(true)
    }

    pub fn report(&self) -> PropertyReport {
        PropertyReport {
            checks: vec![
                self.adjunction.clone(),
                self.cover_preserving.clone(),
                self.insertion.clone(),
                self.isomorphism.clone(),
            ],
        }
    }
}

/// Build the adjoint pair φ*(F) = span(kernel(F)), φ_*(S) = the flat whose
/// kernel is kernel(S), and check the four certificates. Needs the flat
/// lattice; the certificates are exhaustive over all flat/closed-set pairs.
pub fn check_galois(poly: &Polymatroid, g: &Greedoid) -> Result<GaloisPair, FlatError> {
    assert_eq!(poly.alphabet(), g.alphabet(), "adjoint checks need a shared alphabet");
    let lattice = compute_flats(g)?;
    let closed = poly.closed_sets();
    assert!(
        lattice.len() <= 64 && closed.len() <= 64,
        "certificate scans are exhaustive; lattices above 64 nodes are out of scope"
    );
    let alphabet = poly.alphabet();

    let phi_star: Vec<usize> = lattice
        .flats()
        .iter()
        .map(|f| {
            closed
                .index_of(poly.span(f.kernel()))
                .expect("span images are closed sets")
        })
        .collect();
    let phi_lower: Vec<Option<usize>> = closed
        .sets()
        .iter()
        .map(|&s| lattice.flat_with_kernel(kernel(g, s)))
        .collect();
    let undefined = phi_lower.iter().filter(|f| f.is_none()).count();

    // (i) adjunction: φ*(F) ⊆ S ⟺ F ⊑ φ_*(S), over all pairs where the
    // lower map is defined.
    let mut adjunction = PropertyCheck {
        name: "adjunction".to_string(),
        passed: Some(true),
        detail: if undefined > 0 {
            format!("{undefined} closed set(s) skipped: kernel matches no flat")
        } else {
            String::new()
        },
    };
    'adj: for i in 0..lattice.len() {
        for (sj, maybe_flat) in phi_lower.iter().enumerate() {
            let Some(fj) = maybe_flat else { continue };
            let left = closed.le(phi_star[i], sj);
            let right = lattice.le(i, *fj);
            if left != right {
                adjunction.passed = Some(false);
                adjunction.detail = format!(
                    "fails at flat kernel {} and closed set {}",
                    alphabet.set_string(lattice.flat(i).kernel()),
                    alphabet.set_string(closed.set(sj))
                );
                break 'adj;
            }
        }
    }

    // (ii) φ* preserves the covering relation of the flat lattice.
    let mut cover_preserving = PropertyCheck {
        name: "cover-preserving".to_string(),
        passed: Some(true),
        detail: String::new(),
    };
    'cov: for i in 0..lattice.len() {
        for &j in lattice.upper_covers(i) {
            if !closed.is_cover(phi_star[i], phi_star[j]) {
                cover_preserving.passed = Some(false);
                cover_preserving.detail = format!(
                    "flat cover {} ⋖ {} maps to a non-cover",
                    alphabet.set_string(lattice.flat(i).kernel()),
                    alphabet.set_string(lattice.flat(j).kernel())
                );
                break 'cov;
            }
        }
    }

    // (iii) insertion: the composite φ*∘φ_* is the identity on closed sets.
    let mut insertion = PropertyCheck {
        name: "insertion".to_string(),
        passed: Some(true),
        detail: String::new(),
    };
    for (sj, maybe_flat) in phi_lower.iter().enumerate() {
        let composite = maybe_flat.map(|f| closed.set(phi_star[f]));
        if composite != Some(closed.set(sj)) {
            insertion.passed = Some(false);
            insertion.detail = match composite {
                Some(image) => format!(
                    "composite sends {} to {}",
                    alphabet.set_string(closed.set(sj)),
                    alphabet.set_string(image)
                ),
                None => format!(
                    "lower map undefined on {}",
                    alphabet.set_string(closed.set(sj))
                ),
            };
            break;
        }
    }

    // (iv) the two lattices are order isomorphic: first try the canonical
    // map, then fall back to a backtracking search.
    let canonical = {
        let mut seen = vec![false; closed.len()];
        let injective = phi_star.iter().all(|&c| {
            let fresh = !seen[c];
            seen[c] = true;
            fresh
        });
        injective
            && lattice.len() == closed.len()
            && (0..lattice.len()).all(|i| {
                (0..lattice.len()).all(|j| lattice.le(i, j) == closed.le(phi_star[i], phi_star[j]))
            })
    };
    let iso_holds = canonical
        || order_isomorphic(
            lattice.len(),
            &|i, j| lattice.le(i, j),
            closed.len(),
            &|i, j| closed.le(i, j),
        );
    let isomorphism = PropertyCheck {
        name: "isomorphism".to_string(),
        passed: Some(iso_holds),
        detail: if canonical {
            "canonical map is an isomorphism".to_string()
        } else if iso_holds {
            "found by search; canonical map is not one".to_string()
        } else {
            format!("{} flats vs {} closed sets, no isomorphism", lattice.len(), closed.len())
        },
    };

    Ok(GaloisPair {
        flat_kernels: lattice.kernels(),
        closed_sets: closed.sets().to_vec(),
        phi_star,
        phi_lower,
        adjunction,
        cover_preserving,
        insertion,
        isomorphism,
    })
}

/// Backtracking order-isomorphism test between two finite posets given by
/// their order relations.
pub fn order_isomorphic(
    n: usize,
    le_a: &dyn Fn(usize, usize) -> bool,
    m: usize,
    le_b: &dyn Fn(usize, usize) -> bool,
) -> bool {
    if n != m {
        return false;
    }
    // Signature pruning: a node can only map to one with the same number of
    // elements below and above it.
    let sig = |le: &dyn Fn(usize, usize) -> bool, size: usize, v: usize| {
        let below = (0..size).filter(|&u| le(u, v)).count();
        let above = (0..size).filter(|&u| le(v, u)).count();
        (below, above)
    };
    let sig_a: Vec<_> = (0..n).map(|v| sig(le_a, n, v)).collect();
    let sig_b: Vec<_> = (0..m).map(|v| sig(le_b, m, v)).collect();
    {
        let mut sa = sig_a.clone();
        let mut sb = sig_b.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return false;
        }
    }

    fn extend(
        mapping: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        next: usize,
        n: usize,
        le_a: &dyn Fn(usize, usize) -> bool,
        le_b: &dyn Fn(usize, usize) -> bool,
        sig_a: &[(usize, usize)],
        sig_b: &[(usize, usize)],
    ) -> bool {
        if next == n {
            return true;
        }
        for candidate in 0..n {
            if used[candidate] || sig_a[next] != sig_b[candidate] {
                continue;
            }
            let consistent = (0..next).all(|prev| {
                let image = mapping[prev].unwrap();
                le_a(prev, next) == le_b(image, candidate)
                    && le_a(next, prev) == le_b(candidate, image)
            });
            if !consistent {
                continue;
            }
            mapping[next] = Some(candidate);
            used[candidate] = true;
            if extend(mapping, used, next + 1, n, le_a, le_b, sig_a, sig_b) {
                return true;
            }
            mapping[next] = None;
            used[candidate] = false;
        }
        false
    }

    let mut mapping = vec![None; n];
    let mut used = vec![false; n];
    extend(&mut mapping, &mut used, 0, n, le_a, le_b, &sig_a, &sig_b)
}

/// Exhaustively instantiate the four consequences of alignment: the
/// step-to-unit-marginal law, the contiguous continuation window on basic
/// words, the unit lower bound on marginals outside kernels, and the
/// suffix-continuation guarantee. The first check gates on alignment and
/// normality; failures afterwards are findings about the theory, not bugs.
pub fn verify_aligned_consequences(
    poly: &Polymatroid,
    g: &Greedoid,
    budget: usize,
) -> PropertyReport {
    let mut report = PropertyReport::new();
    if !g.is_normal() {
        report.fail(
            "aligned precondition",
            format!("greedoid has loops {}", g.alphabet().set_string(g.loops())),
        );
        return report;
    }
    if let Some(v) = alignment_violation(poly, g) {
        report.fail("aligned precondition", v.describe(g.alphabet()));
        return report;
    }
    report.pass("aligned precondition");
    let alphabet = g.alphabet();

    // For every feasible step A → A+x and letter y: a marginal killed by the
    // step was exactly one before it.
    let mut step_witness = None;
    'step: for &a in g.feasible() {
        for x in continuations(g, a).iter() {
            let ax = a.with(x);
            for y in alphabet.letters() {
                if poly.marginal(ax, y).is_zero() && !poly.marginal(a, y).is_zero() {
                    if poly.marginal(a, y) != Rat::one() {
                        step_witness = Some((a, x, y));
                        break 'step;
                    }
                }
            }
        }
    }
    match step_witness {
        None => report.pass("step-to-unit-marginal"),
        Some((a, x, y)) => report.fail(
            "step-to-unit-marginal",
            format!(
                "adding {} to {} kills the marginal of {} which was not 1",
                alphabet.name(x),
                alphabet.set_string(a),
                alphabet.name(y)
            ),
        ),
    }

    // On every basic word, every letter's continuation indices form one
    // nonempty contiguous window.
    match g.basic_words(budget) {
        Err(LanguageError::SizeLimit(b)) => report.unknown(
            "contiguous-continuation-window",
            format!("basic-word enumeration exceeded the budget of {b}"),
        ),
        Ok(words) => {
            let mut witness: Option<(u8, Word)> = None;
            'win: for y in alphabet.letters() {
                for w in &words {
                    let hits: Vec<usize> = (0..=w.len())
                        .filter(|&i| continuations(g, w.prefix(i).support()).contains(y))
                        .collect();
                    let contiguous = !hits.is_empty()
                        && hits.windows(2).all(|p| p[1] == p[0] + 1);
                    if !contiguous {
                        witness = Some((y, w.clone()));
                        break 'win;
                    }
                }
            }
            match witness {
                None => report.pass("contiguous-continuation-window"),
                Some((y, w)) => report.fail(
                    "contiguous-continuation-window",
                    format!(
                        "letter {} has a gap or no window on basic word {}",
                        alphabet.name(y),
                        alphabet.word_string(&w)
                    ),
                ),
            }
        }
    }

    // Letters outside a kernel have marginal at least one.
    let mut gap_witness = None;
    'gap: for &a in g.feasible() {
        let k = kernel(g, a);
        for y in alphabet.letters() {
            if !k.contains(y) && poly.marginal(a, y) < Rat::one() {
                gap_witness = Some((a, y));
                break 'gap;
            }
        }
    }
    match gap_witness {
        None => report.pass("outside-kernel-marginal-at-least-one"),
        Some((a, y)) => report.fail(
            "outside-kernel-marginal-at-least-one",
            format!(
                "letter {} outside the kernel of {} has marginal {}",
                alphabet.name(y),
                alphabet.set_string(a),
                poly.marginal(a, y)
            ),
        ),
    }

    // Letters outside a kernel become continuations after some feasible
    // suffix (possibly empty).
    let mut suffix_witness = None;
    'suf: for &a in g.feasible() {
        let k = kernel(g, a);
        for y in alphabet.letters() {
            if k.contains(y) || a.contains(y) {
                continue;
            }
            if !reachable_continuation(g, a, y) {
                suffix_witness = Some((a, y));
                break 'suf;
            }
        }
    }
    match suffix_witness {
        None => report.pass("outside-kernel-suffix-continuation"),
        Some((a, y)) => report.fail(
            "outside-kernel-suffix-continuation",
            format!(
                "no feasible extension of {} ever has {} as a continuation",
                alphabet.set_string(a),
                alphabet.name(y)
            ),
        ),
    }

    report
}

fn reachable_continuation(g: &Greedoid, start: Subset, y: u8) -> bool {
    let mut stack = vec![start];
    let mut seen: HashSet<u32> = HashSet::from([start.mask()]);
    while let Some(a) = stack.pop() {
        if continuations(g, a).contains(y) {
            return true;
        }
        for x in g.alphabet().letters() {
            if a.contains(x) {
                continue;
            }
            let b = a.with(x);
            if g.is_feasible(b) && seen.insert(b.mask()) {
                stack.push(b);
            }
        }
    }
    false
}

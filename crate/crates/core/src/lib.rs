//! Greedoid analysis workbench.
//!
//! The crate models greedoids as accessible set systems with the exchange
//! axiom, derives their simple languages on demand, and layers the analysis
//! machinery on top: rank/span/kernel operators, the interval and optimism
//! properties, flat lattices, polymatroid rank functions with exact rational
//! arithmetic, representation and alignment checks, Galois connections
//! between flat lattices and closed-set lattices, the greatest representation
//! candidate, and an exhaustive small-alphabet enumeration harness that
//! audits how these properties relate on every instance it can reach.
//!
//! Everything is deterministic: families are kept in a canonical order,
//! checkers return the lexicographically least witness (element lists
//! compared as dictionaries), and reports render identically across runs.

pub mod alphabet;
pub mod analysis;
pub mod constructions;
pub mod dot;
pub mod enumerate;
pub mod fixture;
pub mod flats;
pub mod greatest;
pub mod greedy;
pub mod polymatroid;
pub mod report;
pub mod survey;
pub mod system;

pub use alphabet::{Alphabet, AlphabetError, Subset, Word, MAX_LETTERS};
pub use analysis::{IntervalViolation, OptimismViolation, WordIntervalViolation};
pub use constructions::{AntimatroidViolation, ConstructionError, Poset, RootedGraph};
pub use enumerate::{enumerate_greedoids, BudgetExceeded, EnumerateOptions};
pub use flats::{Flat, FlatError, FlatLattice, ForkingViolation, LatticeOp};
pub use greedy::{greedy_basis, WeightFunction};
pub use fixture::FixtureError;
pub use greatest::{AuditOptions, EquivalenceMatrix, HypothesesUnmet, ImplicationStatus, ItemOutcome};
pub use polymatroid::{
    AlignmentViolation, ClosedSetLattice, GaloisPair, PolyViolation, Polymatroid, Rat, RankTable,
};
pub use report::{PropertyCheck, PropertyReport};
pub use survey::{CorpusReport, Counterexample, SurveyError, SurveyOptions, Tally};
pub use system::{Greedoid, GreedoidViolation, LanguageError, SetSystem, DEFAULT_WORD_BUDGET};

//! Shared corpus builders and independent oracles for the integration tests.
//!
//! Everything here recomputes results from first principles — layered
//! enumeration, exhaustive table assignment, relation filtering — so the
//! library's own shortcuts are always checked against a second route.

use greedoid_core::alphabet::{Alphabet, Subset};
use greedoid_core::constructions::Poset;
use greedoid_core::enumerate::{enumerate_greedoids, EnumerateOptions};
use greedoid_core::greatest::greatest_representation;
use greedoid_core::polymatroid::{representation_violation, Polymatroid, Rat, RankTable};
use greedoid_core::system::Greedoid;

/// Every labeled greedoid on `n` letters, loopy ones included.
pub fn full_corpus(n: usize) -> Vec<Greedoid> {
    enumerate_greedoids(n, &EnumerateOptions::default()).expect("no budget set")
}

/// Every labeled loop-free greedoid on `n` letters.
pub fn normal_corpus(n: usize) -> Vec<Greedoid> {
    enumerate_greedoids(
        n,
        &EnumerateOptions { normal_only: true, ..EnumerateOptions::default() },
    )
    .expect("no budget set")
}

/// One loop-free greedoid per relabeling class on `n` letters.
pub fn deduped_corpus(n: usize) -> Vec<Greedoid> {
    enumerate_greedoids(
        n,
        &EnumerateOptions { normal_only: true, dedup: true, ..EnumerateOptions::default() },
    )
    .expect("no budget set")
}

/// Every labeled strict partial order on `n` letters, built by closing each
/// subset of ordered pairs and keeping one copy per distinct closure.
pub fn all_posets(n: usize) -> Vec<Poset> {
    let alphabet = Alphabet::of_size(n);
    let pairs: Vec<(u8, u8)> = (0..n as u8)
        .flat_map(|x| (0..n as u8).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let mut seen: Vec<Vec<(u8, u8)>> = Vec::new();
    let mut out = Vec::new();
    for choice in 0u32..(1 << pairs.len()) {
        let chosen: Vec<(u8, u8)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| choice >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let Ok(poset) = Poset::new(alphabet.clone(), &chosen) else {
            continue; // the chosen pairs close into a cycle
        };
        let closed = poset.relation_pairs();
        if !seen.contains(&closed) {
            seen.push(closed);
            out.push(poset);
        }
    }
    out
}

/// All integral rank tables representing `g` with values capped at the
/// ground rank — the same space the library's depth-first search explores —
/// by exhaustive assignment in mask order with monotonicity pruning.
/// Independent of that search: candidates are filtered only through the
/// public validator and the representation check.
pub fn integral_representations(g: &Greedoid) -> Vec<Polymatroid> {
    let n = g.alphabet().len();
    assert!(n <= 3, "exhaustive table assignment is for tiny alphabets");
    let size = 1usize << n;
    let rmax = i64::from(g.ground_rank());
    let mut values = vec![0i64; size];
    let mut out = Vec::new();
    assign(g, rmax, &mut values, 1, &mut out);
    out
}

fn assign(g: &Greedoid, rmax: i64, values: &mut Vec<i64>, mask: usize, out: &mut Vec<Polymatroid>) {
    if mask == values.len() {
        let table = RankTable::new(
            g.alphabet().clone(),
            values.iter().map(|&v| Rat::from_integer(v)).collect(),
        );
        if let Ok(poly) = table.validate() {
            if representation_violation(&poly, g).is_none() {
                out.push(poly);
            }
        }
        return;
    }
    let floor = Subset::from_mask(mask as u32)
        .iter()
        .map(|x| values[mask & !(1 << x)])
        .max()
        .expect("non-empty mask");
    for v in floor..=rmax {
        values[mask] = v;
        assign(g, rmax, values, mask + 1, out);
    }
}

/// The candidate pool a small instance can be tested against: every integral
/// representation in the searched space, plus the greatest candidate when it
/// validates and represents (it can exceed the integral cap only by being
/// equal to a pooled table, so duplicates are dropped).
pub fn representation_pool(g: &Greedoid) -> Vec<Polymatroid> {
    let mut pool = integral_representations(g);
    if let Ok(table) = greatest_representation(g) {
        if let Ok(poly) = table.validate() {
            if representation_violation(&poly, g).is_none()
                && !pool.iter().any(|p| {
                    (0..g.alphabet().subset_count() as u32)
                        .all(|m| p.rank(Subset::from_mask(m)) == poly.rank(Subset::from_mask(m)))
                })
            {
                pool.push(poly);
            }
        }
    }
    pool
}

/// Exact wall-clock guard: run the closure and fail if it overruns.
pub fn within(seconds: u64, label: &str, run: impl FnOnce()) {
    let start = std::time::Instant::now();
    run();
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < seconds,
        "{label} took {elapsed:?}, over the {seconds}s budget"
    );
}

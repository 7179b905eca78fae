//! Flats of a normal interval greedoid and their lattice.
//!
//! A flat is a class of feasible sets sharing the same continuation set.
//! Construction re-verifies the structure it relies on instead of assuming
//! it: members of a flat share one kernel which equals their union, kernels
//! are pairwise distinct, the containment relation is a graded lattice
//! order, and that order agrees with kernel containment. Any failure is
//! returned as an error carrying the least witness, never silently ignored.

use std::collections::HashMap;

use thiserror::Error;

use crate::alphabet::{sort_lex, Subset};
use crate::analysis::{continuations, interval_violation, kernel, IntervalViolation};
use crate::system::Greedoid;

/// One equal-continuation class of feasible sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flat {
    members: Vec<Subset>,
    gamma: Subset,
    kernel: Subset,
    rank: u32,
}

impl Flat {
    /// Member sets in canonical dictionary order.
    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    /// The continuation set shared by every member.
    pub fn gamma(&self) -> Subset {
        self.gamma
    }

    /// The kernel shared by every member (equal to the union of members).
    pub fn kernel(&self) -> Subset {
        self.kernel
    }

    /// Common size of the members.
    pub fn rank(&self) -> u32 {
        self.rank
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeOp {
    Meet,
    Join,
}

/// Why the flat lattice could not be built. Beyond the two preconditions
/// (normal, interval), every variant flags a structural theorem that failed
/// to hold on the concrete instance.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FlatError {
    #[error("the greedoid has loops")]
    NotNormal { loops: Subset },
    #[error("the interval property fails")]
    NotInterval(IntervalViolation),
    #[error("a member's kernel differs from the union of its flat")]
    KernelMismatch { member: Subset, kernel: Subset, union: Subset },
    #[error("two flats share a kernel")]
    KernelCollision { kernel: Subset },
    #[error("flat containment is not a partial order")]
    NotAPartialOrder { first: Subset, second: Subset },
    #[error("a flat pair has no unique meet or join")]
    NotALattice { first: Subset, second: Subset, op: LatticeOp },
    #[error("a cover step does not raise rank by one")]
    GradingViolation { lower: Subset, upper: Subset },
    #[error("flat containment disagrees with kernel containment")]
    KernelOrderMismatch { first: Subset, second: Subset },
}

/// The lattice of flats, ordered by "some member is contained in some
/// member". Indices are stable: flats are sorted by their least member.
#[derive(Debug, Clone)]
pub struct FlatLattice {
    flats: Vec<Flat>,
    below: Vec<Vec<bool>>,
    meets: Vec<Vec<usize>>,
    joins: Vec<Vec<usize>>,
    upper_covers: Vec<Vec<usize>>,
    member_to_flat: HashMap<u32, usize>,
    bottom: usize,
    top: usize,
}

impl FlatLattice {
    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn flat(&self, i: usize) -> &Flat {
        &self.flats[i]
    }

    /// Whether flat `i` lies below flat `j` (reflexively).
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.below[i][j]
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meets[i][j]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.joins[i][j]
    }

    /// Indices of the flats covering `i`, ascending.
    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.upper_covers[i]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Flat containing a feasible set.
    pub fn flat_of(&self, member: Subset) -> Option<usize> {
        self.member_to_flat.get(&member.mask()).copied()
    }

    /// Kernels in flat-index order.
    pub fn kernels(&self) -> Vec<Subset> {
        self.flats.iter().map(|f| f.kernel).collect()
    }

    /// Flat whose kernel is exactly `kernel`, if any. Kernels are pairwise
    /// distinct, so the answer is unique.
    pub fn flat_with_kernel(&self, kernel: Subset) -> Option<usize> {
        self.flats.iter().position(|f| f.kernel == kernel)
    }
}

/// Group feasible sets into flats and build the lattice, re-checking every
/// structural property along the way.
pub fn compute_flats(g: &Greedoid) -> Result<FlatLattice, FlatError> {
    if !g.is_normal() {
        return Err(FlatError::NotNormal { loops: g.loops() });
    }
    if let Some(v) = interval_violation(g) {
        return Err(FlatError::NotInterval(v));
    }

    // Group by continuation set.
    let mut groups: HashMap<u32, Vec<Subset>> = HashMap::new();
    for &a in g.feasible() {
        groups.entry(continuations(g, a).mask()).or_default().push(a);
    }
    let mut flats: Vec<Flat> = groups
        .into_iter()
        .map(|(gamma, mut members)| {
            sort_lex(&mut members);
            let union = members.iter().fold(Subset::EMPTY, |acc, m| acc.union(*m));
            let rank = members[0].len();
            Flat { members, gamma: Subset::from_mask(gamma), kernel: union, rank }
        })
        .collect();
    flats.sort_by(|a, b| a.members[0].lex_cmp(b.members[0]));

    // Every member's kernel must equal the union of its flat. Members of one
    // flat always share a size: equal continuation sets mean equal spans,
    // and by exchange the rank of the span is the member's own size.
    for flat in &flats {
        for &m in &flat.members {
            assert_eq!(
                m.len(),
                flat.rank,
                "members of one flat must share a size; exchange was validated"
            );
            let k = kernel(g, m);
            if k != flat.kernel {
                return Err(FlatError::KernelMismatch {
                    member: m,
                    kernel: k,
                    union: flat.kernel,
                });
            }
        }
    }

    // Kernels are pairwise distinct.
    for i in 0..flats.len() {
        for j in (i + 1)..flats.len() {
            if flats[i].kernel == flats[j].kernel {
                return Err(FlatError::KernelCollision { kernel: flats[i].kernel });
            }
        }
    }

    let n = flats.len();
    let mut below = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            below[i][j] = flats[i]
                .members
                .iter()
                .any(|a| flats[j].members.iter().any(|b| a.is_subset_of(*b)));
        }
    }

    // Partial order: antisymmetry and transitivity.
    for (i, row) in below.iter().enumerate() {
        for (j, &le) in row.iter().enumerate() {
            if i != j && le && below[j][i] {
                return Err(FlatError::NotAPartialOrder {
                    first: flats[i].kernel,
                    second: flats[j].kernel,
                });
            }
            if le {
                for k in 0..n {
                    if below[j][k] && !below[i][k] {
                        return Err(FlatError::NotAPartialOrder {
                            first: flats[i].kernel,
                            second: flats[k].kernel,
                        });
                    }
                }
            }
        }
    }

    // Flat containment must agree with kernel containment.
    for i in 0..n {
        for j in 0..n {
            if below[i][j] != flats[i].kernel.is_subset_of(flats[j].kernel) {
                return Err(FlatError::KernelOrderMismatch {
                    first: flats[i].kernel,
                    second: flats[j].kernel,
                });
            }
        }
    }

    // Unique meets and joins by bound scan.
    let mut meets = vec![vec![0usize; n]; n];
    let mut joins = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            let lower: Vec<usize> =
                (0..n).filter(|&k| below[k][i] && below[k][j]).collect();
            match unique_extremum(&lower, &below, true) {
                Some(m) => meets[i][j] = m,
                None => {
                    return Err(FlatError::NotALattice {
                        first: flats[i].kernel,
                        second: flats[j].kernel,
                        op: LatticeOp::Meet,
                    })
                }
            }
            let upper: Vec<usize> =
                (0..n).filter(|&k| below[i][k] && below[j][k]).collect();
            match unique_extremum(&upper, &below, false) {
                Some(m) => joins[i][j] = m,
                None => {
                    return Err(FlatError::NotALattice {
                        first: flats[i].kernel,
                        second: flats[j].kernel,
                        op: LatticeOp::Join,
                    })
                }
            }
        }
    }

    // Covers raise rank by exactly one.
    let mut upper_covers = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i == j || !below[i][j] {
                continue;
            }
            let direct = !(0..n)
                .any(|k| k != i && k != j && below[i][k] && below[k][j]);
            if direct {
                upper_covers[i].push(j);
                if flats[j].rank != flats[i].rank + 1 {
                    return Err(FlatError::GradingViolation {
                        lower: flats[i].kernel,
                        upper: flats[j].kernel,
                    });
                }
            }
        }
    }

    let bottom = (0..n)
        .find(|&i| (0..n).all(|j| below[i][j]))
        .expect("a bottom flat exists: the class of the empty set");
    let top = (0..n)
        .find(|&i| (0..n).all(|j| below[j][i]))
        .expect("a top flat exists: the class of the maximum-size feasible sets");

    let mut member_to_flat = HashMap::new();
    for (i, flat) in flats.iter().enumerate() {
        for &m in &flat.members {
            member_to_flat.insert(m.mask(), i);
        }
    }

    Ok(FlatLattice {
        flats,
        below,
        meets,
        joins,
        upper_covers,
        member_to_flat,
        bottom,
        top,
    })
}

fn unique_extremum(candidates: &[usize], below: &[Vec<bool>], take_max: bool) -> Option<usize> {
    let extremal: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&k| {
            !candidates.iter().any(|&other| {
                other != k && if take_max { below[k][other] } else { below[other][k] }
            })
        })
        .collect();
    if extremal.len() == 1 {
        Some(extremal[0])
    } else {
        None
    }
}

/// First pair of flats (index order) violating the graded semimodular
/// inequality rank(meet) + rank(join) ≤ rank(i) + rank(j), as kernels.
pub fn semimodularity_violation(lattice: &FlatLattice) -> Option<(Subset, Subset)> {
    let n = lattice.len();
    for i in 0..n {
        for j in i..n {
            let sum = lattice.flat(i).rank + lattice.flat(j).rank;
            let glue = lattice.flat(lattice.meet(i, j)).rank
                + lattice.flat(lattice.join(i, j)).rank;
            if glue > sum {
                return Some((lattice.flat(i).kernel, lattice.flat(j).kernel));
            }
        }
    }
    None
}

/// First pair of flats (index order) whose meet's kernel differs from the
/// intersection of their kernels, as kernels.
pub fn kernels_intersection_violation(lattice: &FlatLattice) -> Option<(Subset, Subset)> {
    let n = lattice.len();
    for i in 0..n {
        for j in i..n {
            let meet_kernel = lattice.flat(lattice.meet(i, j)).kernel;
            if meet_kernel != lattice.flat(i).kernel.inter(lattice.flat(j).kernel) {
                return Some((lattice.flat(i).kernel, lattice.flat(j).kernel));
            }
        }
    }
    None
}

/// A member of a meet that branches toward the second flat with a letter
/// the first flat does not offer as a continuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForkingViolation {
    /// Kernel of the first flat.
    pub first: Subset,
    /// Kernel of the second flat.
    pub second: Subset,
    /// The meet member that was extended.
    pub member: Subset,
    pub letter: u8,
}

/// Checks, for every flat pair (F, F') and every member M of their meet:
/// whenever a feasible extension M+x lands below F' but not below F, the
/// letter x is a continuation of F. Returns the first violation in
/// (first flat, second flat, member, letter) order.
pub fn forking_violation(g: &Greedoid, lattice: &FlatLattice) -> Option<ForkingViolation> {
    let n = lattice.len();
    for i in 0..n {
        for j in 0..n {
            let meet = lattice.meet(i, j);
            for &m in lattice.flat(meet).members() {
                for x in g.alphabet().letters() {
                    if m.contains(x) || !g.is_feasible(m.with(x)) {
                        continue;
                    }
                    let ext = lattice
                        .flat_of(m.with(x))
                        .expect("feasible sets all belong to flats");
                    if lattice.le(ext, j) && !lattice.le(ext, i)
                        && !lattice.flat(i).gamma().contains(x)
                    {
                        return Some(ForkingViolation {
                            first: lattice.flat(i).kernel,
                            second: lattice.flat(j).kernel,
                            member: m,
                            letter: x,
                        });
                    }
                }
            }
        }
    }
    None
}

/// Word-level route to the flat order, used as an independent oracle: flat
/// `i` lies below flat `j` iff some member of `i` grows into some member of
/// `j` through feasible one-letter extensions (equivalently, iff a feasible
/// word reaching `i` extends by a suffix into `j`).
pub fn flat_order_by_words(g: &Greedoid, lattice: &FlatLattice, i: usize, j: usize) -> bool {
    let targets = lattice.flat(j).members();
    let mut stack: Vec<Subset> = lattice.flat(i).members().to_vec();
    let mut seen: Vec<u32> = stack.iter().map(|s| s.mask()).collect();
    while let Some(a) = stack.pop() {
        if targets.contains(&a) {
            return true;
        }
        for x in g.alphabet().letters() {
            if a.contains(x) {
                continue;
            }
            let b = a.with(x);
            if g.is_feasible(b) && !seen.contains(&b.mask()) {
                seen.push(b.mask());
                stack.push(b);
            }
        }
    }
    false
}

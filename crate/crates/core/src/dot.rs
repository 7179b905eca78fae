//! DOT (Graphviz) export of flat lattices and rank-function adjunctions.
//!
//! Output is deterministic: nodes are emitted in lattice index order and
//! edges in (source, target) index order, so exports diff cleanly.

use crate::flats::{compute_flats, FlatError, FlatLattice};
use crate::polymatroid::{check_galois, Polymatroid};
use crate::system::Greedoid;

/// Hasse diagram of the flat lattice: one box per flat labeled with its
/// kernel and rank, one arrow per cover.
pub fn lattice_dot(g: &Greedoid, lattice: &FlatLattice) -> String {
    let alphabet = g.alphabet();
    let mut out = String::from("digraph flat_lattice {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, flat) in lattice.flats().iter().enumerate() {
        out.push_str(&format!(
            "  f{i} [label=\"κ={} r={}\"];\n",
            alphabet.set_string(flat.kernel()),
            flat.rank()
        ));
    }
    for i in 0..lattice.len() {
        for &j in lattice.upper_covers(i) {
            out.push_str(&format!("  f{i} -> f{j};\n"));
        }
    }
    out.push_str("}\n");
    out
}

/// Two-cluster rendering of the maps between the flat lattice and the closed
/// sets of a rank function: Hasse arrows inside each cluster, dashed arrows
/// flat → closed set for the upper map, dotted arrows closed set → flat for
/// the lower map (omitted where it is undefined).
pub fn galois_dot(poly: &Polymatroid, g: &Greedoid) -> Result<String, FlatError> {
    let alphabet = g.alphabet();
    let lattice = compute_flats(g)?;
    let closed = poly.closed_sets();
    let pair = check_galois(poly, g)?;

    let mut out = String::from("digraph galois {\n  rankdir=BT;\n  node [shape=box];\n");
    out.push_str("  subgraph cluster_flats {\n    label=\"flats (by kernel)\";\n");
    for (i, kernel) in pair.flat_kernels.iter().enumerate() {
        out.push_str(&format!(
            "    f{i} [label=\"κ={} r={}\"];\n",
            alphabet.set_string(*kernel),
            lattice.flat(i).rank()
        ));
    }
    for i in 0..lattice.len() {
        for &j in lattice.upper_covers(i) {
            out.push_str(&format!("    f{i} -> f{j};\n"));
        }
    }
    out.push_str("  }\n  subgraph cluster_closed {\n    label=\"closed sets\";\n");
    for (i, set) in pair.closed_sets.iter().enumerate() {
        out.push_str(&format!(
            "    c{i} [label=\"{}\"];\n",
            alphabet.set_string(*set)
        ));
    }
    for i in 0..closed.len() {
        for j in closed.upper_covers(i) {
            out.push_str(&format!("    c{i} -> c{j};\n"));
        }
    }
    out.push_str("  }\n");
    for (i, &j) in pair.phi_star.iter().enumerate() {
        out.push_str(&format!(
            "  f{i} -> c{j} [style=dashed, constraint=false];\n"
        ));
    }
    for (j, flat) in pair.phi_lower.iter().enumerate() {
        if let Some(i) = flat {
            out.push_str(&format!(
                "  c{j} -> f{i} [style=dotted, constraint=false];\n"
            ));
        }
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{Alphabet, Subset};
    use crate::constructions::{cover_rank, ubg, RootedGraph};

    #[test]
    fn chain_lattice_renders_three_nodes() {
        let g = Greedoid::from_sets(
            Alphabet::of_size(2),
            vec![Subset::EMPTY, Subset::from_mask(0b01), Subset::from_mask(0b11)],
        )
        .unwrap();
        let dot = lattice_dot(&g, &compute_flats(&g).unwrap());
        assert_eq!(dot.matches("[label=").count(), 3);
        assert_eq!(dot.matches(" -> ").count(), 2);
        assert!(dot.contains("f0 -> f1"));
        assert!(dot.contains("f1 -> f2"));
        assert!(dot.contains("κ={a,b} r=2"));
    }

    #[test]
    fn trivial_lattice_is_a_single_node() {
        let g = Greedoid::from_sets(Alphabet::of_size(0), vec![Subset::EMPTY]).unwrap();
        let dot = lattice_dot(&g, &compute_flats(&g).unwrap());
        assert_eq!(dot.matches("[label=").count(), 1);
        assert_eq!(dot.matches(" -> ").count(), 0);
    }

    #[test]
    fn galois_export_shows_the_non_insertion_pair() {
        // Three-edge path rooted at one end: the closed set {b} is no kernel,
        // so its lower image is the bottom flat and the round trip lands on ∅.
        let graph =
            RootedGraph::new("s", &[("a", "s", "t"), ("b", "u", "v"), ("c", "t", "u")]).unwrap();
        let g = ubg(&graph);
        let rho = cover_rank(&graph);
        let dot = galois_dot(&rho, &g).unwrap();
        assert!(dot.contains("cluster_flats"));
        assert!(dot.contains("cluster_closed"));
        // Closed sets in dictionary order: {}, {a}, {a,b,c}, {a,c}, {b}.
        assert!(dot.contains("c4 [label=\"{b}\"]"));
        // φ_*({b}) = bottom flat; φ*(bottom) = {} — the round trip drops to ∅.
        assert!(dot.contains("c4 -> f0 [style=dotted"));
        assert!(dot.contains("f0 -> c0 [style=dashed"));
    }
}

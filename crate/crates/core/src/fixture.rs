//! Plain-text fixtures for greedoids, rank tables, rooted graphs, and posets.
//!
//! All four formats share one grammar: one `key: value` record per line,
//! `#` starts a comment, blank lines are skipped, and the first record names
//! the ground set (`alphabet:` — or `root:` for graphs, whose letters are the
//! edges). Letter names match `[A-Za-z0-9_]+`. Parsed objects go through the
//! same validators as programmatic construction, so a fixture can never
//! smuggle in an invalid instance; renderers emit the canonical order, and
//! parse ∘ render is the identity.

use std::fmt;

use thiserror::Error;

use crate::alphabet::{Alphabet, Subset};
use crate::constructions::{Poset, RootedGraph};
use crate::polymatroid::{Rat, RankTable, MAX_TABLE_LETTERS};
use crate::system::Greedoid;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    /// A specific line failed to parse.
    Line { number: usize, detail: String },
    /// The records parse but do not assemble into a valid instance.
    Structure { detail: String },
}

impl fmt::Display for FixtureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureError::Line { number, detail } => write!(f, "line {number}: {detail}"),
            FixtureError::Structure { detail } => write!(f, "{detail}"),
        }
    }
}

fn line_error(number: usize, detail: impl Into<String>) -> FixtureError {
    FixtureError::Line { number, detail: detail.into() }
}

fn structure_error(detail: impl Into<String>) -> FixtureError {
    FixtureError::Structure { detail: detail.into() }
}

/// Non-blank records as (1-based line number, `key`, `rest`) triples.
fn records(text: &str) -> Result<Vec<(usize, &str, &str)>, FixtureError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, rest) = content
            .split_once(':')
            .ok_or_else(|| line_error(number, "expected `key: value`"))?;
        out.push((number, key.trim(), rest.trim()));
    }
    Ok(out)
}

/// Leading `alphabet:` record; an empty value declares the empty alphabet.
fn parse_alphabet(records: &[(usize, &str, &str)]) -> Result<Alphabet, FixtureError> {
    let &(number, key, rest) = records
        .first()
        .ok_or_else(|| structure_error("empty fixture"))?;
    if key != "alphabet" {
        return Err(line_error(number, "the first record must be `alphabet:`"));
    }
    let names: Vec<&str> = if rest.is_empty() {
        Vec::new()
    } else {
        rest.split(',').map(str::trim).collect()
    };
    Alphabet::new(names).map_err(|e| line_error(number, e.to_string()))
}

/// `{a,b}` or `{}` under the given alphabet.
fn parse_set(alphabet: &Alphabet, text: &str, number: usize) -> Result<Subset, FixtureError> {
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| line_error(number, format!("expected a set like {{a,b}}, got `{text}`")))?
        .trim();
    let mut set = Subset::EMPTY;
    if inner.is_empty() {
        return Ok(set);
    }
    for name in inner.split(',').map(str::trim) {
        let id = alphabet
            .index_of(name)
            .ok_or_else(|| line_error(number, format!("unknown letter `{name}`")))?;
        if set.contains(id) {
            return Err(line_error(number, format!("letter `{name}` listed twice")));
        }
        set = set.with(id);
    }
    Ok(set)
}

/// `3` or `3/2` as an exact rational.
fn parse_rat(text: &str, number: usize) -> Result<Rat, FixtureError> {
    let bad = |detail: String| line_error(number, detail);
    match text.split_once('/') {
        None => text
            .trim()
            .parse::<i64>()
            .map(Rat::from_integer)
            .map_err(|_| bad(format!("expected an integer or p/q, got `{text}`"))),
        Some((p, q)) => {
            let p = p.trim().parse::<i64>();
            let q = q.trim().parse::<i64>();
            match (p, q) {
                (Ok(_), Ok(0)) => Err(bad("zero denominator".to_string())),
                (Ok(p), Ok(q)) => Ok(Rat::new(p, q)),
                _ => Err(bad(format!("expected an integer or p/q, got `{text}`"))),
            }
        }
    }
}

fn render_rat(value: Rat) -> String {
    if value.denom().abs() == 1 {
        value.to_integer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// `alphabet:` header plus one `feasible:` record per set. The family is
/// validated, so syntactically fine but axiom-breaking fixtures are rejected.
pub fn parse_greedoid(text: &str) -> Result<Greedoid, FixtureError> {
    let records = records(text)?;
    let alphabet = parse_alphabet(&records)?;
    let mut sets = Vec::new();
    for &(number, key, rest) in &records[1..] {
        if key != "feasible" {
            return Err(line_error(number, format!("unexpected record `{key}:`")));
        }
        let set = parse_set(&alphabet, rest, number)?;
        if sets.contains(&set) {
            return Err(line_error(
                number,
                format!("duplicate feasible set {}", alphabet.set_string(set)),
            ));
        }
        sets.push(set);
    }
    Greedoid::from_sets(alphabet.clone(), sets)
        .map_err(|v| structure_error(v.describe(&alphabet)))
}

pub fn render_greedoid(g: &Greedoid) -> String {
    let mut out = format!("alphabet: {}\n", g.alphabet().names().join(","));
    for &set in g.feasible() {
        out.push_str(&format!("feasible: {}\n", g.alphabet().set_string(set)));
    }
    out
}

/// `alphabet:` header plus one `rank:` record per subset — all 2^n of them,
/// each exactly once. The table is returned unvalidated so that deliberately
/// broken rank functions can be round-tripped for testing; promote with
/// `RankTable::validate`.
pub fn parse_rank(text: &str) -> Result<RankTable, FixtureError> {
    let records = records(text)?;
    let alphabet = parse_alphabet(&records)?;
    if alphabet.len() > MAX_TABLE_LETTERS {
        return Err(structure_error(format!(
            "rank tables support at most {MAX_TABLE_LETTERS} letters, got {}",
            alphabet.len()
        )));
    }
    let mut values: Vec<Option<Rat>> = vec![None; alphabet.subset_count()];
    for &(number, key, rest) in &records[1..] {
        if key != "rank" {
            return Err(line_error(number, format!("unexpected record `{key}:`")));
        }
        let (set_text, value_text) = rest
            .split_once('=')
            .ok_or_else(|| line_error(number, "expected `rank: {set} = value`"))?;
        let set = parse_set(&alphabet, set_text.trim(), number)?;
        let value = parse_rat(value_text.trim(), number)?;
        let slot = &mut values[set.mask() as usize];
        if slot.is_some() {
            return Err(line_error(
                number,
                format!("duplicate rank entry for {}", alphabet.set_string(set)),
            ));
        }
        *slot = Some(value);
    }
    if let Some(missing) = alphabet
        .subsets_lex()
        .into_iter()
        .find(|s| values[s.mask() as usize].is_none())
    {
        return Err(structure_error(format!(
            "missing rank entry for {}",
            alphabet.set_string(missing)
        )));
    }
    let values = values.into_iter().map(|v| v.expect("checked above")).collect();
    Ok(RankTable::new(alphabet, values))
}

pub fn render_rank(table: &RankTable) -> String {
    let alphabet = table.alphabet();
    let mut out = format!("alphabet: {}\n", alphabet.names().join(","));
    for set in alphabet.subsets_lex() {
        out.push_str(&format!(
            "rank: {} = {}\n",
            alphabet.set_string(set),
            render_rat(table.value(set))
        ));
    }
    out
}

/// `root:` header plus one `edge: letter = end-end` record per edge.
pub fn parse_graph(text: &str) -> Result<RootedGraph, FixtureError> {
    let records = records(text)?;
    let &(number, key, root) = records
        .first()
        .ok_or_else(|| structure_error("empty fixture"))?;
    if key != "root" {
        return Err(line_error(number, "the first record must be `root:`"));
    }
    let mut edges: Vec<(&str, &str, &str)> = Vec::new();
    for &(number, key, rest) in &records[1..] {
        if key != "edge" {
            return Err(line_error(number, format!("unexpected record `{key}:`")));
        }
        let (letter, ends) = rest
            .split_once('=')
            .ok_or_else(|| line_error(number, "expected `edge: letter = end-end`"))?;
        let (u, v) = ends
            .trim()
            .split_once('-')
            .ok_or_else(|| line_error(number, "expected two endpoints joined by `-`"))?;
        edges.push((letter.trim(), u.trim(), v.trim()));
    }
    RootedGraph::new(root, &edges).map_err(|e| structure_error(e.to_string()))
}

pub fn render_graph(graph: &RootedGraph) -> String {
    let mut out = format!("root: {}\n", graph.root());
    for x in graph.alphabet().letters() {
        let (u, v) = graph.endpoints(x);
        out.push_str(&format!("edge: {} = {u}-{v}\n", graph.alphabet().name(x)));
    }
    out
}

/// `alphabet:` header plus one `rel: x < y` record per strict relation; the
/// parser takes the transitive closure and rejects cycles.
pub fn parse_poset(text: &str) -> Result<Poset, FixtureError> {
    let records = records(text)?;
    let alphabet = parse_alphabet(&records)?;
    let mut relations = Vec::new();
    for &(number, key, rest) in &records[1..] {
        if key != "rel" {
            return Err(line_error(number, format!("unexpected record `{key}:`")));
        }
        let (x, y) = rest
            .split_once('<')
            .ok_or_else(|| line_error(number, "expected `rel: x < y`"))?;
        let lookup = |name: &str| {
            alphabet
                .index_of(name)
                .ok_or_else(|| line_error(number, format!("unknown letter `{name}`")))
        };
        relations.push((lookup(x.trim())?, lookup(y.trim())?));
    }
    Poset::new(alphabet, &relations).map_err(|e| structure_error(e.to_string()))
}

pub fn render_poset(p: &Poset) -> String {
    let mut out = format!("alphabet: {}\n", p.alphabet().names().join(","));
    for (x, y) in p.relation_pairs() {
        out.push_str(&format!(
            "rel: {} < {}\n",
            p.alphabet().name(x),
            p.alphabet().name(y)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cover_rank, ubg};

    const PATH: &str = "\
# two-edge path from the root
alphabet: a,b
feasible: {}
feasible: {a}
feasible: {a,b}
";

    #[test]
    fn greedoid_roundtrip() {
        let g = parse_greedoid(PATH).unwrap();
        assert_eq!(g.feasible().len(), 3);
        let rendered = render_greedoid(&g);
        assert_eq!(parse_greedoid(&rendered).unwrap().feasible(), g.feasible());
        // Comments are stripped, so the roundtrip text is stable from then on.
        assert_eq!(render_greedoid(&parse_greedoid(&rendered).unwrap()), rendered);
    }

    #[test]
    fn greedoid_parse_errors() {
        let missing_header = "feasible: {}\n";
        assert!(matches!(
            parse_greedoid(missing_header).unwrap_err(),
            FixtureError::Line { number: 1, .. }
        ));

        let duplicate = "alphabet: a\nfeasible: {}\nfeasible: {}\n";
        let err = parse_greedoid(duplicate).unwrap_err();
        assert_eq!(
            err.to_string(),
            "line 3: duplicate feasible set {}"
        );

        let unknown = "alphabet: a\nfeasible: {}\nfeasible: {z}\n";
        assert!(parse_greedoid(unknown).unwrap_err().to_string().contains("unknown letter"));

        let invalid = "alphabet: a,b\nfeasible: {}\nfeasible: {a,b}\n";
        assert!(matches!(
            parse_greedoid(invalid).unwrap_err(),
            FixtureError::Structure { .. }
        ));

        let bad_syntax = "alphabet: a\nfeasible: a\n";
        assert!(parse_greedoid(bad_syntax).unwrap_err().to_string().contains("expected a set"));
    }

    #[test]
    fn empty_alphabet_fixture() {
        let g = parse_greedoid("alphabet:\nfeasible: {}\n").unwrap();
        assert_eq!(g.alphabet().len(), 0);
        assert_eq!(render_greedoid(&g), "alphabet: \nfeasible: {}\n");
    }

    #[test]
    fn rank_roundtrip_with_fractions() {
        let text = "\
alphabet: a,b
rank: {} = 0
rank: {a} = 1
rank: {b} = 1/2
rank: {a,b} = 3/2
";
        let table = parse_rank(text).unwrap();
        assert_eq!(table.value(Subset::from_mask(0b10)), Rat::new(1, 2));
        let rendered = render_rank(&table);
        assert_eq!(parse_rank(&rendered).unwrap(), table);
        assert!(table.validate().is_ok());
    }

    #[test]
    fn rank_parse_errors() {
        let missing = "alphabet: a,b\nrank: {} = 0\nrank: {a} = 1\nrank: {b} = 1\n";
        assert_eq!(
            parse_rank(missing).unwrap_err().to_string(),
            "missing rank entry for {a,b}"
        );

        let duplicate = "alphabet: a\nrank: {} = 0\nrank: {} = 1\nrank: {a} = 1\n";
        assert!(parse_rank(duplicate).unwrap_err().to_string().contains("duplicate rank entry"));

        let zero_denom = "alphabet: a\nrank: {} = 0\nrank: {a} = 1/0\n";
        assert!(parse_rank(zero_denom).unwrap_err().to_string().contains("zero denominator"));

        let not_a_number = "alphabet: a\nrank: {} = 0\nrank: {a} = x\n";
        assert!(matches!(
            parse_rank(not_a_number).unwrap_err(),
            FixtureError::Line { number: 3, .. }
        ));
    }

    #[test]
    fn graph_roundtrip() {
        let text = "\
root: s
edge: a = s-u
edge: b = u-v
";
        let graph = parse_graph(text).unwrap();
        assert_eq!(graph.root(), "s");
        assert_eq!(graph.endpoints(1), ("u", "v"));
        assert_eq!(render_graph(&graph), text);
        assert_eq!(ubg(&graph).feasible().len(), 3);
        assert_eq!(cover_rank(&graph).rank(Subset::full(2)), Rat::from_integer(2));
    }

    #[test]
    fn graph_parse_errors() {
        assert!(parse_graph("edge: a = s-u\n").unwrap_err().to_string().contains("root"));
        assert!(parse_graph("root: s\nedge: a = s\n")
            .unwrap_err()
            .to_string()
            .contains("two endpoints"));
        let duplicate = "root: s\nedge: a = s-u\nedge: a = s-v\n";
        assert!(matches!(
            parse_graph(duplicate).unwrap_err(),
            FixtureError::Structure { .. }
        ));
    }

    #[test]
    fn poset_roundtrip() {
        let text = "\
alphabet: a,b,c
rel: a < b
rel: b < c
";
        let p = parse_poset(text).unwrap();
        assert!(p.less(0, 2), "closure adds a < c");
        // Rendering lists the full closed relation and parses back to itself.
        let rendered = render_poset(&p);
        assert!(rendered.contains("rel: a < c"));
        assert_eq!(parse_poset(&rendered).unwrap(), p);
    }

    #[test]
    fn poset_parse_errors() {
        let cycle = "alphabet: a,b\nrel: a < b\nrel: b < a\n";
        assert!(parse_poset(cycle).unwrap_err().to_string().contains("cycle"));
        let unknown = "alphabet: a\nrel: a < z\n";
        assert!(parse_poset(unknown).unwrap_err().to_string().contains("unknown letter"));
        // An antichain needs no relation records at all.
        let antichain = parse_poset("alphabet: a,b\n").unwrap();
        assert!(!antichain.less(0, 1) && !antichain.less(1, 0));
    }
}

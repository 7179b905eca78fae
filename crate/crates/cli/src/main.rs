//! Command-line workbench for greedoid and polymatroid analysis.
//!
//! Exit codes: 0 — every requested check passed and all output was written;
//! 1 — some property was violated (a witness is printed); 2 — usage, file,
//! or fixture-parse errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use greedoid_core::analysis::{interval_violation, is_interval, optimism_violation};
use greedoid_core::constructions::{antimatroid_violation, poset_antimatroid, trim, ubg};
use greedoid_core::dot::{galois_dot, lattice_dot};
use greedoid_core::fixture::{
    parse_graph, parse_greedoid, parse_poset, parse_rank, render_greedoid,
};
use greedoid_core::flats::{
    compute_flats, forking_violation, kernels_intersection_violation, semimodularity_violation,
};
use greedoid_core::greatest::{audit_corollary, AuditOptions};
use greedoid_core::greedy::{greedy_basis, WeightFunction};
use greedoid_core::polymatroid::{
    alignment_violation, check_galois, representation_violation, Polymatroid, Rat,
};
use greedoid_core::report::PropertyReport;
use greedoid_core::survey::{survey, SurveyOptions};
use greedoid_core::system::{Greedoid, DEFAULT_WORD_BUDGET};

#[derive(Parser)]
#[command(
    name = "greedoid-lab",
    version,
    about = "Exact workbench for greedoids, their flat lattices, and polymatroid representations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check axioms and structural properties of a greedoid fixture.
    Check {
        fixture: PathBuf,
        /// Comma-separated properties to check.
        #[arg(long, value_delimiter = ',', default_values_t = [Prop::Normal, Prop::Interval, Prop::Optimism])]
        props: Vec<Prop>,
    },
    /// Compute the flat lattice, report its structure, optionally export DOT.
    Lattice {
        fixture: PathBuf,
        /// Write a Hasse-diagram DOT file here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check a rank-table fixture against a greedoid fixture.
    Rep {
        greedoid: PathBuf,
        rank: PathBuf,
        /// Comma-separated checks to run.
        #[arg(long = "check", value_delimiter = ',', default_values_t = [RepCheck::Representation, RepCheck::Aligned, RepCheck::Galois])]
        checks: Vec<RepCheck>,
    },
    /// Audit the five-condition equivalence on one loop-free greedoid.
    Audit {
        fixture: PathBuf,
        /// Write the instance as a counterexample fixture here when an
        /// implication is violated.
        #[arg(long)]
        emit_counterexample: Option<PathBuf>,
        /// Write a tab-separated machine-readable report here.
        #[arg(long)]
        tsv: Option<PathBuf>,
    },
    /// Audit every loop-free greedoid over a small alphabet.
    Survey {
        /// Alphabet size (at most 4).
        letters: usize,
        /// Directory for counterexample fixtures.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Write the tab-separated report here.
        #[arg(long)]
        tsv: Option<PathBuf>,
    },
    /// Build a greedoid fixture and print it to standard output.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Run the weighted greedy chooser and print the resulting basic word.
    Greedy {
        fixture: PathBuf,
        /// Letter weights like `a=3,b=1/2`; every letter once. Defaults to
        /// weight 1 everywhere (least-letter-first).
        #[arg(long)]
        weights: Option<String>,
    },
    /// Export DOT renderings of lattices and rank-function adjunctions.
    Export {
        #[command(subcommand)]
        kind: ExportKind,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Prop {
    /// No loops (every letter occurs in some feasible set).
    Normal,
    /// Feasible extensions interpolate across nested feasible sets.
    Interval,
    /// Every non-loop letter continues some prefix of every basic word.
    Optimism,
    /// Loop-free with union-closed feasible sets.
    Antimatroid,
}

impl std::fmt::Display for Prop {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Prop::Normal => "normal",
            Prop::Interval => "interval",
            Prop::Optimism => "optimism",
            Prop::Antimatroid => "antimatroid",
        })
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum RepCheck {
    /// The rank function's unit-increment family equals the feasible family.
    Representation,
    /// Representation whose rank is blind outside kernels and never takes a
    /// fractional step on feasible sets.
    Aligned,
    /// The adjoint pair between flats and closed sets, with certificates.
    Galois,
}

impl std::fmt::Display for RepCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RepCheck::Representation => "representation",
            RepCheck::Aligned => "aligned",
            RepCheck::Galois => "galois",
        })
    }
}

#[derive(Subcommand)]
enum ConstructKind {
    /// Branching greedoid of a rooted graph: edge sets forming a tree
    /// through the root.
    Ubg { graph: PathBuf },
    /// Antimatroid of a poset: feasible sets are the lower sets.
    PosetAnti { poset: PathBuf },
    /// Project every word of an antimatroid through a matroid, keeping the
    /// letters that raise its rank.
    Trim {
        matroid: PathBuf,
        antimatroid: PathBuf,
    },
}

#[derive(Subcommand)]
enum ExportKind {
    /// Hasse diagram of the flat lattice.
    Lattice {
        greedoid: PathBuf,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-cluster diagram of the flat/closed-set adjunction.
    Galois {
        greedoid: PathBuf,
        rank: PathBuf,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Check { fixture, props } => run_check(&fixture, &props),
        Command::Lattice { fixture, dot } => run_lattice(&fixture, dot.as_deref()),
        Command::Rep { greedoid, rank, checks } => run_rep(&greedoid, &rank, &checks),
        Command::Audit { fixture, emit_counterexample, tsv } => {
            run_audit(&fixture, emit_counterexample.as_deref(), tsv.as_deref())
        }
        Command::Survey { letters, fixtures, tsv } => {
            run_survey(letters, fixtures, tsv.as_deref())
        }
        Command::Construct { kind } => run_construct(kind),
        Command::Greedy { fixture, weights } => run_greedy(&fixture, weights.as_deref()),
        Command::Export { kind } => run_export(kind),
    }
}

/// Word/enumeration cap: the environment override, or the library default.
fn env_budget() -> Result<Option<usize>> {
    match std::env::var("GREEDOID_LAB_BUDGET") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| anyhow!("GREEDOID_LAB_BUDGET must be a positive integer, got `{v}`")),
        Err(_) => Ok(None),
    }
}

fn load(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_greedoid(path: &Path) -> Result<Greedoid> {
    parse_greedoid(&load(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn emit(report: &PropertyReport) -> bool {
    print!("{report}");
    report.verdict() == Some(true)
}

fn run_check(fixture: &Path, props: &[Prop]) -> Result<bool> {
    let g = load_greedoid(fixture)?;
    let budget = env_budget()?.unwrap_or(DEFAULT_WORD_BUDGET);
    let alphabet = g.alphabet().clone();
    let mut report = PropertyReport::new();
    for prop in props {
        match prop {
            Prop::Normal => {
                if g.is_normal() {
                    report.pass("normal");
                } else {
                    report.fail("normal", format!("loops {}", alphabet.set_string(g.loops())));
                }
            }
            Prop::Interval => match interval_violation(&g) {
                None => report.pass("interval"),
                Some(v) => report.fail(
                    "interval",
                    format!(
                        "{} ⊆ {} ⊆ {} and letter {} extend the ends but not the middle",
                        alphabet.set_string(v.lower),
                        alphabet.set_string(v.middle),
                        alphabet.set_string(v.upper),
                        alphabet.name(v.letter)
                    ),
                ),
            },
            Prop::Optimism => match optimism_violation(&g, budget) {
                Err(e) => report.unknown("optimism", e.to_string()),
                Ok(None) => report.pass("optimism"),
                Ok(Some(v)) => report.fail(
                    "optimism",
                    format!(
                        "letter {} never continues any prefix of the basic word {}",
                        alphabet.name(v.letter),
                        alphabet.word_string(&v.word)
                    ),
                ),
            },
            Prop::Antimatroid => match antimatroid_violation(&g) {
                None => report.pass("antimatroid"),
                Some(v) => report.fail("antimatroid", v.describe(&alphabet)),
            },
        }
    }
    Ok(emit(&report))
}

fn run_lattice(fixture: &Path, dot: Option<&Path>) -> Result<bool> {
    let g = load_greedoid(fixture)?;
    let alphabet = g.alphabet().clone();
    let lattice = match compute_flats(&g) {
        Ok(lattice) => lattice,
        Err(e) => {
            println!("[FAIL] lattice — {e}");
            return Ok(false);
        }
    };
    for (i, flat) in lattice.flats().iter().enumerate() {
        println!(
            "flat {i}: kernel {} rank {} ({} member{})",
            alphabet.set_string(flat.kernel()),
            flat.rank(),
            flat.members().len(),
            if flat.members().len() == 1 { "" } else { "s" }
        );
    }
    let mut report = PropertyReport::new();
    match semimodularity_violation(&lattice) {
        None => report.pass("semimodular"),
        Some((a, b)) => report.fail(
            "semimodular",
            format!(
                "flats with kernels {} and {} cover their meet but their join rises too far",
                alphabet.set_string(a),
                alphabet.set_string(b)
            ),
        ),
    }
    match kernels_intersection_violation(&lattice) {
        None => report.pass("kernels-intersection-closed"),
        Some((a, b)) => report.fail(
            "kernels-intersection-closed",
            format!(
                "{} ∩ {} is no kernel",
                alphabet.set_string(a),
                alphabet.set_string(b)
            ),
        ),
    }
    if is_interval(&g) {
        match forking_violation(&g, &lattice) {
            None => report.pass("forking"),
            Some(v) => report.fail(
                "forking",
                format!(
                    "member {} of the meet of kernels {} and {} extends by {} below only one side",
                    alphabet.set_string(v.member),
                    alphabet.set_string(v.first),
                    alphabet.set_string(v.second),
                    alphabet.name(v.letter)
                ),
            ),
        }
    }
    let ok = emit(&report);
    if let Some(path) = dot {
        fs::write(path, lattice_dot(&g, &lattice))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(ok)
}

/// Validate the table; on failure print the axiom witness and return None.
fn promote(table: greedoid_core::polymatroid::RankTable) -> (Option<Polymatroid>, PropertyReport) {
    let mut report = PropertyReport::new();
    let alphabet = table.alphabet().clone();
    match table.validate() {
        Ok(poly) => {
            report.pass("rank-axioms");
            (Some(poly), report)
        }
        Err(v) => {
            report.fail("rank-axioms", v.describe(&alphabet));
            (None, report)
        }
    }
}

fn run_rep(greedoid: &Path, rank: &Path, checks: &[RepCheck]) -> Result<bool> {
    let g = load_greedoid(greedoid)?;
    let table = parse_rank(&load(rank)?).map_err(|e| anyhow!("{}: {e}", rank.display()))?;
    if table.alphabet() != g.alphabet() {
        bail!(
            "{} and {} use different alphabets",
            greedoid.display(),
            rank.display()
        );
    }
    let alphabet = g.alphabet().clone();
    let (poly, mut report) = promote(table);
    let Some(poly) = poly else {
        return Ok(emit(&report));
    };
    for check in checks {
        match check {
            RepCheck::Representation => match representation_violation(&poly, &g) {
                None => report.pass("representation"),
                Some(w) => report.fail(
                    "representation",
                    format!(
                        "the families first differ at {} ({} the greedoid)",
                        alphabet.set_string(w),
                        if g.is_feasible(w) { "feasible in" } else { "infeasible in" }
                    ),
                ),
            },
            RepCheck::Aligned => match alignment_violation(&poly, &g) {
                None => report.pass("aligned"),
                Some(v) => report.fail("aligned", v.describe(&alphabet)),
            },
            RepCheck::Galois => match check_galois(&poly, &g) {
                Err(e) => report.fail("galois", e.to_string()),
                Ok(pair) => report.checks.extend(pair.report().checks),
            },
        }
    }
    Ok(emit(&report))
}

fn run_audit(fixture: &Path, emit_dir: Option<&Path>, tsv: Option<&Path>) -> Result<bool> {
    let g = load_greedoid(fixture)?;
    if !g.is_normal() {
        println!(
            "[FAIL] normal — the audit needs a loop-free greedoid; loops {}",
            g.alphabet().set_string(g.loops())
        );
        return Ok(false);
    }
    let mut options = AuditOptions::default();
    if let Some(budget) = env_budget()? {
        options.word_budget = budget;
    }
    let matrix = audit_corollary(&g, &options);
    print!("{matrix}");
    let violations = matrix.violations();
    if let Some(path) = tsv {
        let mut text = String::new();
        for (i, item) in matrix.items.iter().enumerate() {
            let status = match item.status {
                Some(true) => "holds",
                Some(false) => "fails",
                None => "unknown",
            };
            text.push_str(&format!("item\t{}\t{status}\t{}\n", i + 1, item.detail));
        }
        for (i, j) in &violations {
            text.push_str(&format!("violation\t{}\t{}\n", i + 1, j + 1));
        }
        fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    if let Some(dir) = emit_dir {
        if !violations.is_empty() {
            fs::create_dir_all(dir)
                .with_context(|| format!("cannot create {}", dir.display()))?;
            let stem = fixture
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("instance");
            let path = dir.join(format!("{stem}-counterexample.greedoid"));
            let mut text = String::new();
            for line in matrix.to_string().lines() {
                text.push_str("# ");
                text.push_str(line);
                text.push('\n');
            }
            text.push_str(&render_greedoid(&g));
            fs::write(&path, text)
                .with_context(|| format!("cannot write {}", path.display()))?;
            println!("counterexample fixture written to {}", path.display());
        }
    }
    Ok(violations.is_empty())
}

fn run_survey(letters: usize, fixtures: Option<PathBuf>, tsv: Option<&Path>) -> Result<bool> {
    if letters > greedoid_core::enumerate::ENUMERATION_LETTER_CAP {
        bail!(
            "survey supports at most {} letters",
            greedoid_core::enumerate::ENUMERATION_LETTER_CAP
        );
    }
    let mut options = SurveyOptions { fixture_dir: fixtures, ..Default::default() };
    if let Some(budget) = env_budget()? {
        options.audit.word_budget = budget;
        options.enumeration_budget = Some(budget);
    }
    let report = survey(letters, &options)?;
    print!("{}", report.render_table());
    if let Some(path) = tsv {
        fs::write(path, report.render_tsv())
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(report.forking_failures == 0)
}

fn run_construct(kind: ConstructKind) -> Result<bool> {
    match kind {
        ConstructKind::Ubg { graph } => {
            let graph = parse_graph(&load(&graph)?).map_err(|e| anyhow!("{}: {e}", graph.display()))?;
            print!("{}", render_greedoid(&ubg(&graph)));
            Ok(true)
        }
        ConstructKind::PosetAnti { poset } => {
            let poset = parse_poset(&load(&poset)?).map_err(|e| anyhow!("{}: {e}", poset.display()))?;
            print!("{}", render_greedoid(&poset_antimatroid(&poset)));
            Ok(true)
        }
        ConstructKind::Trim { matroid, antimatroid } => {
            let m = load_greedoid(&matroid)?;
            let a = load_greedoid(&antimatroid)?;
            if m.alphabet() != a.alphabet() {
                bail!(
                    "{} and {} use different alphabets",
                    matroid.display(),
                    antimatroid.display()
                );
            }
            match trim(&m, &a) {
                Ok(trimmed) => {
                    print!("{}", render_greedoid(&trimmed));
                    Ok(true)
                }
                Err(e) => {
                    println!("[FAIL] trim — {e}");
                    Ok(false)
                }
            }
        }
    }
}

fn parse_weight(text: &str) -> Option<Rat> {
    match text.split_once('/') {
        None => text.trim().parse::<i64>().ok().map(Rat::from_integer),
        Some((p, q)) => {
            let p = p.trim().parse::<i64>().ok()?;
            let q = q.trim().parse::<i64>().ok()?;
            (q != 0).then(|| Rat::new(p, q))
        }
    }
}

fn run_greedy(fixture: &Path, weights: Option<&str>) -> Result<bool> {
    let g = load_greedoid(fixture)?;
    if !g.is_normal() {
        println!(
            "[FAIL] normal — greedy selection needs a loop-free greedoid; loops {}",
            g.alphabet().set_string(g.loops())
        );
        return Ok(false);
    }
    let alphabet = g.alphabet().clone();
    let w = match weights {
        None => WeightFunction::constant(alphabet.clone(), Rat::from_integer(1)),
        Some(list) => {
            let mut values: Vec<Option<Rat>> = vec![None; alphabet.len()];
            for entry in list.split(',') {
                let (name, value) = entry
                    .split_once('=')
                    .ok_or_else(|| anyhow!("expected `letter=value`, got `{entry}`"))?;
                let id = alphabet
                    .index_of(name.trim())
                    .ok_or_else(|| anyhow!("unknown letter `{}`", name.trim()))?;
                let value = parse_weight(value)
                    .ok_or_else(|| anyhow!("bad weight `{value}` for letter `{}`", name.trim()))?;
                if values[id as usize].replace(value).is_some() {
                    bail!("letter `{}` weighted twice", name.trim());
                }
            }
            let values: Vec<Rat> = values
                .into_iter()
                .enumerate()
                .map(|(i, v)| {
                    v.ok_or_else(|| anyhow!("no weight for letter `{}`", alphabet.name(i as u8)))
                })
                .collect::<Result<_>>()?;
            WeightFunction::new(alphabet.clone(), values)
        }
    };
    println!("{}", alphabet.word_string(&greedy_basis(&g, &w)));
    Ok(true)
}

fn write_or_print(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_export(kind: ExportKind) -> Result<bool> {
    match kind {
        ExportKind::Lattice { greedoid, out } => {
            let g = load_greedoid(&greedoid)?;
            match compute_flats(&g) {
                Err(e) => {
                    println!("[FAIL] lattice — {e}");
                    Ok(false)
                }
                Ok(lattice) => {
                    write_or_print(&lattice_dot(&g, &lattice), out.as_deref())?;
                    Ok(true)
                }
            }
        }
        ExportKind::Galois { greedoid, rank, out } => {
            let g = load_greedoid(&greedoid)?;
            let table = parse_rank(&load(&rank)?).map_err(|e| anyhow!("{}: {e}", rank.display()))?;
            if table.alphabet() != g.alphabet() {
                bail!(
                    "{} and {} use different alphabets",
                    greedoid.display(),
                    rank.display()
                );
            }
            let (poly, report) = promote(table);
            let Some(poly) = poly else {
                return Ok(emit(&report));
            };
            match galois_dot(&poly, &g) {
                Err(e) => {
                    println!("[FAIL] galois — {e}");
                    Ok(false)
                }
                Ok(dot) => {
                    write_or_print(&dot, out.as_deref())?;
                    Ok(true)
                }
            }
        }
    }
}

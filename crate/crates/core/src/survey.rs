//! Corpus-level audit: enumerate every normal greedoid over a small alphabet
//! (one per relabeling class), audit the five-way equivalence on each,
//! aggregate the implication matrix, and persist a re-validating fixture for
//! every violated implication. The aggregate is a finding, not an assertion:
//! whichever way an implication falls, the report records it.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::analysis::is_interval;
use crate::enumerate::{enumerate_greedoids, BudgetExceeded, EnumerateOptions};
use crate::fixture::{parse_greedoid, render_greedoid};
use crate::flats::{compute_flats, forking_violation};
use crate::greatest::{
    audit_corollary, AuditOptions, EquivalenceMatrix, ImplicationStatus, ITEM_LABELS,
};
use crate::system::Greedoid;

#[derive(Debug, Error)]
pub enum SurveyError {
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("could not persist a counterexample fixture: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Default)]
pub struct SurveyOptions {
    pub audit: AuditOptions,
    /// Cap on the number of families the enumerator may generate.
    pub enumeration_budget: Option<usize>,
    /// Directory for counterexample fixtures; nothing is written when absent.
    pub fixture_dir: Option<PathBuf>,
}

/// Yes/no/undecided counts for one audited statement over the corpus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub holds: usize,
    pub fails: usize,
    pub unknown: usize,
}

impl Tally {
    fn add(&mut self, status: Option<bool>) {
        match status {
            Some(true) => self.holds += 1,
            Some(false) => self.fails += 1,
            None => self.unknown += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.holds + self.fails + self.unknown
    }
}

/// One violated implication, tied to the corpus instance that produced it.
#[derive(Debug, Clone)]
pub struct Counterexample {
    /// Position of the instance in the survey's enumeration order.
    pub index: usize,
    /// Zero-based item indices: `from_item` held while `to_item` failed.
    pub from_item: usize,
    pub to_item: usize,
    /// Fixture file, when a directory was configured.
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct CorpusReport {
    pub letters: usize,
    /// Normal greedoids audited (one per relabeling class).
    pub audited: usize,
    pub interval: usize,
    /// Interval instances put through the forking check; failures here point
    /// at implementation bugs, not findings.
    pub forking_checked: usize,
    pub forking_failures: usize,
    pub items: [Tally; 5],
    /// implications[i][j] aggregates "item i ⇒ item j" over the corpus.
    pub implications: [[Tally; 5]; 5],
    pub counterexamples: Vec<Counterexample>,
}

struct InstanceOutcome {
    matrix: EquivalenceMatrix,
    interval: bool,
    /// None when the instance is not interval; otherwise whether the forking
    /// check passed (a lattice that fails to build counts as a failure).
    forking: Option<bool>,
}

fn audit_instance(g: &Greedoid, options: &AuditOptions) -> InstanceOutcome {
    let matrix = audit_corollary(g, options);
    let interval = is_interval(g);
    let forking = if interval {
        Some(match compute_flats(g) {
            Ok(lattice) => forking_violation(g, &lattice).is_none(),
            Err(_) => false,
        })
    } else {
        None
    };
    InstanceOutcome { matrix, interval, forking }
}

fn write_counterexample(
    dir: &Path,
    letters: usize,
    index: usize,
    from_item: usize,
    to_item: usize,
    g: &Greedoid,
    matrix: &EquivalenceMatrix,
    options: &AuditOptions,
) -> Result<PathBuf, SurveyError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!(
        "n{letters}-g{index:04}-imp{}-{}.greedoid",
        from_item + 1,
        to_item + 1
    ));
    let mut text = format!(
        "# implication [{}] ⇒ [{}] violated on corpus instance {index}\n",
        from_item + 1,
        to_item + 1
    );
    for line in matrix.to_string().lines() {
        text.push_str("# ");
        text.push_str(line);
        text.push('\n');
    }
    text.push_str(&render_greedoid(g));
    fs::write(&path, &text)?;

    // The fixture must reproduce the recorded failure bit for bit; anything
    // else is a bug, not a finding.
    let reread = parse_greedoid(&fs::read_to_string(&path)?)
        .expect("counterexample fixtures re-validate");
    assert_eq!(
        reread.feasible(),
        g.feasible(),
        "counterexample fixture round-trips to the same family"
    );
    assert_eq!(
        audit_corollary(&reread, options).to_string(),
        matrix.to_string(),
        "counterexample fixture reproduces the recorded audit"
    );
    Ok(path)
}

/// Audit the whole corpus of normal greedoids over n letters. Instances are
/// audited in parallel; results merge in enumeration order, so the report
/// and any fixture files are deterministic.
pub fn survey(n: usize, options: &SurveyOptions) -> Result<CorpusReport, SurveyError> {
    let corpus = enumerate_greedoids(
        n,
        &EnumerateOptions {
            normal_only: true,
            dedup: true,
            budget: options.enumeration_budget,
        },
    )?;
    let outcomes: Vec<InstanceOutcome> = corpus
        .par_iter()
        .map(|g| audit_instance(g, &options.audit))
        .collect();

    let mut report = CorpusReport {
        letters: n,
        audited: corpus.len(),
        interval: 0,
        forking_checked: 0,
        forking_failures: 0,
        items: [Tally::default(); 5],
        implications: [[Tally::default(); 5]; 5],
        counterexamples: Vec::new(),
    };
    for (index, (g, outcome)) in corpus.iter().zip(&outcomes).enumerate() {
        if outcome.interval {
            report.interval += 1;
        }
        match outcome.forking {
            Some(ok) => {
                report.forking_checked += 1;
                if !ok {
                    report.forking_failures += 1;
                }
            }
            None => {}
        }
        for (i, item) in outcome.matrix.items.iter().enumerate() {
            report.items[i].add(item.status);
        }
        for i in 0..5 {
            for j in 0..5 {
                report.implications[i][j].add(match outcome.matrix.implications[i][j] {
                    ImplicationStatus::Holds => Some(true),
                    ImplicationStatus::Violated => Some(false),
                    ImplicationStatus::Unknown => None,
                });
            }
        }
        for (i, j) in outcome.matrix.violations() {
            let path = match &options.fixture_dir {
                Some(dir) => Some(write_counterexample(
                    dir,
                    n,
                    index,
                    i,
                    j,
                    g,
                    &outcome.matrix,
                    &options.audit,
                )?),
                None => None,
            };
            report.counterexamples.push(Counterexample {
                index,
                from_item: i,
                to_item: j,
                path,
            });
        }
    }
    Ok(report)
}

impl CorpusReport {
    /// Aligned, human-readable summary.
    pub fn render_table(&self) -> String {
        let mut out = format!(
            "survey over {} letters: {} normal greedoids (one per relabeling class)\n",
            self.letters, self.audited
        );
        out.push_str(&format!(
            "interval: {} of {}; forking checked on {}, failures: {}\n\n",
            self.interval, self.audited, self.forking_checked, self.forking_failures
        ));
        out.push_str(&format!(
            "{:<56} {:>6} {:>6} {:>8}\n",
            "item", "holds", "fails", "unknown"
        ));
        for (i, tally) in self.items.iter().enumerate() {
            out.push_str(&format!(
                "{:<56} {:>6} {:>6} {:>8}\n",
                format!("[{}] {}", i + 1, ITEM_LABELS[i]),
                tally.holds,
                tally.fails,
                tally.unknown
            ));
        }
        out.push_str("\nimplications, row ⇒ column (holds/violated/unknown):\n");
        out.push_str("     ");
        for j in 0..5 {
            out.push_str(&format!("{:>12}", format!("[{}]", j + 1)));
        }
        out.push('\n');
        for i in 0..5 {
            out.push_str(&format!("[{}]  ", i + 1));
            for j in 0..5 {
                let cell = if i == j {
                    "—".to_string()
                } else {
                    let t = self.implications[i][j];
                    format!("{}/{}/{}", t.holds, t.fails, t.unknown)
                };
                out.push_str(&format!("{cell:>12}"));
            }
            out.push('\n');
        }
        if self.counterexamples.is_empty() {
            out.push_str("\nno violated implications\n");
        } else {
            out.push_str("\ncounterexamples:\n");
            for c in &self.counterexamples {
                let path = c
                    .path
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_else(|| "(not persisted)".to_string());
                out.push_str(&format!(
                    "  [{}] holds but [{}] fails on instance {} — {}\n",
                    c.from_item + 1,
                    c.to_item + 1,
                    c.index,
                    path
                ));
            }
        }
        out
    }

    /// Line-oriented machine-readable form: one finding per line, fields
    /// separated by tabs.
    pub fn render_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("survey\tletters\t{}\n", self.letters));
        out.push_str(&format!("survey\taudited\t{}\n", self.audited));
        out.push_str(&format!("survey\tinterval\t{}\n", self.interval));
        out.push_str(&format!("survey\tforking_checked\t{}\n", self.forking_checked));
        out.push_str(&format!("survey\tforking_failures\t{}\n", self.forking_failures));
        for (i, t) in self.items.iter().enumerate() {
            out.push_str(&format!(
                "item\t{}\t{}\t{}\t{}\n",
                i + 1,
                t.holds,
                t.fails,
                t.unknown
            ));
        }
        for i in 0..5 {
            for j in 0..5 {
                if i == j {
                    continue;
                }
                let t = self.implications[i][j];
                out.push_str(&format!(
                    "implication\t{}\t{}\t{}\t{}\t{}\n",
                    i + 1,
                    j + 1,
                    t.holds,
                    t.fails,
                    t.unknown
                ));
            }
        }
        for c in &self.counterexamples {
            let path = c
                .path
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_else(|| "-".to_string());
            out.push_str(&format!(
                "counterexample\t{}\t{}\t{}\t{}\n",
                c.from_item + 1,
                c.to_item + 1,
                c.index,
                path
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_corpora_hold_everywhere() {
        for n in [0, 1] {
            let report = survey(n, &SurveyOptions::default()).unwrap();
            assert_eq!(report.audited, 1, "n = {n}");
            assert!(report.counterexamples.is_empty());
            for i in 0..5 {
                assert_eq!(report.items[i].holds, 1);
            }
        }
    }

    #[test]
    fn two_letter_corpus_is_clean() {
        let report = survey(2, &SurveyOptions::default()).unwrap();
        assert_eq!(report.audited, 3);
        assert_eq!(report.forking_failures, 0);
        assert!(report.counterexamples.is_empty());
        let table = report.render_table();
        assert!(table.contains("3 normal greedoids"));
        assert!(table.contains("no violated implications"));
    }

    #[test]
    fn three_letter_corpus_is_structurally_consistent() {
        let dir = tempfile::tempdir().unwrap();
        let options = SurveyOptions {
            fixture_dir: Some(dir.path().to_path_buf()),
            ..Default::default()
        };
        let report = survey(3, &options).unwrap();
        assert!(report.audited > 3);
        assert_eq!(report.forking_failures, 0);
        for i in 0..5 {
            assert_eq!(report.items[i].total(), report.audited);
            for j in 0..5 {
                assert_eq!(report.implications[i][j].total(), report.audited);
                if i == j {
                    assert_eq!(report.implications[i][j].holds, report.audited);
                }
            }
        }
        // Tallies and counterexample records agree.
        let violated: usize = (0..5)
            .flat_map(|i| (0..5).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j)
            .map(|(i, j)| report.implications[i][j].fails)
            .sum();
        assert_eq!(violated, report.counterexamples.len());
        // Every persisted counterexample file exists (the writer already
        // re-validated it against the recorded audit).
        for c in &report.counterexamples {
            let path = c.path.as_ref().expect("a fixture directory was configured");
            assert!(path.exists());
        }
        let tsv = report.render_tsv();
        assert_eq!(tsv.lines().count(), 5 + 5 + 20 + report.counterexamples.len());
    }

    #[test]
    fn enumeration_budget_propagates() {
        let options = SurveyOptions {
            enumeration_budget: Some(2),
            ..Default::default()
        };
        assert!(matches!(
            survey(2, &options).unwrap_err(),
            SurveyError::Budget(_)
        ));
    }
}

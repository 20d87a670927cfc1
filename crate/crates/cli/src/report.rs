//! Reports and their JSON and text renderings. Every probability is an
//! exact fraction string.

use std::fmt::Write as _;

use poset_rescue::game::{GameInstance, SolutionCertificate};
use poset_rescue::rational::{self, Rational};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchWeight {
    pub search: Vec<String>,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HideWeight {
    pub location: String,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub lower: String,
    pub upper: String,
    pub gap: String,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub value: String,
    pub method: String,
    pub searcher: Vec<SearchWeight>,
    pub hider: Vec<HideWeight>,
    pub certificate: Certificate,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Solution {
    pub fn new(
        game: &GameInstance,
        method: &str,
        cert: &SolutionCertificate,
        notes: Vec<String>,
    ) -> Solution {
        let poset = game.poset();
        Solution {
            value: fmt(&cert.value),
            method: method.to_string(),
            searcher: cert
                .searcher
                .entries()
                .iter()
                .map(|(s, w)| SearchWeight {
                    search: s.iter().map(|&x| poset.name(x).to_string()).collect(),
                    weight: fmt(w),
                })
                .collect(),
            hider: cert
                .hider
                .entries()
                .iter()
                .map(|(h, w)| HideWeight {
                    location: poset.name(*h).to_string(),
                    weight: fmt(w),
                })
                .collect(),
            certificate: Certificate {
                lower: fmt(&cert.lower),
                upper: fmt(&cert.upper),
                gap: fmt(&cert.gap),
                exact: cert.is_exact(),
            },
            notes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsEntry {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<String>,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub method: String,
    pub formula: String,
    pub oracle: String,
    pub equal: bool,
    /// Formula minus oracle.
    pub difference: String,
    /// Whether the formula's preconditions hold for this instance.
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub elements: Vec<String>,
    pub variant: String,
    pub minima: Vec<String>,
    pub maxima: Vec<String>,
    pub width: usize,
    pub chain_cover: Vec<Vec<String>>,
    pub maximal_antichains: Option<Vec<Vec<String>>>,
    pub unordered: bool,
    pub total_order: bool,
    pub ordinal_stages: Option<Vec<Vec<String>>>,
    pub maxima_dominate: bool,
    pub model: String,
    pub correlation_class: Option<String>,
    pub reducible: Option<bool>,
    pub tree: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Simulation {
    pub method: String,
    pub seed: u64,
    pub rounds: u64,
    pub wins: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub exact_value: String,
    pub within_three_se: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trial {
    pub index: usize,
    pub leaves: usize,
    pub tree: String,
    pub backjump: String,
    pub oracle: String,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conjecture {
    pub seed: u64,
    pub trials: usize,
    pub min_leaves: usize,
    pub max_leaves: usize,
    pub matches: usize,
    pub mismatches: Vec<usize>,
    pub skipped: Vec<usize>,
    pub records: Vec<Trial>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<Trial>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Report {
    Solve(Solution),
    Bounds {
        bounds: Vec<BoundsEntry>,
    },
    Oracle(Solution),
    Check {
        checks: Vec<CheckEntry>,
        notes: Vec<String>,
    },
    Analyze(Analysis),
    Simulate(Simulation),
    Conjecture(Conjecture),
}

pub fn fmt(v: &Rational) -> String {
    rational::format(v)
}

pub fn render_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(report).expect("reports always serialize"),
        Format::Text => render_text(report),
    }
}

fn table(out: &mut String, head: (&str, &str), rows: impl Iterator<Item = (String, String)>) {
    let rows: Vec<_> = rows.collect();
    let w = rows
        .iter()
        .map(|r| r.0.len())
        .chain([head.0.len()])
        .max()
        .unwrap_or(0);
    let _ = writeln!(out, "  {:<w$}  {}", head.0, head.1);
    for (a, b) in rows {
        let _ = writeln!(out, "  {a:<w$}  {b}");
    }
}

fn render_solution(out: &mut String, s: &Solution) {
    let _ = writeln!(out, "value: {} ({})", s.value, s.method);
    let c = &s.certificate;
    let _ = writeln!(
        out,
        "certificate: lower {}, upper {}, gap {}{}",
        c.lower,
        c.upper,
        c.gap,
        if c.exact { " (exact)" } else { "" }
    );
    out.push_str("searcher:\n");
    table(
        out,
        ("weight", "search"),
        s.searcher
            .iter()
            .map(|e| (e.weight.clone(), e.search.join(" "))),
    );
    out.push_str("hider:\n");
    table(
        out,
        ("weight", "location"),
        s.hider
            .iter()
            .map(|e| (e.weight.clone(), e.location.clone())),
    );
    for n in &s.notes {
        let _ = writeln!(out, "note: {n}");
    }
}

fn names(v: &[String]) -> String {
    format!("{{{}}}", v.join(", "))
}

fn render_trial(out: &mut String, t: &Trial) {
    let _ = writeln!(
        out,
        "  #{:<4} {} leaves  backjump {}  oracle {}  {}  {}",
        t.index,
        t.leaves,
        t.backjump,
        t.oracle,
        if t.equal { "equal" } else { "DIFFERENT" },
        t.tree
    );
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Solve(s) | Report::Oracle(s) => render_solution(&mut out, s),
        Report::Bounds { bounds } => {
            if bounds.is_empty() {
                out.push_str("no applicable bounds\n");
            }
            for b in bounds {
                let _ = writeln!(
                    out,
                    "{}: [{}, {}] ({})",
                    b.name,
                    b.lower.as_deref().unwrap_or("0"),
                    b.upper.as_deref().unwrap_or("1"),
                    b.source
                );
            }
        }
        Report::Check { checks, notes } => {
            for c in checks {
                let verdict = if c.equal {
                    "match".to_string()
                } else {
                    format!("MISMATCH (difference {})", c.difference)
                };
                let scope = if c.certified {
                    ""
                } else {
                    " [outside proven scope]"
                };
                let _ = writeln!(
                    out,
                    "{}: formula {}, oracle {}, {verdict}{scope}",
                    c.method, c.formula, c.oracle
                );
            }
            if checks.is_empty() {
                out.push_str("no closed form applies\n");
            }
            for n in notes {
                let _ = writeln!(out, "note: {n}");
            }
        }
        Report::Analyze(a) => {
            let _ = writeln!(out, "elements: {} ({})", names(&a.elements), a.variant);
            let _ = writeln!(out, "minima: {}", names(&a.minima));
            let _ = writeln!(out, "maxima: {}", names(&a.maxima));
            let chains: Vec<String> = a.chain_cover.iter().map(|c| c.join(" < ")).collect();
            let _ = writeln!(out, "width: {} via chains {}", a.width, chains.join(" | "));
            match &a.maximal_antichains {
                Some(list) => {
                    let _ = writeln!(
                        out,
                        "maximal antichains: {}",
                        list.iter().map(|s| names(s)).collect::<Vec<_>>().join(" ")
                    );
                }
                None => out.push_str("maximal antichains: too many elements to list\n"),
            }
            let _ = writeln!(
                out,
                "unordered: {}, total order: {}",
                a.unordered, a.total_order
            );
            if let Some(stages) = &a.ordinal_stages {
                let _ = writeln!(
                    out,
                    "ordinal stages: {}",
                    stages
                        .iter()
                        .map(|s| names(s))
                        .collect::<Vec<_>>()
                        .join(" < ")
                );
            }
            let _ = writeln!(
                out,
                "every non-maximum below every maximum: {}",
                a.maxima_dominate
            );
            let _ = writeln!(out, "model: {}", a.model);
            if let Some(c) = &a.correlation_class {
                let _ = writeln!(out, "correlation: {c}");
            }
            if let Some(r) = a.reducible {
                let _ = writeln!(out, "completely reducible: {r}");
            }
            if let Some(t) = &a.tree {
                let _ = writeln!(out, "tree: {t}");
            }
        }
        Report::Simulate(s) => {
            let _ = writeln!(out, "strategies: {}", s.method);
            let _ = writeln!(
                out,
                "rounds: {} (seed {}), wins: {}",
                s.rounds, s.seed, s.wins
            );
            let _ = writeln!(out, "estimate: {:.6} ± {:.6}", s.estimate, s.std_error);
            let _ = writeln!(
                out,
                "exact value: {} ({})",
                s.exact_value,
                if s.within_three_se {
                    "within 3 standard errors"
                } else {
                    "OUTSIDE 3 standard errors"
                }
            );
        }
        Report::Conjecture(c) => {
            let _ = writeln!(
                out,
                "seed {}, {} trials, {}..={} leaves: {} equal, {} different, {} skipped",
                c.seed,
                c.trials,
                c.min_leaves,
                c.max_leaves,
                c.matches,
                c.mismatches.len(),
                c.skipped.len()
            );
            if let Some(t) = &c.instance {
                out.push_str("instance:\n");
                render_trial(&mut out, t);
            }
            for t in c.records.iter().filter(|t| !t.equal) {
                render_trial(&mut out, t);
            }
        }
    }
    out
}

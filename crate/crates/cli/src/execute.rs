//! Command dispatch.

use num_traits::Zero;
use poset_rescue::correlated::{
    backjump_value, conjecture_scan, reducible_upper_bound, correlated_bounds, describe_tree,
    solve_csr_star, solve_osr3_total, solve_osr_independent_last, solve_tree_game,
};
use poset_rescue::game::{solve_oracle_with_limit, GameInstance, SolutionCertificate};
use poset_rescue::model::{correlation_class, to_pseudo_bayes_tree, CorrelationClass};
use poset_rescue::rational::to_f64;
use poset_rescue::simulate::simulate;
use poset_rescue::uncorrelated::{
    bounds, solve_csr, solve_multistage, solve_osr_maxima, solve_total_order, solve_unordered,
};
use poset_rescue::{
    Error, IndependentModel, Poset, ProbabilityModel, PseudoBayesTree, Rational, Subset, Variant,
};

use crate::error::CliError;
use crate::gamefile::ParsedGame;
use crate::report::{
    fmt, Analysis, BoundsEntry, CheckEntry, Conjecture, Report, Simulation, Solution, Trial,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Solve,
    Bounds,
    Oracle,
    Check,
    Analyze,
    Simulate,
    Conjecture,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flags {
    pub seed: u64,
    pub rounds: u64,
    pub max_elements: usize,
    pub trials: usize,
    pub min_leaves: usize,
    pub max_leaves: usize,
}

impl Default for Flags {
    fn default() -> Flags {
        Flags {
            seed: 1,
            rounds: 100_000,
            max_elements: 10,
            trials: 50,
            min_leaves: 3,
            max_leaves: 4,
        }
    }
}

/// A closed-form answer; `certified` is false when the formula was
/// evaluated outside the conditions under which it is known to hold.
struct Candidate {
    method: &'static str,
    value: Rational,
    certificate: SolutionCertificate,
    certified: bool,
    notes: Vec<String>,
}

impl Candidate {
    fn exact(method: &'static str, cert: SolutionCertificate) -> Candidate {
        Candidate {
            method,
            value: cert.value.clone(),
            certified: cert.is_exact(),
            certificate: cert,
            notes: vec![],
        }
    }
}

type Attempt = fn(&ParsedGame, &GameInstance) -> Option<poset_rescue::Result<Candidate>>;

/// The game with an explicit independent model, if its model is independent.
fn independent_view(game: &GameInstance) -> Option<GameInstance> {
    match game.model() {
        ProbabilityModel::Independent(_) => Some(game.clone()),
        m => match correlation_class(m) {
            Ok(CorrelationClass::Independent) => {
                let model = IndependentModel::new(m.marginals()).ok()?;
                GameInstance::new(game.poset().clone(), model.into(), game.variant()).ok()
            }
            _ => None,
        },
    }
}

const INDEPENDENT: &[Attempt] = &[
    |_, g| {
        g.poset()
            .is_unordered()
            .then(|| solve_unordered(g).map(|c| Candidate::exact("unordered closed form", c)))
    },
    |_, g| {
        (g.poset().is_total_order() && !g.poset().is_unordered())
            .then(|| solve_total_order(g).map(|c| Candidate::exact("total order closed form", c)))
    },
    |p, g| {
        let detected = g
            .poset()
            .ordinal_stages()
            .filter(|s| s.len() >= 2 && s.iter().any(|s| s.len() >= 2));
        (p.stages.is_some() || detected.is_some()).then(|| {
            solve_multistage(g, p.stages.as_deref())
                .map(|c| Candidate::exact("multistage closed form", c))
        })
    },
    |_, g| {
        (g.variant() == Variant::Csr)
            .then(|| solve_csr(g).map(|c| Candidate::exact("maximal antichain flow", c)))
    },
    |_, g| {
        (g.variant() == Variant::Osr).then(|| {
            solve_osr_maxima(g).map(|m| {
                let certified = m.certified();
                Candidate {
                    method: "maxima formula",
                    value: m.value,
                    certificate: m.certificate,
                    certified,
                    notes: vec![],
                }
            })
        })
    },
];

const CORRELATED: &[Attempt] = &[
    |_, g| {
        (g.variant() == Variant::Osr && g.poset().is_unordered()).then(|| {
            solve_tree_game(g).map(|s| Candidate::exact("depth-first tree game", s.certificate))
        })
    },
    |_, g| {
        (g.variant() == Variant::Osr && g.poset().is_total_order() && g.len() == 3).then(|| {
            solve_osr3_total(g).map(|s| {
                let note = format!(
                    "factor {}: rows {:?} predicted, rows {:?} used",
                    s.factor, s.predicted_support, s.lp_support
                );
                let mut c = Candidate::exact("three-chain factor", s.certificate);
                c.notes.push(note);
                c
            })
        })
    },
    |_, g| {
        (g.variant() == Variant::Csr
            && g.poset().maxima().len() == 1
            && !g.poset().is_total_order())
        .then(|| solve_csr_star(g).map(|c| Candidate::exact("star", c)))
    },
    |_, g| {
        (g.variant() == Variant::Osr && g.poset().is_total_order()).then(|| {
            solve_osr_independent_last(g).map(|c| Candidate::exact("independent last location", c))
        })
    },
];

/// Every applicable closed form, in dispatch order, plus notes on those
/// that were tried and declined.
fn closed_forms(parsed: &ParsedGame) -> (Vec<Candidate>, Vec<String>) {
    let mut found = Vec::new();
    let mut notes = Vec::new();
    let mut run = |attempts: &[Attempt], game: &GameInstance| {
        for attempt in attempts {
            match attempt(parsed, game) {
                Some(Ok(c)) => found.push(c),
                Some(Err(e)) => notes.push(e.to_string()),
                None => {}
            }
        }
    };
    if let Some(g) = independent_view(&parsed.game) {
        run(INDEPENDENT, &g);
    }
    run(CORRELATED, &parsed.game);
    (found, notes)
}

fn guard(game: &GameInstance, flags: &Flags) -> Result<(), CliError> {
    if game.len() > flags.max_elements {
        return Err(Error::SizeLimit {
            elements: game.len(),
            limit: flags.max_elements,
        }
        .into());
    }
    Ok(())
}

fn oracle(game: &GameInstance, flags: &Flags) -> Result<SolutionCertificate, CliError> {
    guard(game, flags)?;
    Ok(solve_oracle_with_limit(game, flags.max_elements)?)
}

/// Best certified closed form, else the oracle.
fn solve(
    parsed: &ParsedGame,
    flags: &Flags,
) -> Result<(String, SolutionCertificate, Vec<String>), CliError> {
    let (found, mut notes) = closed_forms(parsed);
    if let Some(c) = found.into_iter().find(|c| c.certified) {
        let mut all = c.notes;
        all.append(&mut notes);
        return Ok((c.method.to_string(), c.certificate, all));
    }
    notes.push("no certified closed form applies".into());
    Ok(("oracle".into(), oracle(&parsed.game, flags)?, notes))
}

fn names(poset: &Poset, set: Subset) -> Vec<String> {
    set.iter().map(|x| poset.name(x).to_string()).collect()
}

fn tree_of(model: &ProbabilityModel) -> Option<PseudoBayesTree> {
    match model {
        ProbabilityModel::Tree(t) => Some(t.clone()),
        m => to_pseudo_bayes_tree(m).ok(),
    }
}

fn bounds_report(parsed: &ParsedGame) -> Vec<BoundsEntry> {
    let game = &parsed.game;
    let mut out = Vec::new();
    if let Some(b) = independent_view(game).and_then(|g| bounds(&g).ok()) {
        out.push(BoundsEntry {
            name: "independent".into(),
            lower: Some(fmt(&b.lower)),
            upper: Some(fmt(&b.upper)),
            source: format!("{}; {}", b.lower_source, b.upper_source),
        });
    }
    if let Ok(b) = correlated_bounds(game) {
        out.push(BoundsEntry {
            name: "correlation class".into(),
            lower: Some(fmt(&b.lower)),
            upper: Some(fmt(&b.upper)),
            source: format!("{}; {}", b.lower_source, b.upper_source),
        });
    }
    if game.variant() == Variant::Osr {
        if let Some(u) = tree_of(game.model()).and_then(|t| reducible_upper_bound(&t).ok()) {
            out.push(BoundsEntry {
                name: "reducible model".into(),
                lower: None,
                upper: Some(fmt(&u)),
                source: "tree weights at most one".into(),
            });
        }
    }
    out
}

fn check(parsed: &ParsedGame, flags: &Flags) -> Result<Report, CliError> {
    let truth = oracle(&parsed.game, flags)?.value;
    let (found, notes) = closed_forms(parsed);
    let checks = found
        .into_iter()
        .map(|c| CheckEntry {
            method: c.method.to_string(),
            formula: fmt(&c.value),
            oracle: fmt(&truth),
            equal: c.value == truth,
            difference: fmt(&(&c.value - &truth)),
            certified: c.certified,
        })
        .collect();
    Ok(Report::Check { checks, notes })
}

fn analyze(parsed: &ParsedGame) -> Analysis {
    let game = &parsed.game;
    let poset = game.poset();
    let (width, chains) = poset.width_with_decomposition();
    let model = game.model();
    let class = correlation_class(model).ok();
    let tree = match class {
        Some(_) => tree_of(model),
        None => None,
    };
    Analysis {
        elements: poset.names().to_vec(),
        variant: game.variant().to_string(),
        minima: names(poset, poset.minima()),
        maxima: names(poset, poset.maxima()),
        width,
        chain_cover: chains
            .iter()
            .map(|c| c.iter().map(|&x| poset.name(x).to_string()).collect())
            .collect(),
        maximal_antichains: poset
            .maximal_antichains()
            .ok()
            .map(|list| list.iter().map(|a| names(poset, a.members)).collect()),
        unordered: poset.is_unordered(),
        total_order: poset.is_total_order(),
        ordinal_stages: poset
            .ordinal_stages()
            .map(|s| s.iter().map(|&st| names(poset, st)).collect()),
        maxima_dominate: poset.maxima_dominate(),
        model: match model {
            ProbabilityModel::Independent(_) => "independent",
            ProbabilityModel::Joint(_) => "joint",
            ProbabilityModel::Tree(_) => "tree",
        }
        .into(),
        correlation_class: class.map(|c| c.to_string()),
        reducible: class.map(|_| tree.is_some()),
        tree: tree.map(|t| describe_tree(&t, poset.names())),
    }
}

fn simulate_report(parsed: &ParsedGame, flags: &Flags) -> Result<Report, CliError> {
    let (method, cert, _) = solve(parsed, flags)?;
    let r = simulate(
        &parsed.game,
        &cert.searcher,
        &cert.hider,
        flags.rounds,
        flags.seed,
    )?;
    let exact = to_f64(&cert.value);
    let within = if r.std_error.is_zero() {
        (r.estimate - exact).abs() < 1e-12
    } else {
        (r.estimate - exact).abs() <= 3.0 * r.std_error
    };
    Ok(Report::Simulate(Simulation {
        method,
        seed: flags.seed,
        rounds: r.rounds,
        wins: r.wins,
        estimate: r.estimate,
        std_error: r.std_error,
        exact_value: fmt(&cert.value),
        within_three_se: within,
    }))
}

fn conjecture(parsed: Option<&ParsedGame>, flags: &Flags) -> Result<Report, CliError> {
    let scan = conjecture_scan(flags.seed, flags.trials, flags.min_leaves, flags.max_leaves)?;
    let instance = match parsed {
        None => None,
        Some(p) => {
            let game = &p.game;
            guard(game, flags)?;
            let backjump = backjump_value(game)?.value;
            let truth = oracle(game, flags)?.value;
            let tree = tree_of(game.model())
                .map(|t| describe_tree(&t, game.poset().names()))
                .unwrap_or_default();
            Some(Trial {
                index: 0,
                leaves: game.len(),
                tree,
                backjump: fmt(&backjump),
                oracle: fmt(&truth),
                equal: backjump == truth,
            })
        }
    };
    Ok(Report::Conjecture(Conjecture {
        seed: flags.seed,
        trials: flags.trials,
        min_leaves: flags.min_leaves,
        max_leaves: flags.max_leaves,
        matches: scan.matches(),
        mismatches: scan.mismatches(),
        skipped: scan.skipped.clone(),
        records: scan
            .records
            .iter()
            .map(|r| Trial {
                index: r.index,
                leaves: r.leaves,
                tree: r.tree.clone(),
                backjump: fmt(&r.backjump),
                oracle: fmt(&r.oracle),
                equal: r.equal(),
            })
            .collect(),
        instance,
    }))
}

/// Runs one command. Only `conjecture` works without a game.
pub fn execute(
    command: Command,
    parsed: Option<&ParsedGame>,
    flags: &Flags,
) -> Result<Report, CliError> {
    if command == Command::Conjecture {
        return conjecture(parsed, flags);
    }
    let parsed = parsed.ok_or_else(|| CliError::Validation("a game file is required".into()))?;
    let game = &parsed.game;
    Ok(match command {
        Command::Solve => {
            let (method, cert, notes) = solve(parsed, flags)?;
            Report::Solve(Solution::new(game, &method, &cert, notes))
        }
        Command::Oracle => {
            Report::Oracle(Solution::new(game, "oracle", &oracle(game, flags)?, vec![]))
        }
        Command::Bounds => Report::Bounds {
            bounds: bounds_report(parsed),
        },
        Command::Check => check(parsed, flags)?,
        Command::Analyze => Report::Analyze(analyze(parsed)),
        Command::Simulate => simulate_report(parsed, flags)?,
        Command::Conjecture => unreachable!("handled above"),
    })
}

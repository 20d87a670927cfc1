//! Acceptance suite: one line per criterion, nonzero exit on any failure.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use num_traits::Zero;
use poset_rescue::correlated::{
    conjecture_scan, reducible_upper_bound, correlated_bounds, solve_csr_star, solve_osr3_total,
    solve_tree_game,
};
use poset_rescue::game::{payoff, solve_matrix_game, solve_oracle, GameInstance};
use poset_rescue::model::{to_pseudo_bayes_tree, JointModel, ProbabilityModel, ValueModel};
use poset_rescue::rational::{int, ratio, Rational};
use poset_rescue::simulate::simulate;
use poset_rescue::uncorrelated::{
    bounds, csr_value_and_hider, run_reduction, solve_csr, solve_multistage, solve_osr_maxima,
    solve_total_order, solve_unordered, triangular_matrix,
};
use poset_rescue::{Poset, Subset, Variant};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, budget: Duration) -> Result<(), String> {
    ensure(elapsed <= budget, || {
        format!("took {elapsed:?}, budget {budget:?}")
    })
}

fn f1_model() -> ProbabilityModel {
    JointModel::from_entries(
        3,
        &[
            (&[0][..], ratio(1, 10)),
            (&[1], ratio(3, 20)),
            (&[2], ratio(1, 3)),
            (&[0, 1], ratio(1, 20)),
            (&[0, 2], ratio(1, 15)),
            (&[1, 2], ratio(1, 10)),
            (&[0, 1, 2], ratio(1, 30)),
        ],
    )
    .unwrap()
    .into()
}

fn f1(variant: Variant) -> GameInstance {
    GameInstance::new(
        Poset::antichain(&["a", "b", "c"]).unwrap(),
        f1_model(),
        variant,
    )
    .unwrap()
}

fn halves(poset: Poset, variant: Variant) -> GameInstance {
    let n = poset.len();
    independent_game(poset, vec![ratio(1, 2); n], variant)
}

fn fixture_d() -> Poset {
    Poset::new(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap()
}

fn fixture_w() -> Poset {
    Poset::new(&["a", "m1", "m2"], &[("a", "m1")]).unwrap()
}

fn star(leaves: usize) -> Poset {
    let mut names: Vec<String> = (1..=leaves).map(|i| format!("u{i}")).collect();
    let covers: Vec<(String, String)> =
        names.iter().map(|u| (u.clone(), "*".to_string())).collect();
    names.push("*".into());
    Poset::new(&names, &covers).unwrap()
}

fn criterion_1() -> Outcome {
    let g = f1(Variant::Osr);
    let start = Instant::now();
    let first = payoff(&g, &[0, 1, 2], 0).map_err(|e| e.to_string())?;
    let second = payoff(&g, &[1, 0, 2], 0).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(first == ratio(1, 10), || {
        format!("payoff [a,b,c] vs a = {first}")
    })?;
    ensure(second == ratio(1, 20), || {
        format!("payoff [b,a,c] vs a = {second}")
    })?;
    within(elapsed, Duration::from_millis(1))?;
    Ok(format!("1/10 and 1/20 in {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let model = f1_model();
    let tree = to_pseudo_bayes_tree(&model).map_err(|e| e.to_string())?;
    let mut weights: Vec<Rational> = tree
        .nodes()
        .into_iter()
        .map(|(n, _)| n.weight.clone())
        .collect();
    weights.sort();
    let mut expected = vec![
        ratio(1, 2),
        ratio(3, 5),
        ratio(2, 3),
        ratio(1, 3),
        ratio(1, 2),
    ];
    expected.sort();
    ensure(weights == expected, || format!("weights {weights:?}"))?;
    for mask in 0..8u64 {
        let s = Subset(mask);
        ensure(tree.pr(s) == model.pr(s), || format!("Pr({s:?}) differs"))?;
    }
    Ok("weights {1/2, 3/5, 2/3, 1/3, 1/2}; 8 subsets agree".into())
}

fn criterion_3() -> Outcome {
    let g = f1(Variant::Osr);
    let start = Instant::now();
    let tree = solve_tree_game(&g).map_err(|e| e.to_string())?;
    let oracle = solve_oracle(&g).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(
        tree.value == ratio(14, 177) && oracle.value == tree.value,
        || format!("tree {} oracle {}", tree.value, oracle.value),
    )?;
    ensure(tree.certificate.is_exact(), || {
        format!("gap {}", tree.certificate.gap)
    })?;
    let (a, b) = tree.nodes[0].searcher_odds.clone().unwrap();
    let (c, d) = tree.nodes[0].hider_odds.clone().unwrap();
    ensure(a / b == ratio(50, 9) && c / d == ratio(54, 5), || {
        "root odds differ".into()
    })?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "14/177 with gap 0, root odds 50:9 and 54:5, {elapsed:?}"
    ))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let posets = small_posets(5);
    let mut rng = rng(4);
    let mut count = 0;
    for poset in &posets {
        for _ in 0..20 {
            let p = probabilities(&mut rng, poset.len());
            let g = independent_game(poset.clone(), p, Variant::Csr);
            let oracle = solve_oracle(&g).map_err(|e| e.to_string())?.value;
            let formula = csr_value_and_hider(&g).map_err(|e| e.to_string())?.value;
            ensure(formula == oracle, || {
                format!("{poset:?}: formula {formula}, oracle {oracle}")
            })?;
            let cert = solve_csr(&g).map_err(|e| format!("{poset:?}: {e}"))?;
            ensure(cert.is_exact(), || format!("{poset:?}: gap {}", cert.gap))?;
            count += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "{} posets, {count} instances, {:?}",
        posets.len(),
        start.elapsed()
    ))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let posets: Vec<Poset> = small_posets(5)
        .into_iter()
        .filter(|p| p.maxima_dominate())
        .collect();
    let mut rng = rng(5);
    let mut count = 0;
    for poset in &posets {
        for _ in 0..20 {
            let g = independent_game(
                poset.clone(),
                probabilities(&mut rng, poset.len()),
                Variant::Osr,
            );
            let oracle = solve_oracle(&g).map_err(|e| e.to_string())?.value;
            let m = solve_osr_maxima(&g).map_err(|e| e.to_string())?;
            ensure(m.value == oracle && m.certified(), || {
                format!("{poset:?}: formula {}, oracle {oracle}", m.value)
            })?;
            count += 1;
        }
    }
    let w = halves(fixture_w(), Variant::Osr);
    let formula = solve_osr_maxima(&w).map_err(|e| e.to_string())?;
    let oracle = solve_oracle(&w).map_err(|e| e.to_string())?.value;
    ensure(
        formula.value == ratio(3, 11) && oracle == ratio(7, 25) && !formula.certified(),
        || format!("W: formula {}, oracle {oracle}", formula.value),
    )?;
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "{} posets, {count} instances; W reports 3/11 vs 7/25",
        posets.len()
    ))
}

fn random_stages(rng: &mut TestRng) -> Poset {
    loop {
        let k = rng.gen_range(2..=3);
        let sizes: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=2)).collect();
        let total: usize = sizes.iter().sum();
        if total > 5 {
            continue;
        }
        let names = names(total);
        let mut it = names.into_iter();
        let stages: Vec<Vec<String>> = sizes
            .iter()
            .map(|&s| it.by_ref().take(s).collect())
            .collect();
        return Poset::ordinal_sum(&stages).unwrap();
    }
}

fn criterion_6() -> Outcome {
    let mut rng = rng(6);
    let compare =
        |name: &str,
         g: &GameInstance,
         cert: poset_rescue::Result<poset_rescue::game::SolutionCertificate>| {
            let cert = cert.map_err(|e| format!("{name}: {e}"))?;
            let oracle = solve_oracle(g).map_err(|e| e.to_string())?.value;
            ensure(cert.value == oracle && cert.is_exact(), || {
                format!("{name}: {} vs oracle {oracle}", cert.value)
            })
        };
    for _ in 0..50 {
        let n = rng.gen_range(1..=5);
        let chain = Poset::chain(&names(n)).unwrap();
        let g = independent_game(chain, probabilities(&mut rng, n), Variant::Osr);
        compare("total order", &g, solve_total_order(&g))?;
        for variant in [Variant::Osr, Variant::Csr] {
            let n = rng.gen_range(1..=5);
            let g = independent_game(
                Poset::antichain(&names(n)).unwrap(),
                probabilities(&mut rng, n),
                variant,
            );
            compare("unordered", &g, solve_unordered(&g))?;
            let poset = random_stages(&mut rng);
            let n = poset.len();
            let g = independent_game(poset, probabilities(&mut rng, n), variant);
            compare("multistage", &g, solve_multistage(&g, None))?;
        }
        let k = rng.gen_range(1..=3);
        let g = independent_game(star(k), probabilities(&mut rng, k + 1), Variant::Csr);
        compare("star", &g, solve_csr_star(&g))?;
    }
    let mut values = Vec::new();
    for pc in [ratio(1, 4), ratio(3, 4), ratio(1, 2)] {
        let poset = star(2);
        let center = poset.index_of("*").unwrap();
        let p: Vec<Rational> = (0..3)
            .map(|x| if x == center { pc.clone() } else { ratio(1, 2) })
            .collect();
        let g = independent_game(poset, p, Variant::Csr);
        let cert = solve_csr_star(&g).map_err(|e| e.to_string())?;
        compare("star fixture", &g, Ok(cert.clone()))?;
        values.push(cert.value);
    }
    ensure(
        values == vec![ratio(1, 6), ratio(1, 4), ratio(1, 4)],
        || format!("star values {values:?}"),
    )?;
    Ok("50 rounds of five closed forms; star values 1/6, 1/4, 1/4".into())
}

fn criterion_7() -> Outcome {
    let mut rng = rng(7);
    let posets = small_posets(5);
    let mut checked = 0;
    for i in 0..200 {
        let poset = posets[rng.gen_range(0..posets.len())].clone();
        let n = poset.len();
        let variant = if rng.gen_bool(0.5) {
            Variant::Osr
        } else {
            Variant::Csr
        };
        let model: ProbabilityModel = if i % 2 == 0 {
            poset_rescue::IndependentModel::new(probabilities(&mut rng, n))
                .unwrap()
                .into()
        } else {
            random_joint(&mut rng, n)
        };
        let g = GameInstance::new(poset, model, variant).unwrap();
        let v = solve_oracle(&g).map_err(|e| e.to_string())?.value;
        for report in [bounds(&g), correlated_bounds(&g)].into_iter().flatten() {
            ensure(report.contains(&v), || {
                format!(
                    "{v} outside [{}, {}] ({})",
                    report.lower, report.upper, report.lower_source
                )
            })?;
            checked += 1;
        }
    }
    for _ in 0..50 {
        let n = rng.gen_range(2..=4);
        let tree = random_light_tree(&mut rng, n);
        let bound = reducible_upper_bound(&tree).map_err(|e| e.to_string())?;
        let g = GameInstance::new(
            Poset::antichain(&names(n)).unwrap(),
            tree.into(),
            Variant::Osr,
        )
        .unwrap();
        let v = solve_oracle(&g).map_err(|e| e.to_string())?.value;
        ensure(v <= bound, || format!("tree value {v} above bound {bound}"))?;
    }
    Ok(format!(
        "{checked} bound reports on 200 instances; 50 reducible instances"
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = rng(8);
    let mut pairs_done = 0;
    while pairs_done < 100 {
        let n = rng.gen_range(2..=5);
        let all = posets_up_to_iso(n);
        let coarse = all[rng.gen_range(0..all.len())].clone();
        let Some(fine) = random_extension(&mut rng, n, &coarse) else {
            continue;
        };
        let p = probabilities(&mut rng, n);
        let (c, f) = (poset_from_pairs(n, &coarse), poset_from_pairs(n, &fine));
        let value = |poset: &Poset, variant| {
            solve_oracle(&independent_game(poset.clone(), p.clone(), variant))
                .map(|s| s.value)
                .map_err(|e| e.to_string())
        };
        let (co, fo) = (value(&c, Variant::Osr)?, value(&f, Variant::Osr)?);
        let (cc, fc) = (value(&c, Variant::Csr)?, value(&f, Variant::Csr)?);
        ensure(fo <= co, || format!("OSR rose from {co} to {fo}"))?;
        ensure(fc >= cc, || format!("CSR fell from {cc} to {fc}"))?;
        pairs_done += 1;
    }
    Ok("100 extension pairs".into())
}

fn chain3(model: ProbabilityModel) -> GameInstance {
    GameInstance::new(Poset::chain(&["a", "b", "c"]).unwrap(), model, Variant::Osr).unwrap()
}

fn criterion_9() -> Outcome {
    let below = solve_osr3_total(&chain3(f1_model())).map_err(|e| e.to_string())?;
    ensure(
        below.factor == ratio(3, 7) && below.lp_support == vec![1, 3, 4] && below.support_matches(),
        || format!("factor {} support {:?}", below.factor, below.lp_support),
    )?;
    let model = JointModel::from_entries(
        3,
        &[
            (&[0][..], ratio(1, 2)),
            (&[1], ratio(1, 2)),
            (&[2], ratio(1, 10)),
            (&[0, 1], ratio(1, 10)),
            (&[0, 2], ratio(1, 20)),
            (&[1, 2], ratio(1, 20)),
            (&[0, 1, 2], Rational::zero()),
        ],
    )
    .unwrap();
    let above = solve_osr3_total(&chain3(model.into())).map_err(|e| e.to_string())?;
    ensure(
        above.factor > int(1) && above.lp_support == vec![2, 3, 4] && above.support_matches(),
        || format!("factor {} support {:?}", above.factor, above.lp_support),
    )?;
    Ok(format!(
        "factor 3/7 uses rows 1,3,4; factor {} uses rows 2,3,4",
        above.factor
    ))
}

fn criterion_10() -> Outcome {
    let mut rng = rng(10);
    let choices = [
        ratio(1, 3),
        ratio(1, 2),
        ratio(2, 3),
        int(1),
        ratio(3, 2),
        int(2),
        int(3),
    ];
    for _ in 0..50 {
        let n = rng.gen_range(1..=5);
        let e: Vec<Rational> = (0..n)
            .map(|_| choices[rng.gen_range(0..choices.len())].clone())
            .collect();
        let before = solve_matrix_game(&triangular_matrix(&e))
            .map_err(|e| e.to_string())?
            .value;
        let reduced = run_reduction(&ValueModel::new(e.clone()).unwrap());
        let after = solve_matrix_game(&triangular_matrix(reduced.values.values()))
            .map_err(|e| e.to_string())?
            .value;
        ensure(before == after, || {
            format!("{e:?}: {before} became {after}")
        })?;
    }
    let r = run_reduction(&ValueModel::new(vec![int(2), ratio(1, 2)]).unwrap());
    let v = solve_matrix_game(&triangular_matrix(r.values.values()))
        .map_err(|e| e.to_string())?
        .value;
    ensure(v == int(1), || format!("(2, 1/2) reduced to value {v}"))?;
    Ok("50 value models; (2, 1/2) gives 1".into())
}

fn criterion_11() -> Outcome {
    let start = Instant::now();
    let mut detail = Vec::new();
    for (name, g, exact) in [
        ("F1", f1(Variant::Osr), ratio(14, 177)),
        ("D", halves(fixture_d(), Variant::Osr), ratio(1, 4)),
    ] {
        let cert = solve_oracle(&g).map_err(|e| e.to_string())?;
        ensure(cert.value == exact, || {
            format!("{name} oracle {}", cert.value)
        })?;
        let r =
            simulate(&g, &cert.searcher, &cert.hider, 100_000, 2024).map_err(|e| e.to_string())?;
        let target = poset_rescue::rational::to_f64(&exact);
        ensure((r.estimate - target).abs() <= 3.0 * r.std_error, || {
            format!("{name}: {} ± {} vs {target}", r.estimate, r.std_error)
        })?;
        detail.push(format!("{name} {:.4}±{:.4}", r.estimate, r.std_error));
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("{}, {:?}", detail.join(", "), start.elapsed()))
}

fn criterion_12() -> Outcome {
    let a = conjecture_scan(1, 50, 3, 4).map_err(|e| e.to_string())?;
    let b = conjecture_scan(1, 50, 3, 4).map_err(|e| e.to_string())?;
    ensure(a == b, || "scan differs between runs".into())?;
    ensure(a.records.len() + a.skipped.len() == 50, || {
        "trials missing".into()
    })?;
    let mismatches: Vec<String> = a
        .records
        .iter()
        .filter(|r| !r.equal())
        .map(|r| format!("#{} {} ({} vs {})", r.index, r.tree, r.backjump, r.oracle))
        .collect();
    Ok(format!(
        "{} equal, {} different, {} skipped{}",
        a.matches(),
        mismatches.len(),
        a.skipped.len(),
        if mismatches.is_empty() {
            String::new()
        } else {
            format!(": {}", mismatches.join("; "))
        }
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("worked payoffs", criterion_1),
        ("tree reconstruction", criterion_2),
        ("tree game solution", criterion_3),
        ("chain-search sweep", criterion_4),
        ("maxima formula sweep", criterion_5),
        ("closed forms against the oracle", criterion_6),
        ("bounds contain the value", criterion_7),
        ("monotone under extension", criterion_8),
        ("three-chain support", criterion_9),
        ("run reduction", criterion_10),
        ("simulation agrees", criterion_11),
        ("backjumping scan", criterion_12),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

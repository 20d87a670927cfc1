//! Monte Carlo play of a strategy pair.
//!
//! Rounds are split into fixed-size blocks. Each block draws from its own
//! SplitMix64 stream seeded from the master seed, so the estimate does not
//! depend on how many worker threads run the blocks.

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{GameInstance, HiderMix, SearcherMix};
use crate::model::ProbabilityModel;
use crate::rational::to_f64;
use crate::subset::Subset;

const BLOCK: u64 = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub rounds: u64,
    pub wins: u64,
    pub estimate: f64,
    pub std_error: f64,
}

enum Sampler {
    Independent(Vec<f64>),
    /// Cumulative pattern masses indexed by success set.
    Patterns(Vec<f64>),
}

impl Sampler {
    fn new(model: &ProbabilityModel) -> Result<Sampler> {
        match model {
            ProbabilityModel::Independent(m) => Ok(Sampler::Independent(
                m.marginals().iter().map(to_f64).collect(),
            )),
            _ => {
                let masses = model.pattern_masses()?;
                let mut acc = 0.0;
                let cumulative = masses
                    .iter()
                    .map(|m| {
                        acc += to_f64(m);
                        acc
                    })
                    .collect();
                Ok(Sampler::Patterns(cumulative))
            }
        }
    }

    fn draw(&self, rng: &mut SplitMix64) -> Subset {
        match self {
            Sampler::Independent(p) => {
                Subset::from_elements((0..p.len()).filter(|&x| rng.gen::<f64>() < p[x]))
            }
            Sampler::Patterns(cum) => Subset(pick(cum, rng) as u64),
        }
    }
}

fn cumulative(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    weights
        .map(|w| {
            acc += w;
            acc
        })
        .collect()
}

fn pick(cum: &[f64], rng: &mut SplitMix64) -> usize {
    let total = *cum.last().expect("nonempty");
    let u = rng.gen::<f64>() * total;
    cum.partition_point(|&c| c <= u).min(cum.len() - 1)
}

/// Plays `rounds` independent rounds and reports the searcher's win rate.
pub fn simulate(
    game: &GameInstance,
    searcher: &SearcherMix,
    hider: &HiderMix,
    rounds: u64,
    seed: u64,
) -> Result<SimulationResult> {
    if rounds == 0 {
        return Err(Error::InvalidModel("at least one round is required".into()));
    }
    if searcher.is_empty() || hider.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let sampler = Sampler::new(game.model())?;
    let search_cum = cumulative(searcher.entries().iter().map(|(_, w)| to_f64(w)));
    let hider_cum = cumulative(hider.entries().iter().map(|(_, w)| to_f64(w)));

    let blocks = rounds.div_ceil(BLOCK);
    let mut master = SplitMix64::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..blocks).map(|_| master.next_u64()).collect();
    let wins: u64 = seeds
        .par_iter()
        .enumerate()
        .map(|(b, &block_seed)| {
            let mut rng = SplitMix64::seed_from_u64(block_seed);
            let count = BLOCK.min(rounds - b as u64 * BLOCK);
            let mut wins = 0u64;
            for _ in 0..count {
                let success = sampler.draw(&mut rng);
                let search = &searcher.entries()[pick(&search_cum, &mut rng)].0;
                let h = hider.entries()[pick(&hider_cum, &mut rng)].0;
                for &x in search.iter() {
                    if !success.contains(x) {
                        break;
                    }
                    if x == h {
                        wins += 1;
                        break;
                    }
                }
            }
            wins
        })
        .sum();
    let estimate = wins as f64 / rounds as f64;
    let std_error = (estimate * (1.0 - estimate) / rounds as f64).sqrt();
    Ok(SimulationResult {
        rounds,
        wins,
        estimate,
        std_error,
    })
}

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fitness::{evaluate_fitness, train_and_score, TrainingData};
use super::operators::{crossover, init_population_with, mutate, select};
use super::{GaConfig, Individual};
use crate::error::{Error, Result};
use crate::eval::ConfusionMatrix;
use crate::exec::Execution;
use crate::mlp::{TrainedModel, TrainingConfig, WeightVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaStop {
    Goal,
    Cycles,
}

impl fmt::Display for GaStop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GaStop::Goal => "goal",
            GaStop::Cycles => "cycles",
        })
    }
}

/// Fitness summary of one evaluated population.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleStats {
    pub cycle: usize,
    pub best: f64,
    pub mean: f64,
}

#[derive(Clone, Debug)]
pub struct GaRun {
    pub history: Vec<CycleStats>,
    /// Fittest individual of the last evaluated population.
    pub best: Individual,
    /// The network trained from `best.genome`.
    pub best_model: TrainedModel,
    pub best_confusion: ConfusionMatrix,
    /// The population the search started from.
    pub initial: Vec<Individual>,
    pub stop: GaStop,
    /// Number of distinct genomes that were trained.
    pub evaluations: usize,
}

impl GaRun {
    pub fn history_csv(&self) -> String {
        let mut s = String::from("cycle,best_fitness,mean_fitness\n");
        for c in &self.history {
            s.push_str(&format!("{},{:?},{:?}\n", c.cycle, c.best, c.mean));
        }
        s
    }
}

fn genome_key(g: &WeightVector) -> Vec<u64> {
    g.0.iter().map(|x| x.to_bits()).collect()
}

/// Runs the genetic search.
///
/// Each cycle evaluates the population (genomes seen before are looked up
/// instead of retrained), records best and mean fitness, and stops on the goal
/// or the cycle limit. Otherwise the next population is the current best
/// individual followed by `size - 1` infants bred from the selection pool by
/// pairing neighbours, crossing over at a random cut and mutating.
pub fn run_ga(
    cfg: &GaConfig,
    data: &TrainingData,
    training: &TrainingConfig,
    exec: Execution,
) -> Result<GaRun> {
    cfg.validate()?;
    training.validate()?;
    let topology = data.topology;
    let n = topology.genome_length();
    if n < 3 {
        return Err(Error::arg("genome too short for crossover"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let initial = init_population_with(cfg, &topology, &mut rng);
    let mut population = initial.clone();
    let mut cache: HashMap<Vec<u64>, f64> = HashMap::new();
    let mut history = Vec::new();
    let mut evaluations = 0;
    let mut stop = GaStop::Cycles;

    for cycle in 1..=cfg.cycles {
        let mut pending: Vec<WeightVector> = Vec::new();
        let mut pending_keys: HashMap<Vec<u64>, ()> = HashMap::new();
        for ind in population.iter().filter(|i| i.fitness.is_none()) {
            let key = genome_key(&ind.genome);
            if !cache.contains_key(&key) && pending_keys.insert(key, ()).is_none() {
                pending.push(ind.genome.clone());
            }
        }
        let scores = exec.map_slice(&pending, |g| {
            evaluate_fitness(g, data, training, cfg.fitness)
        });
        for (g, s) in pending.iter().zip(scores) {
            cache.insert(genome_key(g), s);
        }
        evaluations += pending.len();
        for ind in population.iter_mut() {
            if ind.fitness.is_none() {
                ind.fitness = Some(cache[&genome_key(&ind.genome)]);
            }
        }

        let fits: Vec<f64> = population.iter().map(|i| i.fitness.unwrap()).collect();
        let best_idx = best_index(&fits);
        let best = fits[best_idx];
        let mean = fits.iter().sum::<f64>() / fits.len() as f64;
        history.push(CycleStats { cycle, best, mean });
        log::info!("cycle {cycle}: best {best:.4} mean {mean:.4}");

        if best <= cfg.goal {
            stop = GaStop::Goal;
            break;
        }
        if cycle == cfg.cycles {
            break;
        }

        let elite = population[best_idx].clone();
        let pool = select(&population, cfg, &mut rng)?;
        let mut next = Vec::with_capacity(cfg.population_size);
        next.push(elite);
        let size = pool.len();
        let mut infants = Vec::with_capacity(size + 1);
        let mut i = 0;
        while infants.len() < size - 1 {
            let (a, b) = (&pool[i % size], &pool[(i + 1) % size]);
            let cut = rng.random_range(2..=n - 1);
            let (c1, c2) = crossover(&a.genome.0, &b.genome.0, cut, cfg.crossover_alpha)?;
            for c in [c1, c2] {
                infants.push(mutate(
                    Individual::new(WeightVector(c)),
                    cfg.mutation_rate,
                    &mut rng,
                ));
            }
            i += 2;
        }
        next.extend(infants.into_iter().take(size - 1));
        population = next;
    }

    let fits: Vec<f64> = population.iter().map(|i| i.fitness.unwrap()).collect();
    let best = population[best_index(&fits)].clone();
    let (best_model, best_confusion) =
        train_and_score(&best.genome, data, training).map_err(|e| e.in_stage("final training"))?;
    Ok(GaRun {
        history,
        best,
        best_model,
        best_confusion,
        initial,
        stop,
        evaluations,
    })
}

/// Lowest fitness, first on ties.
fn best_index(fits: &[f64]) -> usize {
    let mut b = 0;
    for (i, f) in fits.iter().enumerate() {
        if *f < fits[b] {
            b = i;
        }
    }
    b
}

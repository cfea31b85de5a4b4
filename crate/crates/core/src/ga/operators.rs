use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GaConfig, Individual};
use crate::error::{Error, Result};
use crate::mlp::{random_genome, Topology};

/// `population_size` genomes drawn uniformly from `[0, 1]`, seeded by `cfg.seed`.
pub fn init_population(cfg: &GaConfig, topology: &Topology) -> Vec<Individual> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    init_population_with(cfg, topology, &mut rng)
}

pub fn init_population_with<R: Rng + ?Sized>(
    cfg: &GaConfig,
    topology: &Topology,
    rng: &mut R,
) -> Vec<Individual> {
    (0..cfg.population_size)
        .map(|_| Individual::new(random_genome(topology.genome_length(), rng)))
        .collect()
}

/// Single-cut blend crossover.
///
/// `cut` is the 1-based gene position where blending starts, in `2..=n-1`.
/// Each infant copies genes `1..cut-1` from its own parent and sets every
/// later gene to `alpha * own + (1 - alpha) * other`.
pub fn crossover(
    parent1: &[f64],
    parent2: &[f64],
    cut: usize,
    alpha: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = parent1.len();
    if parent2.len() != n {
        return Err(Error::arg("parents differ in genome length"));
    }
    if n < 3 || cut < 2 || cut > n - 1 {
        return Err(Error::arg(format!(
            "cut {cut} outside 2..={} for genome length {n}",
            n.saturating_sub(1)
        )));
    }
    let blend = |own: &[f64], other: &[f64]| -> Vec<f64> {
        own.iter()
            .zip(other)
            .enumerate()
            .map(|(j, (&a, &b))| {
                if j + 1 < cut {
                    a
                } else {
                    alpha * a + (1.0 - alpha) * b
                }
            })
            .collect()
    };
    Ok((blend(parent1, parent2), blend(parent2, parent1)))
}

/// The random quantities behind one mutation decision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MutationDraw {
    /// Uniform in `[0, 1)`; the infant mutates when this is below the rate.
    pub fire: f64,
    /// 0-based gene index.
    pub gene: usize,
    /// Change magnitude in `(0, 1)`.
    pub magnitude: f64,
    /// Uniform in `[0, 1)`; below 0.5 the change is subtracted.
    pub direction: f64,
}

pub fn draw_mutation<R: Rng + ?Sized>(genome_len: usize, rng: &mut R) -> MutationDraw {
    let fire = rng.random::<f64>();
    let gene = rng.random_range(0..genome_len);
    let magnitude: f64 = rng.sample(rand::distr::Open01);
    let direction = rng.random::<f64>();
    MutationDraw {
        fire,
        gene,
        magnitude,
        direction,
    }
}

/// Applies a draw in place; returns whether the genome changed.
pub fn apply_mutation(genome: &mut [f64], draw: &MutationDraw, rate: f64) -> bool {
    if draw.fire >= rate {
        return false;
    }
    let sign = if draw.direction < 0.5 { -1.0 } else { 1.0 };
    let g = &mut genome[draw.gene];
    *g = (*g + sign * draw.magnitude).clamp(0.0, 1.0);
    true
}

pub fn mutate<R: Rng + ?Sized>(infant: Individual, rate: f64, rng: &mut R) -> Individual {
    let mut infant = infant;
    let draw = draw_mutation(infant.genome.len(), rng);
    if apply_mutation(&mut infant.genome.0, &draw, rate) {
        infant.fitness = None;
    }
    infant
}

/// Builds a parent pool of `population_size` individuals.
///
/// The best `floor(selection_rate * size)` individuals come first in fitness
/// order; the remaining slots are drawn without replacement from the rest
/// with probability proportional to `1 / sqrt(rank)` (rank 1 = best of the rest).
pub fn select<R: Rng + ?Sized>(
    population: &[Individual],
    cfg: &GaConfig,
    rng: &mut R,
) -> Result<Vec<Individual>> {
    let mut ranked: Vec<(f64, usize)> = population
        .iter()
        .enumerate()
        .map(|(i, ind)| {
            ind.fitness
                .map(|f| (f, i))
                .ok_or_else(|| Error::arg(format!("individual {i} has no fitness")))
        })
        .collect::<Result<_>>()?;
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let size = population.len();
    let keep = ((cfg.selection_rate * size as f64 + 1e-9).floor() as usize).min(size);

    let mut pool: Vec<Individual> = ranked[..keep]
        .iter()
        .map(|&(_, i)| population[i].clone())
        .collect();
    let mut rest: Vec<(usize, f64)> = ranked[keep..]
        .iter()
        .enumerate()
        .map(|(r, &(_, i))| (i, 1.0 / ((r + 1) as f64).sqrt()))
        .collect();
    while !rest.is_empty() {
        let total: f64 = rest.iter().map(|(_, w)| w).sum();
        let mut u = rng.random::<f64>() * total;
        let mut pick = rest.len() - 1;
        for (k, (_, w)) in rest.iter().enumerate() {
            if u < *w {
                pick = k;
                break;
            }
            u -= w;
        }
        let (i, _) = rest.remove(pick);
        pool.push(population[i].clone());
    }
    Ok(pool)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlp::WeightVector;

    #[test]
    fn crossover_golden() {
        let (a, b) = crossover(&[1.0, 2.0, 3.0, 4.0], &[5.0, 6.0, 7.0, 8.0], 3, 0.3).unwrap();
        let want_a = [1.0, 2.0, 5.8, 6.8];
        for (x, y) in a.iter().zip(want_a) {
            assert!((x - y).abs() < 1e-12);
        }
        // mirror: 7*0.3 + 3*0.7 = 4.2, 8*0.3 + 4*0.7 = 5.2
        let want_b = [5.0, 6.0, 4.2, 5.2];
        for (x, y) in b.iter().zip(want_b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn crossover_identities() {
        let p = [0.1, 0.5, 0.9, 0.3, 0.7];
        let (a, b) = crossover(&p, &p, 2, 0.3).unwrap();
        assert_eq!(a, p);
        assert_eq!(b, p);
        let q = [0.2, 0.4, 0.6, 0.8, 1.0];
        let (a, b) = crossover(&p, &q, 3, 1.0).unwrap();
        assert_eq!(a, p);
        assert_eq!(b, q);
    }

    #[test]
    fn crossover_cut_range() {
        let p = [0.0; 5];
        assert!(crossover(&p, &p, 1, 0.3).is_err());
        assert!(crossover(&p, &p, 5, 0.3).is_err());
        assert!(crossover(&p, &p, 4, 0.3).is_ok());
    }

    #[test]
    fn mutation_golden() {
        let up = MutationDraw {
            fire: 0.05,
            gene: 0,
            magnitude: 0.2,
            direction: 0.7,
        };
        let mut g = [0.5, 0.3];
        assert!(apply_mutation(&mut g, &up, 0.1));
        assert!((g[0] - 0.7).abs() < 1e-12);

        let down = MutationDraw {
            fire: 0.05,
            gene: 1,
            magnitude: 0.5,
            direction: 0.2,
        };
        let mut g = [0.5, 0.1];
        apply_mutation(&mut g, &down, 0.1);
        assert_eq!(g[1], 0.0);

        let skip = MutationDraw { fire: 0.5, ..up };
        let mut g = [0.5, 0.3];
        assert!(!apply_mutation(&mut g, &skip, 0.1));
        assert_eq!(g, [0.5, 0.3]);
    }

    fn scored(fits: &[f64]) -> Vec<Individual> {
        fits.iter()
            .enumerate()
            .map(|(i, &f)| Individual {
                genome: WeightVector(vec![i as f64; 4]),
                fitness: Some(f),
            })
            .collect()
    }

    #[test]
    fn selection_keeps_best_fraction() {
        let pop = scored(&[0.1, 0.5, 0.3]);
        let cfg = GaConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pool = select(&pop, &cfg, &mut rng).unwrap();
        assert_eq!(pool.len(), 3);
        assert_eq!(pool[0].fitness, Some(0.1));
        assert_eq!(pool[1].fitness, Some(0.3));
        assert_eq!(pool[2].fitness, Some(0.5));
    }

    #[test]
    fn full_rate_is_sorted_population() {
        let pop = scored(&[0.4, 0.2, 0.9, 0.0]);
        let cfg = GaConfig {
            selection_rate: 1.0,
            ..GaConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fits: Vec<f64> = select(&pop, &cfg, &mut rng)
            .unwrap()
            .iter()
            .map(|i| i.fitness.unwrap())
            .collect();
        assert_eq!(fits, vec![0.0, 0.2, 0.4, 0.9]);
    }

    #[test]
    fn equal_fitness_pool_is_permutation() {
        let pop = scored(&[0.5; 15]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pool = select(&pop, &GaConfig::default(), &mut rng).unwrap();
        let mut ids: Vec<usize> = pool.iter().map(|i| i.genome.0[0] as usize).collect();
        ids.sort();
        assert_eq!(ids, (0..15).collect::<Vec<_>>());
    }

    #[test]
    fn unevaluated_population_rejected() {
        let mut pop = scored(&[0.1, 0.2]);
        pop[1].fitness = None;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(select(&pop, &GaConfig::default(), &mut rng).is_err());
    }

    #[test]
    fn population_shape() {
        let t = Topology::default();
        let pop = init_population(&GaConfig::default(), &t);
        assert_eq!(pop.len(), 15);
        assert!(pop.iter().all(|i| i.genome.len() == 74));
        assert_eq!(pop, init_population(&GaConfig::default(), &t));
        let one = GaConfig {
            population_size: 1,
            ..GaConfig::default()
        };
        assert_eq!(init_population(&one, &t).len(), 1);
    }
}

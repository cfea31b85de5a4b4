//! Genetic search over initial MLP weight vectors.
//!
//! Each genome is a full set of initial weights and biases in `[0, 1]`. Its
//! fitness is the test error of the network trained from it, with the same
//! training configuration used for the conventionally initialized baseline.

mod compare;
mod fitness;
mod operators;
mod run;

pub use compare::{compare, Comparison, ModelOutcome};
pub use fitness::{evaluate_fitness, train_and_score, FitnessMode, TrainingData};
pub use operators::{
    apply_mutation, crossover, draw_mutation, init_population, init_population_with, mutate,
    select, MutationDraw,
};
pub use run::{run_ga, CycleStats, GaRun, GaStop};

use crate::error::{Error, Result};
use crate::mlp::WeightVector;

#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub genome: WeightVector,
    pub fitness: Option<f64>,
}

impl Individual {
    pub fn new(genome: WeightVector) -> Self {
        Individual {
            genome,
            fitness: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaConfig {
    pub cycles: usize,
    pub population_size: usize,
    /// Weight of an infant's own parent in the blended tail.
    pub crossover_alpha: f64,
    pub mutation_rate: f64,
    /// Fraction of the pool filled deterministically with the best individuals.
    pub selection_rate: f64,
    /// Stop as soon as the best fitness is at or below this value.
    pub goal: f64,
    pub fitness: FitnessMode,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            cycles: 20,
            population_size: 15,
            crossover_alpha: 0.3,
            mutation_rate: 0.1,
            selection_rate: 0.7,
            goal: 0.0,
            fitness: FitnessMode::Overall,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.cycles == 0 || self.population_size == 0 {
            return Err(Error::arg("cycles and population_size must be at least 1"));
        }
        for (name, v) in [
            ("crossover_alpha", self.crossover_alpha),
            ("mutation_rate", self.mutation_rate),
            ("selection_rate", self.selection_rate),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::arg(format!("{name} must lie in [0, 1]")));
            }
        }
        Ok(())
    }
}

//! One-hidden-layer tansig network trained full-batch by scaled conjugate gradient.
//!
//! All weights and biases live in one flat genome, laid out as: hidden-layer
//! weights (row-major, one row per hidden unit), hidden biases, output-layer
//! weights (row-major, one row per output unit), output biases.

mod io;
mod network;
mod scg;

pub use network::{forward, mse, mse_and_gradient, Batch};
pub use scg::{train_scg, EpochRecord, StopReason, TrainedModel, TrainingConfig};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Topology {
    pub input_size: usize,
    pub hidden_size: usize,
    pub output_size: usize,
}

impl Default for Topology {
    fn default() -> Self {
        Topology {
            input_size: 2,
            hidden_size: 10,
            output_size: 4,
        }
    }
}

impl Topology {
    pub fn new(input_size: usize, hidden_size: usize, output_size: usize) -> Result<Self> {
        if input_size == 0 || hidden_size == 0 || output_size == 0 {
            return Err(Error::arg("every layer needs at least one unit"));
        }
        Ok(Topology {
            input_size,
            hidden_size,
            output_size,
        })
    }

    pub fn genome_length(&self) -> usize {
        (self.input_size + 1) * self.hidden_size + (self.hidden_size + 1) * self.output_size
    }

    pub(crate) fn hidden_weights(&self) -> std::ops::Range<usize> {
        0..self.hidden_size * self.input_size
    }

    pub(crate) fn hidden_biases(&self) -> std::ops::Range<usize> {
        let s = self.hidden_weights().end;
        s..s + self.hidden_size
    }

    pub(crate) fn output_weights(&self) -> std::ops::Range<usize> {
        let s = self.hidden_biases().end;
        s..s + self.output_size * self.hidden_size
    }

    pub(crate) fn output_biases(&self) -> std::ops::Range<usize> {
        let s = self.output_weights().end;
        s..s + self.output_size
    }
}

/// Flat weight-and-bias vector in canonical genome order.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector(pub Vec<f64>);

impl WeightVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check(&self, topology: &Topology) -> Result<()> {
        if self.0.len() != topology.genome_length() {
            return Err(Error::arg(format!(
                "weight vector has length {}, topology {}-{}-{} needs {}",
                self.0.len(),
                topology.input_size,
                topology.hidden_size,
                topology.output_size,
                topology.genome_length()
            )));
        }
        Ok(())
    }
}

/// Where initial weights come from.
pub enum WeightSource<'a> {
    Seeded(u64),
    Rng(&'a mut dyn rand::RngCore),
    Injected(WeightVector),
}

/// Uniform `[0, 1]` draws for the random sources; injected vectors are
/// returned verbatim after a length check.
pub fn init_weights(topology: &Topology, source: WeightSource<'_>) -> Result<WeightVector> {
    let n = topology.genome_length();
    match source {
        WeightSource::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(random_genome(n, &mut rng))
        }
        WeightSource::Rng(rng) => Ok(random_genome(n, rng)),
        WeightSource::Injected(w) => {
            w.check(topology)?;
            Ok(w)
        }
    }
}

pub(crate) fn random_genome<R: Rng + ?Sized>(n: usize, rng: &mut R) -> WeightVector {
    WeightVector((0..n).map(|_| rng.random_range(0.0..=1.0)).collect())
}

/// A topology plus its weights: everything needed to run the network.
#[derive(Clone, Debug, PartialEq)]
pub struct Mlp {
    pub topology: Topology,
    pub weights: WeightVector,
}

impl Mlp {
    pub fn new(topology: Topology, weights: WeightVector) -> Result<Self> {
        weights.check(&topology)?;
        Ok(Mlp { topology, weights })
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        forward(&self.weights, &self.topology, x)
    }

    pub fn predict_class(&self, x: &[f64]) -> Result<usize> {
        Ok(argmax(&self.forward(x)?))
    }
}

/// Index of the largest output; ties go to the lowest index.
pub fn argmax(outputs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in outputs.iter().enumerate() {
        if v > outputs[best] {
            best = i;
        }
    }
    best
}

pub fn predict_class(model: &Mlp, x: &[f64]) -> Result<usize> {
    model.predict_class(x)
}

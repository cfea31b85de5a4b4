use super::{Topology, WeightVector};
use crate::error::{Error, Result};

/// Row-major inputs and targets for full-batch training.
#[derive(Clone, Debug, PartialEq)]
pub struct Batch {
    input_size: usize,
    output_size: usize,
    inputs: Vec<f64>,
    targets: Vec<f64>,
}

impl Batch {
    pub fn new(inputs: &[Vec<f64>], targets: &[Vec<f64>]) -> Result<Self> {
        if inputs.len() != targets.len() {
            return Err(Error::arg("inputs and targets differ in length"));
        }
        let input_size = inputs.first().map_or(0, Vec::len);
        let output_size = targets.first().map_or(0, Vec::len);
        if inputs.iter().any(|x| x.len() != input_size)
            || targets.iter().any(|t| t.len() != output_size)
        {
            return Err(Error::arg("ragged batch"));
        }
        Ok(Batch {
            input_size,
            output_size,
            inputs: inputs.concat(),
            targets: targets.concat(),
        })
    }

    /// One-hot targets: 1 at the class index, 0 elsewhere.
    pub fn one_hot(inputs: &[Vec<f64>], classes: &[usize], output_size: usize) -> Result<Self> {
        let targets: Vec<Vec<f64>> = classes
            .iter()
            .map(|&c| {
                if c >= output_size {
                    return Err(Error::arg(format!(
                        "class {c} out of range for {output_size} outputs"
                    )));
                }
                let mut t = vec![0.0; output_size];
                t[c] = 1.0;
                Ok(t)
            })
            .collect::<Result<_>>()?;
        let mut b = Batch::new(inputs, &targets)?;
        b.output_size = output_size;
        if inputs.is_empty() {
            b.input_size = 0;
        }
        Ok(b)
    }

    pub fn len(&self) -> usize {
        self.targets
            .len()
            .checked_div(self.output_size)
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn input(&self, i: usize) -> &[f64] {
        &self.inputs[i * self.input_size..(i + 1) * self.input_size]
    }

    pub fn target(&self, i: usize) -> &[f64] {
        &self.targets[i * self.output_size..(i + 1) * self.output_size]
    }

    fn check(&self, topology: &Topology) -> Result<()> {
        if self.is_empty() {
            return Err(Error::arg("empty batch"));
        }
        if self.input_size != topology.input_size || self.output_size != topology.output_size {
            return Err(Error::arg(format!(
                "batch is {}->{}, network is {}->{}",
                self.input_size, self.output_size, topology.input_size, topology.output_size
            )));
        }
        Ok(())
    }
}

fn hidden_layer(w: &[f64], t: &Topology, x: &[f64], h: &mut [f64]) {
    let wh = &w[t.hidden_weights()];
    let bh = &w[t.hidden_biases()];
    for (j, hj) in h.iter_mut().enumerate() {
        let row = &wh[j * t.input_size..(j + 1) * t.input_size];
        let net = bh[j] + row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        *hj = net.tanh();
    }
}

fn output_layer(w: &[f64], t: &Topology, h: &[f64], y: &mut [f64]) {
    let wo = &w[t.output_weights()];
    let bo = &w[t.output_biases()];
    for (o, yo) in y.iter_mut().enumerate() {
        let row = &wo[o * t.hidden_size..(o + 1) * t.hidden_size];
        let net = bo[o] + row.iter().zip(h).map(|(a, b)| a * b).sum::<f64>();
        *yo = net.tanh();
    }
}

/// `tanh(W2 · tanh(W1 x + b1) + b2)`.
pub fn forward(weights: &WeightVector, topology: &Topology, x: &[f64]) -> Result<Vec<f64>> {
    weights.check(topology)?;
    if x.len() != topology.input_size {
        return Err(Error::arg(format!(
            "input has {} values, network expects {}",
            x.len(),
            topology.input_size
        )));
    }
    let mut h = vec![0.0; topology.hidden_size];
    let mut y = vec![0.0; topology.output_size];
    hidden_layer(&weights.0, topology, x, &mut h);
    output_layer(&weights.0, topology, &h, &mut y);
    Ok(y)
}

/// Mean squared error over every output of every example.
pub fn mse(weights: &[f64], topology: &Topology, batch: &Batch) -> Result<f64> {
    batch.check(topology)?;
    if weights.len() != topology.genome_length() {
        return Err(Error::arg("weight vector does not match topology"));
    }
    let mut h = vec![0.0; topology.hidden_size];
    let mut y = vec![0.0; topology.output_size];
    let mut sum = 0.0;
    for i in 0..batch.len() {
        hidden_layer(weights, topology, batch.input(i), &mut h);
        output_layer(weights, topology, &h, &mut y);
        sum += y
            .iter()
            .zip(batch.target(i))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>();
    }
    Ok(sum / (batch.len() * topology.output_size) as f64)
}

/// Mean squared error and its exact gradient by backpropagation.
pub fn mse_and_gradient(
    weights: &[f64],
    topology: &Topology,
    batch: &Batch,
) -> Result<(f64, Vec<f64>)> {
    batch.check(topology)?;
    if weights.len() != topology.genome_length() {
        return Err(Error::arg("weight vector does not match topology"));
    }
    let t = topology;
    let mut grad = vec![0.0; t.genome_length()];
    let mut h = vec![0.0; t.hidden_size];
    let mut y = vec![0.0; t.output_size];
    let mut dy = vec![0.0; t.output_size];
    let (rwh, rbh, rwo, rbo) = (
        t.hidden_weights(),
        t.hidden_biases(),
        t.output_weights(),
        t.output_biases(),
    );
    let wo = &weights[rwo.clone()];
    let mut sum = 0.0;

    for i in 0..batch.len() {
        let x = batch.input(i);
        hidden_layer(weights, t, x, &mut h);
        output_layer(weights, t, &h, &mut y);
        let mut example = 0.0;
        for ((d, &yo), &to) in dy.iter_mut().zip(&y).zip(batch.target(i)) {
            let e = yo - to;
            example += e * e;
            *d = e * (1.0 - yo * yo);
        }
        sum += example;
        for (o, &d) in dy.iter().enumerate() {
            let row = &mut grad[rwo.start + o * t.hidden_size..rwo.start + (o + 1) * t.hidden_size];
            for (g, &hj) in row.iter_mut().zip(&h) {
                *g += d * hj;
            }
            grad[rbo.start + o] += d;
        }
        for j in 0..t.hidden_size {
            let back: f64 = dy
                .iter()
                .enumerate()
                .map(|(o, &d)| wo[o * t.hidden_size + j] * d)
                .sum();
            let dh = back * (1.0 - h[j] * h[j]);
            let row = &mut grad[rwh.start + j * t.input_size..rwh.start + (j + 1) * t.input_size];
            for (g, &xi) in row.iter_mut().zip(x) {
                *g += dh * xi;
            }
            grad[rbh.start + j] += dh;
        }
    }

    let count = (batch.len() * t.output_size) as f64;
    let scale = 2.0 / count;
    grad.iter_mut().for_each(|g| *g *= scale);
    Ok((sum / count, grad))
}

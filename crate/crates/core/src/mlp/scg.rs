use std::fmt;

use super::network::{mse, mse_and_gradient, Batch};
use super::{Mlp, Topology, WeightVector};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct TrainingConfig {
    pub max_epochs: usize,
    /// Epochs without a new best validation error before stopping.
    pub patience: usize,
    /// Initial step for the finite-difference Hessian-vector estimate.
    pub sigma: f64,
    /// Initial Levenberg-style damping.
    pub lambda: f64,
    /// Training stops once the training MSE is at or below this value.
    pub goal: f64,
    /// Gradient-norm and step-norm floor for declaring convergence.
    pub min_grad: f64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            max_epochs: 200,
            patience: 6,
            sigma: 5e-5,
            lambda: 5e-7,
            goal: 0.0,
            min_grad: 1e-10,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_epochs == 0 || self.patience == 0 {
            return Err(Error::arg("max_epochs and patience must be at least 1"));
        }
        if !(self.sigma > 0.0 && self.lambda > 0.0) {
            return Err(Error::arg("sigma and lambda must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    Goal,
    Patience,
    MaxEpochs,
    ScgConverged,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopReason::Goal => "goal",
            StopReason::Patience => "patience",
            StopReason::MaxEpochs => "max_epochs",
            StopReason::ScgConverged => "scg_converged",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_mse: f64,
    pub validation_mse: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainedModel {
    pub model: Mlp,
    pub history: Vec<EpochRecord>,
    pub stop_reason: StopReason,
    /// Epoch whose weights were returned (the best-validation epoch when a
    /// validation set was given, otherwise the last one).
    pub selected_epoch: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn finite(v: f64, epoch: usize) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Training {
            epoch,
            message: format!("loss became {v}"),
        })
    }
}

/// Scaled conjugate gradient (Møller) with early stopping.
///
/// One epoch is one SCG iteration. A step is only accepted when the
/// comparison parameter is non-negative, so the training MSE never rises.
/// Conjugate directions restart every `genome_length` iterations. With a
/// non-empty validation set the returned weights are those of the epoch with
/// the lowest validation MSE.
pub fn train_scg(
    initial: &WeightVector,
    topology: &Topology,
    train: &Batch,
    validation: &Batch,
    cfg: &TrainingConfig,
) -> Result<TrainedModel> {
    cfg.validate()?;
    initial.check(topology)?;
    let use_val = !validation.is_empty();
    let n = topology.genome_length();

    let mut w = initial.0.clone();
    let (e0, g0) = mse_and_gradient(&w, topology, train)?;
    let mut err = finite(e0, 0)?;
    let mut r: Vec<f64> = g0.iter().map(|g| -g).collect();
    let mut p = r.clone();
    let mut success = true;
    let mut lambda = cfg.lambda;
    let mut lambda_bar = 0.0;
    let mut delta = 0.0;

    let mut history = Vec::new();
    let mut best_val = f64::INFINITY;
    let mut best_w = w.clone();
    let mut best_epoch = 0;
    let mut fails = 0;
    let mut stop = StopReason::MaxEpochs;
    let mut probe = vec![0.0; n];
    let mut trial = vec![0.0; n];

    for epoch in 1..=cfg.max_epochs {
        let mut converged = false;
        let mut p_sq = dot(&p, &p);
        let mut mu = dot(&p, &r);
        if mu <= 0.0 {
            // lost conjugacy; restart along steepest descent
            p.clone_from(&r);
            p_sq = dot(&p, &p);
            mu = p_sq;
            success = true;
        }

        if p_sq.sqrt() < cfg.min_grad {
            converged = true;
        } else {
            if success {
                let sigma_k = cfg.sigma / p_sq.sqrt();
                for ((q, wi), pi) in probe.iter_mut().zip(&w).zip(&p) {
                    *q = wi + sigma_k * pi;
                }
                let (_, gp) = mse_and_gradient(&probe, topology, train)?;
                // s = (g(w + sigma p) - g(w)) / sigma, with g(w) = -r
                delta = gp
                    .iter()
                    .zip(&r)
                    .zip(&p)
                    .map(|((gpi, ri), pi)| (gpi + ri) / sigma_k * pi)
                    .sum();
            }
            delta += (lambda - lambda_bar) * p_sq;
            if delta <= 0.0 {
                lambda_bar = 2.0 * (lambda - delta / p_sq);
                delta = -delta + lambda * p_sq;
                lambda = lambda_bar;
            }
            let alpha = mu / delta;
            for ((t, wi), pi) in trial.iter_mut().zip(&w).zip(&p) {
                *t = wi + alpha * pi;
            }
            let err_new = finite(mse(&trial, topology, train)?, epoch)?;
            let comparison = 2.0 * delta * (err - err_new) / (mu * mu);

            if comparison >= 0.0 {
                let step = alpha.abs() * p_sq.sqrt();
                std::mem::swap(&mut w, &mut trial);
                err = err_new;
                let (_, g) = mse_and_gradient(&w, topology, train)?;
                let r_new: Vec<f64> = g.iter().map(|v| -v).collect();
                lambda_bar = 0.0;
                success = true;
                if epoch % n == 0 {
                    p.clone_from(&r_new);
                } else {
                    let beta = (dot(&r_new, &r_new) - dot(&r_new, &r)) / mu;
                    for (pi, ri) in p.iter_mut().zip(&r_new) {
                        *pi = ri + beta * *pi;
                    }
                }
                r = r_new;
                if comparison >= 0.75 {
                    lambda *= 0.25;
                }
                converged = step < cfg.min_grad || dot(&r, &r).sqrt() < cfg.min_grad;
            } else {
                lambda_bar = lambda;
                success = false;
            }
            if comparison < 0.25 {
                lambda += delta * (1.0 - comparison) / p_sq;
            }
            if !lambda.is_finite() || lambda > 1e100 {
                converged = true;
            }
        }

        let validation_mse = if use_val {
            Some(finite(mse(&w, topology, validation)?, epoch)?)
        } else {
            None
        };
        history.push(EpochRecord {
            epoch,
            train_mse: err,
            validation_mse,
        });
        if let Some(v) = validation_mse {
            if v < best_val {
                best_val = v;
                best_w.clone_from(&w);
                best_epoch = epoch;
                fails = 0;
            } else if v > best_val {
                fails += 1;
            }
        }

        if err <= cfg.goal {
            stop = StopReason::Goal;
            break;
        }
        if use_val && fails >= cfg.patience {
            stop = StopReason::Patience;
            break;
        }
        if converged {
            stop = StopReason::ScgConverged;
            break;
        }
    }

    let (weights, selected_epoch) = if use_val && !history.is_empty() {
        (best_w, best_epoch)
    } else {
        (w, history.len())
    };
    Ok(TrainedModel {
        model: Mlp {
            topology: *topology,
            weights: WeightVector(weights),
        },
        history,
        stop_reason: stop,
        selected_epoch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlp::{init_weights, WeightSource};

    fn blobs(n: usize, offset: f64) -> (Vec<Vec<f64>>, Vec<usize>) {
        let mut x = Vec::new();
        let mut c = Vec::new();
        for i in 0..n {
            let t = i as f64;
            let jitter = [(t * 1.7).sin() * 0.05, (t * 2.3).cos() * 0.05];
            if i % 2 == 0 {
                x.push(vec![0.2 + jitter[0] + offset, 0.2 + jitter[1]]);
                c.push(0);
            } else {
                x.push(vec![0.8 + jitter[0] - offset, 0.8 + jitter[1]]);
                c.push(1);
            }
        }
        (x, c)
    }

    #[test]
    fn infinite_goal_stops_after_one_epoch() {
        let t = Topology::new(2, 4, 2).unwrap();
        let (x, c) = blobs(20, 0.0);
        let b = Batch::one_hot(&x, &c, 2).unwrap();
        let empty = Batch::one_hot(&[], &[], 2).unwrap();
        let cfg = TrainingConfig {
            goal: f64::INFINITY,
            ..TrainingConfig::default()
        };
        let w = init_weights(&t, WeightSource::Seeded(1)).unwrap();
        let m = train_scg(&w, &t, &b, &empty, &cfg).unwrap();
        assert_eq!(m.stop_reason, StopReason::Goal);
        assert_eq!(m.history.len(), 1);
    }

    #[test]
    fn training_error_never_rises() {
        let t = Topology::new(2, 6, 2).unwrap();
        let (x, c) = blobs(40, 0.0);
        let b = Batch::one_hot(&x, &c, 2).unwrap();
        let empty = Batch::one_hot(&[], &[], 2).unwrap();
        for seed in 0..5 {
            let w = init_weights(&t, WeightSource::Seeded(seed)).unwrap();
            let m = train_scg(&w, &t, &b, &empty, &TrainingConfig::default()).unwrap();
            assert!(m.history.len() <= 200);
            for pair in m.history.windows(2) {
                assert!(pair[1].train_mse <= pair[0].train_mse);
            }
        }
    }

    #[test]
    fn separable_blobs_are_learned() {
        let t = Topology::new(2, 10, 2).unwrap();
        let (x, c) = blobs(60, 0.0);
        let b = Batch::one_hot(&x, &c, 2).unwrap();
        let empty = Batch::one_hot(&[], &[], 2).unwrap();
        let w = init_weights(&t, WeightSource::Seeded(4)).unwrap();
        let m = train_scg(&w, &t, &b, &empty, &TrainingConfig::default()).unwrap();
        for (xi, &ci) in x.iter().zip(&c) {
            assert_eq!(m.model.predict_class(xi).unwrap(), ci);
        }
    }

    #[test]
    fn diverging_validation_triggers_patience() {
        let t = Topology::new(2, 10, 2).unwrap();
        let (x, c) = blobs(40, 0.0);
        // validation labels are the mirror image of the training labels
        let flipped: Vec<usize> = c.iter().map(|&k| 1 - k).collect();
        let b = Batch::one_hot(&x, &c, 2).unwrap();
        let v = Batch::one_hot(&x, &flipped, 2).unwrap();
        let cfg = TrainingConfig {
            patience: 1,
            ..TrainingConfig::default()
        };
        let w = init_weights(&t, WeightSource::Seeded(2)).unwrap();
        let m = train_scg(&w, &t, &b, &v, &cfg).unwrap();
        assert_eq!(m.stop_reason, StopReason::Patience);
        let best = m
            .history
            .iter()
            .min_by(|a, b| {
                a.validation_mse
                    .unwrap()
                    .total_cmp(&b.validation_mse.unwrap())
            })
            .unwrap();
        assert_eq!(best.epoch, m.selected_epoch);
        let restored = mse(&m.model.weights.0, &t, &v).unwrap();
        assert_eq!(Some(restored), best.validation_mse);
    }

    #[test]
    fn injected_start_is_reproducible() {
        let t = Topology::default();
        let x: Vec<Vec<f64>> = (0..30)
            .map(|i| vec![(i as f64 * 0.37).sin(), (i as f64).cos()])
            .collect();
        let c: Vec<usize> = (0..30).map(|i| i % 4).collect();
        let b = Batch::one_hot(&x, &c, 4).unwrap();
        let v = Batch::one_hot(&x[..8], &c[..8], 4).unwrap();
        let w = init_weights(&t, WeightSource::Seeded(8)).unwrap();
        let a = train_scg(&w, &t, &b, &v, &TrainingConfig::default()).unwrap();
        let again = train_scg(&w, &t, &b, &v, &TrainingConfig::default()).unwrap();
        assert_eq!(a, again);
    }
}

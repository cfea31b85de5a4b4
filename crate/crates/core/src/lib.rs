//! Four-way anomaly taxonomy labeling (ND / CNA / CPA / PA) and a
//! genetic-algorithm front end that evolves the initial weights of a small
//! tansig multilayer perceptron trained by scaled conjugate gradient.
//!
//! The pipeline, end to end:
//!
//! 1. [`data`] loads and normalizes a tabular dataset, optionally aggregating
//!    discarded features into a per-sample weight added to the retained ones.
//! 2. [`labeling`] flags point anomalies by k-nearest-neighbor distance, splits
//!    them into PA and CPA by their mean distance to the other point anomalies,
//!    clusters the remainder and marks clusters with high density spread as CNA.
//! 3. [`mlp`] trains a one-hidden-layer network on the labels.
//! 4. [`ga`] evolves initial weight vectors, using trained test error as fitness,
//!    and compares the result with a conventionally initialized network.
//! 5. [`eval`] turns predictions into confusion matrices, TPR/FPR and ROC curves.

pub mod data;
pub mod error;
pub mod eval;
pub mod exec;
pub mod ga;
pub mod label;
pub mod labeling;
pub mod mlp;
pub mod report;
mod stats;

pub use error::{Error, Result};
pub use exec::Execution;
pub use label::AnomalyLabel;

//! Dataset representation and the preprocessing steps that run before labeling.

mod aggregate;
mod csv_io;
mod normalize;
mod split;
mod synth;

pub use aggregate::{aggregate_features, compute_sample_weights};
pub use csv_io::{load_csv, read_csv, write_csv, write_csv_to, ColumnRole, Schema};
pub use normalize::{minmax_normalize, NormalizationParams};
pub use split::{allocate_counts, stratified_split, Split, SplitRatios};
pub use synth::{generate_synthetic, Blob, SynthSpec};

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::label::AnomalyLabel;

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub id: usize,
    pub features: Vec<f64>,
    pub class_id: Option<usize>,
    pub label: Option<AnomalyLabel>,
}

impl Sample {
    pub fn new(id: usize, features: Vec<f64>) -> Self {
        Sample {
            id,
            features,
            class_id: None,
            label: None,
        }
    }
}

/// An ordered collection of samples sharing one feature dimension.
///
/// Sample ids are unique. Datasets read from disk or generated carry dense ids
/// `0..n`; subsets produced by splitting keep the ids of their parent so that
/// results can be merged back.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    samples: Vec<Sample>,
    feature_names: Vec<String>,
    num_classes: Option<usize>,
}

impl Dataset {
    pub fn new(
        feature_names: Vec<String>,
        samples: Vec<Sample>,
        num_classes: Option<usize>,
    ) -> Result<Self> {
        let d = feature_names.len();
        if d == 0 {
            return Err(Error::arg("dataset needs at least one feature"));
        }
        let mut seen = HashSet::with_capacity(samples.len());
        for s in &samples {
            if s.features.len() != d {
                return Err(Error::Structure(format!(
                    "sample {} has {} features, expected {d}",
                    s.id,
                    s.features.len()
                )));
            }
            if !seen.insert(s.id) {
                return Err(Error::Structure(format!("duplicate sample id {}", s.id)));
            }
            if let (Some(c), Some(k)) = (s.class_id, num_classes) {
                if c >= k {
                    return Err(Error::Structure(format!(
                        "sample {} has class {c}, but only {k} classes are declared",
                        s.id
                    )));
                }
            }
        }
        Ok(Dataset {
            samples,
            feature_names,
            num_classes,
        })
    }

    /// Builds an unlabeled dataset with dense ids and features named `x0, x1, ...`.
    pub fn from_points(points: Vec<Vec<f64>>) -> Result<Self> {
        let d = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::arg("no points"))?;
        let names = (0..d).map(|j| format!("x{j}")).collect();
        let samples = points
            .into_iter()
            .enumerate()
            .map(|(id, f)| Sample::new(id, f))
            .collect();
        Dataset::new(names, samples, None)
    }

    /// An empty dataset with the same feature layout.
    pub fn empty_like(&self) -> Self {
        Dataset {
            samples: Vec::new(),
            feature_names: self.feature_names.clone(),
            num_classes: self.num_classes,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.feature_names.len()
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn num_classes(&self) -> Option<usize> {
        self.num_classes
    }

    pub fn points(&self) -> Vec<&[f64]> {
        self.samples.iter().map(|s| s.features.as_slice()).collect()
    }

    pub fn owned_points(&self) -> Vec<Vec<f64>> {
        self.samples.iter().map(|s| s.features.clone()).collect()
    }

    pub fn has_classes(&self) -> bool {
        !self.samples.is_empty() && self.samples.iter().all(|s| s.class_id.is_some())
    }

    pub fn has_labels(&self) -> bool {
        !self.samples.is_empty() && self.samples.iter().all(|s| s.label.is_some())
    }

    pub fn any_labels(&self) -> bool {
        self.samples.iter().any(|s| s.label.is_some())
    }

    /// Anomaly labels, if every sample carries one.
    pub fn labels(&self) -> Option<Vec<AnomalyLabel>> {
        self.samples.iter().map(|s| s.label).collect()
    }

    /// Copy of the dataset with labels assigned positionally.
    pub fn with_labels(&self, labels: &[AnomalyLabel]) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::arg(format!(
                "{} labels for {} samples",
                labels.len(),
                self.len()
            )));
        }
        let mut out = self.clone();
        for (s, &l) in out.samples.iter_mut().zip(labels) {
            s.label = Some(l);
        }
        Ok(out)
    }

    /// Copy with features replaced positionally; names must match the new width.
    pub fn with_features(&self, names: Vec<String>, features: Vec<Vec<f64>>) -> Result<Self> {
        if features.len() != self.len() {
            return Err(Error::arg("feature row count does not match sample count"));
        }
        let samples = self
            .samples
            .iter()
            .zip(features)
            .map(|(s, f)| Sample {
                features: f,
                ..s.clone()
            })
            .collect();
        Dataset::new(names, samples, self.num_classes)
    }

    /// Samples at the given positions, in the given order.
    pub fn select(&self, positions: &[usize]) -> Self {
        Dataset {
            samples: positions.iter().map(|&i| self.samples[i].clone()).collect(),
            feature_names: self.feature_names.clone(),
            num_classes: self.num_classes,
        }
    }

    /// Concatenates datasets with identical feature layout, ordering the result by id.
    pub fn merge(parts: Vec<Dataset>) -> Result<Self> {
        let mut iter = parts.into_iter();
        let first = iter.next().ok_or_else(|| Error::arg("nothing to merge"))?;
        let names = first.feature_names.clone();
        let num_classes = first.num_classes;
        let mut samples = first.samples;
        for p in iter {
            if p.feature_names.len() != names.len() {
                return Err(Error::Structure("merged parts differ in dimension".into()));
            }
            samples.extend(p.samples);
        }
        samples.sort_by_key(|s| s.id);
        Dataset::new(names, samples, num_classes)
    }
}

use std::collections::HashMap;

use super::{label_dataset, LabelingConfig, LabelingReport};
use crate::data::{aggregate_features, compute_sample_weights, minmax_normalize, Dataset};
use crate::error::{Error, Result};
use crate::label::AnomalyLabel;

/// Settings for labeling a dataset that already carries class ids.
#[derive(Clone, Debug, Default)]
pub struct SupervisedConfig {
    /// Main features kept after aggregation. Empty means every feature not discarded.
    pub retained: Vec<usize>,
    /// Features folded into the per-sample weight. Empty disables weighting.
    pub discarded: Vec<usize>,
    pub labeling: LabelingConfig,
    /// Per-class overrides of `labeling`.
    pub per_class: HashMap<usize, LabelingConfig>,
}

impl SupervisedConfig {
    pub fn for_class(&self, class: usize) -> &LabelingConfig {
        self.per_class.get(&class).unwrap_or(&self.labeling)
    }
}

#[derive(Clone, Debug)]
pub struct SupervisedLabeling {
    /// Aggregated, per-class renormalized, labeled samples in original id order.
    pub dataset: Dataset,
    /// One report per non-empty class, in class order.
    pub reports: Vec<(usize, LabelingReport)>,
    /// Classes too small for the configured labeling; all their samples are ND.
    pub degenerate: Vec<usize>,
}

/// Normalize and aggregate features, split by class, label each class on its
/// own, renormalize each labeled class, and merge back by id.
pub fn label_supervised(ds: &Dataset, cfg: &SupervisedConfig) -> Result<SupervisedLabeling> {
    let num_classes = ds
        .num_classes()
        .filter(|_| ds.has_classes())
        .ok_or_else(|| Error::arg("supervised labeling needs a class for every sample"))?;

    let retained: Vec<usize> = if cfg.retained.is_empty() {
        (0..ds.dim())
            .filter(|j| !cfg.discarded.contains(j))
            .collect()
    } else {
        cfg.retained.clone()
    };
    let (normalized, _) = minmax_normalize(ds).map_err(|e| e.in_stage("normalization"))?;
    let weights = if cfg.discarded.is_empty() {
        vec![0.0; ds.len()]
    } else {
        compute_sample_weights(&normalized, &cfg.discarded).map_err(|e| e.in_stage("weighting"))?
    };
    let aggregated = aggregate_features(&normalized, &retained, &weights)
        .map_err(|e| e.in_stage("aggregation"))?;

    let mut parts = Vec::new();
    let mut reports = Vec::new();
    let mut degenerate = Vec::new();
    for class in 0..num_classes {
        let positions: Vec<usize> = aggregated
            .samples()
            .iter()
            .enumerate()
            .filter(|(_, s)| s.class_id == Some(class))
            .map(|(i, _)| i)
            .collect();
        if positions.is_empty() {
            continue;
        }
        let sub = aggregated.select(&positions);
        let lcfg = cfg.for_class(class);
        let (labeled, report) = if sub.len() <= lcfg.knn_k || sub.len() < lcfg.num_clusters {
            degenerate.push(class);
            let labels = vec![AnomalyLabel::Nd; sub.len()];
            (
                sub.with_labels(&labels)?,
                LabelingReport::from_labels(&labels, None, &[]),
            )
        } else {
            let out = label_dataset(&sub, lcfg).map_err(|e| Error::Stage {
                stage: "class labeling",
                source: Box::new(Error::Argument(format!("class {class}: {e}"))),
            })?;
            (out.dataset, out.report)
        };
        let (renormalized, _) = minmax_normalize(&labeled)?;
        parts.push(renormalized);
        reports.push((class, report));
    }

    Ok(SupervisedLabeling {
        dataset: Dataset::merge(parts)?,
        reports,
        degenerate,
    })
}

use std::collections::HashSet;

use super::Dataset;
use crate::error::{Error, Result};

fn check_indices(ds: &Dataset, idx: &[usize], what: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for &j in idx {
        if j >= ds.dim() {
            return Err(Error::arg(format!(
                "{what} feature index {j} out of range for dimension {}",
                ds.dim()
            )));
        }
        if !seen.insert(j) {
            return Err(Error::arg(format!("{what} feature index {j} repeated")));
        }
    }
    Ok(())
}

/// Per-sample weight: the mean of the sample's (normalized) values over the
/// discarded features.
pub fn compute_sample_weights(ds: &Dataset, discarded: &[usize]) -> Result<Vec<f64>> {
    if discarded.is_empty() {
        return Err(Error::arg("weighting needs at least one discarded feature"));
    }
    check_indices(ds, discarded, "discarded")?;
    let m = discarded.len() as f64;
    Ok(ds
        .samples()
        .iter()
        .map(|s| discarded.iter().map(|&j| s.features[j]).sum::<f64>() / m)
        .collect())
}

/// Keeps only the retained features, each shifted by its sample's weight.
pub fn aggregate_features(ds: &Dataset, retained: &[usize], weights: &[f64]) -> Result<Dataset> {
    if retained.is_empty() {
        return Err(Error::arg("at least one retained feature is required"));
    }
    check_indices(ds, retained, "retained")?;
    if weights.len() != ds.len() {
        return Err(Error::arg(format!(
            "{} weights for {} samples",
            weights.len(),
            ds.len()
        )));
    }
    let names = retained
        .iter()
        .map(|&j| ds.feature_names()[j].clone())
        .collect();
    let feats = ds
        .samples()
        .iter()
        .zip(weights)
        .map(|(s, &w)| retained.iter().map(|&j| w + s.features[j]).collect())
        .collect();
    ds.with_features(names, feats)
}

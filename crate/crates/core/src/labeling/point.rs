use super::distance::dist;
use super::LabelingConfig;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::stats::{anchored_mean, population_std};

/// Mean distance from each point to its `k` nearest other points.
pub fn knn_scores<P: AsRef<[f64]> + Sync>(points: &[P], k: usize) -> Result<Vec<f64>> {
    if k == 0 || points.len() <= k {
        return Err(Error::arg(format!(
            "need more than {k} points for a {k}-nearest-neighbour score, got {}",
            points.len()
        )));
    }
    Ok(Execution::Parallel.map_range(points.len(), |i| {
        let p = points[i].as_ref();
        let mut d: Vec<f64> = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| dist(p, q.as_ref()))
            .collect();
        d.select_nth_unstable_by(k - 1, f64::total_cmp);
        let mut near = d[..k].to_vec();
        // fixed summation order, independent of the selection's internal layout
        near.sort_by(f64::total_cmp);
        near.iter().sum::<f64>() / k as f64
    }))
}

/// Positions of samples whose kNN score is strictly above `mean + c * std`.
pub fn detect_point_anomalies<P: AsRef<[f64]> + Sync>(
    points: &[P],
    cfg: &LabelingConfig,
) -> Result<Vec<usize>> {
    cfg.validate()?;
    let scores = knn_scores(points, cfg.knn_k)?;
    let mut sorted = scores.clone();
    sorted.sort_by(f64::total_cmp);
    let threshold = anchored_mean(&sorted) + cfg.pa_score_multiplier * population_std(&sorted);
    Ok(scores
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > threshold)
        .map(|(i, _)| i)
        .collect())
}

use super::distance::dist;
use super::kmeans::ClusterModel;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::stats::{anchored_mean, population_std};

/// Density assigned to a point whose neighbours all coincide with it.
pub const DENSITY_CAP: f64 = 1e12;

/// Populates per-point density, per-cluster density spread, and the spread threshold.
///
/// A point's density is the reciprocal of its mean distance to its `knn_k`
/// nearest co-cluster members (fewer when the cluster is small). The spread
/// of a cluster is the population standard deviation of its members'
/// densities; singleton clusters have spread 0. The threshold is the mean
/// spread over all clusters.
pub fn cluster_density_stats<P: AsRef<[f64]> + Sync>(
    model: &ClusterModel,
    points: &[P],
    knn_k: usize,
) -> Result<ClusterModel> {
    if points.len() != model.assignment.len() {
        return Err(Error::arg("points do not match the cluster assignment"));
    }
    if knn_k == 0 {
        return Err(Error::arg("knn_k must be at least 1"));
    }
    let k = model.num_clusters();
    let members: Vec<Vec<usize>> = (0..k).map(|c| model.members(c)).collect();
    let assignment = &model.assignment;

    let density = Execution::Parallel.map_range(points.len(), |i| {
        let peers = &members[assignment[i]];
        let mut d: Vec<f64> = peers
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| dist(points[i].as_ref(), points[j].as_ref()))
            .collect();
        if d.is_empty() {
            return f64::NAN;
        }
        let m = knn_k.min(d.len());
        d.sort_by(f64::total_cmp);
        let mean = d[..m].iter().sum::<f64>() / m as f64;
        if mean < 1.0 / DENSITY_CAP {
            DENSITY_CAP
        } else {
            1.0 / mean
        }
    });

    let density_std: Vec<f64> = members
        .iter()
        .map(|m| {
            if m.len() < 2 {
                0.0
            } else {
                let dens: Vec<f64> = m.iter().map(|&i| density[i]).collect();
                population_std(&dens)
            }
        })
        .collect();
    let threshold = anchored_mean(&density_std);

    Ok(ClusterModel {
        density,
        density_std,
        density_threshold: Some(threshold),
        ..model.clone()
    })
}

/// Clusters whose density spread meets or exceeds the threshold.
pub fn detect_cna(model: &ClusterModel) -> Result<Vec<usize>> {
    let th = model
        .density_threshold
        .ok_or_else(|| Error::arg("cluster density statistics not computed"))?;
    Ok(model
        .density_std
        .iter()
        .enumerate()
        .filter(|(_, &s)| s >= th)
        .map(|(c, _)| c)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(assignment: Vec<usize>, k: usize) -> ClusterModel {
        ClusterModel {
            centroids: vec![vec![0.0, 0.0]; k],
            assignment,
            objective_history: vec![],
            density: vec![],
            density_std: vec![],
            density_threshold: None,
        }
    }

    #[test]
    fn regular_polygon_has_zero_spread() {
        // square: every vertex has the same neighbour distances
        let pts = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let m = cluster_density_stats(&model(vec![0; 4], 1), &pts, 2).unwrap();
        assert_eq!(m.density_std, vec![0.0]);
        assert!(m.density.iter().all(|&d| d == m.density[0]));
    }

    #[test]
    fn threshold_is_mean_spread() {
        let mut m = model(vec![0, 1], 2);
        m.density_std = vec![0.1, 0.3];
        m.density_threshold = Some(anchored_mean(&m.density_std));
        assert!((m.density_threshold.unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(detect_cna(&m).unwrap(), vec![1]);
    }

    #[test]
    fn singleton_cluster_spread_is_zero() {
        let pts = vec![[0.0, 0.0], [5.0, 5.0], [5.0, 6.0], [6.0, 9.0]];
        let m = cluster_density_stats(&model(vec![0, 1, 1, 1], 2), &pts, 5).unwrap();
        assert_eq!(m.density_std[0], 0.0);
        assert!(m.density_std[1] > 0.0);
    }

    #[test]
    fn equal_spreads_are_all_cna() {
        let mut m = model(vec![0, 1, 2], 3);
        m.density_std = vec![0.1; 3];
        m.density_threshold = Some(anchored_mean(&m.density_std));
        assert_eq!(detect_cna(&m).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn single_cluster_is_cna() {
        let pts = vec![[0.0, 0.0], [1.0, 0.0], [3.0, 0.5]];
        let m = cluster_density_stats(&model(vec![0; 3], 1), &pts, 1).unwrap();
        assert_eq!(detect_cna(&m).unwrap(), vec![0]);
    }

    #[test]
    fn coincident_points_use_cap() {
        let pts = vec![[2.0, 2.0]; 3];
        let m = cluster_density_stats(&model(vec![0; 3], 1), &pts, 2).unwrap();
        assert_eq!(m.density, vec![DENSITY_CAP; 3]);
    }

    #[test]
    fn missing_stats_is_an_error() {
        assert!(detect_cna(&model(vec![0], 1)).is_err());
    }
}

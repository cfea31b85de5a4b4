//! The taxonomy engine.
//!
//! Point anomalies (PA) are samples whose mean distance to their nearest
//! neighbours is unusually large. Among them, the ones whose mean distance to
//! the other point anomalies is below the group average are collective point
//! anomalies (CPA). Everything else is clustered; clusters whose per-point
//! density is unusually uneven are collective normal anomalies (CNA) and the
//! rest is normal data (ND).

mod density;
mod distance;
mod kmeans;
mod pipeline;
mod point;
mod radius;
mod supervised;

pub use density::{cluster_density_stats, detect_cna, DENSITY_CAP};
pub use distance::{euclidean_distance, pairwise_distances};
pub use kmeans::{kmeans, kmeans_with_cap, ClusterModel, KMEANS_MAX_ITER};
pub use pipeline::{label_dataset, Labeling, LabelingReport};
pub use point::{detect_point_anomalies, knn_scores};
pub use radius::{build_radius_table, detect_cpa, RadiusTable};
pub use supervised::{label_supervised, SupervisedConfig, SupervisedLabeling};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct LabelingConfig {
    pub num_clusters: usize,
    /// Neighbour count for both the point-anomaly score and cluster density.
    pub knn_k: usize,
    /// A sample is a point anomaly when its score exceeds `mean + c * std`.
    pub pa_score_multiplier: f64,
    pub seed: u64,
}

impl Default for LabelingConfig {
    fn default() -> Self {
        LabelingConfig {
            num_clusters: 5,
            knn_k: 5,
            pa_score_multiplier: 2.0,
            seed: 0,
        }
    }
}

impl LabelingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_clusters == 0 {
            return Err(Error::arg("num_clusters must be at least 1"));
        }
        if self.knn_k == 0 {
            return Err(Error::arg("knn_k must be at least 1"));
        }
        if self.pa_score_multiplier.is_nan() || self.pa_score_multiplier <= 0.0 {
            return Err(Error::arg("pa_score_multiplier must be positive"));
        }
        Ok(())
    }
}

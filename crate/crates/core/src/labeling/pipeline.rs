use std::fmt::Write as _;

use super::{
    build_radius_table, cluster_density_stats, detect_cna, detect_cpa, detect_point_anomalies,
    kmeans, ClusterModel, LabelingConfig, RadiusTable,
};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::label::AnomalyLabel;

/// Label counts of one labeled (sub-)dataset, with the per-cluster breakdown.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelingReport {
    pub points: usize,
    pub clusters: usize,
    pub nd: usize,
    pub cna: usize,
    pub cpa: usize,
    pub pa: usize,
    pub cluster_sizes: Vec<usize>,
    pub cluster_labels: Vec<AnomalyLabel>,
}

impl LabelingReport {
    pub fn from_labels(
        labels: &[AnomalyLabel],
        clusters: Option<&ClusterModel>,
        cna: &[usize],
    ) -> Self {
        let count = |l| labels.iter().filter(|&&x| x == l).count();
        let (cluster_sizes, cluster_labels) = match clusters {
            Some(m) => (
                m.sizes(),
                (0..m.num_clusters())
                    .map(|c| {
                        if cna.contains(&c) {
                            AnomalyLabel::Cna
                        } else {
                            AnomalyLabel::Nd
                        }
                    })
                    .collect(),
            ),
            None => (Vec::new(), Vec::new()),
        };
        LabelingReport {
            points: labels.len(),
            clusters: cluster_sizes.len(),
            nd: count(AnomalyLabel::Nd),
            cna: count(AnomalyLabel::Cna),
            cpa: count(AnomalyLabel::Cpa),
            pa: count(AnomalyLabel::Pa),
            cluster_sizes,
            cluster_labels,
        }
    }

    pub fn count(&self, label: AnomalyLabel) -> usize {
        match label {
            AnomalyLabel::Nd => self.nd,
            AnomalyLabel::Cna => self.cna,
            AnomalyLabel::Cpa => self.cpa,
            AnomalyLabel::Pa => self.pa,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in [
            ("#Point", self.points),
            ("#Cluster", self.clusters),
            ("#ND", self.nd),
            ("#CNA", self.cna),
            ("#CPA", self.cpa),
            ("#PA", self.pa),
        ] {
            let _ = writeln!(out, "{k:<10}{v:>6}");
        }
        if !self.cluster_sizes.is_empty() {
            let _ = writeln!(out, "\n{:<10}{:>6}  Label", "Cluster", "Size");
            for (c, (size, label)) in self
                .cluster_sizes
                .iter()
                .zip(&self.cluster_labels)
                .enumerate()
            {
                let _ = writeln!(out, "{:<10}{size:>6}  {label}", c + 1);
            }
        }
        out
    }

    pub const CSV_HEADER: &'static str = "dataset,#Point,#Cluster,#ND,#CNA,#CPA,#PA";

    pub fn csv_row(&self, name: &str) -> String {
        format!(
            "{name},{},{},{},{},{},{}",
            self.points, self.clusters, self.nd, self.cna, self.cpa, self.pa
        )
    }
}

/// Full result of the unsupervised labeling pipeline.
#[derive(Clone, Debug)]
pub struct Labeling {
    pub dataset: Dataset,
    pub labels: Vec<AnomalyLabel>,
    pub report: LabelingReport,
    /// Positions flagged as point anomalies (PA or CPA).
    pub pa_candidates: Vec<usize>,
    /// Cluster index per position; `None` for point anomalies.
    pub cluster_of: Vec<Option<usize>>,
    pub radius: Option<RadiusTable>,
    pub clusters: ClusterModel,
}

/// Point-anomaly detection, CPA extraction among the point anomalies,
/// k-means on the remainder, then CNA/ND by cluster density spread.
pub fn label_dataset(ds: &Dataset, cfg: &LabelingConfig) -> Result<Labeling> {
    cfg.validate()?;
    let points = ds.points();
    let n = points.len();

    let pa_candidates =
        detect_point_anomalies(&points, cfg).map_err(|e| e.in_stage("point anomaly detection"))?;
    let mut labels = vec![AnomalyLabel::Nd; n];
    let mut radius = None;
    for &i in &pa_candidates {
        labels[i] = AnomalyLabel::Pa;
    }
    if pa_candidates.len() >= 2 {
        let pa_points: Vec<&[f64]> = pa_candidates.iter().map(|&i| points[i]).collect();
        let table = build_radius_table(&pa_points).map_err(|e| e.in_stage("radius table"))?;
        for local in detect_cpa(&table) {
            labels[pa_candidates[local]] = AnomalyLabel::Cpa;
        }
        radius = Some(table);
    }

    let rest: Vec<usize> = (0..n).filter(|i| !pa_candidates.contains(i)).collect();
    if rest.len() < cfg.num_clusters {
        return Err(Error::Degenerate(format!(
            "{} non-anomalous points cannot form {} clusters",
            rest.len(),
            cfg.num_clusters
        ))
        .in_stage("clustering"));
    }
    let rest_points: Vec<&[f64]> = rest.iter().map(|&i| points[i]).collect();
    let model = kmeans(&rest_points, cfg.num_clusters, cfg.seed)
        .and_then(|m| cluster_density_stats(&m, &rest_points, cfg.knn_k))
        .map_err(|e| e.in_stage("clustering"))?;
    let cna = detect_cna(&model).map_err(|e| e.in_stage("collective normal anomalies"))?;

    let mut cluster_of = vec![None; n];
    for (local, &i) in rest.iter().enumerate() {
        let c = model.assignment[local];
        cluster_of[i] = Some(c);
        if cna.contains(&c) {
            labels[i] = AnomalyLabel::Cna;
        }
    }

    let report = LabelingReport::from_labels(&labels, Some(&model), &cna);
    Ok(Labeling {
        dataset: ds.with_labels(&labels)?,
        labels,
        report,
        pa_candidates,
        cluster_of,
        radius,
        clusters: model,
    })
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::distance::dist;
use crate::error::{Error, Result};
use crate::exec::Execution;

pub const KMEANS_MAX_ITER: usize = 300;

/// Cluster centroids and the assignment of each input point (by position).
///
/// The density fields stay empty until [`super::cluster_density_stats`] fills them.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterModel {
    pub centroids: Vec<Vec<f64>>,
    pub assignment: Vec<usize>,
    /// Sum of squared distances to the assigned centroid, one entry per
    /// assignment pass.
    pub objective_history: Vec<f64>,
    pub density: Vec<f64>,
    pub density_std: Vec<f64>,
    pub density_threshold: Option<f64>,
}

impl ClusterModel {
    pub fn num_clusters(&self) -> usize {
        self.centroids.len()
    }

    pub fn members(&self, cluster: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == cluster)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_clusters()];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn objective(&self) -> f64 {
        self.objective_history.last().copied().unwrap_or(0.0)
    }
}

fn nearest(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, q) in centroids.iter().enumerate() {
        let d = dist(p, q);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

/// Nearest-centroid assignment (ties to the lowest index) and squared distances.
pub(crate) fn assign<P: AsRef<[f64]> + Sync>(
    points: &[P],
    centroids: &[Vec<f64>],
) -> (Vec<usize>, Vec<f64>) {
    Execution::Parallel
        .map_range(points.len(), |i| {
            let (c, d) = nearest(points[i].as_ref(), centroids);
            (c, d * d)
        })
        .into_iter()
        .unzip()
}

fn recompute_centroid<P: AsRef<[f64]>>(
    points: &[P],
    assignment: &[usize],
    c: usize,
    out: &mut [f64],
) {
    out.iter_mut().for_each(|v| *v = 0.0);
    let mut count = 0usize;
    for (p, &a) in points.iter().zip(assignment) {
        if a == c {
            for (o, v) in out.iter_mut().zip(p.as_ref()) {
                *o += v;
            }
            count += 1;
        }
    }
    if count > 0 {
        out.iter_mut().for_each(|v| *v /= count as f64);
    }
}

pub fn kmeans<P: AsRef<[f64]> + Sync>(points: &[P], k: usize, seed: u64) -> Result<ClusterModel> {
    kmeans_with_cap(points, k, seed, KMEANS_MAX_ITER)
}

/// Lloyd's algorithm from `k` distinct, seeded-random input points.
///
/// Stops at an assignment fixpoint or after `max_iter` assignment passes. A
/// cluster left empty by an update is reseeded with the point farthest from
/// its centroid, taken from a cluster with at least two members.
pub fn kmeans_with_cap<P: AsRef<[f64]> + Sync>(
    points: &[P],
    k: usize,
    seed: u64,
    max_iter: usize,
) -> Result<ClusterModel> {
    let n = points.len();
    if k == 0 || n < k {
        return Err(Error::arg(format!(
            "cannot form {k} clusters from {n} points"
        )));
    }
    let d = points[0].as_ref().len();
    if points.iter().any(|p| p.as_ref().len() != d) {
        return Err(Error::arg("points differ in dimension"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids: Vec<Vec<f64>> = rand::seq::index::sample(&mut rng, n, k)
        .into_iter()
        .map(|i| points[i].as_ref().to_vec())
        .collect();

    let mut assignment: Vec<usize> = Vec::new();
    let mut history = Vec::new();
    for _ in 0..max_iter.max(1) {
        let (next, sq) = assign(points, &centroids);
        history.push(sq.iter().sum::<f64>());
        if next == assignment {
            break;
        }
        assignment = next;
        for (c, centroid) in centroids.iter_mut().enumerate() {
            recompute_centroid(points, &assignment, c, centroid);
        }
        repair_empty(points, &mut assignment, &mut centroids);
    }

    Ok(ClusterModel {
        centroids,
        assignment,
        objective_history: history,
        density: Vec::new(),
        density_std: Vec::new(),
        density_threshold: None,
    })
}

fn repair_empty<P: AsRef<[f64]>>(
    points: &[P],
    assignment: &mut [usize],
    centroids: &mut [Vec<f64>],
) {
    let k = centroids.len();
    loop {
        let mut sizes = vec![0usize; k];
        for &a in assignment.iter() {
            sizes[a] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let mut far: Option<(usize, f64)> = None;
        for (i, p) in points.iter().enumerate() {
            let a = assignment[i];
            if sizes[a] < 2 {
                continue;
            }
            let dd = dist(p.as_ref(), &centroids[a]);
            if far.is_none_or(|(_, best)| dd > best) {
                far = Some((i, dd));
            }
        }
        // n >= k guarantees a donor cluster with two or more members
        let (i, _) = far.expect("donor cluster exists");
        let donor = assignment[i];
        assignment[i] = empty;
        centroids[empty] = points[i].as_ref().to_vec();
        let mut c = std::mem::take(&mut centroids[donor]);
        recompute_centroid(points, assignment, donor, &mut c);
        centroids[donor] = c;
    }
}

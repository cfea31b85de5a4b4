use crate::error::{Error, Result};
use crate::exec::Execution;

pub fn euclidean_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::arg(format!(
            "distance between vectors of dimension {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(dist(a, b))
}

#[inline]
pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Full symmetric distance table, row-major. Rows are computed independently.
pub fn pairwise_distances<P: AsRef<[f64]> + Sync>(points: &[P]) -> Vec<Vec<f64>> {
    Execution::Parallel.map_range(points.len(), |i| {
        points
            .iter()
            .map(|q| dist(points[i].as_ref(), q.as_ref()))
            .collect()
    })
}

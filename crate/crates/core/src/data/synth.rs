use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::Dataset;
use crate::error::{Error, Result};

/// An axis-aligned Gaussian blob in the plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Blob {
    pub center: [f64; 2],
    pub spread: [f64; 2],
    pub count: usize,
}

/// Blob mixture plus uniform background scatter over a bounding box.
#[derive(Clone, Debug, PartialEq)]
pub struct SynthSpec {
    pub blobs: Vec<Blob>,
    pub scatter: usize,
    pub bounds_min: [f64; 2],
    pub bounds_max: [f64; 2],
}

impl SynthSpec {
    /// Five clusters of uneven size and spread plus background scatter,
    /// 195 points in total over `[0, 100]^2`.
    pub fn five_cluster() -> Self {
        let blob = |cx, cy, s, count| Blob {
            center: [cx, cy],
            spread: [s, s],
            count,
        };
        SynthSpec {
            blobs: vec![
                blob(25.0, 25.0, 5.0, 60),
                blob(72.0, 70.0, 6.0, 40),
                blob(25.0, 75.0, 4.0, 25),
                blob(75.0, 25.0, 7.0, 20),
                blob(50.0, 50.0, 2.5, 10),
            ],
            scatter: 40,
            bounds_min: [0.0, 0.0],
            bounds_max: [100.0, 100.0],
        }
    }

    pub fn total(&self) -> usize {
        self.blobs.iter().map(|b| b.count).sum::<usize>() + self.scatter
    }

    fn validate(&self) -> Result<()> {
        if self.blobs.is_empty() {
            return Err(Error::arg("at least one blob is required"));
        }
        for (i, b) in self.blobs.iter().enumerate() {
            if b.count == 0 {
                return Err(Error::arg(format!("blob {i} has a nonpositive count")));
            }
            if b.spread.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
                return Err(Error::arg(format!("blob {i} has an invalid spread")));
            }
        }
        if self.scatter > 0
            && (0..2).any(|j| {
                self.bounds_max[j].partial_cmp(&self.bounds_min[j])
                    != Some(std::cmp::Ordering::Greater)
            })
        {
            return Err(Error::arg("scatter bounding box is empty"));
        }
        Ok(())
    }
}

/// Draws blob points first (in blob order), then the scatter points.
pub fn generate_synthetic(spec: &SynthSpec, seed: u64) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(spec.total());
    for b in &spec.blobs {
        for _ in 0..b.count {
            let p: Vec<f64> = (0..2)
                .map(|j| {
                    let z: f64 = rng.sample(StandardNormal);
                    b.center[j] + b.spread[j] * z
                })
                .collect();
            points.push(p);
        }
    }
    for _ in 0..spec.scatter {
        let p = (0..2)
            .map(|j| rng.random_range(spec.bounds_min[j]..spec.bounds_max[j]))
            .collect();
        points.push(p);
    }
    let ds = Dataset::from_points(points)?;
    ds.with_features(vec!["x".into(), "y".into()], ds.owned_points())
}

use std::fmt::Write as _;
use std::path::Path;

use super::Dataset;
use crate::error::{Error, Result};

/// Per-feature min/max captured from a fitting dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizationParams {
    pub names: Vec<String>,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl NormalizationParams {
    pub fn fit(ds: &Dataset) -> Result<Self> {
        if ds.is_empty() {
            return Err(Error::arg("cannot normalize an empty dataset"));
        }
        let d = ds.dim();
        let mut min = vec![f64::INFINITY; d];
        let mut max = vec![f64::NEG_INFINITY; d];
        for s in ds.samples() {
            for (j, &v) in s.features.iter().enumerate() {
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
            }
        }
        Ok(NormalizationParams {
            names: ds.feature_names().to_vec(),
            min,
            max,
        })
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    /// Maps a single feature value; a constant column maps to 0.
    pub fn scale(&self, j: usize, v: f64) -> f64 {
        let span = self.max[j] - self.min[j];
        if span > 0.0 {
            (v - self.min[j]) / span
        } else {
            0.0
        }
    }

    pub fn apply_point(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(j, &v)| self.scale(j, v))
            .collect()
    }

    pub fn apply(&self, ds: &Dataset) -> Result<Dataset> {
        if ds.dim() != self.dim() {
            return Err(Error::arg(format!(
                "normalization has {} features, dataset has {}",
                self.dim(),
                ds.dim()
            )));
        }
        let feats = ds
            .samples()
            .iter()
            .map(|s| self.apply_point(&s.features))
            .collect();
        ds.with_features(ds.feature_names().to_vec(), feats)
    }

    /// `name=min,max` per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for ((n, lo), hi) in self.names.iter().zip(&self.min).zip(&self.max) {
            let _ = writeln!(out, "{n}={lo:?},{hi:?}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut p = NormalizationParams {
            names: Vec::new(),
            min: Vec::new(),
            max: Vec::new(),
        };
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Parse {
                row: i + 1,
                column: "normalization".into(),
                message: format!("expected name=min,max, got '{line}'"),
            };
            let (name, range) = line.rsplit_once('=').ok_or_else(bad)?;
            let (lo, hi) = range.split_once(',').ok_or_else(bad)?;
            let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
            if hi < lo {
                return Err(bad());
            }
            p.names.push(name.to_string());
            p.min.push(lo);
            p.max.push(hi);
        }
        Ok(p)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text)
    }
}

/// Min-max scales every feature into `[0, 1]`.
pub fn minmax_normalize(ds: &Dataset) -> Result<(Dataset, NormalizationParams)> {
    let params = NormalizationParams::fit(ds)?;
    Ok((params.apply(ds)?, params))
}

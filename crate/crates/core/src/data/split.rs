use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Dataset;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitRatios {
    pub train: f64,
    pub validation: f64,
    pub test: f64,
}

impl SplitRatios {
    pub fn new(train: f64, validation: f64, test: f64) -> Result<Self> {
        let r = SplitRatios {
            train,
            validation,
            test,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let parts = [self.train, self.validation, self.test];
        if parts.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::arg("split ratios must lie in [0, 1]"));
        }
        if (parts.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::arg(format!(
                "split ratios sum to {}, expected 1",
                parts.iter().sum::<f64>()
            )));
        }
        Ok(())
    }

    fn as_array(&self) -> [f64; 3] {
        [self.train, self.validation, self.test]
    }
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios {
            train: 0.70,
            validation: 0.15,
            test: 0.15,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Split {
    pub train: Dataset,
    pub validation: Dataset,
    pub test: Dataset,
}

/// Floor allocation with largest-remainder correction. Remainder ties go to
/// the earlier part (train, then validation, then test).
pub fn allocate_counts(n: usize, ratios: &SplitRatios) -> [usize; 3] {
    let r = ratios.as_array();
    let mut counts = [0usize; 3];
    let mut rema = [0f64; 3];
    for i in 0..3 {
        let exact = n as f64 * r[i];
        // absorb representation error such as 10 * 0.7 = 7.000000000000001
        let floor = (exact + 1e-9).floor();
        counts[i] = floor as usize;
        rema[i] = (exact - floor).max(0.0);
    }
    let mut short = n.saturating_sub(counts.iter().sum());
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| rema[b].total_cmp(&rema[a]).then(a.cmp(&b)));
    for &i in order.iter().cycle() {
        if short == 0 {
            break;
        }
        counts[i] += 1;
        short -= 1;
    }
    counts
}

/// Splits each label group (anomaly label if every sample has one, otherwise
/// class id) by the same ratios, shuffling within groups with a seeded RNG.
/// Each part is returned in ascending id order.
pub fn stratified_split(ds: &Dataset, ratios: &SplitRatios, seed: u64) -> Result<Split> {
    ratios.validate()?;
    let use_labels = ds.has_labels();
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, s) in ds.samples().iter().enumerate() {
        let k = if use_labels {
            s.label.map(|l| l.index())
        } else {
            s.class_id
        };
        let k = k.ok_or_else(|| {
            Error::arg(format!(
                "sample {} has neither an anomaly label nor a class",
                s.id
            ))
        })?;
        groups.entry(k).or_default().push(i);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts: [Vec<usize>; 3] = Default::default();
    for (_, mut members) in groups {
        members.shuffle(&mut rng);
        let counts = allocate_counts(members.len(), ratios);
        let mut start = 0;
        for (p, c) in counts.iter().enumerate() {
            parts[p].extend_from_slice(&members[start..start + c]);
            start += c;
        }
    }
    let [train, validation, test] = parts.map(|mut idx| {
        idx.sort_by_key(|&i| ds.samples()[i].id);
        ds.select(&idx)
    });
    Ok(Split {
        train,
        validation,
        test,
    })
}

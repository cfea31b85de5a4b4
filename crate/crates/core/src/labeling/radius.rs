use super::distance::dist;
use crate::error::{Error, Result};
use crate::stats::anchored_mean;

/// Neighbourhood radii of a set of point anomalies.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusTable {
    /// Mean distance from each point anomaly to the other `k - 1`.
    pub mdist: Vec<f64>,
    /// Mean of `mdist`: the neighbourhood radius of the whole PA set.
    pub out_rad_pa: f64,
}

pub fn build_radius_table<P: AsRef<[f64]>>(pa_points: &[P]) -> Result<RadiusTable> {
    let k = pa_points.len();
    if k < 2 {
        return Err(Error::Degenerate(format!(
            "radius table needs at least 2 point anomalies, got {k}"
        )));
    }
    let mdist: Vec<f64> = (0..k)
        .map(|i| {
            let total: f64 = (0..k)
                .filter(|&j| j != i)
                .map(|j| dist(pa_points[i].as_ref(), pa_points[j].as_ref()))
                .sum();
            total / (k - 1) as f64
        })
        .collect();
    let out_rad_pa = anchored_mean(&mdist);
    Ok(RadiusTable { mdist, out_rad_pa })
}

/// Positions (within the table) of collective point anomalies: strictly
/// smaller radius than the PA-wide mean.
pub fn detect_cpa(table: &RadiusTable) -> Vec<usize> {
    table
        .mdist
        .iter()
        .enumerate()
        .filter(|(_, &r)| r < table.out_rad_pa)
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collinear_triple() {
        let t = build_radius_table(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]).unwrap();
        assert_eq!(t.mdist, vec![1.5, 1.0, 1.5]);
        assert!((t.out_rad_pa - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(detect_cpa(&t), vec![1]);
    }

    #[test]
    fn symmetric_pair() {
        let t = build_radius_table(&[[0.0, 0.0], [0.0, 2.0]]).unwrap();
        assert_eq!(t.mdist, vec![2.0, 2.0]);
        assert_eq!(t.out_rad_pa, 2.0);
        assert!(detect_cpa(&t).is_empty());
    }

    #[test]
    fn coincident_points() {
        let t = build_radius_table(&[[1.0, 1.0]; 4]).unwrap();
        assert_eq!(t.mdist, vec![0.0; 4]);
        assert_eq!(t.out_rad_pa, 0.0);
        assert!(detect_cpa(&t).is_empty());
    }

    #[test]
    fn cpa_from_given_radii() {
        let t = RadiusTable {
            mdist: vec![1.0, 100.0],
            out_rad_pa: 50.5,
        };
        assert_eq!(detect_cpa(&t), vec![0]);
        let eq = RadiusTable {
            mdist: vec![0.7; 5],
            out_rad_pa: anchored_mean(&[0.7; 5]),
        };
        assert!(detect_cpa(&eq).is_empty());
    }

    #[test]
    fn fewer_than_two_is_degenerate() {
        assert!(matches!(
            build_radius_table(&[[0.0, 0.0]]),
            Err(Error::Degenerate(_))
        ));
    }
}

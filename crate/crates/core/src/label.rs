use std::fmt;
use std::str::FromStr;

/// The four-way anomaly taxonomy.
///
/// CPA is the subset of point anomalies that sit close to each other; CNA is
/// the subset of normal data belonging to clusters with unusually uneven
/// density. The discriminant doubles as the class index used by the network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnomalyLabel {
    Nd = 0,
    Cna = 1,
    Cpa = 2,
    Pa = 3,
}

impl AnomalyLabel {
    pub const ALL: [AnomalyLabel; 4] = [Self::Nd, Self::Cna, Self::Cpa, Self::Pa];
    pub const COUNT: usize = 4;

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn token(self) -> &'static str {
        match self {
            Self::Nd => "ND",
            Self::Cna => "CNA",
            Self::Cpa => "CPA",
            Self::Pa => "PA",
        }
    }
}

impl fmt::Display for AnomalyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for AnomalyLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ND" => Ok(Self::Nd),
            "CNA" => Ok(Self::Cna),
            "CPA" => Ok(Self::Cpa),
            "PA" => Ok(Self::Pa),
            other => Err(other.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_round_trip() {
        for l in AnomalyLabel::ALL {
            assert_eq!(l.token().parse::<AnomalyLabel>(), Ok(l));
            assert_eq!(AnomalyLabel::from_index(l.index()), Some(l));
        }
        assert!("nd".parse::<AnomalyLabel>().is_err());
        assert!("CA".parse::<AnomalyLabel>().is_err());
    }
}

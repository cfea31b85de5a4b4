use std::fmt::Write as _;
use std::path::Path;

use super::{Mlp, Topology, WeightVector};
use crate::error::{Error, Result};

impl Mlp {
    /// `topology I H O` on the first line, then one weight per line in genome order.
    pub fn to_text(&self) -> String {
        let t = &self.topology;
        let mut out = format!(
            "topology {} {} {}\n",
            t.input_size, t.hidden_size, t.output_size
        );
        for w in &self.weights.0 {
            let _ = writeln!(out, "{w:?}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, head) = lines
            .next()
            .ok_or_else(|| Error::Structure("empty model file".into()))?;
        let dims: Vec<usize> = head
            .strip_prefix("topology")
            .ok_or_else(|| Error::Structure("model file must start with 'topology'".into()))?
            .split_whitespace()
            .map(|v| {
                v.parse().map_err(|_| Error::Parse {
                    row: 1,
                    column: "topology".into(),
                    message: format!("'{v}' is not a layer size"),
                })
            })
            .collect::<Result<_>>()?;
        let [i, h, o] = dims[..] else {
            return Err(Error::Structure("topology line needs three sizes".into()));
        };
        let topology = Topology::new(i, h, o)?;
        let weights = lines
            .map(|(row, l)| {
                l.trim().parse::<f64>().map_err(|_| Error::Parse {
                    row: row + 1,
                    column: "weight".into(),
                    message: format!("'{}' is not a number", l.trim()),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        Mlp::new(topology, WeightVector(weights))
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

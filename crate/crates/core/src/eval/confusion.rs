use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Counts of (target, predicted) class pairs.
///
/// Rendering follows the usual MATLAB-style layout: rows are output
/// (predicted) classes, columns are target classes, with a precision column
/// on the right and a recall row underneath.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfusionMatrix {
    classes: usize,
    counts: Vec<u64>,
    names: Vec<String>,
}

impl ConfusionMatrix {
    pub fn new(classes: usize) -> Self {
        ConfusionMatrix {
            classes,
            counts: vec![0; classes * classes],
            names: (1..=classes).map(|c| c.to_string()).collect(),
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.classes {
            return Err(Error::arg("one name per class is required"));
        }
        self.names = names;
        Ok(self)
    }

    /// Builds a matrix from rows in display orientation: `rows[p][t]` is the
    /// number of samples of target `t` predicted as `p`.
    pub fn from_output_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let c = rows.len();
        if rows.iter().any(|r| r.len() != c) {
            return Err(Error::arg("confusion matrix must be square"));
        }
        let mut m = ConfusionMatrix::new(c);
        for (p, row) in rows.iter().enumerate() {
            for (t, &v) in row.iter().enumerate() {
                m.counts[t * c + p] = v;
            }
        }
        Ok(m)
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn count(&self, target: usize, predicted: usize) -> u64 {
        self.counts[target * self.classes + predicted]
    }

    pub fn add(&mut self, target: usize, predicted: usize) {
        self.counts[target * self.classes + predicted] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.classes).map(|c| self.count(c, c)).sum()
    }

    /// Samples predicted as `p` (a display row).
    pub fn predicted_total(&self, p: usize) -> u64 {
        (0..self.classes).map(|t| self.count(t, p)).sum()
    }

    /// Samples whose target is `t` (a display column).
    pub fn target_total(&self, t: usize) -> u64 {
        (0..self.classes).map(|p| self.count(t, p)).sum()
    }

    /// Display-layout text with count and percent-of-total per cell.
    pub fn to_text(&self, title: &str) -> String {
        const W: usize = 14;
        let total = self.total();
        let pct = |v: u64| {
            if total == 0 {
                "NaN%".to_string()
            } else {
                fmt_percent(Some(v as f64 / total as f64))
            }
        };
        let metrics = precision_recall(self);
        let mut out = String::new();
        let _ = writeln!(out, "{title}");
        let _ = writeln!(out, "rows: output class, columns: target class");
        let _ = write!(out, "{:<8}", "");
        for n in &self.names {
            let _ = write!(out, "{n:>W$}");
        }
        let _ = writeln!(out, "{:>W$}", "Precision");
        for (p, m) in metrics.iter().enumerate() {
            let _ = write!(out, "{:<8}", self.names[p]);
            for t in 0..self.classes {
                let v = self.count(t, p);
                let _ = write!(out, "{:>W$}", format!("{v} {}", pct(v)));
            }
            let _ = writeln!(out, "{:>W$}", pair(m.precision));
        }
        let _ = write!(out, "{:<8}", "Recall");
        for m in &metrics {
            let _ = write!(out, "{:>W$}", pair(m.recall));
        }
        let accuracy = if total == 0 {
            None
        } else {
            Some(self.trace() as f64 / total as f64)
        };
        let _ = writeln!(out, "{:>W$}", pair(accuracy));
        let _ = write!(out, "{:<8}", "");
        for _ in 0..self.classes {
            let _ = write!(out, "{:>W$}", "");
        }
        let _ = writeln!(out, "{:>W$}", "Test Error");
        out
    }

    /// `output_class,<target names...>` header, then one row of counts per output class.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("output_class");
        for n in &self.names {
            let _ = write!(out, ",{n}");
        }
        out.push('\n');
        for p in 0..self.classes {
            out.push_str(&self.names[p]);
            for t in 0..self.classes {
                let _ = write!(out, ",{}", self.count(t, p));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Structure("empty confusion CSV".into()))?;
        let names: Vec<String> = header.split(',').skip(1).map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row = line
                .split(',')
                .skip(1)
                .map(|v| {
                    v.trim().parse::<u64>().map_err(|_| Error::Parse {
                        row: i + 2,
                        column: "count".into(),
                        message: format!("'{v}' is not a count"),
                    })
                })
                .collect::<Result<Vec<u64>>>()?;
            rows.push(row);
        }
        ConfusionMatrix::from_output_rows(&rows)?.with_names(names)
    }
}

fn pair(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{} {}", fmt_percent(Some(x)), fmt_percent(Some(1.0 - x))),
        None => "NaN% NaN%".into(),
    }
}

/// `100%` and `0.0%`-style percentages; undefined values print as `NaN%`.
pub fn fmt_percent(v: Option<f64>) -> String {
    match v {
        Some(1.0) => "100%".into(),
        Some(x) => format!("{:.1}%", x * 100.0),
        None => "NaN%".into(),
    }
}

pub fn confusion(
    targets: &[usize],
    predictions: &[usize],
    classes: usize,
) -> Result<ConfusionMatrix> {
    if targets.len() != predictions.len() {
        return Err(Error::arg(format!(
            "{} targets but {} predictions",
            targets.len(),
            predictions.len()
        )));
    }
    let mut m = ConfusionMatrix::new(classes);
    for (&t, &p) in targets.iter().zip(predictions) {
        if t >= classes || p >= classes {
            return Err(Error::arg(format!(
                "class pair ({t}, {p}) out of range for {classes} classes"
            )));
        }
        m.add(t, p);
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassMetrics {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn precision_recall(m: &ConfusionMatrix) -> Vec<ClassMetrics> {
    (0..m.classes())
        .map(|c| ClassMetrics {
            precision: ratio(m.count(c, c), m.predicted_total(c)),
            recall: ratio(m.count(c, c), m.target_total(c)),
        })
        .collect()
}

/// Fraction of misclassified samples.
pub fn test_error(m: &ConfusionMatrix) -> Result<f64> {
    let total = m.total();
    if total == 0 {
        return Err(Error::arg("test error of an empty confusion matrix"));
    }
    Ok((total - m.trace()) as f64 / total as f64)
}

/// One-vs-rest counts and rates for a single class.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rates {
    pub tp: u64,
    pub fn_: u64,
    pub fp: u64,
    pub tn: u64,
    pub tpr: Option<f64>,
    pub tnr: Option<f64>,
    pub fpr: Option<f64>,
}

pub fn tpr_fpr(m: &ConfusionMatrix, class: usize) -> Rates {
    let tp = m.count(class, class);
    let fn_ = m.target_total(class) - tp;
    let fp = m.predicted_total(class) - tp;
    let tn = m.total() - tp - fn_ - fp;
    let tnr = ratio(tn, tn + fp);
    Rates {
        tp,
        fn_,
        fp,
        tn,
        tpr: ratio(tp, tp + fn_),
        tnr,
        fpr: tnr.map(|v| 1.0 - v),
    }
}

use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{Dataset, Sample};
use crate::error::{Error, Result};
use crate::label::AnomalyLabel;

/// Role of one CSV column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnRole {
    Feature,
    Class,
    Label,
    Ignore,
}

/// Maps CSV header names to column roles.
///
/// Columns not mentioned explicitly fall back to the header convention:
/// `class` holds integer class ids, `label` holds anomaly tokens, everything
/// else is a numeric feature.
#[derive(Clone, Debug, Default)]
pub struct Schema {
    roles: HashMap<String, ColumnRole>,
}

impl Schema {
    pub fn by_header() -> Self {
        Schema::default()
    }

    pub fn with(mut self, column: impl Into<String>, role: ColumnRole) -> Self {
        self.roles.insert(column.into(), role);
        self
    }

    fn role_of(&self, column: &str) -> ColumnRole {
        if let Some(&r) = self.roles.get(column) {
            return r;
        }
        match column {
            "class" => ColumnRole::Class,
            "label" => ColumnRole::Label,
            _ => ColumnRole::Feature,
        }
    }
}

pub fn load_csv(path: impl AsRef<Path>, schema: &Schema) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, schema)
}

/// Parses a headed CSV stream. Reported row numbers are file line numbers
/// (the header is line 1).
pub fn read_csv<R: Read>(reader: R, schema: &Schema) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if headers.is_empty() {
        return Err(Error::Structure("missing header row".into()));
    }
    for name in schema.roles.keys() {
        if !headers.contains(name) {
            return Err(Error::Structure(format!(
                "schema column '{name}' not in header"
            )));
        }
    }
    let roles: Vec<ColumnRole> = headers.iter().map(|h| schema.role_of(h)).collect();
    if roles.iter().filter(|r| **r == ColumnRole::Class).count() > 1
        || roles.iter().filter(|r| **r == ColumnRole::Label).count() > 1
    {
        return Err(Error::Structure(
            "at most one class and one label column".into(),
        ));
    }
    let feature_names: Vec<String> = headers
        .iter()
        .zip(&roles)
        .filter(|(_, r)| **r == ColumnRole::Feature)
        .map(|(h, _)| h.clone())
        .collect();
    if feature_names.is_empty() {
        return Err(Error::Structure("no feature columns".into()));
    }
    let has_class = roles.contains(&ColumnRole::Class);

    let mut samples = Vec::new();
    let mut max_class = None;
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = i + 2;
        if record.len() != headers.len() {
            return Err(Error::Structure(format!(
                "line {line} has {} fields, header has {}",
                record.len(),
                headers.len()
            )));
        }
        let mut sample = Sample::new(i, Vec::with_capacity(feature_names.len()));
        for ((cell, role), name) in record.iter().zip(&roles).zip(&headers) {
            match role {
                ColumnRole::Feature => {
                    let v: f64 = cell.parse().map_err(|_| Error::Parse {
                        row: line,
                        column: name.clone(),
                        message: format!("'{cell}' is not a number"),
                    })?;
                    sample.features.push(v);
                }
                ColumnRole::Class => {
                    let c: usize = cell.parse().map_err(|_| Error::Parse {
                        row: line,
                        column: name.clone(),
                        message: format!("'{cell}' is not a class index"),
                    })?;
                    max_class = max_class.max(Some(c));
                    sample.class_id = Some(c);
                }
                ColumnRole::Label => {
                    sample.label = Some(
                        cell.parse::<AnomalyLabel>()
                            .map_err(|token| Error::Label { row: line, token })?,
                    );
                }
                ColumnRole::Ignore => {}
            }
        }
        samples.push(sample);
    }
    let num_classes = if has_class {
        max_class.map(|c| c + 1)
    } else {
        None
    };
    Dataset::new(feature_names, samples, num_classes)
}

/// Writes features, then `class` and `label` columns when the dataset carries them.
///
/// Floats use the shortest representation that parses back to the same value.
pub fn write_csv_to<W: Write>(ds: &Dataset, writer: W) -> Result<()> {
    let with_class = ds.samples().iter().any(|s| s.class_id.is_some());
    let with_label = ds.any_labels();
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = ds.feature_names().iter().map(String::as_str).collect();
    if with_class {
        header.push("class");
    }
    if with_label {
        header.push("label");
    }
    w.write_record(&header)?;
    for s in ds.samples() {
        let mut row: Vec<String> = s.features.iter().map(|v| format!("{v:?}")).collect();
        if with_class {
            row.push(s.class_id.map(|c| c.to_string()).unwrap_or_default());
        }
        if with_label {
            row.push(s.label.map(|l| l.token().to_string()).unwrap_or_default());
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

pub fn write_csv(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv_to(ds, std::io::BufWriter::new(file))
}

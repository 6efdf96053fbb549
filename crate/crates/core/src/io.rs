//! File ingestion: CSV datasets and JSON distribution specs.
//!
//! The CSV reader is a small RFC-4180-style parser (quoted fields, escaped
//! quotes, CRLF) written here because the error contract needs exact 1-based
//! row numbers and a hard error on blank rows, which stock readers silently
//! skip.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::rational;
use crate::sample::{DiscreteDistribution, Sample};
use crate::value::{OrderedValue, Scale};

/// One observation: a value with its group and optional stratum label.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub value: OrderedValue,
    pub group: String,
    pub stratum: Option<String>,
}

/// A parsed dataset: immutable records on one shared scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    scale: Scale,
    records: Vec<Record>,
}

impl Dataset {
    pub fn scale(&self) -> &Scale {
        &self.scale
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    /// Group labels in first-appearance order.
    pub fn group_labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = Vec::new();
        for r in &self.records {
            if !labels.contains(&r.group) {
                labels.push(r.group.clone());
            }
        }
        labels
    }

    /// Stratum labels in first-appearance order; empty when no stratum column
    /// was configured.
    pub fn stratum_labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = Vec::new();
        for r in &self.records {
            if let Some(s) = &r.stratum {
                if !labels.contains(s) {
                    labels.push(s.clone());
                }
            }
        }
        labels
    }

    /// The sample of one group, optionally restricted to one stratum.
    pub fn sample(&self, group: &str, stratum: Option<&str>) -> Result<Sample> {
        let values: Vec<OrderedValue> = self
            .records
            .iter()
            .filter(|r| r.group == group && (stratum.is_none() || r.stratum.as_deref() == stratum))
            .map(|r| r.value)
            .collect();
        if values.is_empty() {
            let ctx = match stratum {
                Some(s) => format!("{group} (stratum {s})"),
                None => group.to_string(),
            };
            return Err(Error::EmptySample(ctx));
        }
        Sample::new(group, self.scale.clone(), values)
    }

    /// One sample per group, in first-appearance order.
    pub fn group_samples(&self) -> Result<Vec<Sample>> {
        self.group_labels().iter().map(|g| self.sample(g, None)).collect()
    }
}

/// Column names and scale for CSV parsing.
#[derive(Debug, Clone)]
pub struct CsvConfig {
    pub value_column: String,
    pub group_column: String,
    pub stratum_column: Option<String>,
    pub scale: Scale,
    /// Accept fully blank lines (and only those) instead of erroring.
    pub skip_blank_rows: bool,
}

impl CsvConfig {
    pub fn new(scale: Scale) -> Self {
        CsvConfig {
            value_column: "value".into(),
            group_column: "group".into(),
            stratum_column: None,
            scale,
            skip_blank_rows: false,
        }
    }
}

/// Parses CSV text into a [`Dataset`].
///
/// The header row is required; every error carries the 1-based row number of
/// the offending line (the header is row 1).
pub fn parse_csv(raw: &str, config: &CsvConfig) -> Result<Dataset> {
    let rows = split_csv_rows(raw)?;
    let mut rows = rows.into_iter();
    let (_, header) = loop {
        match rows.next() {
            Some((line, row)) => {
                if row_is_blank(&row) {
                    if config.skip_blank_rows {
                        continue;
                    }
                    return Err(Error::Parse { row: line, message: "blank row".into() });
                }
                break (line, row);
            }
            None => return Err(Error::Parse { row: 1, message: "empty file: missing header row".into() }),
        }
    };

    let find = |name: &str| header.iter().position(|h| h == name);
    let value_idx = find(&config.value_column).ok_or_else(|| Error::Parse {
        row: 1,
        message: format!("missing required column '{}'", config.value_column),
    })?;
    let group_idx = find(&config.group_column).ok_or_else(|| Error::Parse {
        row: 1,
        message: format!("missing required column '{}'", config.group_column),
    })?;
    let stratum_idx = match &config.stratum_column {
        Some(name) => Some(find(name).ok_or_else(|| Error::Parse {
            row: 1,
            message: format!("missing required column '{name}'"),
        })?),
        None => None,
    };

    let mut records = Vec::new();
    for (line, row) in rows {
        if row_is_blank(&row) {
            if config.skip_blank_rows {
                continue;
            }
            return Err(Error::Parse { row: line, message: "blank row".into() });
        }
        if row.len() != header.len() {
            return Err(Error::Parse {
                row: line,
                message: format!("expected {} fields, found {}", header.len(), row.len()),
            });
        }
        let value = config
            .scale
            .parse_cell(&row[value_idx])
            .map_err(|message| Error::Parse { row: line, message })?;
        let group = row[group_idx].trim().to_string();
        if group.is_empty() {
            return Err(Error::Parse { row: line, message: "empty group label".into() });
        }
        let stratum = match stratum_idx {
            Some(i) => {
                let s = row[i].trim().to_string();
                if s.is_empty() {
                    return Err(Error::Parse { row: line, message: "empty stratum label".into() });
                }
                Some(s)
            }
            None => None,
        };
        records.push(Record { value, group, stratum });
    }
    if records.is_empty() {
        return Err(Error::Parse { row: 1, message: "empty file: no data rows".into() });
    }
    Ok(Dataset { scale: config.scale.clone(), records })
}

/// Renders a dataset back to CSV with the canonical `value,group[,stratum]`
/// header. Re-parsing the output with the same scale yields identical
/// records.
pub fn write_csv(dataset: &Dataset) -> String {
    let has_stratum = dataset.records.iter().any(|r| r.stratum.is_some());
    let mut out = String::new();
    out.push_str(if has_stratum { "value,group,stratum\n" } else { "value,group\n" });
    for r in &dataset.records {
        out.push_str(&quote_field(&dataset.scale.format_value(r.value)));
        out.push(',');
        out.push_str(&quote_field(&r.group));
        if has_stratum {
            out.push(',');
            out.push_str(&quote_field(r.stratum.as_deref().unwrap_or("")));
        }
        out.push('\n');
    }
    out
}

fn quote_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn row_is_blank(row: &[String]) -> bool {
    row.len() == 1 && row[0].is_empty()
}

/// Splits CSV text into `(1-based starting line, fields)` rows.
fn split_csv_rows(raw: &str) -> Result<Vec<(usize, Vec<String>)>> {
    let mut rows = Vec::new();
    let mut fields: Vec<String> = Vec::new();
    let mut field = String::new();
    let mut in_quotes = false;
    let mut line = 1usize;
    let mut row_start_line = 1usize;
    let mut pending_row = false; // any char seen since last record ended
    let mut chars = raw.chars().peekable();

    while let Some(c) = chars.next() {
        match c {
            '"' if in_quotes => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    field.push('"');
                } else {
                    in_quotes = false;
                }
            }
            '"' if field.is_empty() && !in_quotes => {
                in_quotes = true;
                pending_row = true;
            }
            ',' if !in_quotes => {
                fields.push(std::mem::take(&mut field));
                pending_row = true;
            }
            '\r' if !in_quotes => {
                // handled together with the following \n, or ignored
            }
            '\n' if !in_quotes => {
                fields.push(std::mem::take(&mut field));
                rows.push((row_start_line, std::mem::take(&mut fields)));
                line += 1;
                row_start_line = line;
                pending_row = false;
            }
            _ => {
                if c == '\n' {
                    line += 1;
                }
                field.push(c);
                pending_row = true;
            }
        }
    }
    if in_quotes {
        return Err(Error::Parse { row: row_start_line, message: "unterminated quoted field".into() });
    }
    if pending_row || !fields.is_empty() || !field.is_empty() {
        fields.push(field);
        rows.push((row_start_line, fields));
    }
    Ok(rows)
}

#[derive(Deserialize)]
struct DistributionSpecDoc {
    scale: String,
    distributions: Vec<DistributionEntry>,
}

#[derive(Deserialize)]
struct DistributionEntry {
    label: String,
    support: Vec<serde_json::Value>,
    probs: Vec<serde_json::Value>,
}

/// Parses a JSON distribution spec:
/// `{"scale": "...", "distributions": [{"label", "support", "probs"}]}`.
///
/// Support entries are strings or numbers matching the scale; probabilities
/// are numbers, decimal strings or `"p/q"` fractions and must sum to one.
pub fn parse_distribution_spec(raw: &str) -> Result<Vec<DiscreteDistribution>> {
    let doc: DistributionSpecDoc =
        serde_json::from_str(raw).map_err(|e| Error::InvalidInput(format!("invalid distribution spec: {e}")))?;
    let scale = Scale::parse_spec(&doc.scale)?;
    if doc.distributions.is_empty() {
        return Err(Error::InvalidInput("distribution spec lists no distributions".into()));
    }
    doc.distributions
        .into_iter()
        .map(|entry| {
            if entry.support.len() != entry.probs.len() {
                return Err(Error::InvalidInput(format!(
                    "distribution '{}': support has {} points but {} probabilities",
                    entry.label,
                    entry.support.len(),
                    entry.probs.len()
                )));
            }
            let support = entry
                .support
                .iter()
                .map(|v| {
                    let text = json_scalar_text(v).ok_or_else(|| {
                        Error::InvalidInput(format!("distribution '{}': support entry {v} is not a scalar", entry.label))
                    })?;
                    scale
                        .parse_cell(&text)
                        .map_err(|m| Error::InvalidInput(format!("distribution '{}': {m}", entry.label)))
                })
                .collect::<Result<Vec<_>>>()?;
            let masses = entry
                .probs
                .iter()
                .map(|p| {
                    json_scalar_text(p)
                        .as_deref()
                        .and_then(rational::decimal_to_rational)
                        .ok_or_else(|| {
                            Error::InvalidInput(format!("distribution '{}': unparseable probability {p}", entry.label))
                        })
                })
                .collect::<Result<Vec<_>>>()?;
            DiscreteDistribution::new(entry.label, scale.clone(), support, masses)
        })
        .collect()
}

fn json_scalar_text(v: &serde_json::Value) -> Option<String> {
    match v {
        serde_json::Value::String(s) => Some(s.clone()),
        serde_json::Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

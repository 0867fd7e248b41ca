//! JSON and CSV encodings of finite metric spaces.
//!
//! JSON: `{"labels": ["a","b"], "matrix": [[0,1],[1,0]]}` (labels optional).
//! CSV: an optional header row of labels followed by the square matrix.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn from_path(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SpaceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    matrix: Vec<Vec<f64>>,
}

pub fn parse_json(text: &str) -> Result<FiniteMetricSpace> {
    let doc: SpaceDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    match doc.labels {
        Some(labels) => FiniteMetricSpace::new(labels, &doc.matrix),
        None => FiniteMetricSpace::from_matrix(&doc.matrix),
    }
}

pub fn parse_csv(text: &str) -> Result<FiniteMetricSpace> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<String>> = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        rows.push(rec.iter().map(str::to_string).collect());
    }
    if rows.is_empty() {
        return Err(Error::Parse("empty CSV".into()));
    }
    let numeric = |row: &[String]| row.iter().all(|c| c.parse::<f64>().is_ok());
    let labels = if numeric(&rows[0]) {
        None
    } else {
        Some(rows.remove(0))
    };
    let mut matrix = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        let parsed = row
            .iter()
            .map(|c| {
                c.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("row {}: {c:?} is not a number", r + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        matrix.push(parsed);
    }
    match labels {
        Some(labels) => FiniteMetricSpace::new(labels, &matrix),
        None => FiniteMetricSpace::from_matrix(&matrix),
    }
}

pub fn parse(text: &str, format: Format) -> Result<FiniteMetricSpace> {
    match format {
        Format::Json => parse_json(text),
        Format::Csv => parse_csv(text),
    }
}

/// Reads a space, inferring the format from the extension unless `format` is given.
pub fn read_space(path: &Path, format: Option<Format>) -> Result<FiniteMetricSpace> {
    let format = format
        .or_else(|| Format::from_path(path))
        .ok_or_else(|| Error::Parse(format!("cannot infer format of {}", path.display())))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse(&text, format)
}

pub fn to_json(x: &FiniteMetricSpace) -> String {
    serde_json::to_string(&SpaceDoc {
        labels: Some(x.labels().to_vec()),
        matrix: x.matrix(),
    })
    .expect("finite floats serialize")
}

/// SHA-256 over labels and the bit patterns of the distances, hex encoded.
pub fn digest(x: &FiniteMetricSpace) -> String {
    let mut h = Sha256::new();
    h.update((x.size() as u64).to_le_bytes());
    for l in x.labels() {
        h.update((l.len() as u64).to_le_bytes());
        h.update(l.as_bytes());
    }
    for i in 0..x.size() {
        for v in x.row(i) {
            h.update(v.to_bits().to_le_bytes());
        }
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let x = parse_json(r#"{"labels": ["a","b","c"], "matrix": [[0,1,2],[1,0,1.5],[2,1.5,0]]}"#)
            .unwrap();
        assert_eq!(x.labels(), ["a", "b", "c"]);
        assert_eq!(x.d(1, 2), 1.5);
        assert_eq!(parse_json(&to_json(&x)).unwrap(), x);
    }

    #[test]
    fn json_without_labels() {
        let x = parse_json(r#"{"matrix": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(x.labels(), ["p1", "p2"]);
    }

    #[test]
    fn csv_with_and_without_header() {
        let with = parse_csv("a,b,c\n0,1,2\n1,0,1.5\n2,1.5,0\n").unwrap();
        assert_eq!(with.labels(), ["a", "b", "c"]);
        let without = parse_csv("0, 1\n1, 0\n\n").unwrap();
        assert_eq!(without.labels(), ["p1", "p2"]);
        assert!(matches!(parse_csv("a,b\n0,x\n1,0\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_csv("0,1\n2,0\n"), Err(Error::NotSymmetric(0, 1))));
    }

    #[test]
    fn digest_ignores_whitespace() {
        let a = parse_json(r#"{"labels":["a","b"],"matrix":[[0,1],[1,0]]}"#).unwrap();
        let b = parse_json("{ \"labels\" : [ \"a\", \"b\" ],\n \"matrix\": [[0, 1.0], [1, 0]] }").unwrap();
        assert_eq!(digest(&a), digest(&b));
        let c = parse_json(r#"{"labels":["a","c"],"matrix":[[0,1],[1,0]]}"#).unwrap();
        assert_ne!(digest(&a), digest(&c));
    }

    #[test]
    fn format_inference() {
        assert_eq!(Format::from_path(Path::new("w.JSON")), Some(Format::Json));
        assert_eq!(Format::from_path(Path::new("w.csv")), Some(Format::Csv));
        assert_eq!(Format::from_path(Path::new("w.txt")), None);
    }
}

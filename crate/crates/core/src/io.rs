//! CSV input and output.
//!
//! Input: comma-separated decimal floats, LF or CRLF line endings, with an
//! optional single header line, detected by any non-numeric cell in the
//! first row. Output always uses LF and shortest round-trip float text.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

/// A parsed numeric CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Option<Vec<String>>,
    pub data: DataMatrix,
}

impl CsvTable {
    pub fn column_named(&self, name: &str) -> Option<Vec<f64>> {
        let header = self.header.as_ref()?;
        let j = header.iter().position(|h| h == name)?;
        Some(self.data.column(j))
    }
}

pub fn read_table(path: &Path) -> Result<CsvTable> {
    let file = File::open(path)?;
    read_table_from(file)
}

pub fn read_table_from<R: std::io::Read>(reader: R) -> Result<CsvTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut header = None;
    let mut cols = None;
    let mut values = Vec::new();
    let mut rows = 0;
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(i + 1, |p| p.line() as usize);
            Error::Data {
                line,
                message: e.to_string(),
            }
        })?;
        let line = record.position().map_or(i + 1, |p| p.line() as usize);
        if i == 0 && record.iter().any(|cell| cell.parse::<f64>().is_err()) {
            header = Some(record.iter().map(str::to_owned).collect::<Vec<_>>());
            cols = Some(record.len());
            continue;
        }
        let expected = *cols.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::Data {
                line,
                message: format!("expected {expected} fields, found {}", record.len()),
            });
        }
        for (j, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Data {
                line,
                message: format!("column {}: '{cell}' is not a number", j + 1),
            })?;
            if !v.is_finite() {
                return Err(Error::Data {
                    line,
                    message: format!("column {}: non-finite value", j + 1),
                });
            }
            values.push(v);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::Data {
            line: 1,
            message: "no data rows".into(),
        });
    }
    let data = DataMatrix::new(rows, cols.unwrap_or(0), values).map_err(|e| Error::Data {
        line: 1,
        message: e.to_string(),
    })?;
    Ok(CsvTable { header, data })
}

pub fn read_matrix_csv(path: &Path) -> Result<DataMatrix> {
    Ok(read_table(path)?.data)
}

/// Reads a label file: a single 0/1 column, or a `label` column by name.
pub fn read_labels_csv(path: &Path) -> Result<Vec<u8>> {
    let table = read_table(path)?;
    let column = match table.column_named("label") {
        Some(c) => c,
        None if table.data.cols() == 1 => table.data.column(0),
        None => {
            return Err(Error::Data {
                line: 1,
                message: "label file needs one column or a 'label' column".into(),
            })
        }
    };
    let first_data_line = if table.header.is_some() { 2 } else { 1 };
    column
        .iter()
        .enumerate()
        .map(|(i, &v)| match v {
            0.0 => Ok(0),
            1.0 => Ok(1),
            _ => Err(Error::Data {
                line: first_data_line + i,
                message: format!("label must be 0 or 1, got {v}"),
            }),
        })
        .collect()
}

/// Pairs a feature file with its label file.
pub fn read_labeled_csv(features: &Path, labels: &Path) -> Result<LabeledDataset> {
    let x = read_matrix_csv(features)?;
    let y = read_labels_csv(labels)?;
    LabeledDataset::new(x, y).map_err(|e| Error::Data {
        line: 1,
        message: e.to_string(),
    })
}

fn write_lines<F>(path: &Path, header: &str, rows: usize, mut row: F) -> Result<()>
where
    F: FnMut(usize, &mut String),
{
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{header}")?;
    let mut line = String::new();
    for i in 0..rows {
        line.clear();
        row(i, &mut line);
        out.write_all(line.as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_matrix_csv(path: &Path, matrix: &DataMatrix) -> Result<()> {
    let header: Vec<String> = (0..matrix.cols()).map(|j| format!("x{j}")).collect();
    write_lines(path, &header.join(","), matrix.rows(), |i, line| {
        let cells: Vec<String> = matrix.row(i).iter().map(f64::to_string).collect();
        line.push_str(&cells.join(","));
    })
}

pub fn write_labels_csv(path: &Path, labels: &[u8]) -> Result<()> {
    write_lines(path, "label", labels.len(), |i, line| {
        line.push_str(&labels[i].to_string())
    })
}

/// Writes `score[,label][,proba]` with a header row.
pub fn write_scores_csv(
    path: &Path,
    scores: &[f64],
    labels: Option<&[u8]>,
    probs: Option<&[f64]>,
) -> Result<()> {
    let n = scores.len();
    if labels.is_some_and(|l| l.len() != n) || probs.is_some_and(|p| p.len() != n) {
        return Err(Error::invalid(
            "score, label and probability columns differ in length",
        ));
    }
    let mut header = String::from("score");
    if labels.is_some() {
        header.push_str(",label");
    }
    if probs.is_some() {
        header.push_str(",proba");
    }
    write_lines(path, &header, n, |i, line| {
        line.push_str(&scores[i].to_string());
        if let Some(l) = labels {
            line.push(',');
            line.push_str(&l[i].to_string());
        }
        if let Some(p) = probs {
            line.push(',');
            line.push_str(&p[i].to_string());
        }
    })
}

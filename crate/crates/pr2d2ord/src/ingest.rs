//! Reading ordinal datasets from comma-separated files.

use std::io::Read;
use std::path::Path;

use pr2d2ord_core::linalg::Matrix;
use pr2d2ord_core::model::OrdinalDataset;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("row {row}, column '{column}': cannot parse '{value}' as a number")]
    Parse { row: usize, column: String, value: String },
    #[error("row {row}: response '{value}' is not an integer")]
    NonInteger { row: usize, value: String },
    #[error("response column '{0}' not found")]
    MissingResponse(String),
    #[error("response needs at least two distinct values, found {0}")]
    TooFewLevels(usize),
    #[error("row {row}: label {label} is outside 1..={k}")]
    LabelOutOfRange { row: usize, label: i64, k: usize },
    #[error("row {row}: label {label} was not seen in training")]
    UnseenLabel { row: usize, label: i64 },
    #[error("no covariate columns left")]
    NoCovariates,
    #[error("no data rows")]
    NoRows,
    #[error("column '{0}' of the training schema is missing")]
    MissingColumn(String),
    #[error("column '{0}' is not part of the training schema")]
    UnexpectedColumn(String),
    #[error(transparent)]
    Model(#[from] pr2d2ord_core::Error),
}

pub type Result<T> = std::result::Result<T, IngestError>;

/// How raw columns map onto the model, kept so new data can be prepared
/// exactly like the training data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schema {
    pub response: String,
    /// Covariates in model order.
    pub covariates: Vec<String>,
    /// Constant columns removed during standardization.
    pub dropped: Vec<String>,
    pub standardized: bool,
    pub centers: Vec<f64>,
    pub scales: Vec<f64>,
    /// `levels[k − 1]` is the raw label of category `k`.
    pub levels: Vec<i64>,
}

impl Schema {
    pub fn k(&self) -> usize {
        self.levels.len()
    }

    fn category_of(&self, label: i64) -> Option<usize> {
        self.levels.binary_search(&label).ok().map(|i| i + 1)
    }
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub data: OrdinalDataset,
    pub schema: Schema,
    pub warnings: Vec<String>,
}

struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn read_table<R: Read>(reader: R) -> Result<Table> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        rows.push(rec?.iter().map(String::from).collect());
    }
    if rows.is_empty() {
        return Err(IngestError::NoRows);
    }
    Ok(Table { headers, rows })
}

fn open(path: &Path) -> Result<std::fs::File> {
    std::fs::File::open(path).map_err(|source| IngestError::Io { path: path.display().to_string(), source })
}

fn parse_num(s: &str, row: usize, column: &str) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| IngestError::Parse { row, column: column.into(), value: s.into() })
}

fn parse_label(s: &str, row: usize) -> Result<i64> {
    if let Ok(v) = s.parse::<i64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v.fract() == 0.0 && v.abs() < 9e15 => Ok(v as i64),
        _ => Err(IngestError::NonInteger { row, value: s.into() }),
    }
}

/// Reads `path`, using `response` as the label column and every other
/// column as a covariate.
pub fn ingest_csv(path: &Path, response: &str, standardize: bool, declared_k: Option<usize>) -> Result<Ingested> {
    ingest_reader(open(path)?, response, standardize, declared_k)
}

/// Labels are remapped to `1..=K` in increasing order. With `declared_k`
/// they are used as given and must already lie in `1..=K`.
pub fn ingest_reader<R: Read>(reader: R, response: &str, standardize: bool, declared_k: Option<usize>) -> Result<Ingested> {
    let t = read_table(reader)?;
    let ry = t.headers.iter().position(|h| h == response).ok_or_else(|| IngestError::MissingResponse(response.into()))?;
    // data rows are numbered from 1, after the header
    let raw: Vec<i64> = t.rows.iter().enumerate().map(|(i, r)| parse_label(&r[ry], i + 1)).collect::<Result<_>>()?;
    let mut levels = raw.clone();
    levels.sort_unstable();
    levels.dedup();
    let levels = match declared_k {
        Some(k) => {
            if let Some((i, &l)) = raw.iter().enumerate().find(|(_, &l)| l < 1 || l as usize > k) {
                return Err(IngestError::LabelOutOfRange { row: i + 1, label: l, k });
            }
            if k < 2 {
                return Err(IngestError::TooFewLevels(k));
            }
            (1..=k as i64).collect()
        }
        None => {
            if levels.len() < 2 {
                return Err(IngestError::TooFewLevels(levels.len()));
            }
            levels
        }
    };
    let mut warnings = Vec::new();
    let cols: Vec<usize> = (0..t.headers.len()).filter(|&c| c != ry).collect();
    let mut values: Vec<Vec<f64>> = Vec::with_capacity(cols.len());
    for &c in &cols {
        let v = t.rows.iter().enumerate().map(|(i, r)| parse_num(&r[c], i + 1, &t.headers[c])).collect::<Result<Vec<_>>>()?;
        values.push(v);
    }
    let n = t.rows.len();
    let mut covariates = Vec::new();
    let mut dropped = Vec::new();
    let mut centers = Vec::new();
    let mut scales = Vec::new();
    let mut kept = Vec::new();
    for (ci, v) in values.iter().enumerate() {
        let name = t.headers[cols[ci]].clone();
        if standardize {
            let m = v.iter().sum::<f64>() / n as f64;
            let var = if n > 1 { v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n as f64 - 1.0) } else { 0.0 };
            if !(var > 0.0) {
                warnings.push(format!("column '{name}' has zero variance and was dropped"));
                dropped.push(name);
                continue;
            }
            centers.push(m);
            scales.push(var.sqrt());
        } else {
            centers.push(0.0);
            scales.push(1.0);
        }
        covariates.push(name);
        kept.push(ci);
    }
    if covariates.is_empty() {
        return Err(IngestError::NoCovariates);
    }
    let schema = Schema { response: response.into(), covariates, dropped, standardized: standardize, centers, scales, levels };
    let mut x = Vec::with_capacity(n * kept.len());
    for i in 0..n {
        for (j, &ci) in kept.iter().enumerate() {
            x.push((values[ci][i] - schema.centers[j]) / schema.scales[j]);
        }
    }
    let y: Vec<usize> = raw
        .iter()
        .map(|&l| schema.category_of(l).expect("level list built from the data"))
        .collect();
    let data = OrdinalDataset::new(Matrix::from_row_major(n, kept.len(), x)?, y, schema.k())?;
    Ok(Ingested { data, schema, warnings })
}

/// New covariates (and labels, when the response column is present)
/// prepared with a training schema.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub x: Matrix,
    pub y: Option<Vec<usize>>,
}

pub fn prepare_csv(path: &Path, schema: &Schema) -> Result<Prepared> {
    prepare_reader(open(path)?, schema)
}

pub fn prepare_reader<R: Read>(reader: R, schema: &Schema) -> Result<Prepared> {
    let t = read_table(reader)?;
    for h in &t.headers {
        if *h != schema.response && !schema.covariates.contains(h) && !schema.dropped.contains(h) {
            return Err(IngestError::UnexpectedColumn(h.clone()));
        }
    }
    let mut idx = Vec::with_capacity(schema.covariates.len());
    for c in &schema.covariates {
        idx.push(t.headers.iter().position(|h| h == c).ok_or_else(|| IngestError::MissingColumn(c.clone()))?);
    }
    let n = t.rows.len();
    let mut x = Vec::with_capacity(n * idx.len());
    for (i, r) in t.rows.iter().enumerate() {
        for (j, &c) in idx.iter().enumerate() {
            x.push((parse_num(&r[c], i + 1, &t.headers[c])? - schema.centers[j]) / schema.scales[j]);
        }
    }
    let y = match t.headers.iter().position(|h| *h == schema.response) {
        Some(ry) => Some(
            t.rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let l = parse_label(&r[ry], i + 1)?;
                    schema.category_of(l).ok_or(IngestError::UnseenLabel { row: i + 1, label: l })
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    Ok(Prepared { x: Matrix::from_row_major(n, idx.len(), x)?, y })
}

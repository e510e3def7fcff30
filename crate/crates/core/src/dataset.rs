//! Prediction files produced by external multi-label learners, dataset
//! statistics, and the CSV outputs of the evaluation harness.
//!
//! Prediction CSV: header `y_1,...,y_K,s_1,...,s_K`, one instance per row,
//! truth in {0,1} and scores in [0,1]. Lines starting with `#` are comments;
//! `# method=<name>` and `# dataset=<name>` set the names (defaults: the
//! file stem and `unnamed`).

use std::collections::HashSet;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::losses::{LabelVector, ScoreVector, SCORE_SLACK};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionSet {
    pub method: String,
    pub dataset: String,
    k: usize,
    truth: Vec<LabelVector>,
    scores: Vec<ScoreVector>,
}

impl PredictionSet {
    pub fn new(
        method: impl Into<String>,
        dataset: impl Into<String>,
        k: usize,
        truth: Vec<LabelVector>,
        scores: Vec<ScoreVector>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("K must be at least 1".into()));
        }
        if truth.len() != scores.len() {
            return Err(Error::InvalidInput(format!(
                "{} truth rows but {} score rows",
                truth.len(),
                scores.len()
            )));
        }
        for (n, (y, s)) in truth.iter().zip(&scores).enumerate() {
            if y.len() != k || s.len() != k {
                return Err(Error::InvalidInput(format!(
                    "instance {} has {} truth / {} score columns, expected {k}",
                    n + 1,
                    y.len(),
                    s.len()
                )));
            }
        }
        Ok(PredictionSet {
            method: method.into(),
            dataset: dataset.into(),
            k,
            truth,
            scores,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.truth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.truth.is_empty()
    }

    pub fn truth(&self) -> &[LabelVector] {
        &self.truth
    }

    pub fn scores(&self) -> &[ScoreVector] {
        &self.scores
    }

    pub fn instances(&self) -> impl Iterator<Item = (&LabelVector, &ScoreVector)> {
        self.truth.iter().zip(&self.scores)
    }
}

/// Reads and validates a prediction CSV.
pub fn load_predictions(path: impl AsRef<Path>) -> Result<PredictionSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "predictions".into());
    parse_predictions(&text, &path.display().to_string(), &stem)
}

/// Parses prediction CSV text; `default_method` is used when no
/// `# method=` comment is present.
pub fn parse_predictions(text: &str, origin: &str, default_method: &str) -> Result<PredictionSet> {
    let err = |line: u64, msg: String| Error::parse(origin, line as usize, msg);
    let mut method = default_method.to_string();
    let mut dataset = "unnamed".to_string();
    for line in text.lines() {
        if let Some(comment) = line.trim_start().strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                match key.trim() {
                    "method" => method = value.trim().to_string(),
                    "dataset" => dataset = value.trim().to_string(),
                    _ => {}
                }
            }
        }
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let header_line = reader.position().line().max(1);
    let names: Vec<&str> = headers.iter().map(str::trim).collect();
    if names.is_empty() || !names.len().is_multiple_of(2) || names == [""] {
        return Err(err(
            header_line,
            "header must list y_1..y_K then s_1..s_K".into(),
        ));
    }
    let k = names.len() / 2;
    for (i, name) in names.iter().enumerate() {
        let expected = if i < k {
            format!("y_{}", i + 1)
        } else {
            format!("s_{}", i - k + 1)
        };
        if *name != expected {
            return Err(err(
                header_line,
                format!("header column {} is {name:?}, expected {expected:?}", i + 1),
            ));
        }
    }

    let mut truth = Vec::new();
    let mut scores = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 * k {
            return Err(err(
                line,
                format!("row has {} fields, expected {}", record.len(), 2 * k),
            ));
        }
        let mut y = Vec::with_capacity(k);
        let mut s = Vec::with_capacity(k);
        for (i, field) in record.iter().enumerate() {
            let field = field.trim();
            let value: f64 = field.parse().map_err(|_| {
                err(
                    line,
                    format!("column {}: {field:?} is not a number", names[i]),
                )
            })?;
            if i < k {
                if value == 0.0 || value == 1.0 {
                    y.push(value as u8);
                } else {
                    return Err(err(
                        line,
                        format!("column {}: truth value {field} is not 0 or 1", names[i]),
                    ));
                }
            } else {
                if !value.is_finite() || !(-SCORE_SLACK..=1.0 + SCORE_SLACK).contains(&value) {
                    return Err(err(
                        line,
                        format!("column {}: score {field} is outside [0, 1]", names[i]),
                    ));
                }
                s.push(value);
            }
        }
        truth.push(LabelVector::new(y)?);
        scores.push(ScoreVector::new(s)?);
    }
    PredictionSet::new(method, dataset, k, truth, scores)
}

/// Writes a prediction CSV readable by [`load_predictions`]; values are
/// printed in shortest round-trip form.
pub fn write_predictions(path: impl AsRef<Path>, ps: &PredictionSet) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    out.push_str(&format!(
        "# method={}\n# dataset={}\n",
        ps.method, ps.dataset
    ));
    let header: Vec<String> = (1..=ps.k)
        .map(|i| format!("y_{i}"))
        .chain((1..=ps.k).map(|i| format!("s_{i}")))
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for (y, s) in ps.instances() {
        let fields: Vec<String> = y
            .as_slice()
            .iter()
            .map(|v| v.to_string())
            .chain(s.as_slice().iter().map(|v| v.to_string()))
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Dataset statistics in the layout of a benchmark overview table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub name: String,
    pub instances: usize,
    pub labels: usize,
    /// labels / instances
    pub label_to_instance_ratio: f64,
    pub unique_label_combinations: usize,
    /// Mean number of relevant labels per instance.
    pub cardinality: f64,
}

pub fn compute_meta(ps: &PredictionSet) -> DatasetMeta {
    let n = ps.len();
    let unique: HashSet<&LabelVector> = ps.truth.iter().collect();
    let relevant: usize = ps.truth.iter().map(LabelVector::count_relevant).sum();
    DatasetMeta {
        name: ps.dataset.clone(),
        instances: n,
        labels: ps.k,
        label_to_instance_ratio: if n == 0 { 0.0 } else { ps.k as f64 / n as f64 },
        unique_label_combinations: unique.len(),
        cardinality: if n == 0 {
            0.0
        } else {
            relevant as f64 / n as f64
        },
    }
}

/// One cell of a sweep: the mean loss of a method at a parameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub parameter: f64,
    pub method: String,
    pub dataset: String,
    pub mean_loss: f64,
}

/// Fixed-point rendering with six significant digits.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (5 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

fn csv_bytes<I, R>(header: &[&str], rows: I) -> Result<Vec<u8>>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row.into_iter().collect::<Vec<_>>())?;
    }
    writer
        .into_inner()
        .map_err(|e| Error::InvalidInput(format!("csv buffer: {e}")))
}

/// `parameter,method,dataset,mean_loss` in the given row order.
pub fn results_csv(rows: &[ResultRow]) -> Result<Vec<u8>> {
    csv_bytes(
        &["parameter", "method", "dataset", "mean_loss"],
        rows.iter().map(|r| {
            [
                format_sig6(r.parameter),
                r.method.clone(),
                r.dataset.clone(),
                format_sig6(r.mean_loss),
            ]
        }),
    )
}

pub fn write_results(path: impl AsRef<Path>, rows: &[ResultRow]) -> Result<()> {
    write_bytes(path.as_ref(), &results_csv(rows)?)
}

/// `parameter,loss_a,loss_b`.
pub fn pairwise_csv(points: &[(f64, f64, f64)]) -> Result<Vec<u8>> {
    csv_bytes(
        &["parameter", "loss_a", "loss_b"],
        points
            .iter()
            .map(|&(t, a, b)| [format_sig6(t), format_sig6(a), format_sig6(b)]),
    )
}

pub fn write_pairwise(path: impl AsRef<Path>, points: &[(f64, f64, f64)]) -> Result<()> {
    write_bytes(path.as_ref(), &pairwise_csv(points)?)
}

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut file = File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(bytes).map_err(|e| Error::io(path, e))
}

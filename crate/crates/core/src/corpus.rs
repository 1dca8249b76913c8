//! Dataset and prediction records and their line-delimited JSON files.
//!
//! Dataset lines look like
//! `{"id": "17", "premise": "...", "hypothesis": "...", "label": "entailment"}`
//! where `id` is optional and `label` may also be the integer code 0, 1 or 2.
//! Prediction lines carry `id`, `label` and an optional `scores` array with
//! one number per class in label-code order.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Entailment,
    Neutral,
    Contradiction,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::Entailment, Label::Neutral, Label::Contradiction];

    /// Integer code: 0 = entailment, 1 = neutral, 2 = contradiction.
    pub fn index(self) -> usize {
        match self {
            Label::Entailment => 0,
            Label::Neutral => 1,
            Label::Contradiction => 2,
        }
    }

    pub fn from_index(index: usize) -> Option<Label> {
        Label::ALL.get(index).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Entailment => "entailment",
            Label::Neutral => "neutral",
            Label::Contradiction => "contradiction",
        }
    }

    /// Capitalized name used in rendered tables.
    pub fn title(self) -> &'static str {
        match self {
            Label::Entailment => "Entailment",
            Label::Neutral => "Neutral",
            Label::Contradiction => "Contradiction",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Label> {
        let trimmed = s.trim();
        match trimmed.to_ascii_lowercase().as_str() {
            "entailment" | "0" => Ok(Label::Entailment),
            "neutral" | "1" => Ok(Label::Neutral),
            "contradiction" | "2" => Ok(Label::Contradiction),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Accepts either a case-insensitive name or an integer code.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawLabel {
    Code(i64),
    Name(String),
}

impl RawLabel {
    fn resolve(self) -> Result<Label> {
        match self {
            RawLabel::Code(code) => usize::try_from(code)
                .ok()
                .and_then(Label::from_index)
                .ok_or_else(|| Error::UnknownLabel(code.to_string())),
            RawLabel::Name(name) => name.parse(),
        }
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Label, D::Error> {
        RawLabel::deserialize(deserializer)?
            .resolve()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawId {
    Text(String),
    Number(serde_json::Number),
}

impl RawId {
    fn into_string(self) -> String {
        match self {
            RawId::Text(s) => s,
            RawId::Number(n) => n.to_string(),
        }
    }
}

/// One premise/hypothesis pair with its gold label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NliExample {
    pub id: String,
    pub premise: String,
    pub hypothesis: String,
    #[serde(rename = "label")]
    pub gold: Label,
}

impl NliExample {
    pub fn new(
        id: impl Into<String>,
        premise: impl Into<String>,
        hypothesis: impl Into<String>,
        gold: Label,
    ) -> Result<Self> {
        let example = NliExample {
            id: id.into(),
            premise: premise.into(),
            hypothesis: hypothesis.into(),
            gold,
        };
        example.validate()?;
        Ok(example)
    }

    /// Premise and hypothesis must contain something besides whitespace.
    pub fn validate(&self) -> Result<()> {
        let blank = if self.premise.trim().is_empty() {
            Some("premise")
        } else if self.hypothesis.trim().is_empty() {
            Some("hypothesis")
        } else {
            None
        };
        match blank {
            Some(field) => Err(Error::InvalidExample {
                id: self.id.clone(),
                message: format!("{field} is empty"),
            }),
            None => Ok(()),
        }
    }
}

#[derive(Deserialize)]
struct RawExample {
    id: Option<RawId>,
    premise: String,
    hypothesis: String,
    label: RawLabel,
}

/// A model's output for one example.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionRecord {
    pub id: String,
    #[serde(rename = "label")]
    pub predicted: Label,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scores: Option<[f64; 3]>,
}

impl PredictionRecord {
    pub fn new(id: impl Into<String>, predicted: Label) -> Self {
        PredictionRecord {
            id: id.into(),
            predicted,
            scores: None,
        }
    }

    /// Scores must be finite and the predicted label must hold the maximum
    /// score (ties are accepted).
    pub fn with_scores(id: impl Into<String>, predicted: Label, scores: [f64; 3]) -> Result<Self> {
        let record = PredictionRecord {
            id: id.into(),
            predicted,
            scores: Some(scores),
        };
        record.validate()?;
        Ok(record)
    }

    pub fn validate(&self) -> Result<()> {
        let Some(scores) = self.scores else {
            return Ok(());
        };
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidExample {
                id: self.id.clone(),
                message: "scores must be finite".into(),
            });
        }
        let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if scores[self.predicted.index()] < max {
            let best = (0..3)
                .find(|&i| scores[i] == max)
                .and_then(Label::from_index);
            return Err(Error::InvalidExample {
                id: self.id.clone(),
                message: format!(
                    "predicted {} but scores favour {}",
                    self.predicted,
                    best.map_or("?", Label::as_str)
                ),
            });
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct RawPrediction {
    id: RawId,
    label: RawLabel,
    scores: Option<Vec<f64>>,
}

/// Per-label counts of a dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub count_per_label: BTreeMap<Label, usize>,
    pub total: usize,
}

impl DatasetStats {
    pub fn count(&self, label: Label) -> usize {
        self.count_per_label.get(&label).copied().unwrap_or(0)
    }
}

pub fn dataset_stats(examples: &[NliExample]) -> DatasetStats {
    let mut count_per_label: BTreeMap<Label, usize> = Label::ALL.iter().map(|&l| (l, 0)).collect();
    for example in examples {
        *count_per_label.entry(example.gold).or_default() += 1;
    }
    DatasetStats {
        count_per_label,
        total: examples.len(),
    }
}

const STREAM: &str = "<stream>";

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

/// Calls `f(line_index, text)` for every non-blank line. Indices are 0-based.
fn for_each_line<R: BufRead>(
    reader: R,
    mut f: impl FnMut(usize, &str) -> Result<()>,
) -> Result<()> {
    for (index, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => Error::Malformed {
                line: index + 1,
                message: "invalid UTF-8".into(),
            },
            _ => Error::io(STREAM, e),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        f(index, &line)?;
    }
    Ok(())
}

fn malformed(line: usize, message: impl fmt::Display) -> Error {
    Error::Malformed {
        line,
        message: message.to_string(),
    }
}

pub fn read_dataset(path: impl AsRef<Path>) -> Result<Vec<NliExample>> {
    let path = path.as_ref();
    read_dataset_from(open(path)?).map_err(|e| with_path(e, path))
}

/// Reads a dataset from any buffered reader. Missing ids become the 0-based
/// line index.
pub fn read_dataset_from<R: BufRead>(reader: R) -> Result<Vec<NliExample>> {
    let mut examples = Vec::new();
    let mut seen = HashSet::new();
    for_each_line(reader, |index, text| {
        let line = index + 1;
        let raw: RawExample = serde_json::from_str(text).map_err(|e| malformed(line, e))?;
        let gold = raw.label.resolve().map_err(|e| malformed(line, e))?;
        let id = raw.id.map_or_else(|| index.to_string(), RawId::into_string);
        let example = NliExample {
            id,
            premise: raw.premise,
            hypothesis: raw.hypothesis,
            gold,
        };
        example.validate().map_err(|e| malformed(line, e))?;
        if !seen.insert(example.id.clone()) {
            return Err(Error::DuplicateId {
                line,
                id: example.id,
            });
        }
        examples.push(example);
        Ok(())
    })?;
    Ok(examples)
}

pub fn write_dataset(examples: &[NliExample], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_dataset_to(examples, BufWriter::new(file)).map_err(|e| with_path(e, path))
}

pub fn write_dataset_to<W: Write>(examples: &[NliExample], writer: W) -> Result<()> {
    for example in examples {
        example.validate()?;
    }
    write_jsonl(examples, writer)
}

pub fn read_predictions(path: impl AsRef<Path>) -> Result<HashMap<String, PredictionRecord>> {
    let path = path.as_ref();
    read_predictions_from(open(path)?).map_err(|e| with_path(e, path))
}

pub fn read_predictions_from<R: BufRead>(reader: R) -> Result<HashMap<String, PredictionRecord>> {
    let mut records = HashMap::new();
    for_each_line(reader, |index, text| {
        let line = index + 1;
        let raw: RawPrediction = serde_json::from_str(text).map_err(|e| malformed(line, e))?;
        let predicted = raw.label.resolve().map_err(|e| malformed(line, e))?;
        let scores = match raw.scores {
            None => None,
            Some(v) => Some(<[f64; 3]>::try_from(v.as_slice()).map_err(|_| {
                malformed(
                    line,
                    format!("scores must have 3 entries, found {}", v.len()),
                )
            })?),
        };
        let record = PredictionRecord {
            id: raw.id.into_string(),
            predicted,
            scores,
        };
        record.validate().map_err(|e| malformed(line, e))?;
        if records.contains_key(&record.id) {
            return Err(Error::DuplicateId {
                line,
                id: record.id,
            });
        }
        records.insert(record.id.clone(), record);
        Ok(())
    })?;
    Ok(records)
}

pub fn write_predictions<'a>(
    records: impl IntoIterator<Item = &'a PredictionRecord>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let records: Vec<_> = records.into_iter().collect();
    write_jsonl(&records, BufWriter::new(file)).map_err(|e| with_path(e, path))
}

/// Writes one compact JSON document per line.
pub fn write_jsonl<T: Serialize, W: Write>(items: &[T], mut writer: W) -> Result<()> {
    let io = |e| Error::io(STREAM, e);
    for item in items {
        serde_json::to_writer(&mut writer, item).map_err(|e| io(e.into()))?;
        writer.write_all(b"\n").map_err(io)?;
    }
    writer.flush().map_err(io)
}

fn with_path(error: Error, path: &Path) -> Error {
    match error {
        Error::Io { path: p, source } if p.as_os_str() == STREAM => Error::io(path, source),
        other => other,
    }
}

//! Confusion matrices, per-class and macro-averaged precision/recall/F1, and
//! accuracy over id subsets.
//!
//! Matrix rows are the gold (actual) label and columns the predicted label.
//! A metric whose denominator is zero is reported as 0 and listed in
//! [`Report::zero_division`].

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Label, NliExample, PredictionRecord};
use crate::error::{Error, Result};

/// Upper bound on ids listed in a missing-prediction error.
pub const MAX_LISTED_IDS: usize = 10;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct ConfusionMatrix {
    counts: [[u64; 3]; 3],
    n: u64,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    labels: [Label; 3],
    counts: [[u64; 3]; 3],
    n: u64,
}

impl From<ConfusionMatrix> for RawMatrix {
    fn from(cm: ConfusionMatrix) -> Self {
        RawMatrix {
            labels: Label::ALL,
            counts: cm.counts,
            n: cm.n,
        }
    }
}

impl TryFrom<RawMatrix> for ConfusionMatrix {
    type Error = String;

    fn try_from(raw: RawMatrix) -> std::result::Result<Self, String> {
        if raw.labels != Label::ALL {
            return Err("labels must be [entailment, neutral, contradiction]".into());
        }
        let cm = ConfusionMatrix::from_counts(raw.counts);
        if cm.n != raw.n {
            return Err(format!("n = {} but cells sum to {}", raw.n, cm.n));
        }
        Ok(cm)
    }
}

impl ConfusionMatrix {
    /// `counts[actual][predicted]`, indexed by label code.
    pub fn from_counts(counts: [[u64; 3]; 3]) -> Self {
        let n = counts.iter().flatten().sum();
        ConfusionMatrix { counts, n }
    }

    pub fn add(&mut self, actual: Label, predicted: Label) {
        self.counts[actual.index()][predicted.index()] += 1;
        self.n += 1;
    }

    pub fn get(&self, actual: Label, predicted: Label) -> u64 {
        self.counts[actual.index()][predicted.index()]
    }

    pub fn counts(&self) -> &[[u64; 3]; 3] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn row_sum(&self, actual: Label) -> u64 {
        self.counts[actual.index()].iter().sum()
    }

    pub fn col_sum(&self, predicted: Label) -> u64 {
        self.counts.iter().map(|row| row[predicted.index()]).sum()
    }

    pub fn trace(&self) -> u64 {
        (0..3).map(|i| self.counts[i][i]).sum()
    }
}

/// `(id, gold label)` pairs for a dataset.
pub fn gold_pairs(examples: &[NliExample]) -> impl Iterator<Item = (&str, Label)> {
    examples.iter().map(|e| (e.id.as_str(), e.gold))
}

/// Prediction ids that do not appear among the gold ids, sorted.
pub fn unscored_predictions<'a>(
    gold: impl IntoIterator<Item = (&'a str, Label)>,
    preds: &HashMap<String, PredictionRecord>,
) -> Vec<String> {
    let gold: std::collections::HashSet<&str> = gold.into_iter().map(|(id, _)| id).collect();
    let mut extra: Vec<String> = preds
        .keys()
        .filter(|id| !gold.contains(id.as_str()))
        .cloned()
        .collect();
    extra.sort();
    extra
}

/// Tallies one cell per gold example. Every gold id needs a prediction;
/// predictions for unknown ids are ignored with a warning.
pub fn build_confusion<'a>(
    gold: impl IntoIterator<Item = (&'a str, Label)>,
    preds: &HashMap<String, PredictionRecord>,
) -> Result<ConfusionMatrix> {
    let mut cm = ConfusionMatrix::default();
    let mut missing = Vec::new();
    let mut missing_count = 0;
    let mut scored = 0usize;
    for (id, actual) in gold {
        match preds.get(id) {
            Some(p) => {
                cm.add(actual, p.predicted);
                scored += 1;
            }
            None => {
                missing_count += 1;
                if missing.len() < MAX_LISTED_IDS {
                    missing.push(id.to_string());
                }
            }
        }
    }
    if missing_count > 0 {
        return Err(Error::MissingPredictions {
            count: missing_count,
            ids: missing,
        });
    }
    if preds.len() > scored {
        log::warn!(
            "ignoring {} prediction(s) with no matching gold example",
            preds.len() - scored
        );
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Averages {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Harmonic mean of precision and recall, 0 when both are 0.
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

pub fn class_metrics(cm: &ConfusionMatrix, class: Label) -> ClassMetrics {
    let hit = cm.get(class, class);
    let precision = ratio(hit, cm.col_sum(class));
    let recall = ratio(hit, cm.row_sum(class));
    ClassMetrics {
        precision,
        recall,
        f1: f1_score(precision, recall),
        support: cm.row_sum(class),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub per_class: BTreeMap<Label, ClassMetrics>,
    /// Unweighted mean over the three classes.
    #[serde(rename = "macro")]
    pub macro_avg: Averages,
    pub accuracy: f64,
    pub confusion: ConfusionMatrix,
    /// Metrics that hit an empty denominator, e.g. `precision(neutral)`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub zero_division: Vec<String>,
}

impl Report {
    pub fn class(&self, label: Label) -> &ClassMetrics {
        &self.per_class[&label]
    }
}

pub fn macro_report(cm: &ConfusionMatrix) -> Result<Report> {
    if cm.n() == 0 {
        return Err(Error::Empty("confusion matrix has no examples"));
    }
    let per_class: BTreeMap<Label, ClassMetrics> = Label::ALL
        .iter()
        .map(|&l| (l, class_metrics(cm, l)))
        .collect();
    let mean = |f: fn(&ClassMetrics) -> f64| per_class.values().map(f).sum::<f64>() / 3.0;
    let macro_avg = Averages {
        precision: mean(|m| m.precision),
        recall: mean(|m| m.recall),
        f1: mean(|m| m.f1),
    };
    let mut zero_division = Vec::new();
    for label in Label::ALL {
        if cm.col_sum(label) == 0 {
            zero_division.push(format!("precision({label})"));
        }
        if cm.row_sum(label) == 0 {
            zero_division.push(format!("recall({label})"));
        }
    }
    Ok(Report {
        per_class,
        macro_avg,
        accuracy: cm.trace() as f64 / cm.n() as f64,
        confusion: cm.clone(),
        zero_division,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubsetScore {
    pub n: usize,
    pub correct: usize,
    pub accuracy: f64,
}

/// Counts correct predictions over `ids`.
pub fn score_subset(
    ids: &[String],
    gold: &HashMap<String, Label>,
    preds: &HashMap<String, PredictionRecord>,
) -> Result<SubsetScore> {
    if ids.is_empty() {
        return Err(Error::Empty("id subset is empty"));
    }
    let mut correct = 0;
    let mut missing = Vec::new();
    let mut missing_count = 0;
    for id in ids {
        let actual = gold.get(id).ok_or_else(|| Error::MissingGold(id.clone()))?;
        match preds.get(id) {
            Some(p) if p.predicted == *actual => correct += 1,
            Some(_) => {}
            None => {
                missing_count += 1;
                if missing.len() < MAX_LISTED_IDS {
                    missing.push(id.clone());
                }
            }
        }
    }
    if missing_count > 0 {
        return Err(Error::MissingPredictions {
            count: missing_count,
            ids: missing,
        });
    }
    Ok(SubsetScore {
        n: ids.len(),
        correct,
        accuracy: correct as f64 / ids.len() as f64,
    })
}

/// Fraction of `ids` whose prediction equals the gold label.
pub fn subset_accuracy(
    ids: &[String],
    gold: &HashMap<String, Label>,
    preds: &HashMap<String, PredictionRecord>,
) -> Result<f64> {
    score_subset(ids, gold, preds).map(|s| s.accuracy)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(format!(
                "unknown format {other:?} (expected json or markdown)"
            )),
        }
    }
}

/// Percent with one decimal.
pub fn pct(value: f64) -> String {
    format!("{:.1}", value * 100.0)
}

pub fn render_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Markdown => render_markdown(report),
    }
}

fn render_markdown(report: &Report) -> String {
    let mut out = String::new();
    out.push_str("| Class | Precision | Recall (%) | F1 |\n");
    out.push_str("|---|---|---|---|\n");
    for (label, m) in &report.per_class {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            label.title(),
            pct(m.precision),
            pct(m.recall),
            pct(m.f1)
        );
    }
    let a = &report.macro_avg;
    let _ = writeln!(
        out,
        "| **Overall** | **{}** | **{}** | **{}** |",
        pct(a.precision),
        pct(a.recall),
        pct(a.f1)
    );
    let _ = writeln!(
        out,
        "\nAccuracy: {}% (n = {})",
        pct(report.accuracy),
        report.confusion.n()
    );

    out.push_str("\n| Actual \\ Predicted | Entailment | Neutral | Contradiction |\n");
    out.push_str("|---|---|---|---|\n");
    for actual in Label::ALL {
        let row = &report.confusion.counts()[actual.index()];
        let _ = writeln!(
            out,
            "| **{}** | {} | {} | {} |",
            actual.title(),
            row[0],
            row[1],
            row[2]
        );
    }
    if !report.zero_division.is_empty() {
        let _ = writeln!(
            out,
            "\nZero denominator (reported as 0): {}",
            report.zero_division.join(", ")
        );
    }
    out
}

/// Markdown table of named subset accuracies.
pub fn render_subset(name: &str, score: &SubsetScore, format: Format) -> String {
    match format {
        Format::Json => {
            let value = serde_json::json!({
                "subset": name,
                "n": score.n,
                "correct": score.correct,
                "accuracy": score.accuracy,
            });
            let mut s = serde_json::to_string_pretty(&value).expect("subset serializes");
            s.push('\n');
            s
        }
        Format::Markdown => format!(
            "| Example Group | Accuracy (%) |\n|---|---|\n| {} | {} |\n",
            name,
            pct(score.accuracy)
        ),
    }
}

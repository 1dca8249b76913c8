//! Word overlap (WO): the share of distinct normalized hypothesis tokens that
//! also occur in the premise, and the easy/tough entailment splits built on it.

use std::cmp::Ordering;
use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Label, NliExample};
use crate::error::{Error, Result};
use crate::text::normalize;

/// Description of the ordering used by [`split_entailments`], recorded in
/// split manifests.
pub const SPLIT_ORDER: &str = "wo descending, then id ascending (byte order); \
     tough ids are the last k of that order, listed by wo ascending then id ascending";

/// Matched and distinct hypothesis token counts behind one WO value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overlap {
    pub n_unique_hyp: usize,
    pub n_matched: usize,
}

impl Overlap {
    pub fn wo(&self) -> f64 {
        self.n_matched as f64 / self.n_unique_hyp as f64
    }

    /// Exact comparison of the two ratios by cross-multiplication.
    pub fn cmp_wo(&self, other: &Overlap) -> Ordering {
        let lhs = self.n_matched as u128 * other.n_unique_hyp as u128;
        let rhs = other.n_matched as u128 * self.n_unique_hyp as u128;
        lhs.cmp(&rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapRecord {
    pub id: String,
    pub wo: f64,
    pub n_unique_hyp: usize,
    pub n_matched: usize,
}

impl OverlapRecord {
    pub fn new(id: impl Into<String>, overlap: Overlap) -> Self {
        OverlapRecord {
            id: id.into(),
            wo: overlap.wo(),
            n_unique_hyp: overlap.n_unique_hyp,
            n_matched: overlap.n_matched,
        }
    }

    pub fn overlap(&self) -> Overlap {
        Overlap {
            n_unique_hyp: self.n_unique_hyp,
            n_matched: self.n_matched,
        }
    }
}

pub fn word_overlap(premise: &str, hypothesis: &str) -> Result<Overlap> {
    let hyp = normalize(hypothesis);
    let hyp: HashSet<&str> = hyp.iter().map(String::as_str).collect();
    if hyp.is_empty() {
        return Err(Error::EmptyHypothesis { id: None });
    }
    let prem = normalize(premise);
    let prem: HashSet<&str> = prem.iter().map(String::as_str).collect();
    Ok(Overlap {
        n_unique_hyp: hyp.len(),
        n_matched: hyp.intersection(&prem).count(),
    })
}

/// One record per example, in input order. Runs in parallel; the first
/// failing example (by position) determines the error.
pub fn annotate_overlap(examples: &[NliExample]) -> Result<Vec<OverlapRecord>> {
    let results: Vec<Result<OverlapRecord>> = examples
        .par_iter()
        .map(|ex| {
            word_overlap(&ex.premise, &ex.hypothesis)
                .map(|o| OverlapRecord::new(ex.id.clone(), o))
                .map_err(|_| Error::EmptyHypothesis {
                    id: Some(ex.id.clone()),
                })
        })
        .collect();
    results.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitResult {
    pub k: usize,
    /// Highest-WO ids, WO descending.
    pub easy: Vec<String>,
    /// Lowest-WO ids, WO ascending.
    pub tough: Vec<String>,
}

fn by_wo_desc_then_id(a: &OverlapRecord, b: &OverlapRecord) -> Ordering {
    b.overlap()
        .cmp_wo(&a.overlap())
        .then_with(|| a.id.cmp(&b.id))
}

/// Splits already-annotated records. Every record is eligible.
pub fn split_records(records: &[OverlapRecord], k: usize) -> Result<SplitResult> {
    if k == 0 || records.len() < k {
        return Err(Error::NotEnoughExamples {
            requested: k,
            available: records.len(),
        });
    }
    let mut ranked: Vec<&OverlapRecord> = records.iter().collect();
    ranked.sort_by(|a, b| by_wo_desc_then_id(a, b));

    let easy = ranked[..k].iter().map(|r| r.id.clone()).collect();
    let mut tail = ranked[ranked.len() - k..].to_vec();
    tail.sort_by(|a, b| {
        a.overlap()
            .cmp_wo(&b.overlap())
            .then_with(|| a.id.cmp(&b.id))
    });
    let tough = tail.into_iter().map(|r| r.id.clone()).collect();

    Ok(SplitResult { k, easy, tough })
}

/// Easy (highest WO) and tough (lowest WO) entailment splits of size `k`.
/// Non-entailment examples are ignored.
pub fn split_entailments(examples: &[NliExample], k: usize) -> Result<SplitResult> {
    let entailments: Vec<NliExample> = examples
        .iter()
        .filter(|e| e.gold == Label::Entailment)
        .cloned()
        .collect();
    if k == 0 || entailments.len() < k {
        return Err(Error::NotEnoughExamples {
            requested: k,
            available: entailments.len(),
        });
    }
    split_records(&annotate_overlap(&entailments)?, k)
}

//! Word-overlap bias diagnostics for natural language inference corpora.
//!
//! The crate reads premise/hypothesis datasets and model prediction files
//! (line-delimited JSON), measures how much of each hypothesis is lexically
//! contained in its premise, builds easy/tough entailment splits from that
//! measure, produces suffix-perturbed dataset variants, and scores
//! predictions with confusion matrices and macro-averaged metrics.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod overlap;
pub mod perturb;
pub mod stem;
pub mod text;

pub use corpus::{
    dataset_stats, read_dataset, read_dataset_from, read_predictions, read_predictions_from,
    write_dataset, write_dataset_to, write_predictions, DatasetStats, Label, NliExample,
    PredictionRecord,
};
pub use error::{Error, Result};
pub use eval::{
    build_confusion, class_metrics, macro_report, render_report, subset_accuracy, ClassMetrics,
    ConfusionMatrix, Format, Report,
};
pub use overlap::{annotate_overlap, split_entailments, word_overlap, OverlapRecord, SplitResult};
pub use perturb::{
    append_suffix, attack_dataset, augment_dataset, NeutralSentencePool, PerturbationSpec,
};
pub use stem::stem;
pub use text::{normalize, tokenize, TokenSequence};

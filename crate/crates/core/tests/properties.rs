use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use wobkit::eval::{gold_pairs, ClassMetrics};
use wobkit::{
    annotate_overlap, build_confusion, class_metrics, dataset_stats, macro_report,
    read_dataset_from, word_overlap, write_dataset_to, Label, NliExample, PredictionRecord,
};

fn label() -> impl Strategy<Value = Label> {
    (0usize..3).prop_map(|i| Label::ALL[i])
}

fn non_blank() -> impl Strategy<Value = String> {
    "[ -~\n\t\u{e9}\u{4e2d}]{1,40}".prop_filter("blank", |s| !s.trim().is_empty())
}

fn example() -> impl Strategy<Value = NliExample> {
    ("[a-z0-9_-]{1,12}", non_blank(), non_blank(), label()).prop_map(|(id, p, h, gold)| {
        NliExample {
            id,
            premise: p,
            hypothesis: h,
            gold,
        }
    })
}

fn unique_ids(mut examples: Vec<NliExample>) -> Vec<NliExample> {
    for (i, e) in examples.iter_mut().enumerate() {
        e.id = format!("{i}-{}", e.id);
    }
    examples
}

/// Vocabulary word -> reference stem, straight from the published list.
fn reference_stems() -> HashMap<String, String> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/snowball_english/");
    let words = std::fs::read_to_string(format!("{dir}voc.txt")).unwrap();
    let stems = std::fs::read_to_string(format!("{dir}output.txt")).unwrap();
    words
        .lines()
        .zip(stems.lines())
        .filter(|(w, _)| w.bytes().all(|b| b.is_ascii_lowercase()))
        .map(|(w, s)| (w.to_string(), s.to_string()))
        .collect()
}

/// Independent WO: byte-level split on ASCII whitespace, ASCII lowercasing,
/// stems looked up in the reference list.
fn oracle_overlap(
    stems: &HashMap<String, String>,
    premise: &str,
    hypothesis: &str,
) -> (usize, usize) {
    let bag = |text: &str| -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut current = String::new();
        for ch in text.chars().chain(std::iter::once(' ')) {
            if ch == ' ' || ch == '\t' || ch == '\n' {
                if !current.is_empty() {
                    out.insert(stems[&current].clone());
                    current.clear();
                }
            } else {
                current.push(ch.to_ascii_lowercase());
            }
        }
        out
    };
    let h = bag(hypothesis);
    let p = bag(premise);
    let mut matched = 0;
    for token in &h {
        if p.contains(token) {
            matched += 1;
        }
    }
    (matched, h.len())
}

fn sentence(words: &[String], picks: &[(usize, bool, u8)]) -> String {
    let mut s = String::new();
    for &(i, upper, sep) in picks {
        let w = &words[i % words.len()];
        let w = if upper {
            let mut c = w.chars();
            c.next()
                .map(|f| f.to_ascii_uppercase().to_string() + c.as_str())
                .unwrap_or_default()
        } else {
            w.clone()
        };
        s.push_str(&w);
        s.push_str(match sep % 4 {
            0 => " ",
            1 => "  ",
            2 => "\t",
            _ => " \n ",
        });
    }
    s
}

#[test]
fn overlap_matches_reference_list_oracle() {
    let stems = reference_stems();
    let mut words: Vec<String> = stems.keys().cloned().collect();
    words.sort();
    // a small shared vocabulary so premise and hypothesis actually overlap
    let shared: Vec<String> = words.iter().step_by(997).cloned().collect();
    let pick = prop::collection::vec((0usize..10_000, any::<bool>(), any::<u8>()), 1..14);
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strategy = prop::collection::vec((pick.clone(), pick, label()), 50);
    let cases = strategy.new_tree(&mut runner).unwrap().current();

    let examples: Vec<NliExample> = cases
        .iter()
        .enumerate()
        .map(|(i, (p, h, gold))| NliExample {
            id: i.to_string(),
            premise: sentence(&shared, p),
            hypothesis: sentence(&shared, h),
            gold: *gold,
        })
        .collect();
    let records = annotate_overlap(&examples).unwrap();
    let mut nonzero = 0;
    for (ex, rec) in examples.iter().zip(&records) {
        let (matched, unique) = oracle_overlap(&stems, &ex.premise, &ex.hypothesis);
        assert_eq!(rec.id, ex.id);
        assert_eq!(
            (rec.n_matched, rec.n_unique_hyp),
            (matched, unique),
            "{ex:?}"
        );
        assert_eq!(rec.wo, matched as f64 / unique as f64);
        nonzero += usize::from(matched > 0);
    }
    assert!(nonzero > 5, "oracle cases barely overlap");
}

proptest! {
    #[test]
    fn dataset_round_trip(examples in prop::collection::vec(example(), 0..12)) {
        let examples = unique_ids(examples);
        let mut buf = Vec::new();
        write_dataset_to(&examples, &mut buf).unwrap();
        prop_assert_eq!(buf.iter().filter(|&&b| b == b'\n').count(), examples.len());
        let back = read_dataset_from(buf.as_slice()).unwrap();
        prop_assert_eq!(back, examples);
    }

    #[test]
    fn stats_match_tally(examples in prop::collection::vec(example(), 0..40)) {
        let stats = dataset_stats(&examples);
        prop_assert_eq!(stats.total, examples.len());
        for l in Label::ALL {
            let mut n = 0;
            for e in &examples {
                if e.gold == l {
                    n += 1;
                }
            }
            prop_assert_eq!(stats.count(l), n);
        }
        prop_assert_eq!(stats.count_per_label.values().sum::<usize>(), stats.total);
    }

    #[test]
    fn overlap_bounds_and_set_semantics(
        prem in prop::collection::vec("[a-z]{1,6}", 1..10),
        hyp in prop::collection::vec("[a-z]{1,6}", 1..10),
        dup in 0usize..10,
        rot in 0usize..10,
    ) {
        let base = word_overlap(&prem.join(" "), &hyp.join(" ")).unwrap();
        let wo = base.wo();
        prop_assert!((0.0..=1.0).contains(&wo));
        prop_assert!(base.n_matched <= base.n_unique_hyp);

        let mut hyp2 = hyp.clone();
        hyp2.push(hyp[dup % hyp.len()].clone());
        let n = hyp2.len();
        hyp2.rotate_left(rot % n);
        let mut prem2 = prem.clone();
        prem2.push(prem[dup % prem.len()].clone());
        prem2.reverse();
        let moved = word_overlap(&prem2.join(" "), &hyp2.join(" ")).unwrap();
        prop_assert_eq!(moved, base);

        let all_in = hyp.iter().all(|h| prem.contains(h));
        if all_in {
            prop_assert_eq!(wo, 1.0);
        }
        prop_assert_eq!(word_overlap(&hyp.join(" "), &hyp.join(" ")).unwrap().wo(), 1.0);
    }

    #[test]
    fn confusion_matches_nested_loop(
        pairs in prop::collection::vec((label(), label()), 1..100),
    ) {
        let gold: Vec<(String, Label)> =
            pairs.iter().enumerate().map(|(i, (g, _))| (i.to_string(), *g)).collect();
        let preds: HashMap<String, PredictionRecord> = pairs
            .iter()
            .enumerate()
            .map(|(i, (_, p))| (i.to_string(), PredictionRecord::new(i.to_string(), *p)))
            .collect();
        let cm = build_confusion(gold.iter().map(|(i, l)| (i.as_str(), *l)), &preds).unwrap();
        for a in Label::ALL {
            for p in Label::ALL {
                let mut n = 0;
                for (g, q) in &pairs {
                    if *g == a && *q == p {
                        n += 1;
                    }
                }
                prop_assert_eq!(cm.get(a, p), n);
            }
        }
        prop_assert_eq!(cm.n() as usize, pairs.len());
    }

    #[test]
    fn macro_matches_recomputation(
        pairs in prop::collection::vec((label(), label()), 1..200),
        shift in 0usize..200,
    ) {
        let examples: Vec<NliExample> = pairs
            .iter()
            .enumerate()
            .map(|(i, (g, _))| NliExample { id: i.to_string(), premise: "p".into(), hypothesis: "h".into(), gold: *g })
            .collect();
        let preds: HashMap<String, PredictionRecord> = pairs
            .iter()
            .enumerate()
            .map(|(i, (_, p))| (i.to_string(), PredictionRecord::new(i.to_string(), *p)))
            .collect();
        let cm = build_confusion(gold_pairs(&examples), &preds).unwrap();
        let report = macro_report(&cm).unwrap();

        // from-scratch per-class counts
        let mut p_sum = 0.0;
        let mut r_sum = 0.0;
        let mut f_sum = 0.0;
        let mut correct = 0;
        for c in Label::ALL {
            let tp = pairs.iter().filter(|(g, p)| *g == c && *p == c).count() as f64;
            let predicted = pairs.iter().filter(|(_, p)| *p == c).count() as f64;
            let actual = pairs.iter().filter(|(g, _)| *g == c).count() as f64;
            let prec = if predicted > 0.0 { tp / predicted } else { 0.0 };
            let rec = if actual > 0.0 { tp / actual } else { 0.0 };
            let f = if prec + rec > 0.0 { 2.0 * prec * rec / (prec + rec) } else { 0.0 };
            p_sum += prec;
            r_sum += rec;
            f_sum += f;
            correct += tp as usize;
        }
        prop_assert!((report.macro_avg.precision - p_sum / 3.0).abs() < 1e-12);
        prop_assert!((report.macro_avg.recall - r_sum / 3.0).abs() < 1e-12);
        prop_assert!((report.macro_avg.f1 - f_sum / 3.0).abs() < 1e-12);
        prop_assert_eq!(report.accuracy, correct as f64 / pairs.len() as f64);

        for c in Label::ALL {
            let m: &ClassMetrics = report.class(c);
            prop_assert!((0.0..=1.0).contains(&m.precision));
            prop_assert!((0.0..=1.0).contains(&m.recall));
            prop_assert!((0.0..=1.0).contains(&m.f1));
            prop_assert!(m.f1 <= m.precision.max(m.recall) + 1e-12);
            prop_assert_eq!(m.f1 == 0.0, cm.get(c, c) == 0);
        }

        // order of the gold stream does not matter
        let mut rotated = examples.clone();
        rotated.rotate_left(shift % examples.len());
        let cm2 = build_confusion(gold_pairs(&rotated), &preds).unwrap();
        prop_assert_eq!(macro_report(&cm2).unwrap(), report);
    }

    #[test]
    fn class_metrics_use_row_and_column(counts in prop::array::uniform3(prop::array::uniform3(0u64..50))) {
        let cm = wobkit::ConfusionMatrix::from_counts(counts);
        for c in Label::ALL {
            let m = class_metrics(&cm, c);
            prop_assert_eq!(m.support, counts[c.index()].iter().sum::<u64>());
        }
    }
}

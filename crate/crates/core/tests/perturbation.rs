use proptest::prelude::*;
use wobkit::perturb::{pick_suffix, DEFAULT_POOL};
use wobkit::{
    attack_dataset, augment_dataset, dataset_stats, Label, NeutralSentencePool, NliExample,
    PerturbationSpec,
};

fn corpus(n: usize) -> Vec<NliExample> {
    (0..n)
        .map(|i| NliExample {
            id: format!("pair-{i}"),
            premise: format!("Premise number {i} mentions a dog."),
            hypothesis: format!("Hypothesis {i} is short."),
            gold: Label::ALL[i % 3],
        })
        .collect()
}

#[test]
fn attack_preserves_count_ids_and_labels() {
    let examples = corpus(9842);
    let spec = PerturbationSpec::attack(" and false is not true.").unwrap();
    let attacked = attack_dataset(&examples, &spec).unwrap();
    assert_eq!(attacked.len(), examples.len());
    assert_eq!(dataset_stats(&attacked), dataset_stats(&examples));
    for (before, after) in examples.iter().zip(&attacked) {
        assert_eq!(before.id, after.id);
        assert_eq!(before.premise, after.premise);
        assert_eq!(before.gold, after.gold);
        let stem = before.hypothesis.strip_suffix('.').unwrap();
        assert_eq!(after.hypothesis, format!("{stem} and false is not true."));
    }
}

#[test]
fn single_entry_pool_matches_attack() {
    let examples = corpus(500);
    let attack = PerturbationSpec::attack(" and false is not true.").unwrap();
    let pool = NeutralSentencePool::single(" and false is not true.").unwrap();
    for seed in [0, 1, u64::MAX] {
        let augment = PerturbationSpec::augment(pool.clone(), seed);
        assert_eq!(
            augment_dataset(&examples, &augment).unwrap(),
            attack_dataset(&examples, &attack).unwrap()
        );
    }
}

#[test]
fn default_pool_is_uniform() {
    let examples = corpus(60_000);
    let spec = PerturbationSpec::augment(NeutralSentencePool::default(), 2024);
    let augmented = augment_dataset(&examples, &spec).unwrap();
    let mut counts = [0usize; DEFAULT_POOL.len()];
    for ex in &augmented {
        let hits: Vec<usize> = spec
            .pool
            .suffixes()
            .iter()
            .enumerate()
            .filter(|(_, s)| ex.hypothesis.ends_with(s.as_str()))
            .map(|(i, _)| i)
            .collect();
        assert_eq!(hits.len(), 1, "{}", ex.hypothesis);
        counts[hits[0]] += 1;
    }
    for c in counts {
        let freq = c as f64 / augmented.len() as f64;
        assert!((freq - 0.2).abs() <= 0.01, "frequencies {counts:?}");
    }
}

#[test]
fn augmentation_is_reproducible() {
    let examples = corpus(3000);
    let spec = PerturbationSpec::augment(NeutralSentencePool::default(), 42);
    let a = augment_dataset(&examples, &spec).unwrap();
    let b = augment_dataset(&examples, &spec).unwrap();
    assert_eq!(a, b);

    // a row's choice depends on its id, not on its position
    let mut reversed = examples.clone();
    reversed.reverse();
    let mut c = augment_dataset(&reversed, &spec).unwrap();
    c.reverse();
    assert_eq!(a, c);
}

proptest! {
    #[test]
    fn pick_is_in_range(seed in any::<u64>(), id in "\\PC{0,20}", len in 1usize..50) {
        prop_assert!(pick_suffix(seed, &id, len) < len);
        prop_assert_eq!(pick_suffix(seed, &id, len), pick_suffix(seed, &id, len));
    }
}

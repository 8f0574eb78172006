use std::collections::HashSet;

use lingshift::cleaning::{clean_ai, clean_ai_text, clean_human, CleaningConfig};
use lingshift::corpus::{emit_jsonl, load_jsonl, split, Corpus, GenerationConfig, Label, Manifest, PromptStrategy, Side, Split, TextRecord};
use lingshift::synth::{iid_corpus, Marker, Mix, SPLIT_RATIOS};
use proptest::prelude::*;

fn small_manifest(n_prompts: usize, n_datasets: usize) -> Manifest {
    Manifest {
        prompts: PromptStrategy::ALL[..n_prompts].to_vec(),
        models: vec!["m1".into(), "m2".into()],
        datasets: ["qa", "news", "reviews"][..n_datasets].iter().map(|s| s.to_string()).collect(),
    }
}

fn toy(n: usize, prompts: usize, datasets: usize, seed: u64) -> Corpus {
    iid_corpus(&small_manifest(prompts, datasets), n, Mix::plain(), Mix::only(Marker::We), seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn splits_partition_humans_and_keep_pairs_together(n in 1usize..40, datasets in 1usize..=3, seed in any::<u64>()) {
        let c = toy(n, 2, datasets, 1);
        let s = split(&c, SPLIT_RATIOS, seed).unwrap();
        let humans = |ids: &[String]| ids.iter().filter(|id| c.get(id).unwrap().label == Label::Human).count();
        prop_assert_eq!(
            humans(&s.train) + humans(&s.validation) + humans(&s.test),
            c.human_count()
        );
        prop_assert_eq!(s.len(), c.len());
        prop_assert_eq!(humans(&s.train), datasets * (n as f64 * 0.5 + 1e-9).floor() as usize);
        let c = c.with_splits(s.clone()).unwrap();
        for r in c.records().iter().filter(|r| r.label == Label::Ai) {
            prop_assert_eq!(c.split_of(&r.id), c.split_of(r.pair_id.as_deref().unwrap()));
        }
        prop_assert_eq!(split(&c, SPLIT_RATIOS, seed).unwrap(), s);
    }

    #[test]
    fn select_is_idempotent_and_configs_are_disjoint(n in 2usize..30, seed in any::<u64>()) {
        let c = toy(n, 6, 1, seed);
        for sp in [Split::Train, Split::Validation, Split::Test] {
            let mut seen: HashSet<&str> = HashSet::new();
            let mut human_sets = Vec::new();
            for p in PromptStrategy::ALL {
                let cfg = GenerationConfig::new(p, "m1", "qa");
                let a = c.select(&cfg, sp, Side::Ai).unwrap();
                prop_assert_eq!(&a, &c.select(&cfg, sp, Side::Ai).unwrap());
                for r in &a {
                    prop_assert!(seen.insert(r.id.as_str()), "{} selected twice", r.id);
                }
                let h: Vec<&str> = c.select(&cfg, sp, Side::Human).unwrap().iter().map(|r| r.id.as_str()).collect();
                human_sets.push(h);
            }
            prop_assert!(human_sets.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn cleaning_is_idempotent(body in "[A-Za-z ,.!?*#\\-\\[\\]\\n]{0,200}", opener in prop::sample::select(vec!["", "Sure! ", "Certainly! Here is the text:\n", "<think>plan</think>\n"])) {
        let cfg = CleaningConfig::default();
        let text = format!("{opener}{body}");
        if let Some(once) = clean_ai_text(&text, &cfg) {
            prop_assert_eq!(clean_ai_text(&once, &cfg), Some(once.clone()));
        }
        let human = TextRecord::human("h", "qa", text.clone());
        let (out, _) = clean_human(&[human], &cfg);
        if let Some(r) = out.first() {
            let (again, _) = clean_human(&[r.clone()], &cfg);
            prop_assert_eq!(again.first().map(|x| x.text.clone()), Some(r.text.clone()));
        }
    }
}

#[test]
fn round_trip_through_jsonl() {
    let c = toy(12, 3, 2, 5);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    emit_jsonl(&c, &path, Some("lingshift test")).unwrap();
    let back = load_jsonl(&path).unwrap();
    assert_eq!(back.records(), c.records());
}

#[test]
fn clean_ai_preserves_pairing_and_counts_characters() {
    let cfg = GenerationConfig::new(PromptStrategy::ZeroShot, "m", "qa");
    let inputs = vec![
        TextRecord::ai("a1", &cfg, "h1", "Sure! The soil needs water. Rating: 4/5"),
        TextRecord::ai("a2", &cfg, "h2", "# Title\nPlants grow in spring and need light."),
        TextRecord::ai("a3", &cfg, "h3", "Note: nothing to see."),
    ];
    let (out, report) = clean_ai(&inputs, &CleaningConfig::default());
    assert_eq!(out.len(), report.output_records);
    assert_eq!(report.input_records - report.output_records, report.total_dropped());
    for r in &out {
        let src = inputs.iter().find(|x| x.id == r.id).unwrap();
        assert_eq!(r.pair_id, src.pair_id);
        assert_eq!(r.config(), src.config());
    }
    let in_chars: usize = inputs.iter().map(|r| r.text.chars().count()).sum();
    let out_chars: usize = out.iter().map(|r| r.text.chars().count()).sum();
    assert_eq!(report.input_chars, in_chars);
    assert_eq!(report.output_chars, out_chars);
}

use lingshift::features::{
    compute_profile, document_profile, mean_profile, sentiment, FeatureId, Scale, SentimentLexicon, N_FEATURES,
};
use lingshift::textproc::Annotator;
use proptest::prelude::*;

fn annotator() -> Annotator<'static> {
    Annotator::builtin().unwrap()
}

fn value(text: &str, key: &str) -> Option<f64> {
    document_profile(&annotator().annotate(text)).get_key(key)
}

#[test]
fn sentiment_matches_reference_scores() {
    let lex = SentimentLexicon::builtin();
    let data = include_str!("data/sentiment_oracle.tsv");
    let mut n = 0;
    for line in data.lines().filter(|l| !l.starts_with('#')) {
        let cols: Vec<&str> = line.split('\t').collect();
        let (p, s) = sentiment(lex, cols[0].split(' '));
        let want_p: f64 = cols[1].parse().unwrap();
        let want_s: f64 = cols[2].parse().unwrap();
        assert!((p - want_p).abs() < 1e-9 && (s - want_s).abs() < 1e-9, "{}: got ({p}, {s})", cols[0]);
        n += 1;
    }
    assert!(n > 200);
}

#[test]
fn documented_examples_through_the_pipeline() {
    assert_eq!(value("Dogs bark.", "density.lexical_density"), Some(1.0));
    assert_eq!(value("It is the one.", "density.lexical_density"), Some(0.0));
    assert_eq!(value("", "density.lexical_density"), None);
    assert_eq!(value("We report our results.", "lex.pron_we"), Some(0.25));
    assert_eq!(value("We report our results.", "lex.pron_our"), Some(0.25));
    assert_eq!(value("The report was written.", "gram.passive_voice"), Some(0.5));
    assert_eq!(value("The report was written.", "gram.past"), Some(0.5));
    assert_eq!(value("We will go.", "gram.future"), Some(2.0 / 3.0));
    let third = 1.0 / 3.0;
    assert_eq!(value("The dog runs.", "pos.determiners"), Some(third));
    assert_eq!(value("The dog runs.", "pos.nouns"), Some(third));
    assert_eq!(value("The dog runs.", "pos.verbs"), Some(third));
    assert_eq!(value("1 2 3", "pos.numerals"), Some(1.0));
    let a = annotator().annotate("I saw her book and then I saw her.");
    let p = document_profile(&a);
    assert_eq!(p.get_key("lex.pron_her_poss"), p.get_key("lex.pron_her_obj"));
    assert!(p.get_key("lex.pron_her_poss").unwrap() > 0.0);
}

#[test]
fn empty_document_profile_is_complete() {
    let p = document_profile(&annotator().annotate(""));
    assert_eq!(p.values.len(), N_FEATURES);
    assert_eq!(p.get_key("sent.polarity"), Some(0.0));
    assert_eq!(p.get_key("pos.nouns"), None);
}

fn sentence() -> impl Strategy<Value = String> {
    let words = prop::sample::select(vec![
        "I", "we", "you", "she", "they", "it", "her", "the", "a", "dog", "report", "results", "was", "is", "will",
        "have", "been", "written", "good", "better", "best", "quickly", "not", "and", "because", "our", "my",
        "John", "Mary's", "three", "tested", "to", "go", "very", "bad", "yourself", "themselves",
    ]);
    (prop::collection::vec(words, 1..25), prop::sample::select(vec![".", "!", "?", ""]))
        .prop_map(|(w, end)| format!("{}{}", w.join(" "), end))
}

fn document() -> impl Strategy<Value = String> {
    prop::collection::vec(sentence(), 0..6).prop_map(|s| s.join(" "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frequencies_bounded_and_profile_complete(text in document()) {
        let p = document_profile(&annotator().annotate(&text));
        prop_assert_eq!(p.values.len(), N_FEATURES);
        for (id, v) in p.iter() {
            if let Some(v) = v {
                prop_assert!(v.is_finite());
                if id.scale() == Scale::Frequency {
                    prop_assert!((0.0..=1.0).contains(&v), "{} = {}", id, v);
                }
            }
        }
        if let Some(fog) = p.get_key("readability.gunning_fog") {
            prop_assert!(fog >= 0.0);
        }
        let pos_sum: f64 = FeatureId::all()
            .filter(|id| id.key().starts_with("pos."))
            .filter_map(|id| p.get(id))
            .sum();
        prop_assert!(pos_sum <= 1.0 + 1e-12);
        prop_assert_eq!(p.get_key("lex.first_person_singular"), p.get_key("lex.pron_i"));
    }

    #[test]
    fn deterministic(text in document()) {
        let a = document_profile(&annotator().annotate(&text));
        let b = document_profile(&annotator().annotate(&text));
        let bits = |p: &lingshift::FeatureProfile| p.values.iter().map(|v| v.map(f64::to_bits)).collect::<Vec<_>>();
        prop_assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn duplicating_documents_keeps_the_mean(texts in prop::collection::vec(document(), 1..5)) {
        let ann = annotator();
        let docs: Vec<_> = texts.iter().map(|t| ann.annotate(t)).collect();
        let once = compute_profile(&docs).unwrap();
        let mut twice = docs.clone();
        twice.extend(docs.iter().cloned());
        let doubled = compute_profile(&twice).unwrap();
        for (a, b) in once.values.iter().zip(&doubled.values) {
            match (a, b) {
                (Some(x), Some(y)) => prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0)),
                (None, None) => {}
                _ => prop_assert!(false, "applicability changed"),
            }
        }
    }

    #[test]
    fn single_document_mean_equals_document(text in document()) {
        let d = document_profile(&annotator().annotate(&text));
        let m = mean_profile([&d]).unwrap();
        prop_assert_eq!(m.values, d.values);
    }
}

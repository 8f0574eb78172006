//! End-to-end acceptance checks. Runs as a plain binary so every criterion
//! prints its own PASS/FAIL line; exits non-zero if any fails.

use std::collections::{BTreeMap, HashSet};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lingshift::cleaning::{clean_ai, clean_ai_text, clean_human, CleaningConfig};
use lingshift::corpus::{GenerationConfig, Manifest, PromptStrategy, TextRecord};
use lingshift::evalharness::{aggregate, cross_eval, cross_eval_all, Axis, FeatureDetector, FixedDims};
use lingshift::features::{document_profile, Basis, FeatureId, FeatureProfile, N_FEATURES};
use lingshift::promptgen::{run_self_refine, GenParams, MockBackend, RefineConfig, RetryPolicy, TemplateSet};
use lingshift::shiftcorr::{
    bh_fdr, bonferroni, classify_strength, pearson, ranked, run_analysis, spearman, summarize, Correction, Method,
    Mode, ProfileTable, Strength, SUMMARY_COLUMNS,
};
use lingshift::synth::{iid_corpus, marker_corpus, polarity_corpus, Marker, Mix};
use lingshift::textproc::Annotator;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- AC1

fn brute_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

/// Rank = 1 + (# smaller) + (# equal - 1) / 2.
fn brute_ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let less = x.iter().filter(|&&w| w < v).count() as f64;
            let eq = x.iter().filter(|&&w| w == v).count() as f64;
            1.0 + less + (eq - 1.0) / 2.0
        })
        .collect()
}

fn brute_bh(p: &[f64], alpha: f64) -> (Vec<f64>, Vec<bool>) {
    let m = p.len();
    let mut sorted = p.to_vec();
    sorted.sort_by(f64::total_cmp);
    // largest k with p_(k) <= k * alpha / m; reject every p <= p_(k)
    let cut = (1..=m).rev().find(|&k| sorted[k - 1] * m as f64 <= k as f64 * alpha);
    let sig = p.iter().map(|&v| cut.map_or(false, |k| v <= sorted[k - 1])).collect();
    let q = p
        .iter()
        .map(|&v| {
            let rank = sorted.iter().position(|&s| s == v).unwrap() + 1;
            (rank..=m)
                .map(|j| sorted[j - 1] * m as f64 / j as f64)
                .fold(f64::INFINITY, f64::min)
                .min(1.0)
        })
        .collect();
    (q, sig)
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    let mut tested = 0;
    for case in 0..1000 {
        let n = rng.gen_range(3..=50);
        // every fourth case rounds to one decimal so ties occur
        let round = |v: f64| if case % 4 == 0 { (v * 10.0).round() / 10.0 } else { v };
        let x: Vec<f64> = (0..n).map(|_| round(rng.gen_range(-3.0..3.0))).collect();
        let y: Vec<f64> = x.iter().map(|v| round(0.5 * v + rng.gen_range(-2.0..2.0))).collect();
        if let Ok(r) = pearson(&x, &y) {
            worst = worst.max((r - brute_pearson(&x, &y)).abs());
            tested += 1;
        }
        if let Ok(r) = spearman(&x, &y) {
            worst = worst.max((r - brute_pearson(&brute_ranks(&x), &brute_ranks(&y))).abs());
        }
        let p: Vec<f64> = (0..n).map(|_| round(rng.gen_range(0.0f64..1.0).powi(3))).collect();
        let alpha = 0.05;
        let b = bonferroni(&p, alpha);
        for (i, &v) in p.iter().enumerate() {
            let want = (v * n as f64).min(1.0);
            worst = worst.max((b.adjusted[i] - want).abs());
            check(b.significant[i] == (want < alpha), || format!("bonferroni flag differs in case {case}"))?;
        }
        let (q, sig) = brute_bh(&p, alpha);
        let got = bh_fdr(&p, alpha);
        check(got.significant == sig, || format!("BH rejections differ in case {case}"))?;
        for (a, b) in got.adjusted.iter().zip(&q) {
            worst = worst.max((a - b).abs());
        }
    }
    let elapsed = start.elapsed();
    check(worst <= 1e-10, || format!("max error {worst:e}"))?;
    check(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("1000 vectors ({tested} with defined Pearson), max error {worst:.1e}, {elapsed:.2?}"))
}

// ---------------------------------------------------------------- AC2

fn ac2() -> Outcome {
    let cases = [
        (0.416, Strength::Moderate),
        (0.736, Strength::Strong),
        (0.05, Strength::Negligible),
        (0.2, Strength::Low),
        (0.6, Strength::High),
        (0.1, Strength::Low),
        (0.3, Strength::Moderate),
        (0.5, Strength::High),
        (0.7, Strength::Strong),
    ];
    for (v, want) in cases {
        let got = classify_strength(v).map_err(|e| e.to_string())?;
        check(got == want, || format!("{v} -> {got}, expected {want}"))?;
    }
    check(classify_strength(1.2).is_err(), || "1.2 accepted".into())?;
    Ok("0.416 -> moderate, 0.736 -> strong, band edges exact".into())
}

// ---------------------------------------------------------------- AC3

fn random_profile(rng: &mut ChaCha8Rng) -> FeatureProfile {
    let values: Vec<Option<f64>> = (0..N_FEATURES)
        .map(|_| if rng.gen_bool(0.05) { None } else { Some(rng.gen_range(-5.0..5.0)) })
        .collect();
    FeatureProfile {
        n_applicable: values.iter().map(|v| usize::from(v.is_some())).collect(),
        values,
        basis: Basis::CorpusMean,
        n_docs: 1,
    }
}

fn ac3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0usize;
    for _ in 0..50 {
        let mut table = ProfileTable::default();
        let configs: Vec<GenerationConfig> = PromptStrategy::ALL
            .iter()
            .map(|&p| GenerationConfig::new(p, "m", "qa"))
            .collect();
        table.human.insert("qa".into(), random_profile(&mut rng));
        for c in &configs {
            table.ai.insert(c.clone(), random_profile(&mut rng));
        }
        let values = vec![vec![0.5; 6]; 6];
        let acc = lingshift::AccuracyMatrix::new(
            Axis::Prompt,
            configs.clone(),
            configs.clone(),
            values,
            FixedDims::new(None, Some("m"), Some("qa")),
        )
        .map_err(|e| e.to_string())?;
        for sm in table.shift_matrices(&acc).map_err(|e| e.to_string())? {
            let k = sm.feature.index();
            let h = table.human["qa"].values[k];
            for i in 0..6 {
                for j in 0..6 {
                    let s = sm.values[i][j];
                    let direct = (|| {
                        let train = h? - table.ai[&configs[i]].values[k]?;
                        let test = h? - table.ai[&configs[j]].values[k]?;
                        Some(train - test)
                    })();
                    check(s.is_some() == direct.is_some(), || format!("{} ({i},{j}) NA mismatch", sm.feature))?;
                    if let (Some(s), Some(d)) = (s, direct) {
                        check((s - d).abs() <= 1e-12, || format!("{} ({i},{j}): {s} vs {d}", sm.feature))?;
                        if i == j {
                            check(s == 0.0, || format!("{} diagonal {s}", sm.feature))?;
                        }
                        if let Some(t) = sm.values[j][i] {
                            check((s + t).abs() <= 1e-12, || format!("{} not antisymmetric", sm.feature))?;
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} cells: zero diagonal, antisymmetric, equal to direct subtraction"))
}

// ---------------------------------------------------------------- AC4

fn ac4() -> Outcome {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let planted = FeatureId::from_key("sent.polarity").unwrap();
    let annotator = Annotator::builtin().map_err(|e| e.to_string())?;
    let mut passes = 0;
    let mut lines = Vec::new();
    pool.install(|| -> Result<(), String> {
        for seed in 0..10u64 {
            let corpus = polarity_corpus(200, &[1, 2, 3, 4, 5, 6], seed).map_err(|e| e.to_string())?;
            let detector = FeatureDetector::builtin().map_err(|e| e.to_string())?;
            let fixed = FixedDims::new(None, Some("synth-model"), Some("synth"));
            let acc = cross_eval(&corpus, Axis::Prompt, &fixed, &detector, seed).map_err(|e| e.to_string())?;
            let table = ProfileTable::from_corpus(&corpus, &annotator).map_err(|e| e.to_string())?;
            let results =
                run_analysis(&table, &[acc], Mode::SettingSpecific, &[Method::Pearson], 0.05).map_err(|e| e.to_string())?;
            let r = ranked(&results);
            let top = r[0];
            let top_corr = top.corr_abs.unwrap_or(0.0);
            // undefined correlations (feature constant across cells) count as below 0.3
            let max_other = r[1..].iter().filter_map(|x| x.corr_abs).fold(0.0, f64::max);
            let ok = top.feature == planted && top_corr >= 0.7 && max_other < 0.3;
            passes += usize::from(ok);
            lines.push(format!("seed {seed}: top {} {top_corr:.3}, next {max_other:.3}", top.feature));
        }
        Ok(())
    })?;
    let elapsed = start.elapsed();
    let detail = format!("{passes}/10 seeds, {elapsed:.1?} on one thread [{}]", lines.join("; "));
    check(passes >= 9 && elapsed < Duration::from_secs(120), || detail.clone())?;
    Ok(detail)
}

// ---------------------------------------------------------------- AC5

fn ac5() -> Outcome {
    let corpus = marker_corpus(120, &Marker::ALL, 5).map_err(|e| e.to_string())?;
    let detector = FeatureDetector::builtin().map_err(|e| e.to_string())?;
    let fixed = FixedDims::new(None, Some("synth-model"), Some("synth"));
    let m = cross_eval(&corpus, Axis::Prompt, &fixed, &detector, 5).map_err(|e| e.to_string())?;
    let diag = m.diagonal();
    let min_diag = diag.iter().copied().fold(1.0, f64::min);
    let n = diag.len();
    let off: Vec<f64> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| m.values[i][j])
        .collect();
    let mean_off = off.iter().sum::<f64>() / off.len() as f64;
    let mean_diag = diag.iter().sum::<f64>() / n as f64;
    let detail = format!("min diagonal {min_diag:.3}, mean diagonal {mean_diag:.3}, mean off-diagonal {mean_off:.3}");
    check(min_diag >= 0.95, || detail.clone())?;
    check(mean_off <= mean_diag - 0.2, || detail.clone())?;
    Ok(detail)
}

// ---------------------------------------------------------------- AC6

/// A hand-labeled word: surface, syllables, content word, complex word.
type W = (&'static str, usize, bool, bool);

/// Sentences of hand-labeled words; each sentence ends with `.`.
struct Paragraph {
    sentences: Vec<Vec<W>>,
}

impl Paragraph {
    fn text(&self) -> String {
        self.sentences
            .iter()
            .map(|s| format!("{}.", s.iter().map(|w| w.0).collect::<Vec<_>>().join(" ")))
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn expected(&self) -> BTreeMap<&'static str, f64> {
        let words: Vec<&W> = self.sentences.iter().flatten().collect();
        let nw = words.len() as f64;
        let ns = self.sentences.len() as f64;
        let syll: usize = words.iter().map(|w| w.1).sum();
        let complex = words.iter().filter(|w| w.3).count() as f64;
        let content = words.iter().filter(|w| w.2).count() as f64;
        let lens: Vec<f64> = self.sentences.iter().map(|s| s.len() as f64).collect();
        let mean = nw / ns;
        let std = (lens.iter().map(|l| (l - mean) * (l - mean)).sum::<f64>() / ns).sqrt();
        let folded: Vec<String> = words.iter().map(|w| w.0.to_lowercase()).collect();
        let window = 100.min(folded.len());
        let ttrs: Vec<f64> = (0..=folded.len() - window)
            .map(|s| folded[s..s + window].iter().collect::<HashSet<_>>().len() as f64 / window as f64)
            .collect();
        BTreeMap::from([
            ("readability.flesch", 206.835 - 1.015 * mean - 84.6 * (syll as f64 / nw)),
            ("readability.gunning_fog", 0.4 * (mean + 100.0 * complex / nw)),
            ("readability.avg_sentence_len", mean),
            ("readability.sentence_len_std", std),
            ("readability.short_sentences", lens.iter().filter(|&&l| l <= 10.0).count() as f64),
            ("readability.long_sentences", lens.iter().filter(|&&l| l >= 35.0).count() as f64),
            ("density.lexical_density", content / nw),
            ("div.mattr", ttrs.iter().sum::<f64>() / ttrs.len() as f64),
        ])
    }
}

const F: bool = false;
const T: bool = true;

fn paragraphs() -> Vec<Paragraph> {
    let animals_long: Vec<W> = {
        let mut v: Vec<W> = vec![("I", 1, F, F), ("keep", 1, T, F)];
        for (i, a) in ["cat", "dog", "fish", "bird", "frog", "pig", "cow", "hen", "duck", "goat", "sheep", "horse", "mouse"]
            .into_iter()
            .enumerate()
        {
            if i > 0 {
                v.push(("and", 1, F, F));
            }
            v.push(("a", 1, F, F));
            v.push((a, 1, T, F));
        }
        v.push(("too", 1, T, F));
        v
    };
    let adjs = ["red", "big", "old", "small", "tall"];
    let nouns = ["fox", "cat", "dog", "bird", "cow", "pig", "hen"];
    let objs = ["tree", "house", "ball"];
    let windowed: Vec<Vec<W>> = (0..18)
        .map(|i| {
            vec![
                ("The", 1, F, F),
                (adjs[i % 5], 1, T, F),
                (nouns[i % 7], 1, T, F),
                ("saw", 1, T, F),
                ("a", 1, F, F),
                (objs[i % 3], 1, T, F),
            ]
        })
        .collect();
    vec![
        Paragraph {
            sentences: vec![vec![
                ("The", 1, F, F),
                ("big", 1, T, F),
                ("dog", 1, T, F),
                ("ran", 1, T, F),
                ("to", 1, F, F),
                ("the", 1, F, F),
                ("park", 1, T, F),
                ("with", 1, F, F),
                ("the", 1, F, F),
                ("boy", 1, T, F),
            ]],
        },
        Paragraph {
            sentences: vec![
                vec![("The", 1, F, F), ("cat", 1, T, F), ("sat", 1, T, F), ("on", 1, F, F), ("the", 1, F, F), ("mat", 1, T, F)],
                vec![("A", 1, F, F), ("dog", 1, T, F), ("lay", 1, T, F), ("by", 1, F, F), ("the", 1, F, F), ("door", 1, T, F)],
            ],
        },
        Paragraph {
            sentences: vec![vec![
                ("My", 1, F, F),
                ("family", 3, T, T),
                ("and", 1, F, F),
                ("I", 1, F, F),
                ("went", 1, T, F),
                ("to", 1, F, F),
                ("the", 1, F, F),
                ("library", 3, T, T),
                ("yesterday", 3, T, T),
                ("to", 1, F, F),
                ("find", 1, T, F),
                ("a", 1, F, F),
                ("book", 1, T, F),
                ("about", 2, F, F),
                ("the", 1, F, F),
                ("elephant", 3, T, T),
                ("that", 1, F, F),
                ("lives", 1, T, F),
                ("in", 1, F, F),
                ("the", 1, F, F),
                ("big", 1, T, F),
                ("zoo", 1, T, F),
                ("near", 1, F, F),
                ("my", 1, F, F),
                ("house", 1, T, F),
                ("and", 1, F, F),
                ("we", 1, F, F),
                ("read", 1, T, F),
                ("it", 1, F, F),
                ("on", 1, F, F),
                ("the", 1, F, F),
                ("bus", 1, T, F),
                ("home", 1, T, F),
                ("last", 1, T, F),
                ("night", 1, T, F),
            ]],
        },
        Paragraph {
            sentences: vec![
                vec![("Birds", 1, T, F), ("sing", 1, T, F)],
                vec![
                    ("The", 1, F, F),
                    ("old", 1, T, F),
                    ("man", 1, T, F),
                    ("walked", 1, T, F),
                    ("slowly", 2, T, F),
                    ("to", 1, F, F),
                    ("the", 1, F, F),
                    ("shop", 1, T, F),
                ],
                vec![
                    ("He", 1, F, F),
                    ("bought", 1, T, F),
                    ("some", 1, F, F),
                    ("bread", 1, T, F),
                    ("milk", 1, T, F),
                    ("and", 1, F, F),
                    ("eggs", 1, T, F),
                    ("for", 1, F, F),
                    ("his", 1, F, F),
                    ("family", 3, T, T),
                    ("dinner", 2, T, F),
                ],
            ],
        },
        Paragraph {
            sentences: vec![
                vec![("They", 1, F, F), ("created", 3, T, F), ("new", 1, T, F), ("games", 1, T, F)],
                vec![("Children", 2, T, F), ("visited", 3, T, F), ("the", 1, F, F), ("library", 3, T, T)],
            ],
        },
        Paragraph {
            sentences: vec![
                vec![("Anna", 2, T, F), ("visited", 3, T, F), ("Canada", 3, T, F)],
                vec![("She", 1, F, F), ("loved", 1, T, F), ("the", 1, F, F), ("mountains", 2, T, F)],
            ],
        },
        Paragraph { sentences: windowed },
        Paragraph {
            sentences: vec![
                vec![("Is", 1, F, F), ("it", 1, F, F), ("on", 1, F, F), ("the", 1, F, F), ("chair", 1, T, F)],
                vec![("Look", 1, T, F), ("under", 2, F, F), ("the", 1, F, F), ("big", 1, T, F), ("bed", 1, T, F)],
            ],
        },
        Paragraph {
            sentences: vec![animals_long, vec![("It", 1, F, F), ("is", 1, F, F), ("fun", 1, T, F)]],
        },
        Paragraph {
            sentences: vec![
                vec![("Beautiful", 3, T, T), ("flowers", 2, T, F), ("grow", 1, T, F), ("quickly", 2, T, F)],
                vec![("Each", 1, F, F), ("garden", 2, T, F), ("needs", 1, T, F), ("water", 2, T, F)],
            ],
        },
    ]
}

fn ac6() -> Outcome {
    let annotator = Annotator::builtin().map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut n = 0;
    for (i, p) in paragraphs().iter().enumerate() {
        let text = p.text();
        let profile = document_profile(&annotator.annotate(&text));
        for (key, want) in p.expected() {
            let got = profile.get_key(key).ok_or_else(|| format!("paragraph {i}: {key} not applicable"))?;
            let err = (got - want).abs();
            check(err <= 1e-9, || format!("paragraph {i} {key}: got {got}, expected {want} ({text:?})"))?;
            worst = worst.max(err);
            n += 1;
        }
    }
    Ok(format!("{n} values over 10 paragraphs, max error {worst:.1e}"))
}

// ---------------------------------------------------------------- AC7

fn ai(text: &str) -> TextRecord {
    let c = GenerationConfig::new(PromptStrategy::ZeroShot, "m", "reviews");
    TextRecord::ai("a", &c, "h", text)
}

fn ac7() -> Outcome {
    let cfg = CleaningConfig::default();
    let cases: [(&str, &str); 3] = [
        (
            "Sure! Here is the review. Works great. Note: generated at 859 chars.",
            "Here is the review. Works great.",
        ),
        ("<think>...</think>\nFinal text.", "Final text."),
        ("The pump works well and the hose is long.", "The pump works well and the hose is long."),
    ];
    for (input, want) in cases {
        let got = clean_ai_text(input, &cfg).unwrap_or_default();
        check(got == want, || format!("{input:?} -> {got:?}, expected {want:?}"))?;
    }
    let everything = "Planning the answer first.\n</think>\nCertainly! Here is your review:\n\
        # My Review\n\
        - The blender is **very** strong and quiet.\n\
        1. It crushes ice in seconds.\n\
        ---\n\
        I would buy it again, [your name].\n\
        Rating: 5/5\n\
        (Character count: 312)\n\
        Note: this review was written to match the requested length.";
    let once = clean_ai_text(everything, &cfg).unwrap_or_default();
    for artifact in [
        "think", "Planning", "Certainly", "#", "**", "*", "---", "[your name]", "Rating", "Character count", "Note:",
        "\n- ", "1. ",
    ] {
        check(!once.contains(artifact), || format!("{artifact:?} survived in {once:?}"))?;
    }
    for kept in ["The blender is very strong and quiet.", "It crushes ice in seconds.", "I would buy it again"] {
        check(once.contains(kept), || format!("{kept:?} lost from {once:?}"))?;
    }
    let twice = clean_ai_text(&once, &cfg).unwrap_or_default();
    check(once == twice, || format!("not idempotent: {once:?} -> {twice:?}"))?;
    let (recs, report) = clean_ai(&[ai(everything), ai("Note: nothing else.")], &cfg);
    check(recs.len() == 1 && report.total_dropped() == 1, || format!("{report:?}"))?;
    check(recs[0].pair_id.as_deref() == Some("h"), || "pairing lost".into())?;
    let (h, _) = clean_human(&[TextRecord::human("h1", "reviews", "Great  product…  see https://x.y")], &CleaningConfig {
        min_length: BTreeMap::new(),
        ..CleaningConfig::default()
    });
    let human_text = h.first().map(|r| r.text.clone()).unwrap_or_default();
    check(human_text == "Great product... see", || format!("human cleaning gave {human_text:?}"))?;
    Ok(format!("all artifact classes removed and idempotent; cleaned to {once:?}"))
}

// ---------------------------------------------------------------- AC8

fn ac8() -> Outcome {
    let mut record = TextRecord::human("n1", "news", "The council met on Monday and approved the new budget.");
    record.extra.insert("title".into(), "Council approves budget".into());
    let templates = TemplateSet::builtin();
    let cfg = RefineConfig {
        retry: RetryPolicy::immediate(1),
        ..RefineConfig::new(GenParams::for_model("m"))
    };
    let m = MockBackend::new(8).with_verdicts(["B", "B", "A"]);
    let (_, st) = run_self_refine(&m, &templates, &record, &cfg).map_err(|e| e.to_string())?;
    check(st.verdicts.len() == 3 && st.iteration <= 3, || format!("{} evaluations, iteration {}", st.verdicts.len(), st.iteration))?;
    let never = MockBackend::new(8).with_verdicts(["B"]);
    let (_, st2) = run_self_refine(&never, &templates, &record, &cfg).map_err(|e| e.to_string())?;
    check(st2.iteration == 3 && st2.verdicts.len() == 3, || format!("never-accepting stopped at {}", st2.iteration))?;
    check(st.transcript.len() == 1 + 3 * st.iteration, || "transcript length".into())?;
    Ok(format!(
        "reject-reject-accept: {} evaluations, iteration {}; never-accept halts at {}",
        st.verdicts.len(),
        st.iteration,
        st2.iteration
    ))
}

// ---------------------------------------------------------------- AC9, AC10

fn ac9_10() -> (Outcome, Outcome) {
    let run = || -> Result<(String, Vec<lingshift::CorrelationResult>), String> {
        let manifest = Manifest::full();
        let corpus = iid_corpus(&manifest, 12, Mix::plain(), Mix::only(Marker::Past), 9).map_err(|e| e.to_string())?;
        let detector = FeatureDetector::builtin().map_err(|e| e.to_string())?;
        let mut shapes = Vec::new();
        let mut all = Vec::new();
        for (axis, want, single) in [
            (Axis::Prompt, 6, FixedDims::new(None, Some(&manifest.models[0]), Some(&manifest.datasets[0]))),
            (Axis::Model, 7, FixedDims::new(None, None, Some(&manifest.datasets[0]))),
            (Axis::Dataset, 4, FixedDims::new(None, Some(&manifest.models[0]), None)),
        ] {
            let m = cross_eval(&corpus, axis, &single, &detector, 9).map_err(|e| e.to_string())?;
            check(m.shape() == (want, want), || format!("{axis}: {:?}", m.shape()))?;
            let ms = cross_eval_all(&corpus, axis, &detector, 9).map_err(|e| e.to_string())?;
            let agg = aggregate(&ms).map_err(|e| e.to_string())?;
            check(agg.shape() == (want, want), || format!("{axis} aggregate: {:?}", agg.shape()))?;
            shapes.push(format!("{axis} {want}x{want} ({} settings)", ms.len()));
            all.extend(ms);
        }
        let annotator = Annotator::builtin().map_err(|e| e.to_string())?;
        let table = ProfileTable::from_corpus(&corpus, &annotator).map_err(|e| e.to_string())?;
        let results = run_analysis(&table, &all, Mode::Overall, &[Method::Pearson, Method::Spearman], 0.05)
            .map_err(|e| e.to_string())?;
        Ok((shapes.join(", "), results))
    };
    match run() {
        Err(e) => (Err(e.clone()), Err(format!("no results: {e}"))),
        Ok((shapes, results)) => {
            let table5 = || -> Outcome {
                let rows = summarize(&results, 3);
                check(rows.len() == 3 * 2 * 2, || format!("{} summary rows", rows.len()))?;
                let mut seen = HashSet::new();
                for r in &rows {
                    seen.insert((r.axis, r.method, r.correction));
                    check(r.top.len() == 3, || format!("top list of {}", r.top.len()))?;
                    check(r.top.windows(2).all(|w| w[0].1 >= w[1].1), || "top list not sorted".into())?;
                    let want = results
                        .iter()
                        .filter(|x| x.axis == r.axis && x.method == r.method)
                        .filter(|x| match r.correction {
                            Correction::Bonferroni => x.significant_bonferroni,
                            Correction::Fdr => x.significant_fdr,
                        })
                        .count();
                    check(r.n_significant == want, || "significant count mismatch".into())?;
                }
                check(seen.len() == 12, || "missing (correction, method, axis) combination".into())?;
                let cols = ["axis", "mode", "setting", "method", "correction", "n_significant", "top_1", "top_2", "top_3"];
                check(SUMMARY_COLUMNS == cols, || format!("{SUMMARY_COLUMNS:?}"))?;
                Ok(format!("{} rows: 3 axes x 2 methods x 2 corrections, n_significant and top-3", rows.len()))
            };
            (Ok(shapes), table5())
        }
    }
}

fn main() {
    let mut failed = 0;
    let mut report = |n: usize, title: &str, r: Outcome| {
        match r {
            Ok(d) => println!("AC{n} PASS {title}: {d}"),
            Err(d) => {
                failed += 1;
                println!("AC{n} FAIL {title}: {d}");
            }
        }
    };
    report(1, "statistical oracles", ac1());
    report(2, "strength bands", ac2());
    report(3, "shift algebra", ac3());
    report(4, "planted signal end to end", ac4());
    report(5, "detector sanity", ac5());
    report(6, "feature formula spot checks", ac6());
    report(7, "cleaning", ac7());
    report(8, "self-refine loop", ac8());
    let (r9, r10) = ac9_10();
    report(9, "matrix shapes", r9);
    report(10, "summary schema", r10);
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lingshift::corpus::{emit_jsonl, Corpus, Label, TextRecord};
use lingshift::synth::{marker_corpus, Marker};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lingshift"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write_marker_corpus(dir: &Path) -> std::path::PathBuf {
    let c = marker_corpus(40, &[Marker::Past, Marker::Future, Marker::Passive], 5).unwrap();
    let path = dir.join("corpus.jsonl");
    emit_jsonl(&c, &path, None).unwrap();
    path
}

#[test]
fn help_exits_zero() {
    let o = run(&["correlate", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("--profiles") && text.contains("--alpha"));
}

#[test]
fn unknown_flag_is_usage_error() {
    let o = run(&["evaluate", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_input_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.jsonl");
    let out = dir.path().join("p.csv");
    let o = run(&["features", "--corpus", p(&missing), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    let line: serde_json::Value = serde_json::from_str(err.trim().lines().last().unwrap()).unwrap();
    assert_eq!(line["error"], "io");
    assert!(line["message"].as_str().unwrap().contains("absent.jsonl"));
}

#[test]
fn bad_fixed_dims_is_usage_error() {
    let o = run(&["evaluate", "--corpus", "x", "--axis", "prompt", "--fixed", "colour=red", "--out", "y"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn clean_drops_artifacts_and_orphans() {
    let dir = tempfile::tempdir().unwrap();
    let mut human = TextRecord::human("h1", "qa", "A plain answer about gardening and soil that is long enough.");
    human.extra.insert("title".into(), "Soil?".into());
    let dup = TextRecord::human("h2", "qa", "A plain answer about gardening and soil that is long enough.");
    let cfg = "0-shot/m/qa".parse().unwrap();
    let ai = TextRecord::ai("a1", &cfg, "h1", "Certainly! Here is the answer. Soil needs water and care.");
    let orphan = TextRecord::ai("a2", &cfg, "h2", "Soil is made of minerals and organic matter in layers.");
    let c = Corpus::from_records(vec![human, dup, ai, orphan]).unwrap();
    let input = dir.path().join("raw.jsonl");
    emit_jsonl(&c, &input, None).unwrap();
    let out = dir.path().join("clean.jsonl");
    let report = dir.path().join("report.json");
    let splits = dir.path().join("splits.json");
    let o = run(&[
        "clean", "--input", p(&input), "--out", p(&out), "--report", p(&report), "--splits-out", p(&splits),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# lingshift "));
    assert!(!text.contains("Certainly"));
    let cleaned = lingshift::corpus::load_jsonl(&out).unwrap();
    assert_eq!(cleaned.len(), 2);
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["orphaned_ai_records"], 1);
    let s: serde_json::Value = serde_json::from_str(&fs::read_to_string(&splits).unwrap()).unwrap();
    assert!(s.get("train").is_some());
}

#[test]
fn pipeline_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_marker_corpus(dir.path());
    let profiles = dir.path().join("profiles.csv");
    let o = run(&["features", "--corpus", p(&corpus), "--out", p(&profiles)]);
    assert!(o.status.success(), "{}", stderr(&o));

    let acc_dir = dir.path().join("acc");
    let o = run(&["evaluate", "--corpus", p(&corpus), "--axis", "prompt", "--seed", "3", "--out", p(&acc_dir)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let files: Vec<_> = fs::read_dir(&acc_dir).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(files.len(), 2, "{files:?}");

    let single = dir.path().join("single.csv");
    let o = run(&[
        "evaluate", "--corpus", p(&corpus), "--axis", "prompt", "--fixed", "model=synth-model,dataset=synth", "--seed",
        "3", "--out", p(&single),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&single).unwrap();
    assert!(text.contains("seed=3"));
    assert!(text.contains("manifest_sha256="));
    let again = dir.path().join("again.csv");
    run(&[
        "evaluate", "--corpus", p(&corpus), "--axis", "prompt", "--fixed", "model=synth-model,dataset=synth", "--seed",
        "3", "--out", p(&again),
    ]);
    assert_eq!(fs::read(&single).unwrap(), fs::read(&again).unwrap());

    let results = dir.path().join("results.csv");
    let summary = dir.path().join("summary.csv");
    let shifts = dir.path().join("shifts");
    let o = run(&[
        "correlate", "--acc", p(&single), "--profiles", p(&profiles), "--methods", "pearson,spearman", "--out",
        p(&results), "--summary", p(&summary), "--shifts-dir", p(&shifts),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(&results)
        .unwrap();
    assert_eq!(reader.records().count(), 2 * 80);
    let shift_file = fs::read_dir(&shifts).unwrap().next().unwrap().unwrap().path();

    let svg = dir.path().join("heatmap.svg");
    let o = run(&["report", "--acc", p(&single), "--shift", p(&shift_file), "--out", p(&svg)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = fs::read_to_string(&svg).unwrap();
    assert_eq!(s.matches("class=\"panel\"").count(), 2);
    assert_eq!(s.matches("class=\"cell\"").count(), 2 * 9);
    assert!(dir.path().join("heatmap.csv").exists());
}

#[test]
fn generate_with_mock_backend_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let records: Vec<TextRecord> = (0..4)
        .map(|i| {
            let mut r = TextRecord::human(format!("q{i}"), "qa", format!("Answer {i} about bread and ovens."));
            r.extra.insert("title".into(), format!("Question {i}").into());
            r
        })
        .collect();
    let input = dir.path().join("humans.jsonl");
    emit_jsonl(&Corpus::from_records(records).unwrap(), &input, None).unwrap();
    let out = dir.path().join("gen.jsonl");
    let work = dir.path().join("work");
    let args = [
        "generate", "--corpus", p(&input), "--strategies", "0-shot,style,self-refine", "--models", "m1,m2",
        "--work-dir", p(&work), "--seed", "4", "--out", p(&out),
    ];
    let o = run(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let c = lingshift::corpus::load_jsonl(&out).unwrap();
    assert_eq!(c.records().iter().filter(|r| r.label == Label::Ai).count(), 4 * 3 * 2);
    let first = fs::read(&out).unwrap();
    let o = run(&args);
    assert!(o.status.success());
    assert_eq!(fs::read(&out).unwrap(), first);

    fs::write(work.join("ledger.jsonl"), "not json\n").unwrap();
    let o = run(&args);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("\"ledger\""));
    let mut with_reset = args.to_vec();
    with_reset.push("--reset");
    assert!(run(&with_reset).status.success());
}

#[test]
fn clean_side_must_match_labels_and_registry_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_marker_corpus(dir.path());
    let out = dir.path().join("clean.jsonl");
    let o = run(&["clean", "--in", p(&corpus), "--side", "human", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("\"argument\""));

    let profiles = dir.path().join("profiles.csv");
    let registry = dir.path().join("registry.json");
    let o = run(&["features", "--in", p(&corpus), "--out", p(&profiles), "--registry", p(&registry)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(&registry).unwrap()).unwrap();
    assert!(r.to_string().contains("sent.polarity"));
}

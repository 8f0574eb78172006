use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use lingshift::cleaning::{clean_ai, clean_human, CleaningConfig, CleaningReport};
use lingshift::corpus::{self, Corpus, Label, Manifest, PromptStrategy, SplitSet};
use lingshift::evalharness::{self, Axis, FeatureDetector, FixedDims};
use lingshift::promptgen::{self, GenParams, GenerateOptions, GenerationBackend, HttpBackend, MockBackend, RetryPolicy, TemplateSet};
use lingshift::report::{self, Grid, RunManifest};
use lingshift::shiftcorr::{self, parse_methods, Mode, ProfileTable};
use lingshift::textproc::{conllu, tagger, Annotator};
use lingshift::{Error, Result};

const SPLIT_RATIOS: (f64, f64, f64) = (0.5, 0.17, 0.33);

#[derive(Parser)]
#[command(name = "lingshift", version, about = "Linguistic feature shifts and AI-text detector generalization")]
struct Cli {
    /// JSON run config: seed, alpha, prompts, models, datasets. Flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Clean human and AI records and optionally assign splits.
    Clean {
        #[arg(long, visible_alias = "in")]
        input: PathBuf,
        /// Which cleaner to apply; `auto` picks by each record's label.
        #[arg(long, value_enum, default_value_t = CleanSide::Auto)]
        side: CleanSide,
        #[arg(long)]
        out: PathBuf,
        /// Per-rule counters as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write a 50/17/33 split manifest of the cleaned corpus.
        #[arg(long)]
        splits_out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Corpus-mean feature profiles per human dataset and AI config.
    Features {
        #[arg(long, visible_alias = "in")]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write the feature registry as JSON.
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Train the built-in detector per config and fill accuracy matrices.
    Evaluate {
        #[arg(long)]
        corpus: PathBuf,
        /// Split manifest; computed from the seed when absent.
        #[arg(long)]
        splits: Option<PathBuf>,
        #[arg(long)]
        axis: Axis,
        /// Fixed dims, e.g. `model=gpt,dataset=qa`. Without it every
        /// setting is evaluated and `--out` is a directory.
        #[arg(long)]
        fixed: Option<FixedDims>,
        #[arg(long, value_enum, default_value_t = DetectorKind::Builtin)]
        detector: DetectorKind,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Correlate feature shifts with accuracy matrices.
    Correlate {
        /// Accuracy CSV files or directories of them.
        #[arg(long, required = true, num_args = 1..)]
        acc: Vec<PathBuf>,
        #[arg(long)]
        profiles: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Setting)]
        mode: ModeArg,
        #[arg(long, default_value = "pearson")]
        methods: String,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        out: PathBuf,
        /// Significant counts and top features per family.
        #[arg(long)]
        summary: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        top_k: usize,
        /// Write shift matrices of the top features here.
        #[arg(long)]
        shifts_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        shifts_top: usize,
    },
    /// Generate AI counterparts for a human corpus.
    Generate {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        splits: Option<PathBuf>,
        /// Comma-separated strategy keys; all six by default.
        #[arg(long)]
        strategies: Option<String>,
        #[arg(long, required = true)]
        models: String,
        #[arg(long, value_enum, default_value_t = BackendKind::Mock)]
        backend: BackendKind,
        #[arg(long, default_value = "http://localhost:8000/v1")]
        base_url: String,
        /// Environment variable holding the API key.
        #[arg(long, default_value = "OPENAI_API_KEY")]
        api_key_env: String,
        /// JSONL fixtures for the mock backend.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long)]
        templates: Option<PathBuf>,
        #[arg(long)]
        temperature: Option<f64>,
        #[arg(long)]
        max_tokens: Option<u32>,
        #[arg(long, default_value_t = 4)]
        workers: usize,
        #[arg(long, default_value_t = 3)]
        max_iters: usize,
        #[arg(long, default_value_t = 3)]
        retries: usize,
        #[arg(long, default_value_t = 120)]
        timeout_secs: u64,
        /// Ledger directory.
        #[arg(long)]
        work_dir: PathBuf,
        /// Discard an existing ledger.
        #[arg(long)]
        reset: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Heatmap SVG with sidecar CSV; accuracy above shifts when both given.
    Report {
        #[arg(long)]
        acc: PathBuf,
        #[arg(long)]
        shift: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train the POS tagger from CoNLL-U.
    TrainTagger {
        #[arg(long)]
        conllu: PathBuf,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 5)]
        iterations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        holdout: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DetectorKind {
    Builtin,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Setting,
    Overall,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendKind {
    Mock,
    Http,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    seed: Option<u64>,
    alpha: Option<f64>,
    prompts: Option<Vec<PromptStrategy>>,
    models: Option<Vec<String>>,
    datasets: Option<Vec<String>>,
}

struct Ctx {
    config: RunConfig,
}

impl Ctx {
    fn load(path: Option<&Path>) -> Result<Ctx> {
        let config = match path {
            None => RunConfig::default(),
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
            }
        };
        Ok(Ctx { config })
    }

    fn seed(&self, flag: Option<u64>) -> u64 {
        flag.or(self.config.seed).unwrap_or(0)
    }

    fn alpha(&self, flag: Option<f64>) -> f64 {
        flag.or(self.config.alpha).unwrap_or(0.05)
    }

    fn manifest_override(&self) -> Option<Manifest> {
        let c = &self.config;
        match (&c.prompts, &c.models, &c.datasets) {
            (Some(p), Some(m), Some(d)) => Some(Manifest {
                prompts: p.clone(),
                models: m.clone(),
                datasets: d.clone(),
            }),
            _ => None,
        }
    }

    fn load_corpus(&self, path: &Path) -> Result<Corpus> {
        match self.manifest_override() {
            Some(m) => corpus::load_jsonl_with_manifest(path, m),
            None => corpus::load_jsonl(path),
        }
    }

    /// Header for a run over `manifest` reading `inputs`.
    fn run(&self, manifest: &Manifest, seed: u64, alpha: f64, inputs: &[(&str, &Path)]) -> Result<RunManifest> {
        let mut run = RunManifest::new(manifest, seed, alpha);
        for (role, p) in inputs {
            run = run.with_path(role, *p);
        }
        run.check_paths()?;
        Ok(run)
    }
}

fn require(paths: &[&Path]) -> Result<()> {
    for p in paths {
        if !p.exists() {
            return Err(Error::io(*p, std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or directory")));
        }
    }
    Ok(())
}

fn with_splits(corpus: Corpus, splits: Option<&Path>, seed: u64) -> Result<Corpus> {
    let set: SplitSet = match splits {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            serde_json::from_str(&text).map_err(|e| Error::Parse {
                line: e.line(),
                message: format!("{}: {e}", p.display()),
            })?
        }
        None => corpus::split(&corpus, SPLIT_RATIOS, seed ^ corpus::stable_hash("split"))?,
    };
    corpus.with_splits(set)
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("value serializes");
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

fn file_safe(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CleanSide {
    Auto,
    Human,
    Ai,
}

fn cmd_clean(
    ctx: &Ctx,
    input: &Path,
    side: CleanSide,
    out: &Path,
    report_path: Option<&Path>,
    splits_out: Option<&Path>,
    seed: Option<u64>,
) -> Result<()> {
    require(&[input])?;
    let seed = ctx.seed(seed);
    let records = corpus::read_records(input)?;
    let expect = match side {
        CleanSide::Auto => None,
        CleanSide::Human => Some(Label::Human),
        CleanSide::Ai => Some(Label::Ai),
    };
    if let Some(label) = expect {
        if let Some(r) = records.iter().find(|r| r.label != label) {
            return Err(Error::Argument(format!("--side {label:?} but record {} is labeled {:?}", r.id, r.label)));
        }
    }
    let cfg = CleaningConfig::default();
    let (humans, ais): (Vec<_>, Vec<_>) = records.into_iter().partition(|r| r.label == Label::Human);
    let (humans, mut report) = clean_human(&humans, &cfg);
    let (ais, ai_report) = clean_ai(&ais, &cfg);
    report.merge(&ai_report);
    let kept: HashSet<&str> = humans.iter().map(|r| r.id.as_str()).collect();
    let (ais, orphans): (Vec<_>, Vec<_>) = ais
        .into_iter()
        .partition(|r| side == CleanSide::Ai || r.pair_id.as_deref().map_or(false, |p| kept.contains(p)));
    let mut records = humans.clone();
    records.extend(ais);
    let corpus = match ctx.manifest_override() {
        Some(m) => Corpus::new(records, m)?,
        None => Corpus::from_records(records)?,
    };
    let run = ctx.run(corpus.manifest(), seed, ctx.alpha(None), &[("input", input)])?;
    let header = run.header("clean").join(" | ");
    corpus::emit_jsonl(&corpus, out, Some(&header))?;
    if let Some(p) = report_path {
        #[derive(serde::Serialize)]
        struct Out<'a> {
            #[serde(flatten)]
            report: &'a CleaningReport,
            orphaned_ai_records: usize,
        }
        write_json(
            p,
            &Out {
                report: &report,
                orphaned_ai_records: orphans.len(),
            },
        )?;
    }
    if let Some(p) = splits_out {
        let set = corpus::split(&corpus, SPLIT_RATIOS, seed ^ corpus::stable_hash("split"))?;
        write_json(p, &set)?;
    }
    eprintln!(
        "kept {} of {} records ({} orphaned AI records dropped)",
        corpus.len(),
        report.input_records,
        orphans.len()
    );
    Ok(())
}

fn cmd_features(ctx: &Ctx, input: &Path, out: &Path, registry: Option<&Path>) -> Result<()> {
    require(&[input])?;
    let corpus = ctx.load_corpus(input)?;
    let run = ctx.run(corpus.manifest(), ctx.seed(None), ctx.alpha(None), &[("corpus", input)])?;
    let annotator = Annotator::builtin()?;
    let table = ProfileTable::from_corpus(&corpus, &annotator)?;
    table.emit_csv(&run.header("features"), out)?;
    if let Some(p) = registry {
        write_json(p, &lingshift::features::registry_json())?;
    }
    Ok(())
}

fn cmd_evaluate(
    ctx: &Ctx,
    input: &Path,
    splits: Option<&Path>,
    axis: Axis,
    fixed: Option<&FixedDims>,
    seed: Option<u64>,
    out: &Path,
) -> Result<()> {
    let mut inputs = vec![("corpus", input)];
    if let Some(s) = splits {
        inputs.push(("splits", s));
    }
    require(&inputs.iter().map(|(_, p)| *p).collect::<Vec<_>>())?;
    let seed = ctx.seed(seed);
    let corpus = with_splits(ctx.load_corpus(input)?, splits, seed)?;
    let run = ctx.run(corpus.manifest(), seed, ctx.alpha(None), &inputs)?;
    let header = run.header("evaluate");
    let detector = FeatureDetector::builtin()?;
    let eval_seed = run.sub_seed("evaluate");
    match fixed {
        Some(f) => {
            let m = evalharness::cross_eval(&corpus, axis, f, &detector, eval_seed)?;
            evalharness::emit_accuracy_csv(&m, &header, out)
        }
        None => {
            fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
            let all = evalharness::cross_eval_all(&corpus, axis, &detector, eval_seed)?;
            for m in &all {
                let name = format!("acc.{axis}.{}.csv", file_safe(&m.setting()));
                evalharness::emit_accuracy_csv(m, &header, out.join(name))?;
            }
            let agg = evalharness::aggregate(&all)?;
            evalharness::emit_accuracy_csv(&agg, &header, out.join(format!("aggregate.{axis}.csv")))
        }
    }
}

fn accuracy_files(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(p)
                .map_err(|e| Error::io(p, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| {
                    let name = f.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                    name.starts_with("acc.") && name.ends_with(".csv")
                })
                .collect();
            found.sort();
            out.extend(found);
        } else {
            require(&[p])?;
            out.push(p.clone());
        }
    }
    if out.is_empty() {
        return Err(Error::Argument("no accuracy CSV files found".into()));
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_correlate(
    ctx: &Ctx,
    acc: &[PathBuf],
    profiles: &Path,
    mode: ModeArg,
    methods: &str,
    alpha: Option<f64>,
    out: &Path,
    summary: Option<&Path>,
    top_k: usize,
    shifts_dir: Option<&Path>,
    shifts_top: usize,
) -> Result<()> {
    require(&[profiles])?;
    let files = accuracy_files(acc)?;
    let manifest = ctx.manifest_override();
    let matrices = files
        .iter()
        .map(|f| evalharness::ingest_accuracy_csv(f, manifest.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let table = ProfileTable::load_csv(profiles)?;
    let methods = parse_methods(methods)?;
    let alpha = ctx.alpha(alpha);
    let mode = match mode {
        ModeArg::Setting => Mode::SettingSpecific,
        ModeArg::Overall => Mode::Overall,
    };
    let results = shiftcorr::run_analysis(&table, &matrices, mode, &methods, alpha)?;

    let seen = Manifest::from_records(&[]);
    let mut run = RunManifest::new(manifest.as_ref().unwrap_or(&seen), ctx.seed(None), alpha).with_path("profiles", profiles);
    for (i, f) in files.iter().enumerate() {
        run = run.with_path(&format!("acc{i:03}"), f);
    }
    run.check_paths()?;
    let header = run.header("correlate");
    shiftcorr::emit_results_csv(&results, &header, out)?;
    if let Some(p) = summary {
        let rows = shiftcorr::summarize(&results, top_k);
        let mut buf = Vec::new();
        shiftcorr::write_summary_csv(&rows, &header, &mut buf).map_err(|e| Error::io(p, e))?;
        fs::write(p, buf).map_err(|e| Error::io(p, e))?;
    }
    if let Some(dir) = shifts_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut top = Vec::new();
        for r in shiftcorr::ranked(&results) {
            if top.len() == shifts_top {
                break;
            }
            if r.corr_abs.is_some() && !top.contains(&r.feature) {
                top.push(r.feature);
            }
        }
        for (f, m) in files.iter().zip(&matrices) {
            let stem = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            for sm in table.shift_matrices(m)?.iter().filter(|s| top.contains(&s.feature)) {
                let p = dir.join(format!("{stem}.{}.shift.csv", sm.feature));
                let mut buf = Vec::new();
                report::write_grid_csv(&Grid::from_shift(sm), &header, &mut buf).map_err(|e| Error::io(&p, e))?;
                fs::write(&p, buf).map_err(|e| Error::io(&p, e))?;
            }
        }
    }
    let n_sig = results.iter().filter(|r| r.significant_fdr).count();
    eprintln!("{} tests, {n_sig} significant after FDR", results.len());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    ctx: &Ctx,
    input: &Path,
    splits: Option<&Path>,
    strategies: Option<&str>,
    models: &str,
    backend: BackendKind,
    base_url: &str,
    api_key_env: &str,
    fixtures: Option<&Path>,
    templates: Option<&Path>,
    params: GenParams,
    opts: GenerateOptions,
    timeout: Duration,
    out: &Path,
) -> Result<()> {
    let mut inputs = vec![("corpus", input)];
    for (role, p) in [("splits", splits), ("fixtures", fixtures), ("templates", templates)] {
        if let Some(p) = p {
            inputs.push((role, p));
        }
    }
    require(&inputs.iter().map(|(_, p)| *p).collect::<Vec<_>>())?;
    let strategies: Vec<PromptStrategy> = match strategies {
        None => PromptStrategy::ALL.to_vec(),
        Some(s) => s.split(',').map(|k| k.trim().parse()).collect::<Result<_>>()?,
    };
    let models: Vec<String> = models.split(',').map(|m| m.trim().to_string()).filter(|m| !m.is_empty()).collect();
    let human = corpus::load_jsonl(input)?;
    let human = match splits {
        Some(p) => with_splits(human, Some(p), opts.seed)?,
        None => human,
    };
    let templates = match templates {
        Some(dir) => TemplateSet::load_dir(dir)?,
        None => TemplateSet::builtin(),
    };
    let backend: Box<dyn GenerationBackend> = match backend {
        BackendKind::Mock => {
            let m = MockBackend::new(opts.seed);
            Box::new(match fixtures {
                Some(f) => m.with_fixture_file(f)?,
                None => m,
            })
        }
        BackendKind::Http => Box::new(HttpBackend::new(base_url, Some(api_key_env), timeout)),
    };
    let opts = GenerateOptions { params, ..opts };
    let generated = promptgen::generate_corpus(backend.as_ref(), &templates, &human, &strategies, &models, &opts)?;
    let run = ctx.run(generated.manifest(), opts.seed, ctx.alpha(None), &inputs)?;
    corpus::emit_jsonl(&generated, out, Some(&run.header("generate").join(" | ")))?;
    eprintln!("{} records written", generated.len());
    Ok(())
}

fn cmd_report(ctx: &Ctx, acc: &Path, shift: Option<&Path>, out: &Path) -> Result<()> {
    let mut inputs = vec![("acc", acc)];
    if let Some(s) = shift {
        inputs.push(("shift", s));
    }
    require(&inputs.iter().map(|(_, p)| *p).collect::<Vec<_>>())?;
    let m = evalharness::ingest_accuracy_csv(acc, ctx.manifest_override().as_ref())?;
    let run = ctx.run(&Manifest::from_records(&[]), ctx.seed(None), ctx.alpha(None), &inputs)?;
    let header = run.header("report");
    let acc_grid = Grid::from_accuracy(&m);
    let side = match shift {
        Some(s) => report::emit_paired_heatmap(&acc_grid, &Grid::load_csv(s)?, &header, out)?,
        None => report::emit_heatmap(&[(&acc_grid, report::Palette::Sequential)], &header, out)?,
    };
    eprintln!("wrote {} and {}", out.display(), side.display());
    Ok(())
}

fn cmd_train_tagger(path: &Path, lexicon: Option<&Path>, out: &Path, iterations: usize, seed: u64, holdout: usize) -> Result<()> {
    let a = conllu::ingest_conllu(path)?;
    let sents: Vec<Vec<(String, String)>> = a
        .sentences
        .iter()
        .map(|r| r.clone().map(|i| (a.tokens[i].surface.clone(), a.xpos[i].clone())).collect())
        .collect();
    let (train, test) = sents.split_at(sents.len() - holdout.min(sents.len()));
    let lex = match lexicon {
        Some(p) => tagger::read_brill_lexicon(p)?,
        None => Default::default(),
    };
    let t = tagger::Tagger::train(train, lex, iterations, seed)?;
    if !test.is_empty() {
        println!("holdout accuracy {:.4}", t.evaluate(test));
    }
    t.save(out)
}

fn dispatch(cli: Cli) -> Result<()> {
    let ctx = Ctx::load(cli.config.as_deref())?;
    match cli.cmd {
        Cmd::Clean {
            input,
            side,
            out,
            report,
            splits_out,
            seed,
        } => cmd_clean(&ctx, &input, side, &out, report.as_deref(), splits_out.as_deref(), seed),
        Cmd::Features { corpus, out, registry } => cmd_features(&ctx, &corpus, &out, registry.as_deref()),
        Cmd::Evaluate {
            corpus,
            splits,
            axis,
            fixed,
            detector: DetectorKind::Builtin,
            seed,
            out,
        } => cmd_evaluate(&ctx, &corpus, splits.as_deref(), axis, fixed.as_ref(), seed, &out),
        Cmd::Correlate {
            acc,
            profiles,
            mode,
            methods,
            alpha,
            out,
            summary,
            top_k,
            shifts_dir,
            shifts_top,
        } => cmd_correlate(
            &ctx,
            &acc,
            &profiles,
            mode,
            &methods,
            alpha,
            &out,
            summary.as_deref(),
            top_k,
            shifts_dir.as_deref(),
            shifts_top,
        ),
        Cmd::Generate {
            corpus,
            splits,
            strategies,
            models,
            backend,
            base_url,
            api_key_env,
            fixtures,
            templates,
            temperature,
            max_tokens,
            workers,
            max_iters,
            retries,
            timeout_secs,
            work_dir,
            reset,
            seed,
            out,
        } => {
            let seed = ctx.seed(seed);
            let opts = GenerateOptions {
                reset,
                workers,
                max_iters,
                retry: RetryPolicy {
                    retries,
                    ..RetryPolicy::default()
                },
                ..GenerateOptions::new(work_dir, seed)
            };
            let params = GenParams {
                model: String::new(),
                temperature,
                max_tokens,
            };
            cmd_generate(
                &ctx,
                &corpus,
                splits.as_deref(),
                strategies.as_deref(),
                &models,
                backend,
                &base_url,
                &api_key_env,
                fixtures.as_deref(),
                templates.as_deref(),
                params,
                opts,
                Duration::from_secs(timeout_secs),
                &out,
            )
        }
        Cmd::Report { acc, shift, out } => cmd_report(&ctx, &acc, shift.as_deref(), &out),
        Cmd::TrainTagger {
            conllu,
            lexicon,
            out,
            iterations,
            seed,
            holdout,
        } => cmd_train_tagger(&conllu, lexicon.as_deref(), &out, iterations, seed, holdout),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors and 0 for --help
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{line}");
            ExitCode::from(1)
        }
    }
}

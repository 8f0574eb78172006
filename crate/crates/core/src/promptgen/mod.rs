//! Prompt rendering, generation backends, the self-refine loop and
//! resumable corpus generation.

mod backend;
mod generate;
mod refine;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;

use crate::corpus::{Label, PromptStrategy, TextRecord};
use crate::error::{Error, Result};

pub use backend::{
    complete_with_retry, BackendError, FnBackend, GenParams, GenerationBackend, HttpBackend, MockBackend, RetryPolicy,
    VerdictPolicy,
};
pub use generate::{cell_key, generate_corpus, plan_cells, Cell, GenerateOptions, LedgerEntry, LedgerStatus};
pub use refine::{parse_verdict, run_self_refine, Exchange, RefineConfig, RefineFailure, SelfRefineState, Stage, Verdict};

/// Appended to the 0-shot prompt for the 0-shot CoT strategy.
pub const COT_SUFFIX: &str = " let's think step by step.";

const TEMPLATES: &str = include_str!("../../data/prompts/templates.txt");
const STEPS: &str = include_str!("../../data/prompts/steps.txt");
const REFINE: &str = include_str!("../../data/prompts/refine.txt");

fn placeholder_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\{([a-z_]+)\}").unwrap())
}

/// Placeholder names in order of appearance.
pub fn placeholders(text: &str) -> Vec<String> {
    placeholder_re().captures_iter(text).map(|c| c[1].to_string()).collect()
}

/// Replace every `{name}` using `lookup`; the first name without a value
/// is an error.
pub fn fill(text: &str, lookup: impl Fn(&str) -> Option<String>) -> Result<String> {
    let mut out = String::with_capacity(text.len());
    let mut last = 0;
    for c in placeholder_re().captures_iter(text) {
        let m = c.get(0).unwrap();
        let name = &c[1];
        let value = lookup(name).ok_or_else(|| Error::Render(format!("missing value for placeholder {{{name}}}")))?;
        out.push_str(&text[last..m.start()]);
        out.push_str(&value);
        last = m.end();
    }
    out.push_str(&text[last..]);
    Ok(out)
}

/// `[name]` sections. Lines starting with `#` before the first section are
/// comments; surrounding blank lines are trimmed.
fn sections(text: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, Vec<&str>)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim_end();
        if t.starts_with('[') && t.ends_with(']') && t.len() > 2 {
            out.push((t[1..t.len() - 1].trim().to_string(), Vec::new()));
        } else if let Some((_, body)) = out.last_mut() {
            body.push(t);
        } else if !(t.is_empty() || t.starts_with('#')) {
            return Err(Error::Parse {
                line: i + 1,
                message: "text before the first [section]".into(),
            });
        }
    }
    Ok(out
        .into_iter()
        .map(|(name, body)| (name, body.join("\n").trim_matches('\n').to_string()))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    pub dataset: String,
    pub strategy: PromptStrategy,
    pub text: String,
}

impl PromptTemplate {
    pub fn new(dataset: impl Into<String>, strategy: PromptStrategy, text: impl Into<String>) -> Result<Self> {
        let t = PromptTemplate {
            dataset: dataset.into(),
            strategy,
            text: text.into(),
        };
        t.validate()?;
        Ok(t)
    }

    /// Placeholders the strategy cannot do without.
    pub fn required(strategy: PromptStrategy) -> &'static [&'static str] {
        match strategy {
            PromptStrategy::ThreeShot => &["length", "examples"],
            PromptStrategy::Style => &["length", "style_example"],
            PromptStrategy::OneShotCot => &["length", "examples", "steps"],
            _ => &["length"],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let present = placeholders(&self.text);
        for need in PromptTemplate::required(self.strategy) {
            if !present.iter().any(|p| p == need) {
                return Err(Error::Config(format!(
                    "template {}/{} lacks {{{need}}}",
                    self.dataset, self.strategy
                )));
            }
        }
        Ok(())
    }

    /// Substitute the record's values. `steps` feeds `{steps}` and is only
    /// looked up when the text uses it.
    pub fn render(&self, record: &TextRecord, examples: &[&TextRecord], steps: Option<&str>) -> Result<String> {
        let want = self.strategy.example_count();
        if examples.len() != want {
            return Err(Error::Render(format!(
                "examples: strategy {} takes {want}, got {}",
                self.strategy,
                examples.len()
            )));
        }
        if record.label != Label::Human {
            return Err(Error::Argument(format!("record {} is not human-written", record.id)));
        }
        for e in examples {
            if e.label != Label::Human || e.dataset != record.dataset || e.id == record.id {
                return Err(Error::Argument(format!(
                    "example {} must be a different human text from dataset {}",
                    e.id, record.dataset
                )));
            }
        }
        fill(&self.text, |name| match name {
            "title" => record.extra.get("title").and_then(|v| v.as_str()).map(str::to_string),
            "length" => Some(record.char_len.to_string()),
            "examples" => Some(format_examples(examples)),
            "style_example" => examples.first().map(|e| e.text.clone()),
            "steps" => steps.map(str::to_string),
            _ => None,
        })
    }
}

fn format_examples(examples: &[&TextRecord]) -> String {
    if examples.len() == 1 {
        return format!("Example:\n{}", examples[0].text);
    }
    examples
        .iter()
        .enumerate()
        .map(|(i, e)| format!("Example {}:\n{}", i + 1, e.text))
        .collect::<Vec<_>>()
        .join("\n\n")
}

/// Self-refine stage prompts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefineTemplates {
    pub feedback: String,
    pub improve: String,
    pub evaluate: String,
}

/// All templates, steps and stage prompts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateSet {
    templates: BTreeMap<(String, PromptStrategy), PromptTemplate>,
    steps: BTreeMap<String, String>,
    pub refine: RefineTemplates,
}

impl TemplateSet {
    /// The templates shipped with the crate.
    pub fn builtin() -> TemplateSet {
        TemplateSet::parse(TEMPLATES, STEPS, REFINE).expect("shipped templates parse")
    }

    /// Read `templates.txt`, `steps.txt` and `refine.txt` from a directory.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<TemplateSet> {
        let read = |name: &str| {
            let p = dir.as_ref().join(name);
            fs::read_to_string(&p).map_err(|e| Error::io(p, e))
        };
        TemplateSet::parse(&read("templates.txt")?, &read("steps.txt")?, &read("refine.txt")?)
    }

    pub fn parse(templates: &str, steps: &str, refine: &str) -> Result<TemplateSet> {
        let mut map = BTreeMap::new();
        for (name, body) in sections(templates)? {
            let (dataset, strategy) = name
                .split_once('/')
                .ok_or_else(|| Error::Config(format!("template section [{name}] is not dataset/strategy")))?;
            let strategy: PromptStrategy = strategy.parse()?;
            if matches!(strategy, PromptStrategy::ZeroShotCot | PromptStrategy::SelfRefine) {
                return Err(Error::Config(format!("[{name}]: {strategy} is derived from 0-shot")));
            }
            let t = PromptTemplate::new(dataset, strategy, body)?;
            if map.insert((dataset.to_string(), strategy), t).is_some() {
                return Err(Error::Config(format!("duplicate template [{name}]")));
            }
        }
        let zero: Vec<PromptTemplate> = map
            .values()
            .filter(|t| t.strategy == PromptStrategy::ZeroShot)
            .cloned()
            .collect();
        for t in zero {
            let cot = PromptTemplate::new(&t.dataset, PromptStrategy::ZeroShotCot, format!("{}{COT_SUFFIX}", t.text))?;
            let refine = PromptTemplate::new(&t.dataset, PromptStrategy::SelfRefine, t.text.clone())?;
            map.insert((t.dataset.clone(), PromptStrategy::ZeroShotCot), cot);
            map.insert((t.dataset.clone(), PromptStrategy::SelfRefine), refine);
        }
        let steps: BTreeMap<String, String> = sections(steps)?.into_iter().collect();
        let mut stage: BTreeMap<String, String> = sections(refine)?.into_iter().collect();
        let mut take = |k: &str, need: &[&str]| -> Result<String> {
            let body = stage
                .remove(k)
                .ok_or_else(|| Error::Config(format!("refine templates lack [{k}]")))?;
            let present = placeholders(&body);
            for n in need {
                if !present.iter().any(|p| p == n) {
                    return Err(Error::Config(format!("refine template [{k}] lacks {{{n}}}")));
                }
            }
            Ok(body)
        };
        let refine = RefineTemplates {
            feedback: take("feedback", &["text"])?,
            improve: take("improve", &["text", "feedback"])?,
            evaluate: take("evaluate", &["generated", "human"])?,
        };
        Ok(TemplateSet {
            templates: map,
            steps,
            refine,
        })
    }

    pub fn get(&self, dataset: &str, strategy: PromptStrategy) -> Result<&PromptTemplate> {
        self.templates
            .get(&(dataset.to_string(), strategy))
            .ok_or_else(|| Error::Config(format!("no template for {dataset}/{strategy}")))
    }

    pub fn steps(&self, dataset: &str) -> Option<&str> {
        self.steps.get(dataset).map(String::as_str)
    }

    pub fn datasets(&self) -> Vec<&str> {
        let mut d: Vec<&str> = self.templates.keys().map(|(d, _)| d.as_str()).collect();
        d.dedup();
        d
    }

    /// Prompt for `record` under `strategy`. For self-refine this is the
    /// initial prompt.
    pub fn render(&self, strategy: PromptStrategy, record: &TextRecord, examples: &[&TextRecord]) -> Result<String> {
        self.get(&record.dataset, strategy)?
            .render(record, examples, self.steps(&record.dataset))
    }
}

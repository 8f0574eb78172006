use std::fmt;

use serde::{Deserialize, Serialize};

use super::backend::{complete_with_retry, GenParams, GenerationBackend, RetryPolicy};
use super::{fill, TemplateSet};
use crate::corpus::{PromptStrategy, TextRecord};
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Init,
    Feedback,
    Improve,
    Evaluate,
    Done,
}

/// Which text the evaluator judged more human-written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Generated,
    Human,
    /// No A/B answer found; treated like `Human`.
    Unparsed,
}

/// The first standalone `A` or `B` token. Text A is the generated text.
pub fn parse_verdict(response: &str) -> Verdict {
    for tok in response.split_whitespace() {
        match tok.trim_matches(|c: char| !c.is_alphanumeric()) {
            "A" => return Verdict::Generated,
            "B" => return Verdict::Human,
            _ => {}
        }
    }
    Verdict::Unparsed
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exchange {
    pub stage: Stage,
    pub prompt: String,
    pub response: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfRefineState {
    pub stage: Stage,
    /// Completed feedback/improve rounds.
    pub iteration: usize,
    pub current_text: String,
    pub transcript: Vec<Exchange>,
    /// Every stage entered, in order.
    pub history: Vec<Stage>,
    pub verdicts: Vec<Verdict>,
}

impl SelfRefineState {
    fn new() -> SelfRefineState {
        SelfRefineState {
            stage: Stage::Init,
            iteration: 0,
            current_text: String::new(),
            transcript: Vec::new(),
            history: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    fn enter(&mut self, stage: Stage) {
        self.stage = stage;
        self.history.push(stage);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefineConfig {
    pub max_iters: usize,
    pub params: GenParams,
    pub retry: RetryPolicy,
}

impl RefineConfig {
    pub fn new(params: GenParams) -> RefineConfig {
        RefineConfig {
            max_iters: 3,
            params,
            retry: RetryPolicy::default(),
        }
    }
}

/// A failed run, with the state reached so far.
#[derive(Debug)]
pub struct RefineFailure {
    pub error: Error,
    pub state: SelfRefineState,
}

impl fmt::Display for RefineFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "self-refine failed in stage {:?} after {} exchanges: {}",
            self.state.stage,
            self.state.transcript.len(),
            self.error
        )
    }
}

impl std::error::Error for RefineFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

impl From<RefineFailure> for Error {
    fn from(f: RefineFailure) -> Error {
        f.error
    }
}

/// Generate for the human `record`, then run feedback, improve and evaluate
/// rounds until the evaluator prefers the generated text or `max_iters`
/// rounds are done.
pub fn run_self_refine(
    backend: &dyn GenerationBackend,
    templates: &TemplateSet,
    record: &TextRecord,
    cfg: &RefineConfig,
) -> std::result::Result<(String, SelfRefineState), RefineFailure> {
    let mut state = SelfRefineState::new();
    if cfg.max_iters == 0 {
        return Err(RefineFailure {
            error: Error::Argument("max_iters must be at least 1".into()),
            state,
        });
    }
    macro_rules! attempt {
        ($e:expr) => {
            match $e {
                Ok(v) => v,
                Err(e) => {
                    return Err(RefineFailure {
                        error: e.into(),
                        state,
                    })
                }
            }
        };
    }
    let ask = |state: &mut SelfRefineState, prompt: String| -> crate::error::Result<String> {
        let response = complete_with_retry(backend, &prompt, &cfg.params, cfg.retry)?;
        state.transcript.push(Exchange {
            stage: state.stage,
            prompt,
            response: response.clone(),
        });
        Ok(response)
    };
    let length = record.char_len.to_string();

    state.enter(Stage::Init);
    let prompt = attempt!(templates.render(PromptStrategy::SelfRefine, record, &[]));
    state.current_text = attempt!(ask(&mut state, prompt));

    while state.iteration < cfg.max_iters {
        state.enter(Stage::Feedback);
        let prompt = attempt!(fill(&templates.refine.feedback, |n| match n {
            "text" => Some(state.current_text.clone()),
            "length" => Some(length.clone()),
            _ => None,
        }));
        let feedback = attempt!(ask(&mut state, prompt));

        state.enter(Stage::Improve);
        let prompt = attempt!(fill(&templates.refine.improve, |n| match n {
            "text" => Some(state.current_text.clone()),
            "feedback" => Some(feedback.clone()),
            "length" => Some(length.clone()),
            _ => None,
        }));
        state.current_text = attempt!(ask(&mut state, prompt));
        state.iteration += 1;

        state.enter(Stage::Evaluate);
        let prompt = attempt!(fill(&templates.refine.evaluate, |n| match n {
            "generated" => Some(state.current_text.clone()),
            "human" => Some(record.text.clone()),
            "length" => Some(length.clone()),
            _ => None,
        }));
        let verdict = parse_verdict(&attempt!(ask(&mut state, prompt)));
        state.verdicts.push(verdict);
        if verdict == Verdict::Generated {
            break;
        }
    }
    state.enter(Stage::Done);
    Ok((state.current_text.clone(), state))
}

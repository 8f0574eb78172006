use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::corpus::stable_hash;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BackendError {
    /// Worth retrying: timeouts, rate limits, server errors.
    #[error("transient backend error: {0}")]
    Transient(String),
    #[error("backend error: {0}")]
    Fatal(String),
}

impl BackendError {
    pub fn is_transient(&self) -> bool {
        matches!(self, BackendError::Transient(_))
    }
}

/// Sampling parameters, passed through to the backend untouched.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GenParams {
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_tokens: Option<u32>,
}

impl GenParams {
    pub fn for_model(model: impl Into<String>) -> GenParams {
        GenParams {
            model: model.into(),
            ..GenParams::default()
        }
    }
}

pub trait GenerationBackend: Send + Sync {
    fn complete(&self, prompt: &str, params: &GenParams) -> std::result::Result<String, BackendError>;
}

impl<B: GenerationBackend + ?Sized> GenerationBackend for &B {
    fn complete(&self, prompt: &str, params: &GenParams) -> std::result::Result<String, BackendError> {
        (**self).complete(prompt, params)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    /// Extra attempts after the first one.
    pub retries: usize,
    /// Delay before retry `k` is `backoff * 2^(k-1)`.
    pub backoff: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            retries: 3,
            backoff: Duration::from_millis(500),
        }
    }
}

impl RetryPolicy {
    pub fn immediate(retries: usize) -> RetryPolicy {
        RetryPolicy {
            retries,
            backoff: Duration::ZERO,
        }
    }
}

/// Call the backend, retrying transient failures.
pub fn complete_with_retry(
    backend: &dyn GenerationBackend,
    prompt: &str,
    params: &GenParams,
    policy: RetryPolicy,
) -> std::result::Result<String, BackendError> {
    let mut attempt = 0;
    loop {
        match backend.complete(prompt, params) {
            Err(e) if e.is_transient() && attempt < policy.retries => {
                attempt += 1;
                if !policy.backoff.is_zero() {
                    thread::sleep(policy.backoff * (1 << (attempt - 1).min(16)));
                }
            }
            other => return other,
        }
    }
}

/// Wraps a closure, mostly for tests.
pub struct FnBackend<F>(pub F);

impl<F> GenerationBackend for FnBackend<F>
where
    F: Fn(&str, &GenParams) -> std::result::Result<String, BackendError> + Send + Sync,
{
    fn complete(&self, prompt: &str, params: &GenParams) -> std::result::Result<String, BackendError> {
        (self.0)(prompt, params)
    }
}

/// How the mock answers evaluator prompts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerdictPolicy {
    /// Replies in call order; the last one repeats.
    Script(Vec<String>),
    /// "A" or "B" from a hash of the prompt and seed.
    Hashed,
}

const CANNED: [&str; 12] = [
    "The results were better than expected in most of the cases we looked at.",
    "Several factors played a role, and not all of them were obvious at first.",
    "In practice the difference is small but it adds up over time.",
    "This approach has been used before, though rarely at this scale.",
    "Most people who tried it reported a noticeable improvement.",
    "There are still open questions about how well this generalizes.",
    "The main limitation is the amount of data that was available.",
    "Overall the outcome supports the original idea.",
    "A closer look shows that the effect depends on the setting.",
    "Further work will be needed to confirm these findings.",
    "It is worth noting that the costs were lower than planned.",
    "The team plans to share more details later this year.",
];

/// Deterministic offline backend. Replies come from fixtures when the
/// prompt matches one, otherwise from canned sentences chosen by a hash of
/// seed, model and prompt.
pub struct MockBackend {
    seed: u64,
    fixtures: HashMap<String, String>,
    verdicts: VerdictPolicy,
    fail_on: Vec<usize>,
    calls: AtomicUsize,
    evaluations: AtomicUsize,
    log: Mutex<Vec<String>>,
}

/// Substring that marks an evaluator prompt.
pub(crate) const VERDICT_MARKER: &str = "single letter: A or B";

fn sha256_hex(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

impl MockBackend {
    pub fn new(seed: u64) -> MockBackend {
        MockBackend {
            seed,
            fixtures: HashMap::new(),
            verdicts: VerdictPolicy::Hashed,
            fail_on: Vec::new(),
            calls: AtomicUsize::new(0),
            evaluations: AtomicUsize::new(0),
            log: Mutex::new(Vec::new()),
        }
    }

    pub fn with_verdicts<S: Into<String>>(mut self, verdicts: impl IntoIterator<Item = S>) -> MockBackend {
        self.verdicts = VerdictPolicy::Script(verdicts.into_iter().map(Into::into).collect());
        self
    }

    /// Fail with a transient error on these 1-based call numbers.
    pub fn fail_on_calls(mut self, calls: &[usize]) -> MockBackend {
        self.fail_on = calls.to_vec();
        self
    }

    pub fn with_fixture(mut self, prompt: &str, response: impl Into<String>) -> MockBackend {
        self.fixtures.insert(sha256_hex(prompt), response.into());
        self
    }

    /// JSONL fixtures: `{"prompt": .., "response": ..}` or
    /// `{"prompt_sha256": .., "response": ..}`.
    pub fn with_fixture_file(mut self, path: impl AsRef<Path>) -> Result<MockBackend> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |m: &str| Error::Parse {
                line: i + 1,
                message: format!("{}: {m}", path.display()),
            };
            let v: Value = serde_json::from_str(line).map_err(|e| bad(&e.to_string()))?;
            let key = match (v.get("prompt").and_then(Value::as_str), v.get("prompt_sha256").and_then(Value::as_str)) {
                (Some(p), _) => sha256_hex(p),
                (None, Some(h)) => h.to_ascii_lowercase(),
                _ => return Err(bad("fixture needs prompt or prompt_sha256")),
            };
            let resp = v
                .get("response")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("fixture needs a response string"))?;
            self.fixtures.insert(key, resp.to_string());
        }
        Ok(self)
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    /// Prompts received, in call order.
    pub fn prompts(&self) -> Vec<String> {
        self.log.lock().unwrap().clone()
    }

    fn canned(&self, prompt: &str, model: &str) -> String {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ stable_hash(model) ^ stable_hash(prompt).rotate_left(17));
        let n = rng.gen_range(3..=6);
        CANNED
            .choose_multiple(&mut rng, n)
            .copied()
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl GenerationBackend for MockBackend {
    fn complete(&self, prompt: &str, params: &GenParams) -> std::result::Result<String, BackendError> {
        let n = self.calls.fetch_add(1, Ordering::SeqCst) + 1;
        self.log.lock().unwrap().push(prompt.to_string());
        if self.fail_on.contains(&n) {
            return Err(BackendError::Transient(format!("injected failure on call {n}")));
        }
        if let Some(r) = self.fixtures.get(&sha256_hex(prompt)) {
            return Ok(r.clone());
        }
        if prompt.contains(VERDICT_MARKER) {
            let k = self.evaluations.fetch_add(1, Ordering::SeqCst);
            return Ok(match &self.verdicts {
                VerdictPolicy::Script(v) => v.get(k).or(v.last()).cloned().unwrap_or_else(|| "B".into()),
                VerdictPolicy::Hashed => {
                    if (self.seed ^ stable_hash(prompt)) & 1 == 0 {
                        "A".into()
                    } else {
                        "B".into()
                    }
                }
            });
        }
        Ok(self.canned(prompt, &params.model))
    }
}

/// Client for an OpenAI-compatible `/chat/completions` endpoint.
pub struct HttpBackend {
    agent: ureq::Agent,
    url: String,
    api_key: Option<String>,
}

impl HttpBackend {
    /// `api_key_env` names the environment variable holding the key; an
    /// unset variable means no Authorization header.
    pub fn new(base_url: &str, api_key_env: Option<&str>, timeout: Duration) -> HttpBackend {
        let config = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .build();
        HttpBackend {
            agent: config.into(),
            url: format!("{}/chat/completions", base_url.trim_end_matches('/')),
            api_key: api_key_env.and_then(|k| std::env::var(k).ok()).filter(|k| !k.is_empty()),
        }
    }

    pub fn url(&self) -> &str {
        &self.url
    }
}

impl GenerationBackend for HttpBackend {
    fn complete(&self, prompt: &str, params: &GenParams) -> std::result::Result<String, BackendError> {
        let mut body = json!({
            "model": params.model,
            "messages": [{"role": "user", "content": prompt}],
        });
        if let Some(t) = params.temperature {
            body["temperature"] = json!(t);
        }
        if let Some(m) = params.max_tokens {
            body["max_tokens"] = json!(m);
        }
        let mut req = self.agent.post(&self.url).header("Content-Type", "application/json");
        if let Some(k) = &self.api_key {
            req = req.header("Authorization", &format!("Bearer {k}"));
        }
        let mut resp = req
            .send_json(&body)
            .map_err(|e| BackendError::Transient(format!("{}: {e}", self.url)))?;
        let status = resp.status().as_u16();
        if status == 429 || status >= 500 {
            return Err(BackendError::Transient(format!("{}: HTTP {status}", self.url)));
        }
        if !(200..300).contains(&status) {
            let text = resp.body_mut().read_to_string().unwrap_or_default();
            let text: String = text.chars().take(200).collect();
            return Err(BackendError::Fatal(format!("{}: HTTP {status}: {text}", self.url)));
        }
        let v: Value = resp
            .body_mut()
            .read_json()
            .map_err(|e| BackendError::Fatal(format!("{}: bad response body: {e}", self.url)))?;
        v.pointer("/choices/0/message/content")
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| BackendError::Fatal(format!("{}: response has no choices[0].message.content", self.url)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::{BufRead, BufReader, Read, Write};
    use std::net::TcpListener;

    #[test]
    fn mock_is_deterministic() {
        let p = GenParams::for_model("m");
        let a = MockBackend::new(7).complete("write", &p).unwrap();
        let b = MockBackend::new(7).complete("write", &p).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_empty());
        let other = GenParams::for_model("n");
        let outputs: Vec<String> = (0..8)
            .map(|s| MockBackend::new(s).complete("write", &other).unwrap())
            .collect();
        assert!(outputs.iter().any(|o| o != &outputs[0]));
    }

    #[test]
    fn mock_fixtures_and_failures() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fx.jsonl");
        fs::write(&path, "{\"prompt\": \"hi\", \"response\": \"hello\"}\n").unwrap();
        let m = MockBackend::new(1).with_fixture_file(&path).unwrap().fail_on_calls(&[1]);
        let p = GenParams::for_model("m");
        assert!(m.complete("hi", &p).unwrap_err().is_transient());
        assert_eq!(m.complete("hi", &p).unwrap(), "hello");
        assert_eq!(m.calls(), 2);
        fs::write(&path, "{\"response\": \"x\"}\n").unwrap();
        assert!(MockBackend::new(1).with_fixture_file(&path).is_err());
    }

    #[test]
    fn retry_gives_up_after_the_limit() {
        let p = GenParams::for_model("m");
        let m = MockBackend::new(1).fail_on_calls(&[1, 2]);
        assert!(complete_with_retry(&m, "x", &p, RetryPolicy::immediate(1)).is_err());
        let m = MockBackend::new(1).fail_on_calls(&[1, 2]);
        assert!(complete_with_retry(&m, "x", &p, RetryPolicy::immediate(2)).is_ok());
        assert_eq!(m.calls(), 3);
        let fatal = FnBackend(|_: &str, _: &GenParams| Err(BackendError::Fatal("no".into())));
        let calls = AtomicUsize::new(0);
        let counting = FnBackend(|p: &str, g: &GenParams| {
            calls.fetch_add(1, Ordering::SeqCst);
            fatal.complete(p, g)
        });
        assert!(complete_with_retry(&counting, "x", &p, RetryPolicy::immediate(5)).is_err());
        assert_eq!(calls.load(Ordering::SeqCst), 1);
    }

    /// Serves one canned HTTP response per connection and returns the
    /// request bodies it saw.
    fn serve(responses: Vec<(u16, String)>) -> (String, thread::JoinHandle<Vec<String>>) {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = format!("http://{}", listener.local_addr().unwrap());
        let handle = thread::spawn(move || {
            let mut bodies = Vec::new();
            for (status, body) in responses {
                let (stream, _) = listener.accept().unwrap();
                let mut reader = BufReader::new(stream.try_clone().unwrap());
                let mut len = 0;
                loop {
                    let mut line = String::new();
                    reader.read_line(&mut line).unwrap();
                    if line == "\r\n" || line.is_empty() {
                        break;
                    }
                    if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                        len = v.trim().parse().unwrap();
                    }
                }
                let mut buf = vec![0; len];
                reader.read_exact(&mut buf).unwrap();
                bodies.push(String::from_utf8(buf).unwrap());
                let mut stream = stream;
                write!(
                    stream,
                    "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                    body.len()
                )
                .unwrap();
            }
            bodies
        });
        (addr, handle)
    }

    #[test]
    fn http_backend_round_trip() {
        let ok = r#"{"choices":[{"message":{"role":"assistant","content":"Generated text."}}]}"#;
        let (addr, handle) = serve(vec![
            (200, ok.to_string()),
            (503, "{}".into()),
            (400, r#"{"error":"bad"}"#.into()),
        ]);
        let b = HttpBackend::new(&format!("{addr}/v1/"), None, Duration::from_secs(5));
        assert!(b.url().ends_with("/v1/chat/completions"));
        let params = GenParams {
            model: "gpt-x".into(),
            temperature: Some(0.7),
            max_tokens: None,
        };
        assert_eq!(b.complete("Write.", &params).unwrap(), "Generated text.");
        assert!(b.complete("Write.", &params).unwrap_err().is_transient());
        assert!(!b.complete("Write.", &params).unwrap_err().is_transient());
        let bodies = handle.join().unwrap();
        let first: Value = serde_json::from_str(&bodies[0]).unwrap();
        assert_eq!(first["model"], "gpt-x");
        assert_eq!(first["temperature"], 0.7);
        assert_eq!(first["messages"][0]["content"], "Write.");
        assert!(first.get("max_tokens").is_none());
    }

    #[test]
    fn http_connection_refused_is_transient() {
        let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
        let b = HttpBackend::new(&format!("http://127.0.0.1:{port}"), None, Duration::from_secs(2));
        assert!(b.complete("x", &GenParams::for_model("m")).unwrap_err().is_transient());
    }
}

//! Line-oriented JSON prediction protocol over a child's stdin/stdout.
//!
//! Request `{"id": <int>, "text": <string>}`, response
//! `{"id": <int>, "p_regulatory": <float>}`, shutdown `{"cmd": "quit"}`.
//! One response per request; responses may arrive in any order.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{Classifier, ClassifierError};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

#[derive(Serialize)]
struct Request<'a> {
    id: u64,
    text: &'a str,
}

#[derive(Deserialize)]
struct Response {
    id: u64,
    p_regulatory: f64,
}

struct Worker {
    child: Child,
    stdin: Option<ChildStdin>,
    lines: Receiver<std::io::Result<String>>,
    next_id: u64,
    broken: Option<String>,
}

/// A child process speaking the prediction protocol. The child is started
/// once, reused across batches and asked to quit on drop. Access to its
/// pipes is serialized, so one instance can be shared between threads.
pub struct SubprocessClassifier {
    name: String,
    timeout: Duration,
    worker: Mutex<Worker>,
}

fn unavailable(msg: impl Into<String>) -> ClassifierError {
    ClassifierError::FallbackUnavailable(msg.into())
}

impl SubprocessClassifier {
    pub fn spawn(command: &[String]) -> Result<Self, ClassifierError> {
        Self::spawn_with_timeout(command, DEFAULT_TIMEOUT)
    }

    pub fn spawn_with_timeout(command: &[String], timeout: Duration) -> Result<Self, ClassifierError> {
        let (program, args) = command
            .split_first()
            .ok_or_else(|| unavailable("empty command"))?;
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| unavailable(format!("cannot start {program:?}: {e}")))?;
        let stdin = child.stdin.take();
        let stdout = child
            .stdout
            .take()
            .ok_or_else(|| unavailable("child stdout not captured"))?;
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        let name = std::path::Path::new(program)
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| program.clone());
        Ok(Self {
            name,
            timeout,
            worker: Mutex::new(Worker {
                child,
                stdin,
                lines: rx,
                next_id: 0,
                broken: None,
            }),
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl Worker {
    fn exchange(&mut self, texts: &[String], timeout: Duration) -> Result<Vec<f64>, String> {
        let base = self.next_id;
        self.next_id += texts.len() as u64;
        let stdin = self.stdin.as_mut().ok_or("child stdin closed")?;
        for (k, text) in texts.iter().enumerate() {
            let line = serde_json::to_string(&Request {
                id: base + k as u64,
                text,
            })
            .map_err(|e| e.to_string())?;
            writeln!(stdin, "{line}").map_err(|e| format!("write to child failed: {e}"))?;
        }
        stdin.flush().map_err(|e| format!("write to child failed: {e}"))?;

        let mut scores: Vec<Option<f64>> = vec![None; texts.len()];
        for _ in 0..texts.len() {
            let line = match self.lines.recv_timeout(timeout) {
                Ok(Ok(line)) => line,
                Ok(Err(e)) => return Err(format!("read from child failed: {e}")),
                Err(RecvTimeoutError::Timeout) => {
                    return Err(format!("no response within {timeout:?}"))
                }
                Err(RecvTimeoutError::Disconnected) => return Err("child closed stdout".into()),
            };
            let resp: Response = serde_json::from_str(&line)
                .map_err(|e| format!("malformed response line {line:?}: {e}"))?;
            let slot = resp
                .id
                .checked_sub(base)
                .filter(|&k| k < texts.len() as u64)
                .ok_or_else(|| format!("response for unknown id {}", resp.id))?
                as usize;
            if !(0.0..=1.0).contains(&resp.p_regulatory) {
                return Err(format!("p_regulatory {} outside [0, 1]", resp.p_regulatory));
            }
            if scores[slot].replace(resp.p_regulatory).is_some() {
                return Err(format!("duplicate response for id {}", resp.id));
            }
        }
        Ok(scores.into_iter().map(|s| s.expect("every slot filled")).collect())
    }
}

impl Classifier for SubprocessClassifier {
    fn name(&self) -> &str {
        &self.name
    }

    fn classify_batch(&self, texts: &[String]) -> Result<Vec<f64>, ClassifierError> {
        let mut worker = self
            .worker
            .lock()
            .map_err(|_| unavailable("worker lock poisoned"))?;
        if let Some(reason) = &worker.broken {
            return Err(unavailable(reason.clone()));
        }
        if texts.is_empty() {
            return Ok(Vec::new());
        }
        worker.exchange(texts, self.timeout).map_err(|reason| {
            worker.broken = Some(reason.clone());
            unavailable(reason)
        })
    }
}

impl Drop for SubprocessClassifier {
    fn drop(&mut self) {
        let Ok(worker) = self.worker.get_mut() else {
            return;
        };
        if let Some(mut stdin) = worker.stdin.take() {
            let _ = writeln!(stdin, r#"{{"cmd": "quit"}}"#);
            let _ = stdin.flush();
        }
        let deadline = Instant::now() + Duration::from_secs(2);
        loop {
            match worker.child.try_wait() {
                Ok(Some(_)) => return,
                Ok(None) if Instant::now() < deadline => thread::sleep(Duration::from_millis(10)),
                _ => break,
            }
        }
        let _ = worker.child.kill();
        let _ = worker.child.wait();
    }
}

pub fn classifier_from_subprocess(command: &[String]) -> Result<SubprocessClassifier, ClassifierError> {
    SubprocessClassifier::spawn(command)
}

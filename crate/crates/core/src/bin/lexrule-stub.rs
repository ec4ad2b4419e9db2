//! Reference child for the prediction protocol, used in conformance tests
//! and as a template for real predictors.

use std::io::{self, BufRead, Write};

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Answer `--value` to every request.
    Constant,
    /// 1.0 when the text contains `--word` as a whitespace token, else 0.0.
    Keyword,
    /// Answer each group of `--group` requests in reverse order. A text
    /// that parses as a number is echoed back as the score.
    Reverse,
    /// Reply with a line that is not JSON.
    Malformed,
    /// Never reply.
    Silent,
    /// Print a banner on stdout before serving constant answers.
    Stray,
}

#[derive(Parser)]
#[command(name = "lexrule-stub")]
struct Args {
    #[arg(long, value_enum, default_value = "constant")]
    mode: Mode,
    #[arg(long, default_value_t = 1.0)]
    value: f64,
    #[arg(long, default_value = "shall")]
    word: String,
    #[arg(long, default_value_t = 3)]
    group: usize,
}

fn main() -> io::Result<()> {
    let args = Args::parse();
    let stdin = io::stdin();
    let mut out = io::stdout().lock();
    if matches!(args.mode, Mode::Stray) {
        writeln!(out, "model loaded")?;
        out.flush()?;
    }
    let mut pending: Vec<(u64, f64)> = Vec::new();
    for line in stdin.lock().lines() {
        let line = line?;
        let msg: Value = match serde_json::from_str(&line) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("lexrule-stub: bad request {line:?}: {e}");
                continue;
            }
        };
        if msg.get("cmd").and_then(Value::as_str) == Some("quit") {
            break;
        }
        let id = msg.get("id").and_then(Value::as_u64).unwrap_or(0);
        let text = msg.get("text").and_then(Value::as_str).unwrap_or("");
        match args.mode {
            Mode::Constant | Mode::Stray => {
                writeln!(out, "{}", json!({"id": id, "p_regulatory": args.value}))?;
            }
            Mode::Keyword => {
                let hit = text.split_whitespace().any(|w| w == args.word);
                let p = if hit { 1.0 } else { 0.0 };
                writeln!(out, "{}", json!({"id": id, "p_regulatory": p}))?;
            }
            Mode::Reverse => {
                pending.push((id, text.trim().parse().unwrap_or(args.value)));
                if pending.len() == args.group {
                    for (id, p) in pending.drain(..).rev() {
                        writeln!(out, "{}", json!({"id": id, "p_regulatory": p}))?;
                    }
                }
            }
            Mode::Malformed => writeln!(out, "not json")?,
            Mode::Silent => continue,
        }
        out.flush()?;
    }
    Ok(())
}

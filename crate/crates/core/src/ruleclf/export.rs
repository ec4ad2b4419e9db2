use std::path::Path;

use serde::Serialize;

use super::ClassificationOutcome;

/// One line of the outcome CSV:
/// `sentence,label,score,failure_reason,attribute_phrase`.
#[derive(Debug, Clone, Serialize)]
pub struct OutcomeRow<'a> {
    pub sentence: &'a str,
    pub label: u8,
    pub score: f64,
    pub failure_reason: &'a str,
    pub attribute_phrase: &'a str,
}

impl<'a> OutcomeRow<'a> {
    pub fn new(sentence: &'a str, outcome: &'a ClassificationOutcome) -> Self {
        Self {
            sentence,
            label: outcome.label.bit(),
            score: outcome.score,
            failure_reason: outcome.rationale.failure_reason.map_or("", |f| f.as_str()),
            attribute_phrase: outcome.rationale.attribute_phrase.as_deref().unwrap_or(""),
        }
    }
}

/// Serializes outcomes to CSV bytes and writes them atomically.
pub fn write_outcomes_csv(path: &Path, rows: &[OutcomeRow<'_>]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["sentence", "label", "score", "failure_reason", "attribute_phrase"])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    crate::fsutil::write_atomic(path, &bytes)
}

//! File formats owned by the corpus stage.
//!
//! * metadata CSV: `celex_id,adoption_year,policy_area,legal_form`
//! * document store: one `<celex_id>.txt` per act
//! * candidate CSV: `doc_id,index_in_doc,text`
//! * labelled CSV: `sentence,label` with label `0` or `1`

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{deontic_tokens, CandidateSentence, CorpusError, DocumentMetadata, LegalForm};
use crate::Label;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn csv_err(path: &Path, e: csv::Error) -> CorpusError {
    let line = e.position().map_or(0, |p| p.line());
    CorpusError::Data {
        path: path.display().to_string(),
        line,
        message: e.to_string(),
    }
}

fn data_err(path: &Path, line: u64, message: impl Into<String>) -> CorpusError {
    CorpusError::Data {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

fn open_csv(path: &Path) -> Result<csv::Reader<std::fs::File>, CorpusError> {
    let file = std::fs::File::open(path).map_err(io_err(path))?;
    Ok(csv::ReaderBuilder::new().has_headers(true).from_reader(file))
}

fn require_headers(
    path: &Path,
    reader: &mut csv::Reader<std::fs::File>,
    wanted: &[&str],
) -> Result<(), CorpusError> {
    let headers = reader.headers().map_err(|e| csv_err(path, e))?;
    for w in wanted {
        if !headers.iter().any(|h| h == *w) {
            return Err(data_err(path, 1, format!("missing column {w:?}")));
        }
    }
    Ok(())
}

#[derive(Deserialize)]
struct MetadataRow {
    celex_id: String,
    adoption_year: i32,
    policy_area: String,
    legal_form: String,
}

/// Reads and validates a metadata CSV; ids must be unique.
pub fn read_metadata_csv(path: &Path) -> Result<Vec<DocumentMetadata>, CorpusError> {
    let mut reader = open_csv(path)?;
    require_headers(path, &mut reader, &["celex_id", "adoption_year", "policy_area", "legal_form"])?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for row in reader.deserialize::<MetadataRow>() {
        let row = row.map_err(|e| csv_err(path, e))?;
        let line = out.len() as u64 + 2;
        let legal_form: LegalForm = row.legal_form.parse().map_err(|m: String| data_err(path, line, m))?;
        let record = DocumentMetadata {
            celex_id: row.celex_id.trim().to_owned(),
            adoption_year: row.adoption_year,
            policy_area: row.policy_area.trim().to_owned(),
            legal_form,
        };
        record.validate().map_err(|m| data_err(path, line, m))?;
        if !seen.insert(record.celex_id.clone()) {
            return Err(data_err(path, line, format!("duplicate celex_id {}", record.celex_id)));
        }
        out.push(record);
    }
    Ok(out)
}

pub fn write_metadata_csv(path: &Path, records: &[DocumentMetadata]) -> Result<(), CorpusError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["celex_id", "adoption_year", "policy_area", "legal_form"])
        .map_err(|e| csv_err(path, e))?;
    for r in records {
        w.write_record([
            r.celex_id.as_str(),
            &r.adoption_year.to_string(),
            r.policy_area.as_str(),
            r.legal_form.as_str(),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    finish(path, w)
}

fn finish(path: &Path, w: csv::Writer<Vec<u8>>) -> Result<(), CorpusError> {
    let bytes = w
        .into_inner()
        .map_err(|e| data_err(path, 0, e.to_string()))?;
    crate::fsutil::write_atomic(path, &bytes).map_err(io_err(path))
}

/// `(celex_id, path)` for every `*.txt` file in `dir`, sorted by id.
pub fn list_document_store(dir: &Path) -> Result<Vec<(String, PathBuf)>, CorpusError> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io_err(dir))? {
        let path = entry.map_err(io_err(dir))?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("txt") {
            continue;
        }
        if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
            out.push((stem.to_owned(), path.clone()));
        }
    }
    out.sort();
    Ok(out)
}

pub fn read_text(path: &Path) -> Result<String, CorpusError> {
    std::fs::read_to_string(path).map_err(io_err(path))
}

#[derive(Serialize, Deserialize)]
struct CandidateRow {
    doc_id: String,
    index_in_doc: usize,
    text: String,
}

pub fn write_candidates_csv(path: &Path, candidates: &[CandidateSentence]) -> Result<(), CorpusError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for c in candidates {
        w.serialize(CandidateRow {
            doc_id: c.doc_id.clone(),
            index_in_doc: c.index_in_doc,
            text: c.text.clone(),
        })
        .map_err(|e| csv_err(path, e))?;
    }
    if candidates.is_empty() {
        w.write_record(["doc_id", "index_in_doc", "text"])
            .map_err(|e| csv_err(path, e))?;
    }
    finish(path, w)
}

/// Reads candidates; rows without a deontic word are rejected.
pub fn read_candidates_csv(path: &Path) -> Result<Vec<CandidateSentence>, CorpusError> {
    let mut reader = open_csv(path)?;
    require_headers(path, &mut reader, &["doc_id", "index_in_doc", "text"])?;
    let mut out = Vec::new();
    for row in reader.deserialize::<CandidateRow>() {
        let row = row.map_err(|e| csv_err(path, e))?;
        let tokens = deontic_tokens(&row.text);
        if tokens.is_empty() {
            return Err(data_err(path, out.len() as u64 + 2, "sentence has no deontic word"));
        }
        out.push(CandidateSentence {
            doc_id: row.doc_id,
            index_in_doc: row.index_in_doc,
            text: row.text,
            deontic_tokens: tokens,
        });
    }
    Ok(out)
}

/// A sentence with its gold class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSentence {
    pub text: String,
    pub label: Label,
}

#[derive(Serialize, Deserialize)]
struct LabeledRow {
    sentence: String,
    label: u8,
}

pub fn read_labeled_csv(path: &Path) -> Result<Vec<LabeledSentence>, CorpusError> {
    let mut reader = open_csv(path)?;
    require_headers(path, &mut reader, &["sentence", "label"])?;
    let mut out = Vec::new();
    for row in reader.deserialize::<LabeledRow>() {
        let row = row.map_err(|e| csv_err(path, e))?;
        let label = Label::from_bit(row.label).ok_or_else(|| {
            data_err(path, out.len() as u64 + 2, format!("label must be 0 or 1, got {}", row.label))
        })?;
        out.push(LabeledSentence {
            text: row.sentence,
            label,
        });
    }
    Ok(out)
}

pub fn write_labeled_csv(path: &Path, rows: &[LabeledSentence]) -> Result<(), CorpusError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["sentence", "label"]).map_err(|e| csv_err(path, e))?;
    for r in rows {
        w.write_record([r.text.as_str(), &r.label.bit().to_string()])
            .map_err(|e| csv_err(path, e))?;
    }
    finish(path, w)
}

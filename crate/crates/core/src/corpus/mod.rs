//! Corpus preparation: section extraction, sentence segmentation, deontic
//! filtering, stratified sampling and metadata retrieval.

mod deontic;
pub mod io;
mod metadata;
mod sample;
mod section;
mod segment;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use deontic::{deontic_tokens, filter_deontic, filter_document};
pub use metadata::{fetch_metadata, DEFAULT_ENDPOINT, MetadataClient, MetadataFetch};
pub use sample::{stratify_sample, strata, Stratum, StratumKey};
pub use section::{extract_regulatory_section, MarkerDictionary};
pub use segment::{segment_sentences, Segmenter};

pub const MIN_ADOPTION_YEAR: i32 = 1952;
pub const MAX_ADOPTION_YEAR: i32 = 2100;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("no start marker found")]
    NoStartMarker,
    #[error("no end marker found after the start marker")]
    NoEndMarker,
    #[error("marker dictionary needs at least one start and one end phrase")]
    IncompleteMarkers,
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Data {
        path: String,
        line: u64,
        message: String,
    },
    #[error("network error: {0}")]
    Network(String),
    #[error("malformed response: {0}")]
    MalformedResponse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LegalForm {
    Regulation,
    Directive,
    Decision,
    Other,
}

impl LegalForm {
    pub fn as_str(self) -> &'static str {
        match self {
            LegalForm::Regulation => "regulation",
            LegalForm::Directive => "directive",
            LegalForm::Decision => "decision",
            LegalForm::Other => "other",
        }
    }

    /// Form implied by a sector-3 CELEX number, e.g. `32020R0723`.
    pub fn from_celex(celex_id: &str) -> LegalForm {
        let mut chars = celex_id.chars();
        if chars.next() != Some('3') {
            return LegalForm::Other;
        }
        match celex_id.chars().find(|c| c.is_ascii_alphabetic()) {
            Some('R') => LegalForm::Regulation,
            Some('L') => LegalForm::Directive,
            Some('D') => LegalForm::Decision,
            _ => LegalForm::Other,
        }
    }
}

impl fmt::Display for LegalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LegalForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "regulation" => Ok(LegalForm::Regulation),
            "directive" => Ok(LegalForm::Directive),
            "decision" => Ok(LegalForm::Decision),
            "other" => Ok(LegalForm::Other),
            other => Err(format!("unknown legal form {other:?}")),
        }
    }
}

/// Metadata of one legal act.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentMetadata {
    pub celex_id: String,
    pub adoption_year: i32,
    pub policy_area: String,
    pub legal_form: LegalForm,
}

impl DocumentMetadata {
    pub fn validate(&self) -> Result<(), String> {
        if self.celex_id.trim().is_empty() {
            return Err("empty celex_id".into());
        }
        if !(MIN_ADOPTION_YEAR..=MAX_ADOPTION_YEAR).contains(&self.adoption_year) {
            return Err(format!(
                "adoption_year {} outside [{MIN_ADOPTION_YEAR}, {MAX_ADOPTION_YEAR}]",
                self.adoption_year
            ));
        }
        Ok(())
    }
}

/// Full text of one legal act plus its metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegalDocument {
    pub metadata: DocumentMetadata,
    pub full_text: String,
}

/// A sentence of the enacting terms that contains `shall` or `must`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSentence {
    pub doc_id: String,
    pub index_in_doc: usize,
    pub text: String,
    /// Lower-cased deontic words in order of occurrence.
    #[serde(skip)]
    pub deontic_tokens: Vec<String>,
}

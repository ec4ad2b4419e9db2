use std::path::Path;

use super::CorpusError;

const BUILTIN_MARKERS: &str = include_str!("../../data/markers.txt");

/// Start and end phrases delimiting the enacting terms of an act.
///
/// File format: one phrase per line, `#` comments, with `[start]` and
/// `[end]` lines switching the list that following phrases go to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkerDictionary {
    pub start: Vec<String>,
    pub end: Vec<String>,
}

impl MarkerDictionary {
    pub fn new(start: Vec<String>, end: Vec<String>) -> Result<Self, CorpusError> {
        if start.is_empty() || end.is_empty() {
            return Err(CorpusError::IncompleteMarkers);
        }
        Ok(Self { start, end })
    }

    pub fn parse(contents: &str) -> Result<Self, CorpusError> {
        let mut start = Vec::new();
        let mut end = Vec::new();
        let mut target: Option<&mut Vec<String>> = None;
        for phrase in crate::text::read_phrase_list(contents) {
            match phrase.as_str() {
                "[start]" => target = Some(&mut start),
                "[end]" => target = Some(&mut end),
                _ => match target.as_deref_mut() {
                    Some(list) => list.push(phrase),
                    None => return Err(CorpusError::IncompleteMarkers),
                },
            }
        }
        Self::new(start, end)
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let contents = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&contents)
    }

    /// The phrase list shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_MARKERS).expect("builtin marker dictionary is valid")
    }
}

/// Earliest occurrence of any phrase at or after `from`; longest phrase wins
/// a tie. Returns (start byte, end byte).
fn earliest(haystack: &str, phrases: &[String], from: usize) -> Option<(usize, usize)> {
    phrases
        .iter()
        .filter(|p| !p.is_empty())
        .filter_map(|p| haystack[from..].find(p.as_str()).map(|i| (from + i, from + i + p.len())))
        .min_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
}

/// Text strictly between the first start phrase and the earliest end phrase
/// that follows it, whitespace-trimmed. A colon closing the start phrase is
/// dropped.
pub fn extract_regulatory_section<'a>(
    full_text: &'a str,
    markers: &MarkerDictionary,
) -> Result<&'a str, CorpusError> {
    let (_, body_start) =
        earliest(full_text, &markers.start, 0).ok_or(CorpusError::NoStartMarker)?;
    let (body_end, _) =
        earliest(full_text, &markers.end, body_start).ok_or(CorpusError::NoEndMarker)?;
    let body = full_text[body_start..body_end].trim_start();
    Ok(body.strip_prefix(':').unwrap_or(body).trim())
}

use std::collections::HashSet;
use std::path::Path;

use super::CorpusError;

const BUILTIN_ABBREVIATIONS: &str = include_str!("../../data/abbreviations.txt");

/// Rule-based sentence splitter.
///
/// A sentence ends at `.`, `?`, `!` or (optionally) `;` when the next
/// character is whitespace or the end of the text. A `.` does not end a
/// sentence when the word it closes is a listed abbreviation, or when the
/// word is a number that opens the current sentence or a line (a list
/// marker such as `1.`).
#[derive(Debug, Clone)]
pub struct Segmenter {
    abbreviations: HashSet<String>,
    pub split_on_semicolon: bool,
}

impl Default for Segmenter {
    fn default() -> Self {
        Self::with_abbreviations(crate::text::read_phrase_list(BUILTIN_ABBREVIATIONS))
    }
}

impl Segmenter {
    pub fn with_abbreviations<I, S>(abbreviations: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            abbreviations: abbreviations.into_iter().map(Into::into).collect(),
            split_on_semicolon: true,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let contents = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Self::with_abbreviations(crate::text::read_phrase_list(&contents)))
    }

    pub fn semicolons(mut self, split: bool) -> Self {
        self.split_on_semicolon = split;
        self
    }

    fn is_terminator(&self, c: char) -> bool {
        matches!(c, '.' | '?' | '!') || (c == ';' && self.split_on_semicolon)
    }

    /// Whether the `.` at byte `dot` (inside the sentence starting at
    /// `sentence_start`) is part of an abbreviation or list marker.
    fn is_protected_period(&self, text: &str, sentence_start: usize, dot: usize) -> bool {
        let before = &text[sentence_start..dot];
        let word_start = before
            .rfind(char::is_whitespace)
            .map(|i| i + before[i..].chars().next().map_or(1, char::len_utf8))
            .unwrap_or(0);
        let word = &text[sentence_start + word_start..=dot];
        if self.abbreviations.contains(word) {
            return true;
        }
        let stem = &word[..word.len() - 1];
        let preceding = before[..word_start].trim_end_matches([' ', '\t']);
        let opens_line = preceding.is_empty() || preceding.ends_with('\n');
        opens_line && !stem.is_empty() && stem.chars().all(|c| c.is_ascii_digit())
    }

    pub fn segment(&self, text: &str) -> Vec<String> {
        let mut sentences = Vec::new();
        let mut start = 0;
        let mut chars = text.char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            if !self.is_terminator(c) {
                continue;
            }
            let at_boundary = match chars.peek() {
                None => true,
                Some(&(_, next)) => next.is_whitespace(),
            };
            if !at_boundary || (c == '.' && self.is_protected_period(text, start, i)) {
                continue;
            }
            let end = i + c.len_utf8();
            let sentence = text[start..end].trim();
            if !sentence.is_empty() {
                sentences.push(sentence.to_owned());
            }
            start = end;
        }
        let rest = text[start..].trim();
        if !rest.is_empty() {
            sentences.push(rest.to_owned());
        }
        sentences
    }
}

/// Segments with the shipped abbreviation list, splitting on semicolons.
pub fn segment_sentences(section_text: &str) -> Vec<String> {
    Segmenter::default().segment(section_text)
}

//! Text helpers shared by the lookup tables and CSV joins.

use unicode_normalization::UnicodeNormalization;

/// Canonical form used to join sentences across files: Unicode NFC,
/// whitespace runs collapsed to one space, trimmed.
pub fn normalize_sentence(text: &str) -> String {
    let nfc: String = text.nfc().collect();
    nfc.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Reads a plain-text list: one entry per line, `#` starts a comment line,
/// blank lines ignored. Entries are trimmed.
pub fn read_phrase_list(contents: &str) -> Vec<String> {
    contents
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect()
}

/// Number of Unicode scalar values in `s`.
pub fn char_len(s: &str) -> usize {
    s.chars().count()
}

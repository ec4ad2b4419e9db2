use std::sync::OnceLock;

use regex::Regex;

use super::CandidateSentence;

fn deontic_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)\b(shall|must)\b").expect("valid regex"))
}

/// Lower-cased `shall`/`must` whole words in order of occurrence.
pub fn deontic_tokens(sentence: &str) -> Vec<String> {
    deontic_regex()
        .find_iter(sentence)
        .map(|m| m.as_str().to_lowercase())
        .collect()
}

/// Keeps sentences with at least one deontic word. `doc_id` and the index
/// of each sentence within `sentences` are recorded on the candidate.
pub fn filter_document(doc_id: &str, sentences: &[String]) -> Vec<CandidateSentence> {
    sentences
        .iter()
        .enumerate()
        .filter_map(|(index_in_doc, text)| {
            let tokens = deontic_tokens(text);
            (!tokens.is_empty()).then(|| CandidateSentence {
                doc_id: doc_id.to_owned(),
                index_in_doc,
                text: text.clone(),
                deontic_tokens: tokens,
            })
        })
        .collect()
}

/// [`filter_document`] for sentences with no known source document.
pub fn filter_deontic(sentences: &[String]) -> Vec<CandidateSentence> {
    filter_document("", sentences)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kept(s: &str) -> bool {
        !filter_deontic(&[s.to_owned()]).is_empty()
    }

    #[test]
    fn keeps_shall() {
        assert!(kept("It shall apply from 23 November 2016."));
    }

    #[test]
    fn keeps_negation() {
        assert!(kept("They must not exceed the limits."));
    }

    #[test]
    fn drops_mustard() {
        assert!(!kept("Mustard imports are listed in Annex I."));
    }

    #[test]
    fn case_insensitive() {
        assert_eq!(deontic_tokens("SHALL we? Must they shall"), vec!["shall", "must", "shall"]);
    }

    #[test]
    fn records_positions() {
        let s: Vec<String> = ["Recital.", "Operators shall report.", "Annex."]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let got = filter_document("32020R0723", &s);
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].index_in_doc, 1);
        assert_eq!(got[0].doc_id, "32020R0723");
        assert_eq!(got[0].deontic_tokens, vec!["shall"]);
    }
}
